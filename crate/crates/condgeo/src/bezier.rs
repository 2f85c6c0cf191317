//! Bezier curves over the monic coefficient slice: a degree-`d` curve is
//! defined by `d+1` control points, each a monic polynomial of the same
//! space degree `n`. Convex combinations of monic polynomials stay monic,
//! so the curve lives on the slice automatically; velocities live in the
//! `n`-dimensional tangent space.

use crate::polyspace::MonicPoly;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BezierError {
    #[error("invalid control net: {0}")]
    Invalid(String),
    #[error("parameter {0} outside [0, 1]")]
    Domain(f64),
}

/// Ordered control points of a degree-`curve_degree` Bezier path in the
/// coefficient space of degree-`space_degree` monic polynomials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ControlNetRepr", into = "ControlNetRepr")]
pub struct ControlNet {
    space_degree: usize,
    curve_degree: usize,
    points: Vec<MonicPoly>,
}

/// JSON form: rows are control points (coefficient lists, descending).
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ControlNetRepr {
    space_degree: usize,
    curve_degree: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<ControlNetRepr> for ControlNet {
    type Error = BezierError;
    fn try_from(r: ControlNetRepr) -> Result<Self, BezierError> {
        let points = r
            .points
            .into_iter()
            .map(MonicPoly::new)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| BezierError::Invalid(e.to_string()))?;
        let net = ControlNet::new(points)?;
        if net.space_degree != r.space_degree || net.curve_degree != r.curve_degree {
            return Err(BezierError::Invalid(format!(
                "declared degrees ({}, {}) do not match points ({}, {})",
                r.space_degree, r.curve_degree, net.space_degree, net.curve_degree
            )));
        }
        Ok(net)
    }
}

impl From<ControlNet> for ControlNetRepr {
    fn from(net: ControlNet) -> Self {
        ControlNetRepr {
            space_degree: net.space_degree,
            curve_degree: net.curve_degree,
            points: net.points.iter().map(|p| p.coeffs().to_vec()).collect(),
        }
    }
}

fn check_unit(t: f64) -> Result<(), BezierError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BezierError::Domain(t));
    }
    Ok(())
}

impl ControlNet {
    pub fn new(points: Vec<MonicPoly>) -> Result<Self, BezierError> {
        if points.len() < 2 {
            return Err(BezierError::Invalid(
                "a control net needs at least 2 points".into(),
            ));
        }
        let n = points[0].degree();
        if points.iter().any(|p| p.degree() != n) {
            return Err(BezierError::Invalid(
                "all control points must share the space degree".into(),
            ));
        }
        Ok(ControlNet {
            space_degree: n,
            curve_degree: points.len() - 1,
            points,
        })
    }

    pub fn space_degree(&self) -> usize {
        self.space_degree
    }

    pub fn curve_degree(&self) -> usize {
        self.curve_degree
    }

    pub fn points(&self) -> &[MonicPoly] {
        &self.points
    }

    pub fn start(&self) -> &MonicPoly {
        &self.points[0]
    }

    pub fn end(&self) -> &MonicPoly {
        &self.points[self.curve_degree]
    }

    /// Interior control points (everything but the endpoints).
    pub fn interior(&self) -> &[MonicPoly] {
        &self.points[1..self.curve_degree]
    }

    /// Replace the interior points, keeping the endpoints.
    pub fn with_interior(&self, interior: &[f64]) -> Result<ControlNet, BezierError> {
        let n = self.space_degree;
        let d = self.curve_degree;
        if interior.len() != (d - 1) * n {
            return Err(BezierError::Invalid(format!(
                "expected {} interior coordinates, got {}",
                (d - 1) * n,
                interior.len()
            )));
        }
        let mut points = Vec::with_capacity(d + 1);
        points.push(self.points[0].clone());
        for chunk in interior.chunks(n) {
            points.push(MonicPoly::new(chunk.to_vec()).map_err(|e| {
                BezierError::Invalid(e.to_string())
            })?);
        }
        points.push(self.points[d].clone());
        ControlNet::new(points)
    }

    /// Curve point at `t` by the de Casteljau recursion. Stable for
    /// degrees well past 20, unlike explicit binomial sums near t in {0,1}.
    pub fn eval(&self, t: f64) -> Result<MonicPoly, BezierError> {
        check_unit(t)?;
        let mut rows: Vec<Vec<f64>> = self
            .points
            .iter()
            .map(|p| p.coeffs().to_vec())
            .collect();
        let n = self.space_degree;
        for level in (1..=self.curve_degree).rev() {
            for i in 0..level {
                for j in 0..n {
                    rows[i][j] = (1.0 - t) * rows[i][j] + t * rows[i + 1][j];
                }
            }
        }
        MonicPoly::new(rows.swap_remove(0)).map_err(|e| BezierError::Invalid(e.to_string()))
    }

    /// Velocity at `t`: `d * sum b_{i,d-1}(t) (P_{i+1} - P_i)`, evaluated by
    /// de Casteljau on the difference net.
    pub fn deriv(&self, t: f64) -> Result<Vec<f64>, BezierError> {
        check_unit(t)?;
        let d = self.curve_degree;
        let n = self.space_degree;
        let mut rows: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let a = self.points[i].coeffs();
                let b = self.points[i + 1].coeffs();
                (0..n).map(|j| b[j] - a[j]).collect()
            })
            .collect();
        for level in (1..d).rev() {
            for i in 0..level {
                for j in 0..n {
                    rows[i][j] = (1.0 - t) * rows[i][j] + t * rows[i + 1][j];
                }
            }
        }
        let mut v = rows.swap_remove(0);
        for x in &mut v {
            *x *= d as f64;
        }
        Ok(v)
    }

    /// Equivalent net of degree `d+1` tracing the identical point set:
    /// `Q_i = (i/(d+1)) P_{i-1} + (1 - i/(d+1)) P_i`.
    pub fn elevate(&self) -> ControlNet {
        let d = self.curve_degree;
        let n = self.space_degree;
        let mut points = Vec::with_capacity(d + 2);
        points.push(self.points[0].clone());
        for i in 1..=d {
            let w = i as f64 / (d + 1) as f64;
            let a = self.points[i - 1].coeffs();
            let b = self.points[i].coeffs();
            let coeffs = (0..n).map(|j| w * a[j] + (1.0 - w) * b[j]).collect();
            points.push(MonicPoly::new(coeffs).expect("finite combination"));
        }
        points.push(self.points[d].clone());
        ControlNet::new(points).expect("valid elevation")
    }
}
