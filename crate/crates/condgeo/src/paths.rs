//! Parametric paths in coefficient space with a uniform interface:
//! position and velocity at `t` in [0, 1].
//!
//! Segments are the linear homotopy `(1-t) p + t q`. Polylines carry a
//! list of segment pieces on a uniform-in-index sub-parameterization
//! (piece `k` covers `[k/m, (k+1)/m]`); building one from a vertex list
//! gives the usual continuous chain. Arcs are restricted to
//! 2-dimensional coefficient spaces.

use crate::bezier::ControlNet;
use crate::polyspace::MonicPoly;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("invalid path: {0}")]
    Invalid(String),
    #[error("parameter {0} outside [0, 1]")]
    Domain(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub enum ParamPath {
    Segment {
        start: MonicPoly,
        end: MonicPoly,
    },
    Polyline {
        pieces: Vec<(MonicPoly, MonicPoly)>,
    },
    Arc {
        center: [f64; 2],
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    Bezier {
        net: ControlNet,
    },
}

/// Flat JSON form: `{"kind": "...", ...kind-specific fields}`. A polyline
/// accepts either a `vertices` chain or explicit `pieces`.
#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
struct PathRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    start: Option<MonicPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    end: Option<MonicPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<MonicPoly>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pieces: Option<Vec<(MonicPoly, MonicPoly)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    net: Option<ControlNet>,
}

impl TryFrom<PathRepr> for ParamPath {
    type Error = PathError;
    fn try_from(r: PathRepr) -> Result<Self, PathError> {
        let extra = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(PathError::Invalid(format!(
                    "fields inconsistent with kind `{}`",
                    r0_kind_name(&r)
                )))
            }
        };
        fn r0_kind_name(r: &PathRepr) -> String {
            r.kind.clone()
        }
        match r.kind.as_str() {
            "segment" => {
                extra(
                    r.vertices.is_none()
                        && r.pieces.is_none()
                        && r.center.is_none()
                        && r.net.is_none(),
                )?;
                match (r.start, r.end) {
                    (Some(a), Some(b)) => ParamPath::segment(a, b),
                    _ => Err(PathError::Invalid("segment needs `start` and `end`".into())),
                }
            }
            "polyline" => {
                extra(r.start.is_none() && r.end.is_none() && r.center.is_none() && r.net.is_none())?;
                match (r.vertices, r.pieces) {
                    (Some(v), None) => ParamPath::polyline(v),
                    (None, Some(p)) => ParamPath::polyline_pieces(p),
                    _ => Err(PathError::Invalid(
                        "polyline needs exactly one of `vertices` or `pieces`".into(),
                    )),
                }
            }
            "arc" => {
                extra(r.start.is_none() && r.vertices.is_none() && r.pieces.is_none() && r.net.is_none())?;
                match (r.center, r.radius, r.theta0, r.theta1) {
                    (Some(c), Some(rad), Some(t0), Some(t1)) => ParamPath::arc(c, rad, t0, t1),
                    _ => Err(PathError::Invalid(
                        "arc needs `center`, `radius`, `theta0`, `theta1`".into(),
                    )),
                }
            }
            "bezier" => {
                extra(r.start.is_none() && r.vertices.is_none() && r.pieces.is_none() && r.center.is_none())?;
                r.net
                    .map(ParamPath::bezier)
                    .ok_or_else(|| PathError::Invalid("bezier needs `net`".into()))
            }
            other => Err(PathError::Invalid(format!("unknown path kind `{other}`"))),
        }
    }
}

impl From<ParamPath> for PathRepr {
    fn from(p: ParamPath) -> Self {
        let mut r = PathRepr::default();
        match p {
            ParamPath::Segment { start, end } => {
                r.kind = "segment".into();
                r.start = Some(start);
                r.end = Some(end);
            }
            ParamPath::Polyline { pieces } => {
                r.kind = "polyline".into();
                r.pieces = Some(pieces);
            }
            ParamPath::Arc { center, radius, theta0, theta1 } => {
                r.kind = "arc".into();
                r.center = Some(center);
                r.radius = Some(radius);
                r.theta0 = Some(theta0);
                r.theta1 = Some(theta1);
            }
            ParamPath::Bezier { net } => {
                r.kind = "bezier".into();
                r.net = Some(net);
            }
        }
        r
    }
}

fn check_unit(t: f64) -> Result<(), PathError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(PathError::Domain(t));
    }
    Ok(())
}

fn lerp(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - s) * x + s * y).collect()
}

impl ParamPath {
    pub fn segment(start: MonicPoly, end: MonicPoly) -> Result<Self, PathError> {
        if start.degree() != end.degree() {
            return Err(PathError::Invalid("segment endpoints differ in degree".into()));
        }
        Ok(ParamPath::Segment { start, end })
    }

    /// Continuous polyline through the given vertices.
    pub fn polyline(vertices: Vec<MonicPoly>) -> Result<Self, PathError> {
        if vertices.len() < 2 {
            return Err(PathError::Invalid("polyline needs at least 2 vertices".into()));
        }
        let pieces = vertices.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Self::polyline_pieces(pieces)
    }

    /// Piecewise-linear path from explicit pieces; pieces need not chain
    /// continuously.
    pub fn polyline_pieces(pieces: Vec<(MonicPoly, MonicPoly)>) -> Result<Self, PathError> {
        if pieces.is_empty() {
            return Err(PathError::Invalid("polyline needs at least one piece".into()));
        }
        let n = pieces[0].0.degree();
        if pieces.iter().any(|(a, b)| a.degree() != n || b.degree() != n) {
            return Err(PathError::Invalid("polyline pieces differ in degree".into()));
        }
        Ok(ParamPath::Polyline { pieces })
    }

    pub fn arc(center: [f64; 2], radius: f64, theta0: f64, theta1: f64) -> Result<Self, PathError> {
        if !(radius.is_finite() && radius > 0.0) || !theta0.is_finite() || !theta1.is_finite() {
            return Err(PathError::Invalid("arc parameters must be finite, radius > 0".into()));
        }
        Ok(ParamPath::Arc { center, radius, theta0, theta1 })
    }

    pub fn bezier(net: ControlNet) -> Self {
        ParamPath::Bezier { net }
    }

    /// Dimension of the coefficient space the path lives in.
    pub fn dim(&self) -> usize {
        match self {
            ParamPath::Segment { start, .. } => start.degree(),
            ParamPath::Polyline { pieces } => pieces[0].0.degree(),
            ParamPath::Arc { .. } => 2,
            ParamPath::Bezier { net } => net.space_degree(),
        }
    }

    pub fn position(&self, t: f64) -> Result<Vec<f64>, PathError> {
        check_unit(t)?;
        match self {
            ParamPath::Segment { start, end } => Ok(lerp(start.coeffs(), end.coeffs(), t)),
            ParamPath::Polyline { pieces } => {
                let m = pieces.len();
                let k = ((t * m as f64).floor() as usize).min(m - 1);
                let s = t * m as f64 - k as f64;
                let (a, b) = &pieces[k];
                Ok(lerp(a.coeffs(), b.coeffs(), s))
            }
            ParamPath::Arc { center, radius, theta0, theta1 } => {
                let th = theta0 + t * (theta1 - theta0);
                Ok(vec![center[0] + radius * th.cos(), center[1] + radius * th.sin()])
            }
            ParamPath::Bezier { net } => Ok(net
                .eval(t)
                .map_err(|e| PathError::Invalid(e.to_string()))?
                .coeffs()
                .to_vec()),
        }
    }

    /// Exact derivative of `position`; at polyline breakpoints the
    /// right-sided value is used.
    pub fn velocity(&self, t: f64) -> Result<Vec<f64>, PathError> {
        check_unit(t)?;
        match self {
            ParamPath::Segment { start, end } => Ok(start
                .coeffs()
                .iter()
                .zip(end.coeffs())
                .map(|(a, b)| b - a)
                .collect()),
            ParamPath::Polyline { pieces } => {
                let m = pieces.len();
                let k = ((t * m as f64).floor() as usize).min(m - 1);
                let (a, b) = &pieces[k];
                Ok(a.coeffs()
                    .iter()
                    .zip(b.coeffs())
                    .map(|(x, y)| m as f64 * (y - x))
                    .collect())
            }
            ParamPath::Arc { radius, theta0, theta1, .. } => {
                let th = theta0 + t * (theta1 - theta0);
                let w = theta1 - theta0;
                Ok(vec![-radius * w * th.sin(), radius * w * th.cos()])
            }
            ParamPath::Bezier { net } => {
                net.deriv(t).map_err(|e| PathError::Invalid(e.to_string()))
            }
        }
    }

    /// Interior parameter values where the velocity may jump; quadrature
    /// panels must not straddle them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ParamPath::Polyline { pieces } => {
                let m = pieces.len();
                (1..m).map(|k| k as f64 / m as f64).collect()
            }
            _ => Vec::new(),
        }
    }
}
