//! Monic univariate polynomials over the real coefficient space, their
//! discriminants, and the condition numbers/norms built on them.
//!
//! A degree-`n` monic polynomial is identified with the vector of its `n`
//! non-leading coefficients in descending order, `(a_{n-1}, ..., a_1, a_0)`.
//! The singular locus is the set of polynomials with a multiple root, i.e.
//! zero discriminant; condition norms diverge there.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("invalid polynomial: {0}")]
    Invalid(String),
    #[error("condition number undefined: {0}")]
    Domain(String),
    #[error("point lies on the singular locus")]
    Singular,
}

/// Monic polynomial `x^n + a_{n-1} x^{n-1} + ... + a_1 x + a_0`, stored as
/// the `n` non-leading coefficients in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MonicPolyRepr", into = "MonicPolyRepr")]
pub struct MonicPoly {
    degree: usize,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonicPolyRepr {
    degree: usize,
    coeffs: Vec<f64>,
}

impl TryFrom<MonicPolyRepr> for MonicPoly {
    type Error = PolyError;
    fn try_from(r: MonicPolyRepr) -> Result<Self, PolyError> {
        if r.coeffs.len() != r.degree {
            return Err(PolyError::Invalid(format!(
                "degree {} but {} coefficients",
                r.degree,
                r.coeffs.len()
            )));
        }
        MonicPoly::new(r.coeffs)
    }
}

impl From<MonicPoly> for MonicPolyRepr {
    fn from(p: MonicPoly) -> Self {
        MonicPolyRepr {
            degree: p.degree,
            coeffs: p.coeffs,
        }
    }
}

impl MonicPoly {
    /// Build from the non-leading coefficients in descending order; the
    /// degree is their count.
    pub fn new(coeffs: Vec<f64>) -> Result<Self, PolyError> {
        if coeffs.is_empty() {
            return Err(PolyError::Invalid("degree must be at least 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(PolyError::Invalid("non-finite coefficient".into()));
        }
        Ok(MonicPoly {
            degree: coeffs.len(),
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Non-leading coefficients, descending: `(a_{n-1}, ..., a_0)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluate by Horner's scheme.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(1.0, |acc, &c| acc * x + c)
    }

    /// Formal derivative; degree `n-1` with leading coefficient `n`.
    pub fn deriv(&self) -> Poly {
        let n = self.degree;
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(n as f64);
        for (i, &a) in self.coeffs.iter().take(n - 1).enumerate() {
            // a multiplies x^{n-1-i}
            coeffs.push((n - 1 - i) as f64 * a);
        }
        Poly { coeffs }
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// General (possibly non-monic) polynomial, all coefficients explicit,
/// descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut it = self.coeffs.iter();
        let first = *it.next().unwrap_or(&0.0);
        it.fold(first, |acc, &c| acc * x + c)
    }
}

/// Root condition number `mu(p, alpha) = p~(alpha) / (|alpha| |p'(alpha)|)`
/// where `p~(x) = sum |a_i| |x|^i`, leading term included.
///
/// Blows up as roots collide; errors at `alpha = 0` or `p'(alpha) = 0`.
pub fn mu_condition(p: &MonicPoly, alpha: f64) -> Result<f64, PolyError> {
    if alpha == 0.0 {
        return Err(PolyError::Domain("mu is undefined at alpha = 0".into()));
    }
    let dp = p.deriv().eval(alpha);
    if dp == 0.0 {
        return Err(PolyError::Domain(
            "p'(alpha) = 0: singular conditioning".into(),
        ));
    }
    let ax = alpha.abs();
    let mut tilde = 1.0; // leading |x|^n term included
    for &a in &p.coeffs {
        tilde = tilde * ax + a.abs();
    }
    Ok(tilde / (ax * dp.abs()))
}

/// Discriminant `D(p) = (-1)^{n(n-1)/2} Res(p, p')` via the Sylvester
/// matrix determinant. Sign pinned so that `D(x^2+bx+c) = b^2 - 4c`.
/// Zero exactly when `p` has a multiple root.
pub fn discriminant(p: &MonicPoly) -> f64 {
    let n = p.degree;
    assert!(n >= 2, "discriminant requires degree >= 2");
    let dp = p.deriv();
    let m = 2 * n - 1;
    let mut s = vec![0.0f64; m * m];
    // n-1 shifted rows of p (degree n, monic), n rows of p'.
    for i in 0..n - 1 {
        s[i * m + i] = 1.0;
        for (j, &a) in p.coeffs.iter().enumerate() {
            s[i * m + i + 1 + j] = a;
        }
    }
    for i in 0..n {
        for (j, &a) in dp.coeffs().iter().enumerate() {
            s[(n - 1 + i) * m + i + j] = a;
        }
    }
    let res = det_in_place(&mut s, m);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * res
}

/// Determinant by partially pivoted Gaussian elimination.
fn det_in_place(a: &mut [f64], m: usize) -> f64 {
    let mut det = 1.0f64;
    for col in 0..m {
        let mut piv = col;
        for row in col + 1..m {
            if a[row * m + col].abs() > a[piv * m + col].abs() {
                piv = row;
            }
        }
        if a[piv * m + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..m {
                a.swap(col * m + j, piv * m + j);
            }
            det = -det;
        }
        let d = a[col * m + col];
        det *= d;
        for row in col + 1..m {
            let f = a[row * m + col] / d;
            if f != 0.0 {
                for j in col..m {
                    a[row * m + j] -= f * a[col * m + j];
                }
            }
        }
    }
    det
}

/// Condition denominator `|D(p)|^{1/n}`; zero exactly on the singular locus.
pub fn cond_cn(p: &MonicPoly) -> f64 {
    discriminant(p).abs().powf(1.0 / p.degree as f64)
}

/// Condition norm `(sum a_i^2)^{1/2} / cond_cn(p)`.
pub fn cond_norm(p: &MonicPoly) -> Result<f64, PolyError> {
    let c = cond_cn(p);
    if c == 0.0 {
        return Err(PolyError::Singular);
    }
    Ok(p.coeff_norm() / c)
}

/// Point of the punctured plane used by the toy condition metric; the
/// singular locus is the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyPoint {
    pub x1: f64,
    pub x2: f64,
}

/// Toy condition number `1 / (x1^2 + x2^2)`.
pub fn toy_cond(pt: ToyPoint) -> Result<f64, PolyError> {
    let r2 = pt.x1 * pt.x1 + pt.x2 * pt.x2;
    if r2 == 0.0 {
        return Err(PolyError::Singular);
    }
    Ok(1.0 / r2)
}
