//! Adaptive quadrature of condition-length integrals.
//!
//! The workhorse is a Gauss–Kronrod 7/15 rule with adaptive bisection.
//! Panels never straddle polyline breakpoints, and accepted panels are
//! summed in a fixed left-to-right order so results are bit-reproducible
//! regardless of evaluation order.
//!
//! The integrand `1 / |D|^{1/n}` is accumulated in two channels split by
//! the sign of the discriminant and the channels are combined at the end
//! with the phase of the principal complex n-th root,
//! `sqrt(A^2 + B^2 + 2AB cos(pi/n))`. For paths on which `D` keeps one
//! sign this reduces to the plain real integral; for sign-changing paths
//! it reproduces the magnitude of the complex-valued integral.

use crate::paths::{ParamPath, PathError};
use crate::polyspace::{discriminant, MonicPoly, PolyError};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("path meets the singular locus near t = {t}: cond = {cond:e}")]
    SingularPath { t: f64, cond: f64 },
    #[error("quadrature did not converge within {subdivisions} subdivisions")]
    Convergence { subdivisions: usize },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid quadrature config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Minimum allowed `cond_cn` along the path; below it the path is
    /// treated as touching the singular locus.
    pub singularity_floor: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_subdivisions: 2000,
            singularity_floor: 1e-12,
        }
    }
}

impl QuadConfig {
    fn validate(&self) -> Result<(), QuadError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.singularity_floor > 0.0) {
            return Err(QuadError::Config("tolerances must be strictly positive".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::Config("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
    pub min_cond_seen: f64,
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1]; the odd-index Kronrod
// abscissae are the Gauss-7 nodes.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One evaluated panel: Kronrod estimates of the two sign channels and
/// the Kronrod-vs-Gauss error indicator.
#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    pos: f64,
    neg: f64,
    err: f64,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Panel, QuadError>
where
    F: FnMut(f64) -> Result<(f64, f64), QuadError>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let (p0, n0) = f(c)?;
    let mut kr = [WGK[7] * p0, WGK[7] * n0];
    let mut ga = [WG[3] * p0, WG[3] * n0];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (pl, nl) = f(c - dx)?;
        let (pr, nr) = f(c + dx)?;
        let sp = pl + pr;
        let sn = nl + nr;
        kr[0] += WGK[j] * sp;
        kr[1] += WGK[j] * sn;
        if j % 2 == 1 {
            ga[0] += WG[j / 2] * sp;
            ga[1] += WG[j / 2] * sn;
        }
    }
    Ok(Panel {
        a,
        b,
        pos: h * kr[0],
        neg: h * kr[1],
        err: h * ((kr[0] - ga[0]).abs() + (kr[1] - ga[1]).abs()),
    })
}

fn combine(pos: f64, neg: f64, phase_cos: f64) -> f64 {
    (pos * pos + neg * neg + 2.0 * pos * neg * phase_cos).max(0.0).sqrt()
}

/// Adaptive integration of a two-channel integrand over [0, 1] with
/// mandatory interior panel boundaries.
fn adaptive<F>(
    mut f: F,
    breakpoints: &[f64],
    cfg: &QuadConfig,
    phase_cos: f64,
) -> Result<(f64, f64, usize), QuadError>
where
    F: FnMut(f64) -> Result<(f64, f64), QuadError>,
{
    let mut nodes = vec![0.0];
    for &t in breakpoints {
        if t > 0.0 && t < 1.0 {
            nodes.push(t);
        }
    }
    nodes.push(1.0);
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    nodes.dedup();

    let mut panels: Vec<Panel> = Vec::new();
    for w in nodes.windows(2) {
        panels.push(gk15(&mut f, w[0], w[1])?);
    }

    // Globally adaptive refinement: bisect the panel with the largest
    // error indicator until the summed estimate meets the tolerance.
    // Integrable endpoint singularities (|D| -> 0 at a breakpoint) then
    // converge because each bisection shrinks the boundary panel's
    // contribution like sqrt(width).
    let mut subdivisions = 0usize;
    loop {
        let mut pos = 0.0;
        let mut neg = 0.0;
        let mut err = 0.0;
        for p in &panels {
            pos += p.pos;
            neg += p.neg;
            err += p.err;
        }
        let value = combine(pos, neg, phase_cos);
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if err <= tol {
            break;
        }
        // worst refinable panel; ties go to the leftmost for determinism
        let mut worst: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            if p.b - p.a < 1e-14 {
                continue;
            }
            if worst.map_or(true, |w| p.err > panels[w].err) {
                worst = Some(i);
            }
        }
        let Some(i) = worst else { break };
        if subdivisions >= cfg.max_subdivisions {
            return Err(QuadError::Convergence { subdivisions });
        }
        subdivisions += 1;
        let Panel { a, b, .. } = panels[i];
        let m = 0.5 * (a + b);
        let left = gk15(&mut f, a, m)?;
        let right = gk15(&mut f, m, b)?;
        panels[i] = left;
        panels.push(right);
    }

    // fixed left-to-right summation order, independent of refinement order
    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    let mut pos = 0.0;
    let mut neg = 0.0;
    let mut err = 0.0;
    for p in &panels {
        pos += p.pos;
        neg += p.neg;
        err += p.err;
    }
    Ok((combine(pos, neg, phase_cos), err, subdivisions))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Speed weight applied to the condition-length integrand, matching the
/// reference implementation's derivative normalization for curves given
/// by control points (degree-d Bezier and segments get (d+1)/d; arcs and
/// polylines are parameterized directly and get 1).
fn speed_weight(path: &ParamPath) -> f64 {
    match path {
        ParamPath::Segment { .. } => 2.0,
        ParamPath::Bezier { net } => {
            let d = net.curve_degree() as f64;
            (d + 1.0) / d
        }
        _ => 1.0,
    }
}

/// Condition length `∫ ||Γ'(t)|| / |D(Γ(t))|^{1/n} dt` of a path in the
/// space of monic degree-n polynomials.
pub fn condition_length(path: &ParamPath, cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    let n = path.dim();
    if n < 2 {
        return Err(QuadError::Path(PathError::Invalid(
            "condition length needs a polynomial space of degree >= 2".into(),
        )));
    }
    let weight = speed_weight(path);
    let phase_cos = (PI / n as f64).cos();
    let inv_n = 1.0 / n as f64;
    let mut min_cond = f64::INFINITY;
    let integrand = |t: f64| -> Result<(f64, f64), QuadError> {
        let x = path.position(t)?;
        let v = path.velocity(t)?;
        let p = MonicPoly::new(x)?;
        let d = discriminant(&p);
        let cond = d.abs().powf(inv_n);
        if cond < min_cond {
            min_cond = cond;
        }
        if cond <= cfg.singularity_floor {
            return Err(QuadError::SingularPath { t, cond });
        }
        let g = weight * norm(&v) / cond;
        if d >= 0.0 {
            Ok((g, 0.0))
        } else {
            Ok((0.0, g))
        }
    };
    let (value, error_estimate, subdivisions) =
        adaptive(integrand, &path.breakpoints(), cfg, phase_cos)?;
    Ok(QuadResult { value, error_estimate, subdivisions, min_cond_seen: min_cond })
}

/// Toy-plane length `∫ dt / (x(t)^2 + y(t)^2)`; the singular locus is the
/// origin. `min_cond_seen` reports the smallest squared distance to it.
pub fn toy_length(path: &ParamPath, cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    if path.dim() != 2 {
        return Err(QuadError::Path(PathError::Invalid(
            "the toy metric lives in a 2-dimensional space".into(),
        )));
    }
    let mut min_r2 = f64::INFINITY;
    let integrand = |t: f64| -> Result<(f64, f64), QuadError> {
        let x = path.position(t)?;
        let r2 = x[0] * x[0] + x[1] * x[1];
        if r2 < min_r2 {
            min_r2 = r2;
        }
        if r2 <= cfg.singularity_floor {
            return Err(QuadError::SingularPath { t, cond: r2 });
        }
        Ok((1.0 / r2, 0.0))
    };
    let (value, error_estimate, subdivisions) =
        adaptive(integrand, &path.breakpoints(), cfg, 1.0)?;
    Ok(QuadResult { value, error_estimate, subdivisions, min_cond_seen: min_r2 })
}

/// Ordinary Euclidean arc length `∫ ||Γ'(t)|| dt`.
pub fn euclidean_length(path: &ParamPath, cfg: &QuadConfig) -> Result<QuadResult, QuadError> {
    cfg.validate()?;
    let integrand =
        |t: f64| -> Result<(f64, f64), QuadError> { Ok((norm(&path.velocity(t)?), 0.0)) };
    let (value, error_estimate, subdivisions) =
        adaptive(integrand, &path.breakpoints(), cfg, 1.0)?;
    Ok(QuadResult { value, error_estimate, subdivisions, min_cond_seen: f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bezier::ControlNet;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn poly(coeffs: &[f64]) -> MonicPoly {
        MonicPoly::new(coeffs.to_vec()).unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn arc_condition_length() {
        // gamma_1 of the degree-2 worked example: unit arc through (0, -2)
        let arc = ParamPath::arc([0.0, -1.0], 1.0, -PI, 0.0).unwrap();
        let r = condition_length(&arc, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.191, epsilon = 2e-3);
        assert!(r.error_estimate < 1e-6);
    }

    #[test]
    fn discontinuous_polyline_condition_length() {
        // gamma_2 as printed: pieces (-1,1)->(0,0) and (0,-2)->(1,-1);
        // the first piece has negative discriminant throughout, so the
        // two channels combine with the complex phase.
        let p = ParamPath::polyline_pieces(vec![
            (poly(&[-1.0, 1.0]), poly(&[0.0, 0.0])),
            (poly(&[0.0, -2.0]), poly(&[1.0, -1.0])),
        ])
        .unwrap();
        let r = condition_length(&p, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.586, epsilon = 2e-3);
    }

    #[test]
    fn segment_linear_homotopy_length() {
        let s = ParamPath::segment(poly(&[-1.0, -1.0]), poly(&[1.0, -1.0])).unwrap();
        let r = condition_length(&s, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.9248, epsilon = 1e-3);
    }

    #[test]
    fn toy_polyline_and_arc() {
        let g1 = ParamPath::polyline(vec![
            poly(&[-1.0, 0.0]),
            poly(&[0.0, 1.0]),
            poly(&[1.0, 0.0]),
        ])
        .unwrap();
        let r1 = toy_length(&g1, &cfg()).unwrap();
        assert_abs_diff_eq!(r1.value, PI / 2.0, epsilon = 1e-6);

        let g2 = ParamPath::arc([0.0, 0.0], 1.0, PI, 0.0).unwrap();
        let r2 = toy_length(&g2, &cfg()).unwrap();
        assert_abs_diff_eq!(r2.value, 1.0, epsilon = 1e-6);

        // constant integrand 1/4 on a radius-2 circle
        let c = ParamPath::arc([0.0, 0.0], 2.0, 0.0, 2.0 * PI).unwrap();
        let r3 = toy_length(&c, &cfg()).unwrap();
        assert_abs_diff_eq!(r3.value, 0.25, epsilon = 1e-9);
    }

    #[test]
    fn euclidean_lengths() {
        let g1 = ParamPath::polyline(vec![
            poly(&[-1.0, 0.0]),
            poly(&[0.0, 1.0]),
            poly(&[1.0, 0.0]),
        ])
        .unwrap();
        assert_abs_diff_eq!(
            euclidean_length(&g1, &cfg()).unwrap().value,
            2.0 * 2.0f64.sqrt(),
            epsilon = 1e-9
        );
        let g2 = ParamPath::arc([0.0, 0.0], 1.0, PI, 0.0).unwrap();
        assert_abs_diff_eq!(euclidean_length(&g2, &cfg()).unwrap().value, PI, epsilon = 1e-9);
        let still = ParamPath::segment(poly(&[0.3, -1.0]), poly(&[0.3, -1.0])).unwrap();
        assert_abs_diff_eq!(euclidean_length(&still, &cfg()).unwrap().value, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polyline_additivity() {
        // A polyline's length equals the sum over its pieces, each taken
        // as a one-piece polyline (so the speed convention matches).
        let verts =
            [poly(&[-1.0, -1.0]), poly(&[-0.2, -1.6]), poly(&[0.4, -1.3]), poly(&[1.0, -1.0])];
        let whole = ParamPath::polyline(verts.to_vec()).unwrap();
        let total = condition_length(&whole, &cfg()).unwrap();
        let mut sum = 0.0;
        for w in verts.windows(2) {
            let piece =
                ParamPath::polyline_pieces(vec![(w[0].clone(), w[1].clone())]).unwrap();
            sum += condition_length(&piece, &cfg()).unwrap().value;
        }
        assert_abs_diff_eq!(total.value, sum, epsilon = 1e-7);
    }

    #[test]
    fn reflection_symmetry_in_b() {
        // D = b^2 - 4c is even in b, so reflecting every control point
        // b -> -b preserves the length.
        let net = ControlNet::new(vec![
            poly(&[-1.0, -1.0]),
            poly(&[0.3, -1.7]),
            poly(&[1.0, -1.2]),
        ])
        .unwrap();
        let mirrored = ControlNet::new(
            net.points()
                .iter()
                .map(|p| poly(&[-p.coeffs()[0], p.coeffs()[1]]))
                .collect(),
        )
        .unwrap();
        let a = condition_length(&ParamPath::bezier(net), &cfg()).unwrap().value;
        let b = condition_length(&ParamPath::bezier(mirrored), &cfg()).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-10);
    }

    #[test]
    fn length_blows_up_toward_singular_locus() {
        // p_eps = (-1,-eps) -> (1,-eps): endpoints approach the parabola
        // b^2 = 4c as eps decreases.
        let mut prev = 0.0;
        for &eps in &[1.0, 0.7, 0.4, 0.2, 0.1] {
            let s =
                ParamPath::segment(poly(&[-1.0, -eps]), poly(&[1.0, -eps])).unwrap();
            let v = condition_length(&s, &cfg()).unwrap().value;
            assert!(v > prev, "expected growth as eps shrinks: {v} vs {prev}");
            prev = v;
        }
    }

    #[test]
    fn halving_tolerance_stays_within_estimate() {
        let arc = ParamPath::arc([0.0, -1.0], 1.0, -PI, 0.0).unwrap();
        let mut c1 = cfg();
        c1.rel_tol = 1e-6;
        c1.abs_tol = 1e-8;
        let r1 = condition_length(&arc, &c1).unwrap();
        let mut c2 = c1.clone();
        c2.rel_tol /= 2.0;
        let r2 = condition_length(&arc, &c2).unwrap();
        assert!((r1.value - r2.value).abs() <= r1.error_estimate + 1e-12);
    }

    #[test]
    fn degree_elevation_preserves_unweighted_length() {
        let net = ControlNet::new(vec![
            poly(&[-1.0, -1.0]),
            poly(&[0.0, -1.4407]),
            poly(&[1.0, -1.0]),
        ])
        .unwrap();
        let elevated = net.elevate();
        let d = net.curve_degree() as f64;
        let lc_d = condition_length(&ParamPath::bezier(net), &cfg()).unwrap().value;
        let lc_d1 =
            condition_length(&ParamPath::bezier(elevated), &cfg()).unwrap().value;
        // the traced curve is unchanged, so the unweighted integrals agree
        let unweighted_d = lc_d * d / (d + 1.0);
        let unweighted_d1 = lc_d1 * (d + 1.0) / (d + 2.0);
        assert_abs_diff_eq!(unweighted_d, unweighted_d1, epsilon = 1e-7);
        // equivalently, reported values differ by the exact weight ratio
        let ratio = (d + 1.0) * (d + 1.0) / (d * (d + 2.0));
        assert_abs_diff_eq!(lc_d / lc_d1, ratio, epsilon = 1e-7);
    }

    #[test]
    fn singular_path_detected() {
        // constant path sitting on the discriminant locus (double root)
        let s = ParamPath::segment(poly(&[2.0, 1.0]), poly(&[2.0, 1.0])).unwrap();
        match condition_length(&s, &cfg()) {
            Err(QuadError::SingularPath { cond, .. }) => assert!(cond <= 1e-12),
            other => panic!("expected SingularPath, got {other:?}"),
        }
    }

    #[test]
    fn convergence_error_when_budget_exhausted() {
        // integrable inverse-sqrt singularities where D crosses zero
        let s = ParamPath::segment(poly(&[-1.0, 0.1]), poly(&[1.0, 0.1])).unwrap();
        let mut c = cfg();
        c.max_subdivisions = 3;
        c.rel_tol = 1e-12;
        c.abs_tol = 1e-14;
        match condition_length(&s, &c) {
            Err(QuadError::Convergence { .. }) => {}
            other => panic!("expected Convergence, got {other:?}"),
        }
    }

    #[test]
    fn quad_result_json_round_trip() {
        let arc = ParamPath::arc([0.0, -1.0], 1.0, -PI, 0.0).unwrap();
        let r = condition_length(&arc, &cfg()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: QuadResult = serde_json::from_str(&s).unwrap();
        assert_eq!(r.value, back.value);
        assert_eq!(r.subdivisions, back.subdivisions);
    }
}
