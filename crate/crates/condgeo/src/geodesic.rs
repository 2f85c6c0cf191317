//! Variational approximation of condition geodesics: minimize condition
//! length over the interior control points of a Bezier net with fixed
//! endpoints, plus the perturbation and degree-sweep studies.

use crate::bezier::{BezierError, ControlNet};
use crate::condlength::{condition_length, QuadConfig, QuadError};
use crate::paths::ParamPath;
use crate::polyspace::MonicPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("invalid optimization input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Bezier(#[from] BezierError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NelderMead,
    QuasiNewton,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimConfig {
    pub method: Method,
    pub max_iters: usize,
    pub f_tol: f64,
    pub x_tol: f64,
    /// Finite-difference gradient step for the quasi-Newton path.
    pub fd_step: f64,
    pub restarts: usize,
    /// Seed for the Gaussian jitter applied to restarts after the first.
    pub seed: u64,
}

impl Default for OptimConfig {
    fn default() -> Self {
        OptimConfig {
            method: Method::NelderMead,
            max_iters: 5000,
            f_tol: 1e-8,
            x_tol: 1e-8,
            fd_step: 1e-6,
            restarts: 3,
            seed: 0,
        }
    }
}

impl OptimConfig {
    fn validate(&self) -> Result<(), GeoError> {
        if !(self.f_tol > 0.0 && self.x_tol > 0.0 && self.fd_step > 0.0) {
            return Err(GeoError::Invalid("tolerances must be strictly positive".into()));
        }
        if self.restarts < 1 {
            return Err(GeoError::Invalid("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimResult {
    pub optimal_net: ControlNet,
    pub fval: f64,
    pub initial_lc: f64,
    pub iterations: usize,
    pub function_evals: usize,
    pub converged: bool,
}

/// Condition-length objective over the stacked interior coordinates;
/// singular or non-convergent trial curves act as an infinite barrier.
struct Objective<'a> {
    net0: &'a ControlNet,
    qcfg: &'a QuadConfig,
    evals: usize,
}

impl Objective<'_> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let net = match self.net0.with_interior(x) {
            Ok(n) => n,
            Err(_) => return f64::INFINITY,
        };
        match condition_length(&ParamPath::bezier(net), self.qcfg) {
            Ok(r) => r.value,
            Err(_) => f64::INFINITY,
        }
    }
}

struct SearchOutcome {
    x: Vec<f64>,
    f: f64,
    iterations: usize,
    converged: bool,
}

/// Nelder-Mead with the classic fminsearch conventions: the initial
/// simplex perturbs each nonzero coordinate by 5% (0.00025 absolute for
/// zero coordinates); reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2.
fn nelder_mead(obj: &mut Objective, x0: &[f64], cfg: &OptimConfig) -> SearchOutcome {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        if v[i] != 0.0 {
            v[i] *= 1.05;
        } else {
            v[i] = 0.00025;
        }
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| obj.eval(v)).collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        // sort ascending by objective
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fvals[a].partial_cmp(&fvals[b]).unwrap_or(std::cmp::Ordering::Equal));
        let simplex_s: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let fvals_s: Vec<f64> = order.iter().map(|&i| fvals[i]).collect();
        simplex = simplex_s;
        fvals = fvals_s;

        let f_spread = (fvals[n] - fvals[0]).abs();
        let x_spread = simplex[1..]
            .iter()
            .flat_map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if f_spread <= cfg.f_tol && x_spread <= cfg.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> =
            centroid.iter().zip(&worst).map(|(c, w)| 2.0 * c - w).collect();
        let fr = obj.eval(&reflect);

        if fr < fvals[0] {
            let expand: Vec<f64> =
                centroid.iter().zip(&worst).map(|(c, w)| 3.0 * c - 2.0 * w).collect();
            let fe = obj.eval(&expand);
            if fe < fr {
                simplex[n] = expand;
                fvals[n] = fe;
            } else {
                simplex[n] = reflect;
                fvals[n] = fr;
            }
        } else if fr < fvals[n - 1] {
            simplex[n] = reflect;
            fvals[n] = fr;
        } else {
            let (contract, threshold): (Vec<f64>, f64) = if fr < fvals[n] {
                // outside contraction
                (
                    centroid.iter().zip(&reflect).map(|(c, r)| 0.5 * (c + r)).collect(),
                    fr,
                )
            } else {
                // inside contraction
                (
                    centroid.iter().zip(&worst).map(|(c, w)| 0.5 * (c + w)).collect(),
                    fvals[n],
                )
            };
            let fc = obj.eval(&contract);
            if fc <= threshold {
                simplex[n] = contract;
                fvals[n] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..=n {
                    let best = simplex[0].clone();
                    for (v, b) in simplex[i].iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    fvals[i] = obj.eval(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if fvals[i] < fvals[best] {
            best = i;
        }
    }
    SearchOutcome {
        x: simplex[best].clone(),
        f: fvals[best],
        iterations,
        converged,
    }
}

fn fd_gradient(obj: &mut Objective, x: &[f64], h: f64) -> Vec<f64> {
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = obj.eval(&xp);
        xp[i] = x[i] - h;
        let fm = obj.eval(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

/// BFGS with central-difference gradients and backtracking Armijo line
/// search; steps into the singular barrier are rejected by the search.
fn bfgs(obj: &mut Objective, x0: &[f64], cfg: &OptimConfig) -> SearchOutcome {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut f = obj.eval(&x);
    if !f.is_finite() {
        return SearchOutcome { x, f, iterations: 0, converged: false };
    }
    let mut g = fd_gradient(obj, &x, cfg.fd_step);
    // inverse Hessian approximation, row-major
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let p: Vec<f64> = (0..n)
            .map(|i| -(0..n).map(|j| h[i * n + j] * g[j]).sum::<f64>())
            .collect();
        let slope: f64 = p.iter().zip(&g).map(|(a, b)| a * b).sum();
        if slope >= 0.0 {
            // reset to steepest descent if the model lost positivity
            for v in h.iter_mut() {
                *v = 0.0;
            }
            for i in 0..n {
                h[i * n + i] = 1.0;
            }
            continue;
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let xt: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + alpha * b).collect();
            let ft = obj.eval(&xt);
            if ft.is_finite() && ft <= f + 1e-4 * alpha * slope {
                accepted = Some((xt, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((xt, ft)) = accepted else {
            break;
        };

        let s: Vec<f64> = xt.iter().zip(&x).map(|(a, b)| a - b).collect();
        let gt = fd_gradient(obj, &xt, cfg.fd_step);
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let f_drop = f - ft;
        let step = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        x = xt;
        f = ft;
        g = gt;

        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-12 {
            // H <- (I - s y^T / sy) H (I - y s^T / sy) + s s^T / sy
            let hy: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| h[i * n + j] * y[j]).sum::<f64>())
                .collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += (1.0 + yhy / sy) * s[i] * s[j] / sy
                        - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }

        let gnorm = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if f_drop.abs() <= cfg.f_tol && step <= cfg.x_tol || gnorm <= 1e-10 {
            converged = true;
            break;
        }
    }
    SearchOutcome { x, f, iterations, converged }
}

fn run_search(obj: &mut Objective, x0: &[f64], cfg: &OptimConfig) -> SearchOutcome {
    match cfg.method {
        Method::NelderMead => nelder_mead(obj, x0, cfg),
        Method::QuasiNewton => bfgs(obj, x0, cfg),
    }
}

/// Minimize condition length over the interior control points of `net0`,
/// endpoints fixed, best of `restarts` local searches (the first starts
/// exactly at `net0`, later ones jitter it with seeded Gaussian noise).
pub fn optimize_geodesic(
    net0: &ControlNet,
    ocfg: &OptimConfig,
    qcfg: &QuadConfig,
) -> Result<OptimResult, GeoError> {
    ocfg.validate()?;
    if net0.curve_degree() < 2 {
        return Err(GeoError::Invalid("no interior points to optimize".into()));
    }
    let initial_lc = condition_length(&ParamPath::bezier(net0.clone()), qcfg)?.value;
    let x0: Vec<f64> =
        net0.interior().iter().flat_map(|p| p.coeffs().iter().copied()).collect();

    let mut obj = Objective { net0, qcfg, evals: 0 };
    let mut best: Option<SearchOutcome> = None;
    for r in 0..ocfg.restarts {
        let start = if r == 0 {
            x0.clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(ocfg.seed.wrapping_add(r as u64));
            x0.iter().map(|v| v + 0.05 * gaussian(&mut rng)).collect()
        };
        let out = run_search(&mut obj, &start, ocfg);
        if best.as_ref().map_or(true, |b| out.f < b.f) {
            best = Some(out);
        }
    }
    let function_evals = obj.evals;
    let best = best.expect("restarts >= 1");
    if !best.f.is_finite() {
        return Err(GeoError::Quad(QuadError::SingularPath { t: f64::NAN, cond: 0.0 }));
    }
    let optimal_net = net0.with_interior(&best.x)?;
    // recompute at the optimum so fval is exactly lc(optimal_net)
    let fval = condition_length(&ParamPath::bezier(optimal_net.clone()), qcfg)?.value;
    Ok(OptimResult {
        optimal_net,
        fval,
        initial_lc,
        iterations: best.iterations,
        function_evals,
        converged: best.converged,
    })
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller on open-interval uniforms
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbRow {
    pub id: usize,
    /// Frobenius norm of the control-point coordinate difference.
    pub delta_norm: f64,
    pub lc: f64,
    pub delta_lc: f64,
}

/// Condition lengths of perturbed nets against a reference net, in input
/// order.
pub fn perturbation_study(
    net_ref: &ControlNet,
    perturbed: &[ControlNet],
    qcfg: &QuadConfig,
) -> Result<Vec<PerturbRow>, GeoError> {
    let lc_ref = condition_length(&ParamPath::bezier(net_ref.clone()), qcfg)?.value;
    let mut rows = Vec::with_capacity(perturbed.len());
    for (id, net) in perturbed.iter().enumerate() {
        if net.curve_degree() != net_ref.curve_degree()
            || net.space_degree() != net_ref.space_degree()
        {
            return Err(GeoError::Invalid(format!(
                "perturbed net {id} does not match the reference degrees"
            )));
        }
        let delta_norm = net
            .points()
            .iter()
            .zip(net_ref.points())
            .flat_map(|(a, b)| a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y) * (x - y)))
            .sum::<f64>()
            .sqrt();
        let lc = condition_length(&ParamPath::bezier(net.clone()), qcfg)?.value;
        rows.push(PerturbRow { id, delta_norm, lc, delta_lc: (lc - lc_ref).abs() });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRow {
    pub degree: usize,
    pub fval: f64,
    pub initial_lc: f64,
    pub iters: usize,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Default initial net for a degree-d sweep entry: interior points on the
/// straight segment between the endpoints, displaced by -0.5 in the
/// constant coefficient.
pub fn default_sweep_net(
    start: &MonicPoly,
    end: &MonicPoly,
    degree: usize,
) -> Result<ControlNet, GeoError> {
    if degree < 1 {
        return Err(GeoError::Invalid("curve degree must be >= 1".into()));
    }
    let n = start.degree();
    let mut points = Vec::with_capacity(degree + 1);
    points.push(start.clone());
    for i in 1..degree {
        let s = i as f64 / degree as f64;
        let mut c: Vec<f64> = start
            .coeffs()
            .iter()
            .zip(end.coeffs())
            .map(|(a, b)| (1.0 - s) * a + s * b)
            .collect();
        c[n - 1] -= 0.5;
        points.push(MonicPoly::new(c).map_err(|e| GeoError::Invalid(e.to_string()))?);
    }
    points.push(end.clone());
    ControlNet::new(points).map_err(GeoError::from)
}

/// Minimum condition length per requested curve degree. Each degree is
/// optimized from the default displaced-segment net and, when a smaller
/// degree has already been optimized, also from its degree-elevated
/// optimum; the better result is kept, which makes the sweep
/// non-increasing in degree. Per-degree failures are reported inline.
pub fn degree_sweep(
    start: &MonicPoly,
    end: &MonicPoly,
    degrees: &[usize],
    ocfg: &OptimConfig,
    qcfg: &QuadConfig,
) -> Vec<SweepRow> {
    let mut done: Vec<(usize, ControlNet)> = Vec::new();
    let mut rows = Vec::with_capacity(degrees.len());
    for &degree in degrees {
        let row = sweep_one(start, end, degree, ocfg, qcfg, &done);
        if let Ok((row, net)) = row {
            done.push((degree, net));
            rows.push(row);
        } else if let Err(e) = row {
            rows.push(SweepRow {
                degree,
                fval: f64::NAN,
                initial_lc: f64::NAN,
                iters: 0,
                converged: false,
                error: Some(e.to_string()),
            });
        }
    }
    rows
}

fn sweep_one(
    start: &MonicPoly,
    end: &MonicPoly,
    degree: usize,
    ocfg: &OptimConfig,
    qcfg: &QuadConfig,
    done: &[(usize, ControlNet)],
) -> Result<(SweepRow, ControlNet), GeoError> {
    let net0 = default_sweep_net(start, end, degree)?;
    if degree == 1 {
        let lc = condition_length(&ParamPath::bezier(net0.clone()), qcfg)?.value;
        let row = SweepRow {
            degree,
            fval: lc,
            initial_lc: lc,
            iters: 0,
            converged: true,
            error: None,
        };
        return Ok((row, net0));
    }
    let mut best = optimize_geodesic(&net0, ocfg, qcfg)?;
    // seed from the largest already-optimized smaller degree, elevated
    if let Some((_, net)) = done
        .iter()
        .filter(|(d, _)| *d < degree && *d >= 1)
        .max_by_key(|(d, _)| *d)
    {
        let mut elevated = net.clone();
        while elevated.curve_degree() < degree {
            elevated = elevated.elevate();
        }
        let alt = optimize_geodesic(&elevated, ocfg, qcfg)?;
        if alt.fval < best.fval {
            let initial_lc = best.initial_lc;
            best = alt;
            best.initial_lc = initial_lc;
        }
    }
    let row = SweepRow {
        degree,
        fval: best.fval,
        initial_lc: best.initial_lc,
        iters: best.iterations,
        converged: best.converged,
        error: None,
    };
    Ok((row, best.optimal_net))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn poly(coeffs: &[f64]) -> MonicPoly {
        MonicPoly::new(coeffs.to_vec()).unwrap()
    }

    fn net(points: &[&[f64]]) -> ControlNet {
        ControlNet::new(points.iter().map(|c| poly(c)).collect()).unwrap()
    }

    fn qcfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn quadratic_geodesic_in_degree2_space() {
        let net0 = net(&[&[-1.0, -1.0], &[0.0, -2.0], &[1.0, -1.0]]);
        let r = optimize_geodesic(&net0, &OptimConfig::default(), &qcfg()).unwrap();
        assert_abs_diff_eq!(r.initial_lc, 1.4524, epsilon = 1e-3);
        assert_abs_diff_eq!(r.fval, 1.3948, epsilon = 5e-3);
        let mid = r.optimal_net.points()[1].coeffs();
        assert_abs_diff_eq!(mid[0], 0.0, epsilon = 1e-2);
        assert_abs_diff_eq!(mid[1], -1.4407, epsilon = 1e-2);
        // endpoints pinned bitwise
        assert_eq!(r.optimal_net.start(), net0.start());
        assert_eq!(r.optimal_net.end(), net0.end());
        assert!(r.fval <= r.initial_lc);
        assert!(r.converged);
    }

    #[test]
    fn cubic_geodesic_is_mirror_symmetric() {
        let net0 = net(&[&[-1.0, -1.0], &[-0.5, -2.0], &[0.5, -2.5], &[1.0, -1.0]]);
        let r = optimize_geodesic(&net0, &OptimConfig::default(), &qcfg()).unwrap();
        assert_abs_diff_eq!(r.initial_lc, 1.5090, epsilon = 1e-3);
        assert_abs_diff_eq!(r.fval, 1.2398, epsilon = 5e-3);
        let a = r.optimal_net.points()[1].coeffs();
        let b = r.optimal_net.points()[2].coeffs();
        // interior points mirror under b -> -b
        assert_abs_diff_eq!(a[0], -b[0], epsilon = 1e-2);
        assert_abs_diff_eq!(a[1], b[1], epsilon = 1e-2);
    }

    #[test]
    fn quadratic_geodesic_in_degree3_space() {
        let net0 = net(&[&[-1.0, -1.0, 2.0], &[0.0, -2.0, 2.0], &[1.0, -1.0, 2.0]]);
        let r = optimize_geodesic(&net0, &OptimConfig::default(), &qcfg()).unwrap();
        assert_abs_diff_eq!(r.initial_lc, 0.7622, epsilon = 1e-3);
        assert_abs_diff_eq!(r.fval, 0.6341, epsilon = 5e-3);
        let mid = r.optimal_net.points()[1].coeffs();
        assert_abs_diff_eq!(mid[0], -0.0381, epsilon = 3e-2);
        assert_abs_diff_eq!(mid[1], -0.9521, epsilon = 3e-2);
        assert_abs_diff_eq!(mid[2], 2.3306, epsilon = 3e-2);
    }

    #[test]
    fn quasi_newton_agrees_with_nelder_mead() {
        let net0 = net(&[&[-1.0, -1.0], &[0.0, -2.0], &[1.0, -1.0]]);
        let mut ocfg = OptimConfig::default();
        ocfg.method = Method::QuasiNewton;
        ocfg.restarts = 1;
        let r = optimize_geodesic(&net0, &ocfg, &qcfg()).unwrap();
        assert_abs_diff_eq!(r.fval, 1.3948, epsilon = 5e-3);
    }

    #[test]
    fn gradient_matches_higher_order_stencil() {
        // central O(h^2) differences vs an O(h^4) five-point stencil at a
        // generic interior configuration
        let net0 = net(&[&[-1.0, -1.0], &[0.1, -1.7], &[1.0, -1.0]]);
        let q = qcfg();
        let mut obj = Objective { net0: &net0, qcfg: &q, evals: 0 };
        let x = [0.1, -1.7];
        let h = 1e-4;
        let g2 = fd_gradient(&mut obj, &x, h);
        for i in 0..x.len() {
            let mut xs = x.to_vec();
            let f = |v: f64, xs: &mut Vec<f64>, obj: &mut Objective| {
                xs[i] = v;
                let out = obj.eval(xs);
                xs[i] = x[i];
                out
            };
            let g4 = (-f(x[i] + 2.0 * h, &mut xs, &mut obj)
                + 8.0 * f(x[i] + h, &mut xs, &mut obj)
                - 8.0 * f(x[i] - h, &mut xs, &mut obj)
                + f(x[i] - 2.0 * h, &mut xs, &mut obj))
                / (12.0 * h);
            assert!(
                (g2[i] - g4).abs() <= 1e-4 * g4.abs().max(1.0),
                "component {i}: {} vs {}",
                g2[i],
                g4
            );
        }
    }

    #[test]
    fn perturbation_rows_match_reference_tables() {
        let x_opt = net(&[&[-1.0, -1.0], &[0.0, -1.4407], &[1.0, -1.0]]);
        let p1 = net(&[&[-1.0, -1.0], &[0.0, -1.4], &[1.0, -1.0]]);
        let p2 = net(&[&[-1.0, -1.0], &[0.0, -1.5], &[1.0, -1.0]]);
        let rows = perturbation_study(&x_opt, &[x_opt.clone(), p1, p2], &qcfg()).unwrap();
        assert_eq!(rows[0].delta_norm, 0.0);
        assert_eq!(rows[0].delta_lc, 0.0);
        assert_abs_diff_eq!(rows[1].delta_norm, 0.0407, epsilon = 1e-4);
        assert_abs_diff_eq!(rows[1].delta_lc, 3.7227e-4, epsilon = 2e-4);
        assert_abs_diff_eq!(rows[2].delta_norm, 0.0593, epsilon = 1e-4);
        assert_abs_diff_eq!(rows[2].delta_lc, 7.6385e-4, epsilon = 2e-4);
    }

    #[test]
    fn sweep_is_non_increasing_and_hits_linear_row() {
        let start = poly(&[-1.0, -1.0]);
        let end = poly(&[1.0, -1.0]);
        let rows =
            degree_sweep(&start, &end, &[1, 2, 3], &OptimConfig::default(), &qcfg());
        assert_eq!(rows.len(), 3);
        assert_abs_diff_eq!(rows[0].fval, 1.9248, epsilon = 1e-3);
        assert_abs_diff_eq!(rows[1].fval, 1.3948, epsilon = 5e-3);
        assert_abs_diff_eq!(rows[2].fval, 1.2398, epsilon = 5e-3);
        for w in rows.windows(2) {
            assert!(w[1].fval <= w[0].fval + 2e-8);
        }
    }

    #[test]
    fn degree_one_net_is_rejected_by_optimizer() {
        let n1 = net(&[&[-1.0, -1.0], &[1.0, -1.0]]);
        match optimize_geodesic(&n1, &OptimConfig::default(), &qcfg()) {
            Err(GeoError::Invalid(msg)) => assert!(msg.contains("no interior points")),
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let net0 = net(&[&[-1.0, -1.0], &[0.0, -2.0], &[1.0, -1.0]]);
        let ocfg = OptimConfig::default();
        let a = optimize_geodesic(&net0, &ocfg, &qcfg()).unwrap();
        let b = optimize_geodesic(&net0, &ocfg, &qcfg()).unwrap();
        assert_eq!(a.fval, b.fval);
        assert_eq!(a.function_evals, b.function_evals);
        assert_eq!(a.optimal_net, b.optimal_net);
    }

    #[test]
    fn config_json_defaults() {
        let c: OptimConfig = serde_json::from_str(r#"{"method":"quasi-newton"}"#).unwrap();
        assert_eq!(c.method, Method::QuasiNewton);
        assert_eq!(c.max_iters, 5000);
        assert!(serde_json::from_str::<OptimConfig>(r#"{"bogus":1}"#).is_err());
    }
}
