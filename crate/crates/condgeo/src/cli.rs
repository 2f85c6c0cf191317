//! Command-line front end: lengths, geodesic optimization, perturbation
//! studies, degree sweeps, table reproduction, root tracking, step
//! bounds, and plot data.
//!
//! Exit codes: 0 success, 1 bad input, 2 singular path, 3 convergence
//! failure.

use crate::bezier::ControlNet;
use crate::condlength::{
    condition_length, euclidean_length, toy_length, QuadConfig, QuadError, QuadResult,
};
use crate::geodesic::{
    degree_sweep, optimize_geodesic, perturbation_study, GeoError, OptimConfig, SweepRow,
};
use crate::paths::ParamPath;
use crate::polyspace::{cond_cn, MonicPoly};
use crate::tracker::{step_bound, track, TrackConfig, TrackError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::PathBuf;

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        let code = match &e {
            QuadError::SingularPath { .. } => 2,
            QuadError::Convergence { .. } => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<GeoError> for CliError {
    fn from(e: GeoError) -> Self {
        match e {
            GeoError::Quad(q) => q.into(),
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<TrackError> for CliError {
    fn from(e: TrackError) -> Self {
        let code = match &e {
            TrackError::StepCollapse { .. } | TrackError::DerivativeZero { .. } => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(
    name = "condgeo",
    version,
    about = "Condition lengths, geodesic approximation, and homotopy tracking in monic polynomial spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Metric {
    Condition,
    Toy,
    Euclidean,
}

#[derive(Args)]
struct Common {
    /// Override the quadrature relative tolerance.
    #[arg(long, global = true)]
    quad_rel_tol: Option<f64>,
    /// Override the optimizer restart seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output to a file as well as stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker cap (computations here are sequential; accepted for
    /// interface stability).
    #[arg(long, global = true, env = "CONDGEO_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Length of a path: condition, toy, or Euclidean metric.
    Length {
        path_file: PathBuf,
        #[arg(long, value_enum, default_value = "condition")]
        metric: Metric,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize condition length over interior control points.
    Optimize {
        job_file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Condition lengths of perturbed nets against a reference net.
    Perturb {
        job_file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Minimum condition length per curve degree.
    Sweep {
        job_file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce a summary table (1, 2, 3, or 5).
    Tables {
        which: u8,
        /// Include the slow degree-10/20 rows.
        #[arg(long)]
        full: bool,
        /// Endpoint pair for table 3: p1p2 (default) or p3p4.
        #[arg(long, default_value = "p1p2")]
        pair: String,
        #[command(flatten)]
        common: Common,
    },
    /// Prediction-correction root tracking along a path.
    Track {
        job_file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Normalized step bound degree^(3/2) * lc.
    Bound {
        lc: f64,
        degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled coordinates, condition, and integrand along a path.
    PlotData {
        path_file: PathBuf,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("invalid JSON in {}: {e}", path.display())))
}

fn quad_config(common: &Common, base: Option<QuadConfig>) -> QuadConfig {
    let mut cfg = base.unwrap_or_default();
    if let Some(r) = common.quad_rel_tol {
        cfg.rel_tol = r;
    }
    cfg
}

fn emit(common: &Common, text: &str) -> Result<(), CliError> {
    println!("{text}");
    if let Some(out) = &common.out {
        std::fs::write(out, format!("{text}\n"))
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::input(e.to_string()))
}

fn quad_result_text(r: &QuadResult, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => to_json(r)?,
        Format::Csv => format!(
            "value,error_estimate,subdivisions,min_cond_seen\n{},{},{},{}",
            r.value, r.error_estimate, r.subdivisions, r.min_cond_seen
        ),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizeJob {
    net0: ControlNet,
    #[serde(default)]
    optim: OptimConfig,
    #[serde(default)]
    quad: Option<QuadConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PerturbJob {
    net_ref: ControlNet,
    perturbed: Vec<ControlNet>,
    #[serde(default)]
    quad: Option<QuadConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepJob {
    start: MonicPoly,
    end: MonicPoly,
    degrees: Vec<usize>,
    #[serde(default)]
    optim: OptimConfig,
    #[serde(default)]
    quad: Option<QuadConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TrackJob {
    path: ParamPath,
    x0: f64,
    #[serde(default)]
    track: TrackConfig,
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("degree,fval,initial_lc,iters,converged");
    for r in rows {
        match &r.error {
            Some(e) => {
                let _ = write!(s, "\n{},error: {},,,", r.degree, e);
            }
            None => {
                let _ = write!(
                    s,
                    "\n{},{},{},{},{}",
                    r.degree, r.fval, r.initial_lc, r.iters, r.converged
                );
            }
        }
    }
    s
}

fn run_sweep(
    start: &MonicPoly,
    end: &MonicPoly,
    degrees: &[usize],
    ocfg: &OptimConfig,
    qcfg: &QuadConfig,
) -> Vec<SweepRow> {
    degree_sweep(start, end, degrees, ocfg, qcfg)
}

fn tables_text(which: u8, full: bool, pair: &str, common: &Common) -> Result<String, CliError> {
    let qcfg = quad_config(common, None);
    let mut ocfg = OptimConfig::default();
    if let Some(seed) = common.seed {
        ocfg.seed = seed;
    }
    let p = |c: &[f64]| MonicPoly::new(c.to_vec()).expect("static endpoint");
    let (start, end, with_steps): (MonicPoly, MonicPoly, bool) = match which {
        1 => (p(&[-1.0, -1.0]), p(&[1.0, -1.0]), false),
        2 => (p(&[-1.0, -1.0, 2.0]), p(&[1.0, -1.0, 2.0]), false),
        3 => match pair {
            "p1p2" => (p(&[-1.0, -1.0]), p(&[1.0, -1.0]), true),
            "p3p4" => (p(&[-1.0, -0.1]), p(&[1.0, -0.1]), true),
            other => return Err(CliError::input(format!("unknown pair `{other}`"))),
        },
        5 => (p(&[-1.0, -1.0, 2.0]), p(&[1.0, -1.0, 2.0]), true),
        other => return Err(CliError::input(format!("no table `{other}`; choose 1, 2, 3 or 5"))),
    };
    let mut degrees: Vec<usize> = if with_steps { vec![1, 2, 3] } else { vec![2, 3] };
    if full {
        degrees.extend([4, 5, 10, 20]);
    }
    let n = start.degree();
    let rows = run_sweep(&start, &end, &degrees, &ocfg, &qcfg);
    let mut s = if with_steps {
        String::from("degree,lc,steps")
    } else {
        String::from("degree,fval,initial_lc,iters,converged")
    };
    let mut any_ok = false;
    for r in &rows {
        let label = if r.degree == 1 { "linear".to_string() } else { r.degree.to_string() };
        match &r.error {
            Some(e) => {
                let _ = write!(s, "\n{label},error: {e}");
            }
            None if with_steps => {
                any_ok = true;
                let _ = write!(s, "\n{label},{:.4},{:.4}", r.fval, step_bound(r.fval, n));
            }
            None => {
                any_ok = true;
                let _ = write!(
                    s,
                    "\n{label},{:.4},{:.4},{},{}",
                    r.fval, r.initial_lc, r.iters, r.converged
                );
            }
        }
    }
    if !any_ok {
        return Err(CliError::input("every table row failed"));
    }
    Ok(s)
}

fn plot_data_text(path: &ParamPath, samples: usize) -> Result<String, CliError> {
    if samples < 2 {
        return Err(CliError::input("need at least 2 samples"));
    }
    let n = path.dim();
    let mut s = String::from("t");
    for j in 0..n {
        let _ = write!(s, ",x{j}");
    }
    s.push_str(",cond_cn,integrand");
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        let x = path.position(t).map_err(CliError::from_path)?;
        let v = path.velocity(t).map_err(CliError::from_path)?;
        let poly = MonicPoly::new(x.clone()).map_err(|e| CliError::input(e.to_string()))?;
        let cond = cond_cn(&poly);
        let speed = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let integrand = speed / cond;
        let _ = write!(s, "\n{t}");
        for c in &x {
            let _ = write!(s, ",{c}");
        }
        let _ = write!(s, ",{cond},{integrand}");
    }
    Ok(s)
}

impl CliError {
    fn from_path(e: crate::paths::PathError) -> Self {
        CliError::input(e.to_string())
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Length { path_file, metric, common } => {
            let path: ParamPath = read_json(&path_file)?;
            let qcfg = quad_config(&common, None);
            let r = match metric {
                Metric::Condition => condition_length(&path, &qcfg)?,
                Metric::Toy => toy_length(&path, &qcfg)?,
                Metric::Euclidean => euclidean_length(&path, &qcfg)?,
            };
            emit(&common, &quad_result_text(&r, common.format)?)
        }
        Command::Optimize { job_file, common } => {
            let job: OptimizeJob = read_json(&job_file)?;
            let qcfg = quad_config(&common, job.quad);
            let mut ocfg = job.optim;
            if let Some(seed) = common.seed {
                ocfg.seed = seed;
            }
            let r = optimize_geodesic(&job.net0, &ocfg, &qcfg)?;
            let text = match common.format {
                Format::Json => to_json(&r)?,
                Format::Csv => format!(
                    "fval,initial_lc,iterations,function_evals,converged\n{},{},{},{},{}",
                    r.fval, r.initial_lc, r.iterations, r.function_evals, r.converged
                ),
            };
            emit(&common, &text)
        }
        Command::Perturb { job_file, common } => {
            let job: PerturbJob = read_json(&job_file)?;
            let qcfg = quad_config(&common, job.quad);
            let rows = perturbation_study(&job.net_ref, &job.perturbed, &qcfg)?;
            let text = match common.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => {
                    let mut s = String::from("id,delta_norm,lc,delta_lc");
                    for r in &rows {
                        let _ =
                            write!(s, "\n{},{},{},{}", r.id, r.delta_norm, r.lc, r.delta_lc);
                    }
                    s
                }
            };
            emit(&common, &text)
        }
        Command::Sweep { job_file, common } => {
            let job: SweepJob = read_json(&job_file)?;
            let qcfg = quad_config(&common, job.quad);
            let mut ocfg = job.optim;
            if let Some(seed) = common.seed {
                ocfg.seed = seed;
            }
            let rows = run_sweep(&job.start, &job.end, &job.degrees, &ocfg, &qcfg);
            let text = match common.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => sweep_csv(&rows),
            };
            emit(&common, &text)
        }
        Command::Tables { which, full, pair, common } => {
            let text = tables_text(which, full, &pair, &common)?;
            emit(&common, &text)
        }
        Command::Track { job_file, common } => {
            let job: TrackJob = read_json(&job_file)?;
            let r = track(&job.path, job.x0, &job.track)?;
            let text = match common.format {
                Format::Json => to_json(&r)?,
                Format::Csv => {
                    let mut s = String::from("i,t,x,residual");
                    for (i, ((t, x), res)) in
                        r.grid.iter().zip(&r.roots).zip(&r.residuals).enumerate()
                    {
                        let _ = write!(s, "\n{i},{t},{x},{res}");
                    }
                    s
                }
            };
            emit(&common, &text)
        }
        Command::Bound { lc, degree, common } => {
            if !(lc >= 0.0) || degree < 1 {
                return Err(CliError::input("need lc >= 0 and degree >= 1"));
            }
            let b = step_bound(lc, degree);
            let text = match common.format {
                Format::Json => format!("{{\n  \"bound\": {b}\n}}"),
                Format::Csv => format!("bound\n{b}"),
            };
            emit(&common, &text)
        }
        Command::PlotData { path_file, samples, common } => {
            let path: ParamPath = read_json(&path_file)?;
            let text = plot_data_text(&path, samples)?;
            emit(&common, &text)
        }
    }
}
