//! Command-line driver: scenario runs, verification suites, hedgehog
//! reduction, flux and cocycle reports. The only module that touches files.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 invariant
//! violation, 3 halt (exclusion zone or other right-hand-side failure).

mod config;
mod scenario;
mod suites;

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

pub use config::Config;
pub use scenario::{FreeParticle, Scenario, ScenarioReport, SystemId, require_hedgehog};
pub use suites::{
    CheckItem, FLUX_ABS_TOL, FLUX_REL_TOL, GRASSMANN_TOL, IDENTITY_TOL, Suite, SuiteReport,
    cocycle_items, run_suite,
};

use crate::bundle::PatchCover;
use crate::dynamics::{MonopoleParams, ReductionSample, hedgehog_reduction_check};
use crate::fluxaction::{
    DENOMINATOR_CAP, FluxReport, MagneticForm, PhaseSpaceForm, QuantizationReport, RATIONAL_TOL,
    SurfaceMesh, TwoForm, flux, icosphere, quantization_check_with,
};
use crate::{Error, Result, Vec3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_HALT: i32 = 3;

/// Environment variable capping the number of scenarios run at once.
pub const THREADS_ENV: &str = "FIBERDYN_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "fiberdyn",
    version,
    about = "Simulate and verify particles with internal SU(2) and Lorentz degrees of freedom"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate one or more scenario configs; writes CSV and JSON reports.
    Simulate {
        /// Scenario config; repeat for a batch.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides the `seed` key of every config.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a seeded verification suite and print its JSON report.
    Check {
        /// identities, brackets, grassmann, cocycle or flux.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a hedgehog Wong run with the matching monopole run.
    Reduce {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Flux of the monopole two-form through a mesh, plus charge quantization.
    Flux {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cocycle integers of a patch cover.
    Cocycle {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

pub fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Simulate { config, out, seed } => cmd_simulate(config, out, *seed),
        Command::Check { suite, seed, out } => cmd_check(suite, *seed, out.as_deref()),
        Command::Reduce { config, out, seed } => cmd_reduce(config, out, *seed),
        Command::Flux { config, out } => cmd_flux(config.as_deref(), out.as_deref()),
        Command::Cocycle { config, out, seed } => {
            cmd_cocycle(config.as_deref(), out.as_deref(), *seed)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

fn with_config_context(path: &Path, e: Error) -> Error {
    match e {
        Error::Config { line, msg } => Error::Config {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        e => e,
    }
}

fn load_scenario(path: &Path, seed: Option<u64>) -> Result<(Scenario, Config)> {
    let c = Config::parse(&read(path)?).map_err(|e| with_config_context(path, e))?;
    let mut s = Scenario::from_config(&c, &stem(path)).map_err(|e| with_config_context(path, e))?;
    if let Some(seed) = seed {
        s.seed = seed;
    }
    Ok((s, c))
}

/// Runs one scenario and writes its CSV and report; returns the exit code.
pub fn simulate_one(path: &Path, out: &Path, seed: Option<u64>) -> Result<ScenarioReport> {
    let (s, c) = load_scenario(path, seed)?;
    c.finish().map_err(|e| with_config_context(path, e))?;
    let (traj, rep) = s.run()?;
    write(&out.join(&s.csv_name), &s.csv(&traj))?;
    let report = ScenarioReport::new(&s, rep);
    write(&out.join(&s.report_name), &to_json(&report))?;
    Ok(report)
}

/// Thread count from `FIBERDYN_THREADS`, when set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config {
                line: 0,
                msg: format!("{THREADS_ENV} must be a positive integer, got `{v}`"),
            }),
        },
    }
}

/// Most severe code of a batch: config error, then halt, then violation.
fn combine(codes: &[i32]) -> i32 {
    [EXIT_CONFIG, EXIT_HALT, EXIT_VIOLATION]
        .into_iter()
        .find(|c| codes.contains(c))
        .unwrap_or(EXIT_OK)
}

pub fn cmd_simulate(configs: &[PathBuf], out: &Path, seed: Option<u64>) -> Result<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Io(e.to_string()))?;
    let results: Vec<Result<ScenarioReport>> = pool.install(|| {
        configs
            .par_iter()
            .map(|p| simulate_one(p, out, seed))
            .collect()
    });
    let mut codes = Vec::with_capacity(results.len());
    for (path, r) in configs.iter().zip(results) {
        match r {
            Ok(rep) => {
                let status = match rep.exit_code {
                    EXIT_OK => "ok".to_string(),
                    EXIT_HALT => format!(
                        "halted: {}",
                        rep.invariants
                            .halt
                            .as_ref()
                            .map(|h| h.reason.as_str())
                            .unwrap_or("")
                    ),
                    _ => "invariant violation".to_string(),
                };
                println!(
                    "{}: {} steps, t = {}, {status}",
                    path.display(),
                    rep.invariants.steps,
                    rep.invariants.t_final
                );
                for m in rep.invariants.monitors.iter().filter(|m| !m.passed) {
                    println!("  {}: {:.3e} > {:.3e}", m.name, m.max_drift, m.tolerance);
                }
                codes.push(rep.exit_code);
            }
            Err(e) => {
                eprintln!("error: {e}");
                codes.push(EXIT_CONFIG);
            }
        }
    }
    Ok(combine(&codes))
}

pub fn cmd_check(suite: &str, seed: u64, out: Option<&Path>) -> Result<i32> {
    let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
    let s = Suite::parse(suite).ok_or_else(|| Error::Config {
        line: 0,
        msg: format!(
            "unknown suite `{suite}` (expected one of {})",
            names.join(", ")
        ),
    })?;
    let report = run_suite(s, seed)?;
    let json = to_json(&report);
    print!("{json}");
    if let Some(dir) = out {
        write(&dir.join(format!("check-{}.json", s.name())), &json)?;
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ReduceReport {
    pub scenario: String,
    pub seed: u64,
    pub n0: f64,
    pub items: Vec<CheckItem>,
    pub halt: Option<String>,
    pub samples: Vec<ReductionSample>,
    pub passed: bool,
}

/// Hedgehog reduction for a loaded scenario; `charge_tol` bounds `n(τ)`
/// drift, `divergence_tol` the distance to the monopole trajectory.
pub fn reduce_scenario(s: &Scenario, charge_tol: f64, divergence_tol: f64) -> Result<ReduceReport> {
    let params = require_hedgehog(s)?;
    let (traj, rep) = s.run()?;
    let r = hedgehog_reduction_check(&traj, &params, &s.stepper)?;
    let items = vec![
        CheckItem::new(
            "charge_drift",
            r.max_charge_drift,
            charge_tol,
            r.samples.len(),
        ),
        CheckItem::flag("charge_bound_every_sample", r.bound_holds),
        CheckItem::new(
            "monopole_divergence",
            r.max_divergence,
            divergence_tol,
            r.samples.len(),
        ),
    ];
    let halt = rep.halt.map(|h| format!("t = {}: {}", h.t, h.reason));
    let passed = halt.is_none() && items.iter().all(|i| i.passed);
    Ok(ReduceReport {
        scenario: s.name.clone(),
        seed: s.seed,
        n0: r.n0,
        items,
        halt,
        samples: r.samples,
        passed,
    })
}

pub fn cmd_reduce(path: &Path, out: &Path, seed: Option<u64>) -> Result<i32> {
    let (s, c) = load_scenario(path, seed)?;
    c.finish().map_err(|e| with_config_context(path, e))?;
    let (charge_tol, divergence_tol) = s.reduce_tolerances;
    let report = reduce_scenario(&s, charge_tol, divergence_tol)?;
    write(
        &out.join(format!("{}.reduce.json", s.name)),
        &to_json(&report),
    )?;
    for i in &report.items {
        println!(
            "{}: {:.3e} (tolerance {:.1e}) {}",
            i.name,
            i.residual,
            i.tolerance,
            if i.passed { "pass" } else { "FAIL" }
        );
    }
    Ok(match (&report.halt, report.passed) {
        (Some(_), _) => EXIT_HALT,
        (None, true) => EXIT_OK,
        (None, false) => EXIT_VIOLATION,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxCommandReport {
    pub form: String,
    pub n: f64,
    pub flux: FluxReport,
    pub quantization: Option<QuantizationReport>,
    pub passed: bool,
}

/// Flux run described by a config; every key is optional.
///
/// `mesh.kind` (`icosphere`, `off`), `mesh.level`, `mesh.center`,
/// `mesh.radius`, `mesh.path`; `form` (`phase_space`, `magnetic`);
/// `params.m`, `params.n`, `params.r_min`; `expected`, `tolerance`;
/// `quantization.charges`, `quantization.tolerance`, `quantization.denominator_cap`.
pub fn flux_from_config(c: &Config, base: &Path) -> Result<FluxCommandReport> {
    let n = c.f64_or("params.n", 1.0)?;
    let params = MonopoleParams {
        m: c.f64_or("params.m", 1.0)?,
        n,
        r_min: c.f64_or("params.r_min", 1e-4)?,
    };
    params
        .validate()
        .map_err(|e| c.error("params", e.to_string()))?;
    let (mesh, encloses) = match c.str("mesh.kind").unwrap_or("icosphere") {
        "icosphere" => {
            let level = c.usize_or("mesh.level", 5)?;
            if level > 7 {
                return Err(c.error("mesh.level", "at most 7"));
            }
            let center = c.vec3_or("mesh.center", Vec3::zeros())?;
            let radius = c.f64_or("mesh.radius", 1.0)?;
            (
                icosphere(level as u32, center, radius),
                Some(center.norm() < radius),
            )
        }
        "off" => {
            let rel = c.require_str("mesh.path")?;
            let mesh = SurfaceMesh::from_off(&read(&base.join(rel))?)?;
            (mesh, None)
        }
        other => return Err(c.error("mesh.kind", format!("unknown mesh `{other}`"))),
    };
    let form_name = c.str("form").unwrap_or("phase_space").to_string();
    let form: Box<dyn TwoForm> = match form_name.as_str() {
        "phase_space" => Box::new(PhaseSpaceForm { params }),
        "magnetic" => Box::new(MagneticForm {
            n,
            r_min: params.r_min,
        }),
        other => return Err(c.error("form", format!("unknown form `{other}`"))),
    };
    let expected = match (c.f64("expected")?, encloses) {
        (Some(e), _) => e,
        (None, Some(true)) => -4.0 * PI * n,
        (None, Some(false)) => 0.0,
        (None, None) => {
            return Err(Error::Config {
                line: 0,
                msg: "`expected` is required for OFF meshes".into(),
            });
        }
    };
    let relative = expected != 0.0;
    let tolerance = c.f64_or(
        "tolerance",
        if relative { FLUX_REL_TOL } else { FLUX_ABS_TOL },
    )?;
    let value = flux(form.as_ref(), &mesh)?;
    let report = FluxReport::compare(&mesh, value, expected, tolerance, relative);
    let quantization = match c.list("quantization.charges")? {
        Some(charges) => {
            let tol = c.f64_or("quantization.tolerance", RATIONAL_TOL)?;
            let cap = c.f64_or("quantization.denominator_cap", DENOMINATOR_CAP as f64)? as i128;
            Some(quantization_check_with(&charges, tol, cap))
        }
        None => None,
    };
    let passed = report.passed;
    Ok(FluxCommandReport {
        form: form_name,
        n,
        flux: report,
        quantization,
        passed,
    })
}

fn optional_config(path: Option<&Path>) -> Result<(Config, PathBuf)> {
    match path {
        None => Ok((Config::default(), PathBuf::from("."))),
        Some(p) => {
            let c = Config::parse(&read(p)?).map_err(|e| with_config_context(p, e))?;
            Ok((c, p.parent().map(Path::to_path_buf).unwrap_or_default()))
        }
    }
}

pub fn cmd_flux(path: Option<&Path>, out: Option<&Path>) -> Result<i32> {
    let (c, base) = optional_config(path)?;
    let name = c.str("output.report").unwrap_or("flux.json").to_string();
    let report = flux_from_config(&c, &base)?;
    c.finish()?;
    let json = to_json(&report);
    print!("{json}");
    if let Some(dir) = out {
        write(&dir.join(name), &json)?;
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CocycleCommandReport {
    pub cover: String,
    pub n: f64,
    pub lambda_w: f64,
    pub seed: u64,
    pub items: Vec<CheckItem>,
    pub passed: bool,
}

/// `cover` (`four_caps`, `two_patch`), `n`, `lambda_w` (default `2n`),
/// `samples` per triple overlap, `seed`.
pub fn cocycle_from_config(c: &Config, seed: Option<u64>) -> Result<CocycleCommandReport> {
    let cover = match c.str("cover").unwrap_or("four_caps") {
        "four_caps" => PatchCover::four_caps(),
        "two_patch" => PatchCover::two_patch(),
        other => return Err(c.error("cover", format!("unknown cover `{other}`"))),
    };
    let n = c.f64_or("n", 1.0)?;
    let lambda_w = c.f64_or("lambda_w", 2.0 * n)?;
    let per_triple = c.usize_or("samples", 20)?;
    let seed = match (seed, c.u64("seed")?) {
        (Some(s), _) => s,
        (None, s) => s.unwrap_or(0),
    };
    let mut items = cocycle_items(&cover, n, lambda_w, per_triple, seed)?;
    if cover.patches().len() < 3 {
        // no triple overlaps to sample
        items.retain(|i| !i.name.ends_with("_sampled"));
    }
    let passed = items.iter().all(|i| i.passed);
    Ok(CocycleCommandReport {
        cover: cover.id.clone(),
        n,
        lambda_w,
        seed,
        items,
        passed,
    })
}

pub fn cmd_cocycle(path: Option<&Path>, out: Option<&Path>, seed: Option<u64>) -> Result<i32> {
    let (c, _) = optional_config(path)?;
    let name = c.str("output.report").unwrap_or("cocycle.json").to_string();
    let report = cocycle_from_config(&c, seed)?;
    c.finish()?;
    let json = to_json(&report);
    print!("{json}");
    if let Some(dir) = out {
        write(&dir.join(name), &json)?;
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_code_ordering() {
        assert_eq!(combine(&[0, 2, 0]), 2);
        assert_eq!(combine(&[2, 3]), 3);
        assert_eq!(combine(&[3, 1, 2]), 1);
        assert_eq!(combine(&[]), 0);
    }

    #[test]
    fn default_cocycle_passes() {
        let r = cocycle_from_config(&Config::default(), Some(3)).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn flux_config_keys() {
        let c = Config::from_pairs(&[
            ("mesh.level", "3"),
            ("mesh.center", "4, 0, 0"),
            ("params.n", "2"),
        ])
        .unwrap();
        let r = flux_from_config(&c, Path::new(".")).unwrap();
        c.finish().unwrap();
        assert_eq!(r.flux.expected, 0.0);
        assert!(r.passed);
        let bad = Config::from_pairs(&[("mesh.levle", "3")]).unwrap();
        flux_from_config(&bad, Path::new(".")).unwrap();
        assert!(matches!(bad.finish(), Err(Error::Config { line: 1, .. })));
    }
}
