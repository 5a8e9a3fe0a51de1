//! Command-line front end.
//!
//! Exit codes: 0 success, 1 numeric failure, 2 configuration or usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    angle_scan, gradient_map, pl_slope_fit, run_sweep, GridRange, Method, SlopeVariable, SweepSpec,
};
use crate::config::load_scenario;
use crate::error::{Error, Result};
use crate::io::{fmt4, write_gradient, write_shifts, write_slope_samples, write_sweep};
use crate::quantization::{dtpq, eipq, exhaustive_search, fixed_threshold};
use crate::scenario::Scenario;

#[derive(Debug, Parser)]
#[command(
    name = "ris-quant",
    version,
    about = "RIS phase quantization and link simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ScenarioArg {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long, allow_hyphen_values = true)]
    start: f64,
    #[arg(long, allow_hyphen_values = true)]
    stop: f64,
    #[arg(long)]
    step: f64,
}

impl RangeArgs {
    fn grid(&self) -> GridRange {
        GridRange::new(self.start, self.stop, self.step)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantize the scenario's ideal shifts and write the shift table.
    Quantize {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// dtpq, eipq[:<step_deg>], fixed[:<gamma_deg>] or exhaustive.
        #[arg(long, default_value = "dtpq")]
        method: String,
        #[arg(long, default_value = "shifts.csv")]
        out: PathBuf,
    },
    /// Received power over a grid of one parameter.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// rx_distance, tx_distance, theta_r or threshold.
        #[arg(long)]
        axis: String,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        methods: Vec<String>,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Design once at a target elevation, then move the receiver (degrees).
    AngleScan {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = -90.0, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, default_value_t = 90.0, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Design elevation; defaults to the scenario's theta_r.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "continuous,dtpq,fixed")]
        methods: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Received power over a theta/phi grid of receiver directions (degrees).
    GradientMap {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value = "dtpq")]
        method: String,
        /// Design direction; defaults to the scenario's Rx direction.
        #[arg(long)]
        target_theta: Option<f64>,
        #[arg(long)]
        target_phi: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        theta_start: f64,
        #[arg(long, default_value_t = 89.0)]
        theta_stop: f64,
        #[arg(long, default_value_t = 1.0)]
        theta_step: f64,
        #[arg(long, default_value_t = 90.0)]
        phi_start: f64,
        #[arg(long, default_value_t = 270.0)]
        phi_stop: f64,
        #[arg(long, default_value_t = 1.0)]
        phi_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-squares path-loss exponent. Distances in meters, angles in degrees.
    PlFit {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// log10_d1, log10_d2, log10_cos_theta_r or log10_cos_theta_t.
        #[arg(long)]
        variable: String,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value = "continuous")]
        method: String,
        /// Optional per-sample CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a scenario file and print a summary.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArg,
    },
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = thread_pool().and_then(|pool| match pool {
        Some(p) => p.install(|| execute(cli.command)),
        None => execute(cli.command),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::GuardExceeded { .. } => 2,
        _ => 1,
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(v) = std::env::var("RIS_THREADS") else {
        return Ok(None);
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::config("RIS_THREADS", "must be a positive integer"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::domain(e.to_string()))
}

fn parse_methods(list: &[String]) -> Result<Vec<Method>> {
    list.iter().map(|s| s.parse()).collect()
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Quantize {
            scenario,
            method,
            out,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            let method: Method = method.parse()?;
            quantize(&s, method, &out)
        }
        Command::Sweep {
            scenario,
            axis,
            range,
            methods,
            out,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            let spec = SweepSpec {
                axis: axis.parse()?,
                range: range.grid(),
                methods: parse_methods(&methods)?,
            };
            let rows = run_sweep(&s, &spec)?;
            write_sweep(output(out.as_deref())?, &rows)
        }
        Command::AngleScan {
            scenario,
            start,
            stop,
            step,
            target,
            methods,
            out,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            let target = target.map_or(s.placement.theta_r, f64::to_radians);
            let rows = angle_scan(
                &s,
                GridRange::new(start, stop, step),
                target,
                &parse_methods(&methods)?,
            )?;
            write_sweep(output(out.as_deref())?, &rows)
        }
        Command::GradientMap {
            scenario,
            method,
            target_theta,
            target_phi,
            theta_start,
            theta_stop,
            theta_step,
            phi_start,
            phi_stop,
            phi_step,
            out,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            let method: Method = method.parse()?;
            let target = (
                target_theta.map_or(s.placement.theta_r, f64::to_radians),
                target_phi.map_or(s.placement.phi_r, f64::to_radians),
            );
            let radians = |r: GridRange| -> Result<Vec<f64>> {
                Ok(r.points()?.into_iter().map(f64::to_radians).collect())
            };
            let theta = radians(GridRange::new(theta_start, theta_stop, theta_step))?;
            let phi = radians(GridRange::new(phi_start, phi_stop, phi_step))?;
            let map = gradient_map(&s, target, &theta, &phi, method)?;
            write_gradient(output(out.as_deref())?, &map, method.name())
        }
        Command::PlFit {
            scenario,
            variable,
            range,
            method,
            out,
        } => {
            let s = load_scenario(&scenario.scenario)?;
            let variable: SlopeVariable = variable.parse()?;
            let method: Method = method.parse()?;
            let mut grid = range.grid().points()?;
            if matches!(
                variable,
                SlopeVariable::Log10CosThetaR | SlopeVariable::Log10CosThetaT
            ) {
                grid.iter_mut().for_each(|v| *v = v.to_radians());
            }
            let fit = pl_slope_fit(&s, variable, &grid, method)?;
            println!("variable: {}", fit.variable.name());
            println!("slope: {}", fmt4(fit.slope));
            println!("intercept_db: {}", fmt4(fit.intercept));
            println!("r_squared: {:.6}", fit.r_squared);
            if let Some(p) = out {
                write_slope_samples(output(Some(&p))?, &fit)?;
            }
            Ok(())
        }
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario.scenario)?;
            let p = &s.panel;
            println!(
                "ok: {}x{} cells, {} bit(s), wavelength {} m",
                p.rows(),
                p.cols(),
                p.bits(),
                fmt4(s.wavelength())
            );
            Ok(())
        }
    }
}

fn quantize(s: &Scenario, method: Method, out: &Path) -> Result<()> {
    let r = match method {
        Method::Continuous => {
            return Err(Error::config(
                "method",
                "continuous shifts are not quantized",
            ))
        }
        Method::Dtpq => dtpq(s)?,
        Method::Eipq { epsilon } => eipq(s, epsilon)?,
        Method::Fixed { gamma } => {
            let g = gamma.unwrap_or_else(|| *s.panel.levels().last().expect("non-empty levels"));
            fixed_threshold(s, g)?
        }
        Method::Exhaustive => exhaustive_search(s)?,
    };
    let mut w = BufWriter::new(File::create(out)?);
    write_shifts(&mut w, &r.shifts)?;
    w.flush()?;
    match r.threshold {
        Some(t) => println!("threshold_deg: {}", fmt4(t.to_degrees())),
        None => println!("threshold_deg: none"),
    }
    println!("xi: {:.6e}", r.xi);
    println!("received_power_dbm: {}", fmt4(r.received_power_dbm));
    println!("candidates: {}", r.candidates_evaluated);
    println!("shifts: {}", out.display());
    Ok(())
}
