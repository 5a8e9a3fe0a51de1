//! Parameter sweeps, beam maps and path-loss fits.
//!
//! Sweep axes and grids are given in interface units (meters, degrees);
//! method parameters are radians.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Placement;
use crate::quantization::{
    dtpq_on, eipq_on, exhaustive_on, fixed_threshold_on, QuantizationResult,
};
use crate::radiation::linear_to_db;
use crate::scenario::{Link, Scenario};

/// Default EIPQ step, 5°.
pub const DEFAULT_EIPQ_STEP_DEG: f64 = 5.0;

/// How the per-cell shifts are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Ideal continuous shifts (no quantization).
    Continuous,
    Dtpq,
    Eipq {
        epsilon: f64,
    },
    /// Constant threshold. `None` uses the panel's last level.
    Fixed {
        gamma: Option<f64>,
    },
    Exhaustive,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Continuous => "continuous",
            Method::Dtpq => "dtpq",
            Method::Eipq { .. } => "eipq",
            Method::Fixed { .. } => "fixed",
            Method::Exhaustive => "exhaustive",
        }
    }

    /// Whether the method produces a threshold worth reporting.
    pub fn has_threshold(&self) -> bool {
        matches!(
            self,
            Method::Dtpq | Method::Eipq { .. } | Method::Fixed { .. }
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Eipq { epsilon } => write!(f, "eipq:{}", epsilon.to_degrees()),
            Method::Fixed { gamma: Some(g) } => write!(f, "fixed:{}", g.to_degrees()),
            other => f.write_str(other.name()),
        }
    }
}

/// Parses `continuous`, `dtpq`, `exhaustive`, `eipq[:<step_deg>]` and
/// `fixed[:<gamma_deg>]`.
impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let degrees = |a: &str| -> Result<f64> {
            a.parse::<f64>()
                .map_err(|_| Error::config("methods", format!("`{a}` is not a number in `{s}`")))
        };
        let method = match (name, arg) {
            ("continuous", None) => Method::Continuous,
            ("dtpq", None) => Method::Dtpq,
            ("exhaustive", None) => Method::Exhaustive,
            ("eipq", None) => Method::Eipq {
                epsilon: DEFAULT_EIPQ_STEP_DEG.to_radians(),
            },
            ("eipq", Some(a)) => Method::Eipq {
                epsilon: degrees(a)?.to_radians(),
            },
            ("fixed", None) => Method::Fixed { gamma: None },
            ("fixed", Some(a)) => Method::Fixed {
                gamma: Some(degrees(a)?.rem_euclid(360.0).to_radians()),
            },
            _ => return Err(Error::config("methods", format!("unknown method `{s}`"))),
        };
        Ok(method)
    }
}

/// Power and threshold produced by one method at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub method: Method,
    pub xi: f64,
    pub received_power_dbm: f64,
    pub threshold: Option<f64>,
}

/// Designs shifts on `link` with `method`. Continuous designs return `None`
/// for the quantization result.
pub fn design(link: &Link, method: Method) -> Result<Option<QuantizationResult>> {
    let r = match method {
        Method::Continuous => return Ok(None),
        Method::Dtpq => dtpq_on(link)?,
        Method::Eipq { epsilon } => eipq_on(link, epsilon)?,
        Method::Fixed { gamma } => fixed_threshold_on(link, fixed_gamma(link, gamma))?,
        Method::Exhaustive => exhaustive_on(link)?,
    };
    Ok(Some(r))
}

fn fixed_gamma(link: &Link, gamma: Option<f64>) -> f64 {
    gamma.unwrap_or_else(|| {
        let levels = link.panel().levels();
        levels[levels.len() - 1].rem_euclid(TAU)
    })
}

pub fn evaluate(link: &Link, method: Method) -> Result<MethodOutcome> {
    Ok(match design(link, method)? {
        None => {
            let xi = link.continuous_xi();
            MethodOutcome {
                method,
                xi,
                received_power_dbm: link.power_dbm(xi),
                threshold: None,
            }
        }
        Some(r) => MethodOutcome {
            method,
            xi: r.xi,
            received_power_dbm: r.received_power_dbm,
            threshold: r.threshold,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Rx distance d2, meters.
    RxDistance,
    /// Tx distance d1, meters.
    TxDistance,
    /// Rx elevation, degrees. Shifts are redesigned at every point.
    ThetaR,
    /// Fixed-method threshold, degrees.
    Threshold,
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rx_distance" => Ok(SweepAxis::RxDistance),
            "tx_distance" => Ok(SweepAxis::TxDistance),
            "theta_r" => Ok(SweepAxis::ThetaR),
            "threshold" => Ok(SweepAxis::Threshold),
            _ => Err(Error::config("axis", format!("unknown axis `{s}`"))),
        }
    }
}

/// Closed range `start..=stop` with spacing `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self { start, stop, step }
    }

    /// Grid points `start + i·step` that do not pass `stop`; a relative
    /// slack of 1e-9 steps keeps the end point of `5:0.1:10` despite rounding.
    pub fn points(&self) -> Result<Vec<f64>> {
        let GridRange { start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::config("start", "grid bounds must be finite"));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::config("step", "must be positive"));
        }
        if stop < start {
            return Err(Error::config("stop", "must not be below start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| start + i as f64 * step).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub range: GridRange,
    pub methods: Vec<Method>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(Error::config("methods", "at least one method is required"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].iter().any(|o| o.name() == m.name()) {
                return Err(Error::config(
                    "methods",
                    format!("method `{}` listed twice", m.name()),
                ));
            }
        }
        if self.axis == SweepAxis::Threshold
            && !self
                .methods
                .iter()
                .any(|m| matches!(m, Method::Fixed { .. }))
        {
            return Err(Error::config(
                "methods",
                "a threshold sweep needs the `fixed` method",
            ));
        }
        self.range.points().map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub outcomes: Vec<MethodOutcome>,
}

impl SweepRow {
    pub fn power_of(&self, name: &str) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|o| o.method.name() == name)
            .map(|o| o.received_power_dbm)
    }
}

/// One row per grid point, in grid order. Every point is an independent
/// design: shifts are recomputed for the geometry at that point. On the
/// threshold axis the fixed method takes its threshold from the axis and the
/// other methods are repeated as references.
pub fn run_sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.range.points()?;
    if spec.axis == SweepAxis::Threshold {
        let link = scenario.link();
        let reference: Vec<Option<MethodOutcome>> = spec
            .methods
            .iter()
            .map(|&m| match m {
                Method::Fixed { .. } => Ok(None),
                other => evaluate(&link, other).map(Some),
            })
            .collect::<Result<_>>()?;
        return points
            .par_iter()
            .map(|&deg| {
                let gamma = deg.to_radians().rem_euclid(TAU);
                let outcomes = spec
                    .methods
                    .iter()
                    .zip(&reference)
                    .map(|(&m, r)| match r {
                        Some(o) => Ok(o.clone()),
                        None => {
                            let mut o = evaluate(&link, Method::Fixed { gamma: Some(gamma) })?;
                            o.method = m;
                            Ok(o)
                        }
                    })
                    .collect::<Result<_>>()?;
                Ok(SweepRow {
                    axis_value: deg,
                    outcomes,
                })
            })
            .collect();
    }

    points
        .par_iter()
        .map(|&v| {
            let placement = moved_placement(&scenario.placement, spec.axis, v)?;
            let link = scenario.with_placement(placement).link();
            let outcomes = spec
                .methods
                .iter()
                .map(|&m| evaluate(&link, m))
                .collect::<Result<_>>()?;
            Ok(SweepRow {
                axis_value: v,
                outcomes,
            })
        })
        .collect()
}

fn moved_placement(base: &Placement, axis: SweepAxis, value: f64) -> Result<Placement> {
    let p = match axis {
        SweepAxis::RxDistance => Placement { d2: value, ..*base },
        SweepAxis::TxDistance => Placement { d1: value, ..*base },
        SweepAxis::ThetaR => base.with_rx_direction(value.to_radians(), base.phi_r),
        SweepAxis::Threshold => *base,
    };
    if !(p.d1 > 0.0 && p.d2 > 0.0) {
        return Err(Error::config("start", "distances must be positive"));
    }
    Ok(p)
}

/// Shifts designed once for an Rx elevation of `design_target` (radians),
/// then evaluated with the Rx moved over `theta_range` (degrees; negative
/// values are on the opposite azimuth).
pub fn angle_scan(
    scenario: &Scenario,
    theta_range: GridRange,
    design_target: f64,
    methods: &[Method],
) -> Result<Vec<SweepRow>> {
    if design_target.is_nan() || design_target.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::domain("design target must lie in (-90°, 90°)"));
    }
    if methods.is_empty() {
        return Err(Error::config("methods", "at least one method is required"));
    }
    let base = scenario.placement;
    let design_link = scenario
        .with_placement(base.with_rx_direction(design_target, base.phi_r))
        .link();
    let designs = designed_shifts(&design_link, methods)?;
    let points = theta_range.points()?;

    points
        .par_iter()
        .map(|&deg| {
            let p = base.with_rx_direction(deg.to_radians(), base.phi_r);
            let link = Link::new(&scenario.panel, p.tx_point(), p.rx_point(), &scenario.radio);
            let outcomes = methods
                .iter()
                .zip(&designs)
                .map(|(&m, (shifts, threshold))| {
                    let xi = link.xi(shifts)?;
                    Ok(MethodOutcome {
                        method: m,
                        xi,
                        received_power_dbm: link.power_dbm(xi),
                        threshold: *threshold,
                    })
                })
                .collect::<Result<_>>()?;
            Ok(SweepRow {
                axis_value: deg,
                outcomes,
            })
        })
        .collect()
}

type Design = (Array2<f64>, Option<f64>);

fn designed_shifts(link: &Link, methods: &[Method]) -> Result<Vec<Design>> {
    methods
        .iter()
        .map(|&m| {
            Ok(match design(link, m)? {
                None => (link.phases().values().clone(), None),
                Some(r) => (r.shifts.values(), r.threshold),
            })
        })
        .collect()
}

/// Received power over a grid of Rx directions.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMap {
    /// Rx elevations, radians.
    pub theta: Vec<f64>,
    /// Rx azimuths, radians.
    pub phi: Vec<f64>,
    /// `power_dbm[[i, j]]` is the power at `(theta[i], phi[j])`.
    pub power_dbm: Array2<f64>,
    pub threshold: Option<f64>,
}

impl GradientMap {
    /// Grid index of the strongest point; ties go to the first in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut best_p = f64::NEG_INFINITY;
        for ((i, j), &p) in self.power_dbm.indexed_iter() {
            if p > best_p {
                best_p = p;
                best = (i, j);
            }
        }
        best
    }
}

/// Shifts designed for the Rx direction `target = (θ_r, φ_r)` (radians),
/// evaluated at every `(theta, phi)` grid point with the Rx at distance d2.
pub fn gradient_map(
    scenario: &Scenario,
    target: (f64, f64),
    theta_grid: &[f64],
    phi_grid: &[f64],
    method: Method,
) -> Result<GradientMap> {
    if theta_grid.is_empty() || phi_grid.is_empty() {
        return Err(Error::domain("gradient map grids must be non-empty"));
    }
    let base = scenario.placement;
    let design_link = scenario
        .with_placement(base.with_rx_direction(target.0, target.1))
        .link();
    let (shifts, threshold) = designed_shifts(&design_link, &[method])?.remove(0);

    let cells: Vec<(usize, usize)> = (0..theta_grid.len())
        .flat_map(|i| (0..phi_grid.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(i, j)| {
            let p = base.with_rx_direction(theta_grid[i], phi_grid[j]);
            let link = Link::new(&scenario.panel, p.tx_point(), p.rx_point(), &scenario.radio);
            link.xi(&shifts).map(|xi| link.power_dbm(xi))
        })
        .collect::<Result<_>>()?;
    let power_dbm = Array2::from_shape_vec((theta_grid.len(), phi_grid.len()), values)
        .map_err(|e| Error::domain(e.to_string()))?;
    Ok(GradientMap {
        theta: theta_grid.to_vec(),
        phi: phi_grid.to_vec(),
        power_dbm,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeVariable {
    Log10D1,
    Log10D2,
    Log10CosThetaR,
    Log10CosThetaT,
}

impl SlopeVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SlopeVariable::Log10D1 => "log10_d1",
            SlopeVariable::Log10D2 => "log10_d2",
            SlopeVariable::Log10CosThetaR => "log10_cos_theta_r",
            SlopeVariable::Log10CosThetaT => "log10_cos_theta_t",
        }
    }

    fn is_angle(&self) -> bool {
        matches!(
            self,
            SlopeVariable::Log10CosThetaR | SlopeVariable::Log10CosThetaT
        )
    }
}

impl FromStr for SlopeVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "log10_d1" => Ok(SlopeVariable::Log10D1),
            "log10_d2" => Ok(SlopeVariable::Log10D2),
            "log10_cos_theta_r" => Ok(SlopeVariable::Log10CosThetaR),
            "log10_cos_theta_t" => Ok(SlopeVariable::Log10CosThetaT),
            _ => Err(Error::config("variable", format!("unknown variable `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlSample {
    /// Distance (m) or elevation (rad) at which the sample was taken.
    pub axis_value: f64,
    /// `10 log10` of the fitted variable.
    pub x_db: f64,
    pub path_loss_db: f64,
}

/// Least-squares line `PL_dB = slope · x_db + intercept`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFit {
    pub variable: SlopeVariable,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: Vec<PlSample>,
}

impl SlopeFit {
    pub fn residuals(&self) -> Vec<f64> {
        self.samples
            .iter()
            .map(|s| s.path_loss_db - (self.slope * s.x_db + self.intercept))
            .collect()
    }
}

/// Ordinary least squares of `y` on `x`. Returns `(slope, intercept, r²)`.
pub fn ols_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::domain("need at least two paired samples"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx.is_nan() || sxx <= 1e-300 {
        return Err(Error::domain("singular design: all x values are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok((slope, intercept, r2))
}

/// Fits path loss `P_t / P_r` (dB) against `10 log10(variable)`, redesigning
/// the shifts with `method` at every sample. `sample_grid` holds distances in
/// meters for the distance variables and elevations in radians for the
/// cosine variables.
pub fn pl_slope_fit(
    scenario: &Scenario,
    variable: SlopeVariable,
    sample_grid: &[f64],
    method: Method,
) -> Result<SlopeFit> {
    if sample_grid.len() < 3 {
        return Err(Error::domain("slope fit needs at least 3 samples"));
    }
    let base = scenario.placement;
    let samples: Vec<PlSample> = sample_grid
        .par_iter()
        .map(|&v| {
            let (placement, x) = match variable {
                SlopeVariable::Log10D1 => (Placement { d1: v, ..base }, v),
                SlopeVariable::Log10D2 => (Placement { d2: v, ..base }, v),
                SlopeVariable::Log10CosThetaR => (Placement { theta_r: v, ..base }, v.cos()),
                SlopeVariable::Log10CosThetaT => (Placement { theta_t: v, ..base }, v.cos()),
            };
            if x.is_nan() || x <= 0.0 {
                let what = if variable.is_angle() {
                    "cos(theta)"
                } else {
                    "distance"
                };
                return Err(Error::domain(format!(
                    "{what} must be positive at sample {v}"
                )));
            }
            let link = scenario.with_placement(placement).link();
            let out = evaluate(&link, method)?;
            if !out.received_power_dbm.is_finite() {
                return Err(Error::domain(format!("no received power at sample {v}")));
            }
            Ok(PlSample {
                axis_value: v,
                x_db: linear_to_db(x),
                path_loss_db: scenario.radio.tx_power_dbm - out.received_power_dbm,
            })
        })
        .collect::<Result<_>>()?;
    let x: Vec<f64> = samples.iter().map(|s| s.x_db).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.path_loss_db).collect();
    let (slope, intercept, r_squared) = ols_fit(&x, &y)?;
    Ok(SlopeFit {
        variable,
        slope,
        intercept,
        r_squared,
        samples,
    })
}

/// Population standard deviation.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}
