//! Threshold quantization of continuous shifts onto a panel's discrete levels.
//!
//! A threshold `γ` splits the phase circle into `2^q` half-open bins
//! `[γ + (p-1)Ω, γ + pΩ)`; phases in bin `p` get level `ρ_p`. Since the
//! resulting residual phases `φ - Δ` always lie in one arc of width `Ω`, the
//! only thing a threshold decides is where that arc is cut. Moving `γ` past
//! a continuous phase `φ_k` (mod `Ω`) is the only event that changes the
//! partition, so the candidates `γ ∈ {φ_k}` visit every distinct outcome and
//! the best of them is optimal over all `2^{qMN}` assignments.
//!
//! * [`dtpq`] searches those `MN` candidates.
//! * [`eipq`] searches an equally spaced grid inside one interval.
//! * [`fixed_threshold`] evaluates a single constant threshold.
//! * [`exhaustive_search`] enumerates every assignment; it is a test oracle.

use std::f64::consts::TAU;

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::PhaseMatrix;
use crate::error::{Error, Result};
use crate::geometry::{CellGrid, RisPanel};
use crate::scenario::{Link, Scenario};

/// Relative ξ difference under which two candidates count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Largest `q·M·N` the exhaustive oracle accepts.
pub const EXHAUSTIVE_BIT_LIMIT: usize = 20;

/// Below this many cells a search runs on the calling thread.
const PARALLEL_MIN_CELLS: usize = 256;

/// Discrete per-cell shifts, stored as indices into the panel's level set.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftMatrix {
    indices: CellGrid<u16>,
    levels: Vec<f64>,
}

impl ShiftMatrix {
    pub fn from_indices(indices: CellGrid<u16>, panel: &RisPanel) -> Result<Self> {
        if indices.dim() != panel.grid_shape() {
            return Err(Error::domain(format!(
                "shift matrix shape {:?} does not match panel {:?}",
                indices.dim(),
                panel.grid_shape()
            )));
        }
        let count = panel.level_count();
        if let Some(bad) = indices.iter().find(|&&i| i as usize >= count) {
            return Err(Error::domain(format!(
                "level index {bad} out of range for {count} levels"
            )));
        }
        Ok(Self {
            indices,
            levels: panel.levels().to_vec(),
        })
    }

    pub fn level_indices(&self) -> &CellGrid<u16> {
        &self.indices
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Shift values in radians.
    pub fn values(&self) -> CellGrid<f64> {
        self.indices.mapv(|i| self.levels[i as usize])
    }

    pub fn dim(&self) -> (usize, usize) {
        self.indices.dim()
    }
}

/// Level index (0-based) that threshold `gamma` assigns to phase `phi`.
#[inline]
pub fn bin_index(phi: f64, gamma: f64, interval: f64, level_count: usize) -> usize {
    let offset = (phi - gamma).rem_euclid(TAU);
    let p = (offset / interval) as usize;
    // offset can round up to 2π
    p.min(level_count - 1)
}

pub fn quantize_matrix(phases: &PhaseMatrix, gamma: f64, panel: &RisPanel) -> Result<ShiftMatrix> {
    if phases.dim() != panel.grid_shape() {
        return Err(Error::domain("phase matrix does not match panel shape"));
    }
    let omega = panel.interval();
    let count = panel.level_count();
    let indices = phases
        .values()
        .mapv(|phi| bin_index(phi, gamma, omega, count) as u16);
    ShiftMatrix::from_indices(indices, panel)
}

/// Length of the shortest arc of the circle containing every residual
/// `mod(φ - Δ, 2π)`.
pub fn residual_spread(phases: &PhaseMatrix, shifts: &CellGrid<f64>) -> Result<f64> {
    if phases.dim() != shifts.dim() {
        return Err(Error::domain("phase and shift matrices differ in shape"));
    }
    let mut residuals: Vec<f64> = Zip::from(phases.values())
        .and(shifts)
        .map_collect(|&p, &s| (p - s).rem_euclid(TAU))
        .into_iter()
        .map(|r| if r >= TAU { 0.0 } else { r })
        .collect();
    Ok(circular_arc_span(&mut residuals))
}

/// Shortest arc containing all angles in `[0, 2π)`: `2π` minus the largest gap.
pub(crate) fn circular_arc_span(angles: &mut [f64]) -> f64 {
    if angles.len() < 2 {
        return 0.0;
    }
    angles.sort_by(f64::total_cmp);
    let first = angles[0];
    let last = angles[angles.len() - 1];
    let mut largest_gap = first + TAU - last;
    for w in angles.windows(2) {
        largest_gap = largest_gap.max(w[1] - w[0]);
    }
    (TAU - largest_gap).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    /// One candidate per cell, `γ_{n,m} = φ_{n,m}`.
    DtpqMatrix,
    /// `γ_k = (k-1)ε` for `k = 1..=K`.
    EipqGrid,
    Fixed,
}

/// Ordered candidate thresholds for a search.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSet {
    values: Vec<f64>,
    kind: ThresholdKind,
}

impl ThresholdSet {
    pub fn dtpq(phases: &PhaseMatrix) -> Self {
        Self {
            values: phases.iter().collect(),
            kind: ThresholdKind::DtpqMatrix,
        }
    }

    pub fn eipq(bits: u32, epsilon: f64) -> Result<Self> {
        let k = eipq_candidate_count(bits, epsilon)?;
        Ok(Self {
            values: (0..k).map(|i| i as f64 * epsilon).collect(),
            kind: ThresholdKind::EipqGrid,
        })
    }

    pub fn fixed(gamma: f64) -> Result<Self> {
        check_threshold(gamma)?;
        Ok(Self {
            values: vec![gamma],
            kind: ThresholdKind::Fixed,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ThresholdKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `K = floor(2π / (2^q ε))` for `0 < ε < 2π / 2^q`.
pub fn eipq_candidate_count(bits: u32, epsilon: f64) -> Result<usize> {
    let omega = TAU / (1u64 << bits) as f64;
    if !(epsilon > 0.0 && epsilon < omega) {
        return Err(Error::domain(format!(
            "EIPQ step must lie in (0, {:.6}) rad, got {epsilon}",
            omega
        )));
    }
    // absorb rounding when ε divides Ω exactly (e.g. 5° into 180°)
    Ok(((omega / epsilon) * (1.0 + 1e-12)).floor() as usize)
}

fn check_threshold(gamma: f64) -> Result<()> {
    if !(0.0..TAU).contains(&gamma) {
        return Err(Error::domain(format!(
            "threshold must lie in [0, 2π), got {gamma}"
        )));
    }
    Ok(())
}

/// Outcome of a threshold search.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationResult {
    /// Chosen threshold; `None` for the exhaustive oracle, which has none.
    pub threshold: Option<f64>,
    pub shifts: ShiftMatrix,
    pub xi: f64,
    pub received_power_dbm: f64,
    pub candidates_evaluated: usize,
}

/// ξ of the partition induced by `gamma`, from the cached per-cell terms.
fn threshold_xi(link: &Link, level_phasors: &[Complex64], gamma: f64) -> f64 {
    let panel = link.panel();
    let omega = panel.interval();
    let count = panel.level_count();
    let mut sum = Complex64::new(0.0, 0.0);
    for (t, phi) in link.terms().iter().zip(link.phases().iter()) {
        sum += t * level_phasors[bin_index(phi, gamma, omega, count)];
    }
    sum.norm()
}

fn level_phasors(panel: &RisPanel) -> Vec<Complex64> {
    panel
        .levels()
        .iter()
        .map(|&l| Complex64::from_polar(1.0, l))
        .collect()
}

/// Index of the best candidate: largest ξ, near-ties (within
/// [`TIE_TOLERANCE`]) resolved toward the smaller threshold.
fn pick_best(thresholds: &[f64], xis: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..xis.len() {
        let (x, bx) = (xis[i], xis[best]);
        let clearly_better = x > bx * (1.0 + TIE_TOLERANCE);
        let tied_lower = x >= bx * (1.0 - TIE_TOLERANCE) && thresholds[i] < thresholds[best];
        if clearly_better || tied_lower {
            best = i;
        }
    }
    best
}

/// Evaluates every candidate in `set` on `link` and keeps the best.
pub fn search_thresholds(link: &Link, set: &ThresholdSet) -> Result<QuantizationResult> {
    if set.is_empty() {
        return Err(Error::domain("empty threshold set"));
    }
    for &g in set.values() {
        check_threshold(g)?;
    }
    let phasors = level_phasors(link.panel());
    let xis: Vec<f64> = if link.panel().cell_count() >= PARALLEL_MIN_CELLS && set.len() > 1 {
        set.values()
            .par_iter()
            .map(|&g| threshold_xi(link, &phasors, g))
            .collect()
    } else {
        set.values()
            .iter()
            .map(|&g| threshold_xi(link, &phasors, g))
            .collect()
    };
    let best = pick_best(set.values(), &xis);
    let gamma = set.values()[best];
    let shifts = quantize_matrix(link.phases(), gamma, link.panel())?;
    finish(link, Some(gamma), shifts, set.len())
}

fn finish(
    link: &Link,
    threshold: Option<f64>,
    shifts: ShiftMatrix,
    candidates_evaluated: usize,
) -> Result<QuantizationResult> {
    let xi = link.xi(&shifts.values())?;
    Ok(QuantizationResult {
        threshold,
        received_power_dbm: link.power_dbm(xi),
        shifts,
        xi,
        candidates_evaluated,
    })
}

pub fn dtpq_on(link: &Link) -> Result<QuantizationResult> {
    search_thresholds(link, &ThresholdSet::dtpq(link.phases()))
}

pub fn eipq_on(link: &Link, epsilon: f64) -> Result<QuantizationResult> {
    search_thresholds(link, &ThresholdSet::eipq(link.panel().bits(), epsilon)?)
}

pub fn fixed_threshold_on(link: &Link, gamma: f64) -> Result<QuantizationResult> {
    search_thresholds(link, &ThresholdSet::fixed(gamma)?)
}

/// Optimal threshold quantization over the `M·N` candidates `γ = φ_{n,m}`.
pub fn dtpq(scenario: &Scenario) -> Result<QuantizationResult> {
    dtpq_on(&scenario.link())
}

/// Best threshold on the grid `0, ε, 2ε, ...` within one quantization interval.
pub fn eipq(scenario: &Scenario, epsilon: f64) -> Result<QuantizationResult> {
    eipq_on(&scenario.link(), epsilon)
}

/// Quantization with one constant threshold.
pub fn fixed_threshold(scenario: &Scenario, gamma: f64) -> Result<QuantizationResult> {
    fixed_threshold_on(&scenario.link(), gamma)
}

pub fn exhaustive_on(link: &Link) -> Result<QuantizationResult> {
    let panel = link.panel();
    let cells = panel.cell_count();
    let bits = panel.bits() as usize * cells;
    if bits > EXHAUSTIVE_BIT_LIMIT {
        return Err(Error::GuardExceeded {
            bits,
            limit: EXHAUSTIVE_BIT_LIMIT,
        });
    }
    let levels = panel.level_count();
    let phasors = level_phasors(panel);
    let terms = link.terms();
    // cell 0 is the most significant digit, so configurations are visited in
    // lexicographic order of level indices
    let mut digits = vec![0usize; cells];
    let mut best_digits = digits.clone();
    let mut best_xi = f64::NEG_INFINITY;
    let total = 1usize << bits;
    for _ in 0..total {
        let xi = terms
            .iter()
            .zip(&digits)
            .map(|(t, &d)| t * phasors[d])
            .sum::<Complex64>()
            .norm();
        if xi > best_xi * (1.0 + TIE_TOLERANCE) || best_xi == f64::NEG_INFINITY {
            best_xi = xi;
            best_digits.copy_from_slice(&digits);
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < levels {
                break;
            }
            *d = 0;
        }
    }
    let indices = Array2::from_shape_vec(
        panel.grid_shape(),
        best_digits.into_iter().map(|d| d as u16).collect(),
    )
    .map_err(|e| Error::domain(e.to_string()))?;
    let shifts = ShiftMatrix::from_indices(indices, panel)?;
    finish(link, None, shifts, total)
}

/// Enumerates all `2^{qMN}` level assignments. Refuses when `q·M·N` exceeds
/// [`EXHAUSTIVE_BIT_LIMIT`].
pub fn exhaustive_search(scenario: &Scenario) -> Result<QuantizationResult> {
    exhaustive_on(&scenario.link())
}

/// ξ as a function of the threshold, for plotting or periodicity checks.
pub fn xi_at_threshold(link: &Link, gamma: f64) -> f64 {
    threshold_xi(link, &level_phasors(link.panel()), gamma.rem_euclid(TAU))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn panel(bits: u32, first_deg: f64) -> RisPanel {
        RisPanel::with_uniform_levels(1, 2, 0.1, 0.1, bits, first_deg.to_radians(), 1.0).unwrap()
    }

    fn quantize_one(phi: f64, gamma: f64, p: &RisPanel) -> f64 {
        let phases =
            PhaseMatrix::new(Array2::from_shape_vec((2, 1), vec![phi, 0.0]).unwrap()).unwrap();
        quantize_matrix(&phases, gamma, p).unwrap().values()[[0, 0]]
    }

    #[test]
    fn one_bit_binning() {
        let p = panel(1, 0.0);
        assert_eq!(quantize_one(0.1, 0.0, &p), 0.0);
        assert_eq!(quantize_one(3.2, 0.0, &p), PI);
        // cyclic wrap: 0.1 is in [3π/2, 5π/2)
        assert_eq!(quantize_one(0.1, 1.5 * PI, &p), 0.0);
        // bin edges are half-open; a phase at the threshold falls in bin 1
        assert_eq!(quantize_one(1.0, 1.0, &p), 0.0);
    }

    #[test]
    fn two_bit_binning() {
        let p = panel(2, 0.0);
        let v = quantize_one(135f64.to_radians(), 45f64.to_radians(), &p);
        assert!((v - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn residual_spread_examples() {
        let phases =
            PhaseMatrix::new(Array2::from_shape_vec((3, 1), vec![0.3, 2.0, 5.9]).unwrap()).unwrap();
        assert_eq!(residual_spread(&phases, phases.values()).unwrap(), 0.0);
        let omega = PI / 2.0;
        let shifts = Array2::from_shape_vec((3, 1), vec![0.3, 2.0 - omega / 2.0, 5.9]).unwrap();
        let s = residual_spread(&phases, &shifts).unwrap();
        assert!((s - omega / 2.0).abs() < 1e-12);
        let bad = Array2::zeros((1, 3));
        assert!(residual_spread(&phases, &bad).is_err());
    }

    #[test]
    fn arc_span_crosses_zero() {
        let mut a = vec![6.2, 0.1, 0.05];
        let s = circular_arc_span(&mut a);
        assert!((s - (0.1 + TAU - 6.2)).abs() < 1e-12);
    }

    #[test]
    fn eipq_counts() {
        assert_eq!(eipq_candidate_count(1, 5f64.to_radians()).unwrap(), 36);
        assert_eq!(eipq_candidate_count(2, 45f64.to_radians()).unwrap(), 2);
        assert_eq!(eipq_candidate_count(1, 7f64.to_radians()).unwrap(), 25);
        let just_below = f64::from_bits(PI.to_bits() - 1);
        assert_eq!(eipq_candidate_count(1, just_below).unwrap(), 1);
        assert!(eipq_candidate_count(1, PI).is_err());
        assert!(eipq_candidate_count(1, 0.0).is_err());
        assert!(eipq_candidate_count(2, -1.0).is_err());
        let set = ThresholdSet::eipq(1, 5f64.to_radians()).unwrap();
        assert_eq!(set.values()[0], 0.0);
        assert!((set.values()[35] - 175f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn fixed_threshold_range_checked() {
        assert!(ThresholdSet::fixed(TAU).is_err());
        assert!(ThresholdSet::fixed(-0.1).is_err());
        assert_eq!(ThresholdSet::fixed(1.0).unwrap().len(), 1);
    }

    #[test]
    fn tie_break_prefers_smaller_threshold() {
        let th = [3.0, 1.0, 2.0, 0.5];
        let xi = [1.0, 1.0 + 1e-14, 0.9, 1.0 - 1e-13];
        assert_eq!(pick_best(&th, &xi), 3);
        let xi = [1.0, 1.1, 0.9, 1.0];
        assert_eq!(pick_best(&th, &xi), 1);
    }

    #[test]
    fn shift_matrix_rejects_bad_indices() {
        let p = panel(1, 0.0);
        assert!(ShiftMatrix::from_indices(Array2::from_elem((2, 1), 2u16), &p).is_err());
        assert!(ShiftMatrix::from_indices(Array2::from_elem((1, 2), 0u16), &p).is_err());
        let s = ShiftMatrix::from_indices(Array2::from_shape_vec((2, 1), vec![0, 1]).unwrap(), &p)
            .unwrap();
        assert_eq!(s.values()[[1, 0]], PI);
    }
}
