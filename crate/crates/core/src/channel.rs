//! Field superposition at the receiver and link power.

use std::f64::consts::{PI, TAU};

use ndarray::Zip;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CellGrid, PathGeometry, Placement, RisPanel};
use crate::radiation::{linear_to_db, RadioConfig};

/// Continuous per-cell phase shifts, every entry in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix(CellGrid<f64>);

impl PhaseMatrix {
    pub fn new(values: CellGrid<f64>) -> Result<Self> {
        if values.iter().any(|v| !(0.0..TAU).contains(v)) {
            return Err(Error::domain("phase entries must lie in [0, 2π)"));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &CellGrid<f64> {
        &self.0
    }

    pub fn into_inner(self) -> CellGrid<f64> {
        self.0
    }

    /// Entries in grid order (`n` outer, `m` inner).
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn dim(&self) -> (usize, usize) {
        self.0.dim()
    }
}

/// `x mod 2π` folded into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Ideal shifts `mod(2π (r_t + r_r) / λ, 2π)`.
pub fn continuous_phase_matrix(geom: &PathGeometry, wavelength: f64) -> PhaseMatrix {
    let k = TAU / wavelength;
    PhaseMatrix(
        Zip::from(&geom.r_t)
            .and(&geom.r_r)
            .map_collect(|&rt, &rr| wrap_phase(k * (rt + rr))),
    )
}

/// Magnitude of the complex field sum at the receiver for a given set of
/// per-cell shifts (radians). Accumulates in grid order.
pub fn field_superposition(
    geom: &PathGeometry,
    combined: &CellGrid<f64>,
    shifts: &CellGrid<f64>,
    wavelength: f64,
) -> Result<f64> {
    let shape = geom.r_t.dim();
    if geom.r_r.dim() != shape || combined.dim() != shape || shifts.dim() != shape {
        return Err(Error::domain(format!(
            "matrix dimensions differ: paths {:?}/{:?}, pattern {:?}, shifts {:?}",
            shape,
            geom.r_r.dim(),
            combined.dim(),
            shifts.dim()
        )));
    }
    let k = TAU / wavelength;
    let mut sum = Complex64::new(0.0, 0.0);
    Zip::from(&geom.r_t)
        .and(&geom.r_r)
        .and(combined)
        .and(shifts)
        .for_each(|&rt, &rr, &f, &shift| {
            let amp = f.sqrt() / (rt * rr);
            sum += Complex64::from_polar(amp, -(k * (rt + rr) - shift));
        });
    Ok(sum.norm())
}

/// Upper bound on ξ: the sum of per-cell amplitudes.
pub fn coherent_bound(geom: &PathGeometry, combined: &CellGrid<f64>) -> f64 {
    Zip::from(&geom.r_t)
        .and(&geom.r_r)
        .and(combined)
        .fold(0.0, |acc, &rt, &rr, &f| acc + f.sqrt() / (rt * rr))
}

/// ξ together with the link power it produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldResult {
    pub xi: f64,
    pub received_power_dbm: f64,
    pub path_loss_db: f64,
}

/// `P_r = P_t G_t G_r (d_x d_y)^2 A^2 ξ^2 / (16π^2)` in dBm. Returns
/// `f64::NEG_INFINITY` when ξ is zero.
pub fn power_from_xi(panel: &RisPanel, radio: &RadioConfig, xi: f64) -> f64 {
    if xi <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let area = panel.dx() * panel.dy();
    let a = panel.reflection();
    let ratio =
        radio.gain_tx() * radio.gain_rx() * area * area * a * a * xi * xi / (16.0 * PI * PI);
    radio.tx_power_dbm + linear_to_db(ratio)
}

pub fn field_result(panel: &RisPanel, radio: &RadioConfig, xi: f64) -> FieldResult {
    let p = power_from_xi(panel, radio, xi);
    FieldResult {
        xi,
        received_power_dbm: p,
        path_loss_db: radio.tx_power_dbm - p,
    }
}

/// Closed-form far-field path loss `P_t / P_r` in dB for perfectly aligned
/// continuous shifts.
pub fn far_field_pl_db(
    panel: &RisPanel,
    placement: &Placement,
    radio: &RadioConfig,
) -> Result<f64> {
    let ct = placement.theta_t.cos();
    let cr = placement.theta_r.cos();
    if !(placement.theta_t.abs() < PI / 2.0 && ct > 0.0) {
        return Err(Error::domain("theta_t must be below 90 degrees"));
    }
    if !(placement.theta_r.abs() < PI / 2.0 && cr > 0.0) {
        return Err(Error::domain("theta_r must be below 90 degrees"));
    }
    let mn = panel.cell_count() as f64;
    let area = mn * panel.dx() * panel.dy();
    let a = panel.reflection();
    let d = placement.d1 * placement.d2;
    let pl = 16.0 * PI * PI * d * d
        / (radio.gain_tx() * radio.gain_rx() * area * area * ct * cr * a * a);
    Ok(linear_to_db(pl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::path_lengths_between;
    use crate::geometry::Point3;
    use ndarray::{array, Array2};

    fn geom_from(rt: Vec<f64>, rr: Vec<f64>) -> PathGeometry {
        let n = rt.len();
        PathGeometry {
            r_t: Array2::from_shape_vec((n, 1), rt).unwrap(),
            r_r: Array2::from_shape_vec((n, 1), rr).unwrap(),
        }
    }

    #[test]
    fn continuous_phase_examples() {
        let lambda = 0.1;
        let g = geom_from(vec![0.1, 0.25], vec![0.15, 0.05]);
        let p = continuous_phase_matrix(&g, lambda);
        assert!((p.values()[[0, 0]] - PI).abs() < 1e-9);
        let v = p.values()[[1, 0]];
        assert!(v < 1e-9 || TAU - v < 1e-9, "{v}");
        assert!(p.iter().all(|v| (0.0..TAU).contains(&v)));
    }

    #[test]
    fn single_cell_field_is_its_amplitude() {
        let g = geom_from(vec![1.0], vec![1.0]);
        let f = Array2::from_elem((1, 1), 1.0);
        for &phi in &[0.0, 1.0, 4.0] {
            let xi = field_superposition(&g, &f, &Array2::from_elem((1, 1), phi), 0.3).unwrap();
            assert!((xi - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn destructive_pair_cancels() {
        let lambda = 1.0;
        // equal paths, shifts π apart
        let g = geom_from(vec![2.0, 2.0], vec![3.0, 3.0]);
        let f = Array2::from_elem((2, 1), 0.7);
        let xi = field_superposition(&g, &f, &array![[0.0], [PI]], lambda).unwrap();
        assert!(xi < 1e-15);
    }

    #[test]
    fn aligned_shifts_reach_coherent_bound() {
        let panel = RisPanel::with_uniform_levels(6, 4, 0.05, 0.05, 1, 0.0, 1.0).unwrap();
        let g = path_lengths_between(
            &panel,
            Point3::new(2.0, 0.3, 4.0),
            Point3::new(-3.0, 1.0, 2.0),
        );
        let f = Array2::from_shape_fn(g.r_t.dim(), |(i, j)| 0.2 + 0.1 * (i + j) as f64);
        let phi = continuous_phase_matrix(&g, 0.1);
        let xi = field_superposition(&g, &f, phi.values(), 0.1).unwrap();
        let bound = coherent_bound(&g, &f);
        assert!(((xi - bound) / bound).abs() < 1e-12);
        let zero = Array2::zeros(g.r_t.dim());
        assert!(field_superposition(&g, &f, &zero, 0.1).unwrap() <= bound);
    }

    #[test]
    fn dimension_mismatch() {
        let g = geom_from(vec![1.0, 1.0], vec![1.0, 1.0]);
        let f = Array2::from_elem((2, 1), 1.0);
        let s = Array2::zeros((1, 2));
        assert!(matches!(
            field_superposition(&g, &f, &s, 1.0),
            Err(Error::Domain(_))
        ));
    }

    fn radio(p: f64) -> RadioConfig {
        RadioConfig::new(0.1153, p, 8.25, 8.25, 1.0).unwrap()
    }

    #[test]
    fn power_scales_with_xi_and_tx_power() {
        let panel = RisPanel::with_uniform_levels(4, 4, 0.05, 0.05, 1, 0.0, 1.0).unwrap();
        let p1 = power_from_xi(&panel, &radio(0.0), 1e-3);
        let p2 = power_from_xi(&panel, &radio(0.0), 2e-3);
        assert!((p2 - p1 - 6.020599913279624).abs() < 1e-9);
        let p3 = power_from_xi(&panel, &radio(10.0), 1e-3);
        assert!((p3 - p1 - 10.0).abs() < 1e-12);
        assert_eq!(power_from_xi(&panel, &radio(0.0), 0.0), f64::NEG_INFINITY);
        let fr = field_result(&panel, &radio(3.0), 1e-3);
        assert!((fr.path_loss_db - (3.0 - fr.received_power_dbm)).abs() < 1e-12);
    }

    #[test]
    fn far_field_pl_scaling() {
        let r = radio(0.0);
        let panel = RisPanel::with_uniform_levels(4, 4, 0.05, 0.05, 1, 0.0, 1.0).unwrap();
        let big = RisPanel::with_uniform_levels(8, 4, 0.05, 0.05, 1, 0.0, 1.0).unwrap();
        let pl = |d1: f64, t: f64, p: &RisPanel| {
            let place = Placement::new(d1, t, 0.0, 20.0, t, PI).unwrap();
            far_field_pl_db(p, &place, &r).unwrap()
        };
        let db2 = 6.020599913279624;
        assert!((pl(20.0, 0.2, &panel) - pl(10.0, 0.2, &panel) - db2).abs() < 1e-9);
        assert!((pl(10.0, 0.2, &panel) - pl(10.0, 0.2, &big) - db2).abs() < 1e-9);
        assert!((pl(10.0, PI / 3.0, &panel) - pl(10.0, 0.0, &panel) - db2).abs() < 1e-9);
        assert!((pl(100.0, 0.2, &panel) - pl(10.0, 0.2, &panel) - 20.0).abs() < 1e-9);
    }

    #[test]
    fn far_field_pl_rejects_grazing() {
        let r = radio(0.0);
        let panel = RisPanel::with_uniform_levels(4, 4, 0.05, 0.05, 1, 0.0, 1.0).unwrap();
        let mut place = Placement::new(10.0, 0.2, 0.0, 20.0, 0.2, PI).unwrap();
        place.theta_r = PI / 2.0;
        assert!(matches!(
            far_field_pl_db(&panel, &place, &r),
            Err(Error::Domain(_))
        ));
    }
}
