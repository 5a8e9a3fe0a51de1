//! Panel layout and Tx/RIS/Rx geometry.
//!
//! The surface lies in the `z = 0` plane with its center at the origin. Cell
//! `(n, m)` (1-based, `n` along x, `m` along y) sits at
//! `((N + 1 - 2n) d_x / 2, (M + 1 - 2m) d_y / 2, 0)`, so cell `(1, 1)` is the
//! `(+x, +y)` corner. Per-cell matrices are `ndarray` arrays of shape
//! `(N, M)` indexed `[n - 1, m - 1]`; iteration order is therefore `n` outer,
//! `m` inner.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Mul, Sub};

use ndarray::Array2;

use crate::error::{Error, Result};

/// Per-cell matrix, shape `(N, M)`.
pub type CellGrid<T> = Array2<T>;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction. The zero vector is returned as is.
    pub fn normalized(self) -> Point3 {
        let n = self.norm();
        if n > 0.0 {
            self * (1.0 / n)
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// 1-based cell index: `n` counts along x (1..=N), `m` along y (1..=M).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub n: usize,
    pub m: usize,
}

impl CellIndex {
    pub fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }
}

/// Geometry and phase capability of a reflecting surface.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPanel {
    rows_m: usize,
    cols_n: usize,
    dx: f64,
    dy: f64,
    bits: u32,
    levels: Vec<f64>,
    reflection: f64,
}

/// Largest supported phase resolution.
pub const MAX_BITS: u32 = 16;

const LEVEL_SPACING_TOL: f64 = 1e-9;

impl RisPanel {
    /// Builds a panel with an explicit level set (radians). The levels must be
    /// `2^bits` entries spaced by exactly `2π / 2^bits` (mod 2π).
    pub fn new(
        rows_m: usize,
        cols_n: usize,
        dx: f64,
        dy: f64,
        bits: u32,
        levels: Vec<f64>,
        reflection: f64,
    ) -> Result<Self> {
        if rows_m == 0 {
            return Err(Error::config("panel.rows", "must be a positive integer"));
        }
        if cols_n == 0 {
            return Err(Error::config("panel.cols", "must be a positive integer"));
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::config("panel.cell_dx_m", "must be positive"));
        }
        if !(dy > 0.0 && dy.is_finite()) {
            return Err(Error::config("panel.cell_dy_m", "must be positive"));
        }
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::config(
                "panel.bits",
                format!("must be in 1..={MAX_BITS}"),
            ));
        }
        if !(reflection > 0.0 && reflection <= 1.0) {
            return Err(Error::config("panel.reflection", "must lie in (0, 1]"));
        }
        let count = 1usize << bits;
        if levels.len() != count {
            return Err(Error::config(
                "panel.levels_deg",
                format!(
                    "expected {count} levels for {bits} bit(s), got {}",
                    levels.len()
                ),
            ));
        }
        if levels.iter().any(|l| !l.is_finite()) {
            return Err(Error::config("panel.levels_deg", "levels must be finite"));
        }
        let omega = TAU / count as f64;
        for (p, pair) in levels.windows(2).enumerate() {
            let step = (pair[1] - pair[0]).rem_euclid(TAU);
            if (step - omega).abs() > LEVEL_SPACING_TOL {
                return Err(Error::config(
                    "panel.levels_deg",
                    format!(
                        "levels {} and {} are {:.6} deg apart; uniform spacing of {:.6} deg required",
                        p + 1,
                        p + 2,
                        step.to_degrees(),
                        omega.to_degrees()
                    ),
                ));
            }
        }
        Ok(Self {
            rows_m,
            cols_n,
            dx,
            dy,
            bits,
            levels,
            reflection,
        })
    }

    /// Uniform level set `first, first + Ω, ...`.
    pub fn with_uniform_levels(
        rows_m: usize,
        cols_n: usize,
        dx: f64,
        dy: f64,
        bits: u32,
        first_level: f64,
        reflection: f64,
    ) -> Result<Self> {
        if bits == 0 || bits > MAX_BITS {
            return Err(Error::config(
                "panel.bits",
                format!("must be in 1..={MAX_BITS}"),
            ));
        }
        let count = 1usize << bits;
        let omega = TAU / count as f64;
        let levels = (0..count)
            .map(|p| (first_level + p as f64 * omega).rem_euclid(TAU))
            .collect();
        Self::new(rows_m, cols_n, dx, dy, bits, levels, reflection)
    }

    /// Same panel with every level rotated by `delta` radians.
    pub fn with_level_offset(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for l in &mut out.levels {
            *l = (*l + delta).rem_euclid(TAU);
        }
        out
    }

    /// Same panel at a different resolution, levels starting at `first_level`.
    pub fn with_bits(&self, bits: u32, first_level: f64) -> Result<Self> {
        Self::with_uniform_levels(
            self.rows_m,
            self.cols_n,
            self.dx,
            self.dy,
            bits,
            first_level,
            self.reflection,
        )
    }

    /// Number of cells along y (M).
    pub fn rows(&self) -> usize {
        self.rows_m
    }

    /// Number of cells along x (N).
    pub fn cols(&self) -> usize {
        self.cols_n
    }

    pub fn cell_count(&self) -> usize {
        self.rows_m * self.cols_n
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn reflection(&self) -> f64 {
        self.reflection
    }

    /// Quantization interval Ω = 2π / 2^q.
    pub fn interval(&self) -> f64 {
        TAU / self.level_count() as f64
    }

    /// Shape of per-cell matrices, `(N, M)`.
    pub fn grid_shape(&self) -> (usize, usize) {
        (self.cols_n, self.rows_m)
    }

    /// Radius of the circle circumscribing the cell centers.
    pub fn circumscribed_radius(&self) -> f64 {
        let hx = self.dx * (self.cols_n as f64 - 1.0) / 2.0;
        let hy = self.dy * (self.rows_m as f64 - 1.0) / 2.0;
        hx.hypot(hy)
    }

    /// Largest physical extent (diagonal of the full panel).
    pub fn aperture(&self) -> f64 {
        (self.dx * self.cols_n as f64).hypot(self.dy * self.rows_m as f64)
    }

    pub(crate) fn check_index(&self, idx: CellIndex) -> Result<()> {
        if idx.n == 0 || idx.n > self.cols_n || idx.m == 0 || idx.m > self.rows_m {
            return Err(Error::domain(format!(
                "cell index ({}, {}) outside 1..={} x 1..={}",
                idx.n, idx.m, self.cols_n, self.rows_m
            )));
        }
        Ok(())
    }

    /// Center of every cell, in grid order.
    pub fn cell_centers(&self) -> CellGrid<Point3> {
        Array2::from_shape_fn(self.grid_shape(), |(i, j)| {
            self.center_unchecked(i + 1, j + 1)
        })
    }

    fn center_unchecked(&self, n: usize, m: usize) -> Point3 {
        let big_n = self.cols_n as f64;
        let big_m = self.rows_m as f64;
        Point3::new(
            (big_n + 1.0 - 2.0 * n as f64) * self.dx / 2.0,
            (big_m + 1.0 - 2.0 * m as f64) * self.dy / 2.0,
            0.0,
        )
    }
}

/// Center of cell `(n, m)`.
pub fn cell_center(n: usize, m: usize, panel: &RisPanel) -> Result<Point3> {
    panel.check_index(CellIndex::new(n, m))?;
    Ok(panel.center_unchecked(n, m))
}

/// `(d sinθ cosφ, d sinθ sinφ, d cosθ)`.
pub fn spherical_to_cartesian(d: f64, theta: f64, phi: f64) -> Point3 {
    Point3::new(
        d * theta.sin() * phi.cos(),
        d * theta.sin() * phi.sin(),
        d * theta.cos(),
    )
}

/// Tx and Rx positions relative to the panel center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub d1: f64,
    pub theta_t: f64,
    pub phi_t: f64,
    pub d2: f64,
    pub theta_r: f64,
    pub phi_r: f64,
}

impl Placement {
    pub fn new(
        d1: f64,
        theta_t: f64,
        phi_t: f64,
        d2: f64,
        theta_r: f64,
        phi_r: f64,
    ) -> Result<Self> {
        let p = Self {
            d1,
            theta_t,
            phi_t,
            d2,
            theta_r,
            phi_r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d1 > 0.0 && self.d1.is_finite()) {
            return Err(Error::config("placement.d1_m", "must be positive"));
        }
        if !(self.d2 > 0.0 && self.d2.is_finite()) {
            return Err(Error::config("placement.d2_m", "must be positive"));
        }
        if !(0.0..FRAC_PI_2).contains(&self.theta_t) {
            return Err(Error::config(
                "placement.theta_t_deg",
                "must lie in [0, 90)",
            ));
        }
        if !(0.0..FRAC_PI_2).contains(&self.theta_r) {
            return Err(Error::config(
                "placement.theta_r_deg",
                "must lie in [0, 90)",
            ));
        }
        if !(0.0..TAU).contains(&self.phi_t) {
            return Err(Error::config("placement.phi_t_deg", "must lie in [0, 360)"));
        }
        if !(0.0..TAU).contains(&self.phi_r) {
            return Err(Error::config("placement.phi_r_deg", "must lie in [0, 360)"));
        }
        Ok(())
    }

    pub fn tx_point(&self) -> Point3 {
        spherical_to_cartesian(self.d1, self.theta_t, self.phi_t)
    }

    pub fn rx_point(&self) -> Point3 {
        spherical_to_cartesian(self.d2, self.theta_r, self.phi_r)
    }

    /// Same placement with the receiver moved. A negative elevation is folded
    /// onto the opposite azimuth, so `(-θ, φ)` becomes `(θ, φ + π)`. The result
    /// is not validated; elevations at or past 90° are allowed here.
    pub fn with_rx_direction(&self, theta_r: f64, phi_r: f64) -> Self {
        let (theta, phi) = fold_direction(theta_r, phi_r);
        Self {
            theta_r: theta,
            phi_r: phi,
            ..*self
        }
    }

    /// Tx and Rx swapped.
    pub fn reciprocal(&self) -> Self {
        Self {
            d1: self.d2,
            theta_t: self.theta_r,
            phi_t: self.phi_r,
            d2: self.d1,
            theta_r: self.theta_t,
            phi_r: self.phi_t,
        }
    }
}

fn fold_direction(theta: f64, phi: f64) -> (f64, f64) {
    if theta < 0.0 {
        (-theta, (phi + PI).rem_euclid(TAU))
    } else {
        (theta, phi.rem_euclid(TAU))
    }
}

/// Tx-to-cell and cell-to-Rx distances.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGeometry {
    pub r_t: CellGrid<f64>,
    pub r_r: CellGrid<f64>,
}

impl PathGeometry {
    /// Total wave path `r_t + r_r` per cell.
    pub fn total_path(&self) -> CellGrid<f64> {
        &self.r_t + &self.r_r
    }
}

pub fn path_length_matrices(panel: &RisPanel, placement: &Placement) -> PathGeometry {
    path_lengths_between(panel, placement.tx_point(), placement.rx_point())
}

/// Path lengths for arbitrary endpoint positions.
pub fn path_lengths_between(panel: &RisPanel, tx: Point3, rx: Point3) -> PathGeometry {
    let centers = panel.cell_centers();
    PathGeometry {
        r_t: centers.mapv(|c| tx.distance(c)),
        r_r: centers.mapv(|c| rx.distance(c)),
    }
}

/// Per-cell incidence/departure angles at the surface and off-boresight
/// angles at each antenna. Elevations lie in `[0, π]`, azimuths in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalAngles {
    pub theta_t_cell: CellGrid<f64>,
    pub phi_t_cell: CellGrid<f64>,
    pub theta_r_cell: CellGrid<f64>,
    pub phi_r_cell: CellGrid<f64>,
    pub theta_tx: CellGrid<f64>,
    pub phi_tx: CellGrid<f64>,
    pub theta_rx: CellGrid<f64>,
    pub phi_rx: CellGrid<f64>,
}

pub fn local_angle_matrices(panel: &RisPanel, placement: &Placement) -> LocalAngles {
    local_angles_between(panel, placement.tx_point(), placement.rx_point())
}

/// Local angles for arbitrary endpoint positions. Both antennas are assumed
/// to point at the panel center.
pub fn local_angles_between(panel: &RisPanel, tx: Point3, rx: Point3) -> LocalAngles {
    let centers = panel.cell_centers();
    let shape = panel.grid_shape();
    let mut out = LocalAngles {
        theta_t_cell: Array2::zeros(shape),
        phi_t_cell: Array2::zeros(shape),
        theta_r_cell: Array2::zeros(shape),
        phi_r_cell: Array2::zeros(shape),
        theta_tx: Array2::zeros(shape),
        phi_tx: Array2::zeros(shape),
        theta_rx: Array2::zeros(shape),
        phi_rx: Array2::zeros(shape),
    };
    let tx_frame = AntennaFrame::toward(tx, Point3::ORIGIN);
    let rx_frame = AntennaFrame::toward(rx, Point3::ORIGIN);

    for ((i, j), &c) in centers.indexed_iter() {
        let to_tx = (tx - c).normalized();
        let to_rx = (rx - c).normalized();
        out.theta_t_cell[[i, j]] = elevation_from_z(to_tx);
        out.phi_t_cell[[i, j]] = azimuth(to_tx.x, to_tx.y);
        out.theta_r_cell[[i, j]] = elevation_from_z(to_rx);
        out.phi_r_cell[[i, j]] = azimuth(to_rx.x, to_rx.y);

        let (th, ph) = tx_frame.angles_of(c);
        out.theta_tx[[i, j]] = th;
        out.phi_tx[[i, j]] = ph;
        let (th, ph) = rx_frame.angles_of(c);
        out.theta_rx[[i, j]] = th;
        out.phi_rx[[i, j]] = ph;
    }
    out
}

fn elevation_from_z(unit: Point3) -> f64 {
    unit.z.clamp(-1.0, 1.0).acos()
}

fn azimuth(x: f64, y: f64) -> f64 {
    let a = y.atan2(x).rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Orthonormal frame attached to an antenna, boresight along local z.
struct AntennaFrame {
    origin: Point3,
    ex: Point3,
    ey: Point3,
    ez: Point3,
}

impl AntennaFrame {
    fn toward(origin: Point3, target: Point3) -> Self {
        let ez = (target - origin).normalized();
        // local x is the projection of global +z, falling back to global +x
        let up = Point3::new(0.0, 0.0, 1.0);
        let mut ex = up - ez * up.dot(ez);
        if ex.norm() < 1e-12 {
            let gx = Point3::new(1.0, 0.0, 0.0);
            ex = gx - ez * gx.dot(ez);
        }
        let ex = ex.normalized();
        let ey = ez.cross(ex);
        Self { origin, ex, ey, ez }
    }

    fn angles_of(&self, point: Point3) -> (f64, f64) {
        let u = (point - self.origin).normalized();
        let theta = u.dot(self.ez).clamp(-1.0, 1.0).acos();
        let phi = azimuth(u.dot(self.ex), u.dot(self.ey));
        (theta, phi)
    }
}

/// `|(r_t + r_r)[a] - (r_t + r_r)[b]|` in meters.
pub fn wave_path_difference(
    panel: &RisPanel,
    placement: &Placement,
    cell_a: CellIndex,
    cell_b: CellIndex,
) -> Result<f64> {
    panel.check_index(cell_a)?;
    panel.check_index(cell_b)?;
    let tx = placement.tx_point();
    let rx = placement.rx_point();
    let path = |idx: CellIndex| {
        let c = panel.center_unchecked(idx.n, idx.m);
        tx.distance(c) + rx.distance(c)
    };
    Ok((path(cell_a) - path(cell_b)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(m: usize, n: usize, d: f64) -> RisPanel {
        RisPanel::with_uniform_levels(m, n, d, d, 1, 0.0, 1.0).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn corner_cell_matches_closed_form() {
        let lambda = 1.0;
        let p = panel(32, 16, lambda / 2.0);
        let c = cell_center(1, 1, &p).unwrap();
        assert!(close(c.x, 3.75, 1e-12));
        assert!(close(c.y, 7.75, 1e-12));
        assert_eq!(c.z, 0.0);
    }

    #[test]
    fn half_index_cell_is_offset_half_a_cell() {
        for &(m, n, dx, dy) in &[(32, 16, 0.05, 0.05), (4, 6, 0.2, 0.1), (50, 26, 0.03, 0.07)] {
            let p = RisPanel::with_uniform_levels(m, n, dx, dy, 2, 0.0, 1.0).unwrap();
            let c = cell_center(n / 2, m / 2, &p).unwrap();
            assert!(close(c.x, dx / 2.0, 1e-12), "{c:?}");
            assert!(close(c.y, dy / 2.0, 1e-12), "{c:?}");
        }
    }

    #[test]
    fn two_by_two_centers() {
        let p = panel(2, 2, 1.0);
        let mut got: Vec<(f64, f64)> = p.cell_centers().iter().map(|c| (c.x, c.y)).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            got,
            vec![(-0.5, -0.5), (-0.5, 0.5), (0.5, -0.5), (0.5, 0.5)]
        );
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let p = panel(4, 2, 0.1);
        assert!(matches!(cell_center(0, 1, &p), Err(Error::Domain(_))));
        assert!(matches!(cell_center(3, 1, &p), Err(Error::Domain(_))));
        assert!(matches!(cell_center(1, 5, &p), Err(Error::Domain(_))));
        assert!(cell_center(2, 4, &p).is_ok());
    }

    #[test]
    fn centers_sum_to_origin() {
        let p = panel(8, 6, 0.013);
        let sum = p.cell_centers().iter().fold(Point3::ORIGIN, |a, &c| a + c);
        assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn spherical_examples() {
        let p = spherical_to_cartesian(1.0, 0.0, 0.0);
        assert!(close(p.x, 0.0, 1e-15) && close(p.y, 0.0, 1e-15) && close(p.z, 1.0, 1e-15));
        let q = FRAC_PI_2 / 2.0;
        let p = spherical_to_cartesian(10.0, q, 0.0);
        assert!(close(p.x, 7.0711, 1e-4) && close(p.y, 0.0, 1e-12) && close(p.z, 7.0711, 1e-4));
        let p = spherical_to_cartesian(10.0, q, PI);
        assert!(close(p.x, -7.0711, 1e-4) && close(p.y, 0.0, 1e-12) && close(p.z, 7.0711, 1e-4));
    }

    #[test]
    fn single_cell_path_is_distance_to_origin() {
        let p = panel(1, 1, 0.1);
        let pl = Placement::new(10.0, 0.3, 1.0, 4.0, 0.2, 2.0).unwrap();
        let g = path_length_matrices(&p, &pl);
        assert!(close(g.r_t[[0, 0]], 10.0, 1e-12));
        assert!(close(g.r_r[[0, 0]], 4.0, 1e-12));
    }

    #[test]
    fn far_placement_stays_within_circumscribed_radius() {
        let p = panel(32, 16, 0.0577);
        let pl = Placement::new(1e6, 0.7, 0.2, 1e6, 0.4, 3.0).unwrap();
        let g = path_length_matrices(&p, &pl);
        let r = p.circumscribed_radius();
        assert!(g.r_t.iter().all(|&v| (v - 1e6).abs() <= r));
        assert!(g.r_r.iter().all(|&v| (v - 1e6).abs() <= r));
    }

    #[test]
    fn normal_incidence_angles() {
        let p = panel(1, 1, 0.1);
        let pl = Placement::new(10.0, 0.0, 0.0, 5.0, 0.0, 0.0).unwrap();
        let a = local_angle_matrices(&p, &pl);
        assert!(a.theta_t_cell[[0, 0]].abs() < 1e-12);
        assert!(a.theta_tx[[0, 0]].abs() < 1e-12);
        assert!(a.theta_rx[[0, 0]].abs() < 1e-12);
    }

    #[test]
    fn antenna_boresight_hits_center() {
        // odd panel so a cell sits exactly at the origin
        let p = panel(3, 3, 0.1);
        let pl = Placement::new(7.0, 0.6, 0.4, 9.0, 1.1, 4.0).unwrap();
        let a = local_angle_matrices(&p, &pl);
        assert!(a.theta_tx[[1, 1]].abs() < 1e-7);
        assert!(a.theta_rx[[1, 1]].abs() < 1e-7);
        assert!(close(a.theta_t_cell[[1, 1]], 0.6, 1e-12));
        assert!(close(a.phi_t_cell[[1, 1]], 0.4, 1e-12));
        assert!(close(a.theta_r_cell[[1, 1]], 1.1, 1e-12));
    }

    #[test]
    fn angle_ranges() {
        let p = panel(6, 4, 0.3);
        let pl = Placement::new(1.0, 1.2, 5.0, 1.5, 0.1, 0.3).unwrap();
        let a = local_angle_matrices(&p, &pl);
        for grid in [&a.theta_t_cell, &a.theta_r_cell, &a.theta_tx, &a.theta_rx] {
            assert!(grid.iter().all(|&v| (0.0..=PI).contains(&v)));
        }
        for grid in [&a.phi_t_cell, &a.phi_r_cell, &a.phi_tx, &a.phi_rx] {
            assert!(grid.iter().all(|&v| (0.0..TAU).contains(&v)));
        }
    }

    #[test]
    fn path_difference_diagonal_is_zero() {
        let p = panel(4, 4, 0.5);
        let pl = Placement::new(3.0, 0.5, 0.0, 3.0, 0.5, PI).unwrap();
        let c = CellIndex::new(2, 3);
        assert_eq!(wave_path_difference(&p, &pl, c, c).unwrap(), 0.0);
        assert!(wave_path_difference(&p, &pl, c, CellIndex::new(5, 1)).is_err());
    }

    #[test]
    fn placement_validation_names_keys() {
        let err = Placement::new(10.0, 1.6, 0.0, 5.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "placement.theta_t_deg"));
        let err = Placement::new(10.0, 0.1, 0.0, -5.0, 0.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "placement.d2_m"));
    }

    #[test]
    fn non_uniform_levels_rejected() {
        let err = RisPanel::new(2, 2, 0.1, 0.1, 2, vec![0.0, 1.0, 2.0, 3.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "panel.levels_deg"));
        let err = RisPanel::new(2, 2, 0.1, 0.1, 1, vec![0.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
        // wrap-around spacing is accepted
        let l = vec![235f64.to_radians(), 55f64.to_radians()];
        assert!(RisPanel::new(2, 2, 0.1, 0.1, 1, l, 1.0).is_ok());
    }

    #[test]
    fn negative_rx_elevation_folds_azimuth() {
        let pl = Placement::new(10.0, 0.5, 0.0, 10.0, 0.5, PI).unwrap();
        let moved = pl.with_rx_direction(-0.3, PI);
        assert!(close(moved.theta_r, 0.3, 1e-15));
        assert!(close(moved.phi_r, 0.0, 1e-12) || close(moved.phi_r, TAU, 1e-12));
        let a = moved.rx_point();
        let b = spherical_to_cartesian(10.0, -0.3, PI);
        assert!(a.distance(b) < 1e-12);
    }
}
