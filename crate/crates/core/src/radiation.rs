//! Cosine-power radiation patterns.

use std::f64::consts::FRAC_PI_2;

use ndarray::Zip;

use crate::error::{Error, Result};
use crate::geometry::{CellGrid, LocalAngles};

/// Smallest gain a cosine-power pattern can have (α = 0), in dBi.
pub const MIN_GAIN_DBI: f64 = 3.010_299_956_639_812;

/// Exponent α of a `(cos θ)^α` power pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternExponent(f64);

impl PatternExponent {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::domain(format!(
                "pattern exponent must be >= 0, got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    /// Exponent whose directivity equals `gain_dbi`.
    pub fn from_gain_dbi(gain_dbi: f64) -> Result<Self> {
        gain_dbi_to_alpha(gain_dbi).map(Self)
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    /// Linear gain `2(α + 1)`.
    pub fn gain(self) -> f64 {
        alpha_to_gain(self.0)
    }
}

/// `(cos θ)^α` on `[0, π/2)`, zero elsewhere. `phi` is accepted for interface
/// symmetry; the pattern is azimuth independent.
pub fn cosine_pattern(theta: f64, _phi: f64, alpha: f64) -> f64 {
    if (0.0..FRAC_PI_2).contains(&theta) {
        theta.cos().powf(alpha)
    } else {
        0.0
    }
}

/// Linear gain `G = 2(α + 1)`.
pub fn alpha_to_gain(alpha: f64) -> f64 {
    2.0 * (alpha + 1.0)
}

/// Inverse of [`alpha_to_gain`] on a dBi gain: `α = 10^(G/10) / 2 - 1`.
pub fn gain_dbi_to_alpha(gain_dbi: f64) -> Result<f64> {
    // tolerate rounding of the floor itself
    if !gain_dbi.is_finite() || gain_dbi < MIN_GAIN_DBI - 1e-9 {
        return Err(Error::domain(format!(
            "gain {gain_dbi} dBi is below the {MIN_GAIN_DBI:.4} dBi floor of a cosine pattern"
        )));
    }
    Ok((10f64.powf(gain_dbi / 10.0) / 2.0 - 1.0).max(0.0))
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Pattern exponents of the four factors in the combined pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternAlphas {
    pub tx: f64,
    pub cell: f64,
    pub rx: f64,
}

/// Per-cell product of Tx, cell emission, cell reception and Rx patterns.
pub fn combined_pattern_matrix(
    angles: &LocalAngles,
    alphas: PatternAlphas,
) -> Result<CellGrid<f64>> {
    let shape = angles.theta_tx.dim();
    let all = [
        &angles.theta_t_cell,
        &angles.phi_t_cell,
        &angles.theta_r_cell,
        &angles.phi_r_cell,
        &angles.theta_tx,
        &angles.phi_tx,
        &angles.theta_rx,
        &angles.phi_rx,
    ];
    if all.iter().any(|g| g.dim() != shape) {
        return Err(Error::domain("angle matrices have mismatched dimensions"));
    }
    let mut out = CellGrid::zeros(shape);
    Zip::from(&mut out)
        .and(&angles.theta_tx)
        .and(&angles.theta_t_cell)
        .and(&angles.theta_r_cell)
        .and(&angles.theta_rx)
        .for_each(|o, &ttx, &tt, &tr, &trx| {
            *o = cosine_pattern(ttx, 0.0, alphas.tx)
                * cosine_pattern(tt, 0.0, alphas.cell)
                * cosine_pattern(tr, 0.0, alphas.cell)
                * cosine_pattern(trx, 0.0, alphas.rx);
        });
    Ok(out)
}

/// Link-level radio parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    pub wavelength: f64,
    pub tx_power_dbm: f64,
    pub gain_tx_dbi: f64,
    pub gain_rx_dbi: f64,
    pub cell_alpha: f64,
}

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

impl RadioConfig {
    pub fn new(
        wavelength: f64,
        tx_power_dbm: f64,
        gain_tx_dbi: f64,
        gain_rx_dbi: f64,
        cell_alpha: f64,
    ) -> Result<Self> {
        let cfg = Self {
            wavelength,
            tx_power_dbm,
            gain_tx_dbi,
            gain_rx_dbi,
            cell_alpha,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_frequency_hz(
        freq_hz: f64,
        tx_power_dbm: f64,
        gain_tx_dbi: f64,
        gain_rx_dbi: f64,
        cell_alpha: f64,
    ) -> Result<Self> {
        if !(freq_hz > 0.0 && freq_hz.is_finite()) {
            return Err(Error::config("radio.freq_ghz", "must be positive"));
        }
        Self::new(
            SPEED_OF_LIGHT / freq_hz,
            tx_power_dbm,
            gain_tx_dbi,
            gain_rx_dbi,
            cell_alpha,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::config(
                "radio.freq_ghz",
                "wavelength must be positive",
            ));
        }
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::config("radio.tx_power_dbm", "must be finite"));
        }
        if gain_dbi_to_alpha(self.gain_tx_dbi).is_err() {
            return Err(Error::config(
                "radio.gain_tx_dbi",
                format!("must be at least {MIN_GAIN_DBI:.4} dBi"),
            ));
        }
        if gain_dbi_to_alpha(self.gain_rx_dbi).is_err() {
            return Err(Error::config(
                "radio.gain_rx_dbi",
                format!("must be at least {MIN_GAIN_DBI:.4} dBi"),
            ));
        }
        if !(self.cell_alpha >= 0.0 && self.cell_alpha.is_finite()) {
            return Err(Error::config("radio.cell_alpha", "must be >= 0"));
        }
        Ok(())
    }

    pub fn gain_tx(&self) -> f64 {
        db_to_linear(self.gain_tx_dbi)
    }

    pub fn gain_rx(&self) -> f64 {
        db_to_linear(self.gain_rx_dbi)
    }

    /// Pattern exponents implied by the antenna gains.
    pub fn alphas(&self) -> PatternAlphas {
        PatternAlphas {
            tx: gain_dbi_to_alpha(self.gain_tx_dbi).unwrap_or(0.0),
            cell: self.cell_alpha,
            rx: gain_dbi_to_alpha(self.gain_rx_dbi).unwrap_or(0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;
    use std::f64::consts::PI;

    #[test]
    fn pattern_examples() {
        assert_eq!(cosine_pattern(0.0, 1.3, 2.34), 1.0);
        assert!((cosine_pattern(PI / 3.0, 0.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(cosine_pattern(1.6, 0.0, 1.0), 0.0);
        assert_eq!(cosine_pattern(FRAC_PI_2, 0.0, 1.0), 0.0);
        assert_eq!(cosine_pattern(PI, 0.0, 0.0), 0.0);
    }

    #[test]
    fn pattern_is_non_increasing() {
        for &alpha in &[0.0, 0.5, 1.0, 2.3417, 7.0] {
            let mut prev = f64::INFINITY;
            for k in 0..=1000 {
                let theta = k as f64 * FRAC_PI_2 / 1000.0;
                let v = cosine_pattern(theta, 0.0, alpha);
                assert!(v <= prev && (0.0..=1.0).contains(&v));
                prev = v;
            }
        }
    }

    #[test]
    fn gain_examples() {
        assert_eq!(alpha_to_gain(1.0), 4.0);
        assert!((linear_to_db(alpha_to_gain(1.0)) - 6.0206).abs() < 1e-4);
        assert_eq!(alpha_to_gain(0.0), 2.0);
        // independent evaluation: 10^0.825 = 6.68344...
        let a = gain_dbi_to_alpha(8.25).unwrap();
        assert!((a - 2.3417).abs() < 1e-4, "{a}");
        assert!((linear_to_db(alpha_to_gain(a)) - 8.25).abs() < 1e-12);
    }

    #[test]
    fn gain_below_floor_is_rejected() {
        assert!(gain_dbi_to_alpha(3.0).is_err());
        assert!(gain_dbi_to_alpha(MIN_GAIN_DBI).is_ok());
        assert!(PatternExponent::new(-0.1).is_err());
        assert!(RadioConfig::new(0.1, 0.0, 2.0, 8.0, 1.0).is_err());
    }

    #[test]
    fn gain_round_trip() {
        for &g in &[3.0103, 5.0, 8.25, 12.5, 25.62] {
            let a = gain_dbi_to_alpha(g).unwrap();
            let back = linear_to_db(alpha_to_gain(a));
            assert!(((back - g) / g).abs() < 1e-12);
        }
    }

    /// Directivity from numerically integrating the pattern over the sphere.
    fn quadrature_gain(alpha: f64) -> f64 {
        // composite Simpson over θ in [0, π]; the pattern is azimuth independent
        let steps = 20_000;
        let h = PI / steps as f64;
        let f = |t: f64| cosine_pattern(t, 0.0, alpha) * t.sin();
        let mut s = f(0.0) + f(PI);
        for k in 1..steps {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(k as f64 * h);
        }
        let integral = 2.0 * PI * s * h / 3.0;
        4.0 * PI / integral
    }

    #[test]
    fn gain_matches_sphere_integral() {
        for &alpha in &[0.0, 1.0, 2.3417] {
            let g = quadrature_gain(alpha);
            let want = alpha_to_gain(alpha);
            assert!(
                ((g - want) / want).abs() < 1e-3,
                "alpha={alpha}: {g} vs {want}"
            );
        }
    }

    fn angles(vals: [f64; 4]) -> LocalAngles {
        let g = |v| Array2::from_elem((1, 1), v);
        LocalAngles {
            theta_t_cell: g(vals[0]),
            phi_t_cell: g(0.0),
            theta_r_cell: g(vals[1]),
            phi_r_cell: g(0.0),
            theta_tx: g(vals[2]),
            phi_tx: g(0.0),
            theta_rx: g(vals[3]),
            phi_rx: g(0.0),
        }
    }

    #[test]
    fn combined_pattern_examples() {
        let alphas = PatternAlphas {
            tx: 2.3417,
            cell: 1.0,
            rx: 2.3417,
        };
        let f = combined_pattern_matrix(&angles([0.0; 4]), alphas).unwrap();
        assert_eq!(f[[0, 0]], 1.0);
        let f = combined_pattern_matrix(&angles([0.1, 0.2, FRAC_PI_2, 0.0]), alphas).unwrap();
        assert_eq!(f[[0, 0]], 0.0);
        let q = PI / 4.0;
        let f = combined_pattern_matrix(&angles([q, q, 0.0, 0.0]), alphas).unwrap();
        assert!((f[[0, 0]] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn combined_pattern_dimension_mismatch() {
        let mut a = angles([0.0; 4]);
        a.theta_rx = Array2::zeros((2, 1));
        let alphas = PatternAlphas {
            tx: 1.0,
            cell: 1.0,
            rx: 1.0,
        };
        assert!(matches!(
            combined_pattern_matrix(&a, alphas),
            Err(Error::Domain(_))
        ));
    }
}
