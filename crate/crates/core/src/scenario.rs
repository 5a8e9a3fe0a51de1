//! Complete link description and its precomputed per-cell response.

use ndarray::Zip;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::channel::{
    continuous_phase_matrix, field_result, field_superposition, power_from_xi, FieldResult,
    PhaseMatrix,
};
use crate::error::Result;
use crate::geometry::{
    local_angles_between, path_lengths_between, CellGrid, PathGeometry, Placement, Point3, RisPanel,
};
use crate::radiation::{combined_pattern_matrix, RadioConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub panel: RisPanel,
    pub placement: Placement,
    pub radio: RadioConfig,
}

impl Scenario {
    pub fn new(panel: RisPanel, placement: Placement, radio: RadioConfig) -> Result<Self> {
        placement.validate()?;
        radio.validate()?;
        Ok(Self {
            panel,
            placement,
            radio,
        })
    }

    pub fn link(&self) -> Link {
        Link::new(
            &self.panel,
            self.placement.tx_point(),
            self.placement.rx_point(),
            &self.radio,
        )
    }

    pub fn with_placement(&self, placement: Placement) -> Self {
        Self {
            placement,
            ..self.clone()
        }
    }

    pub fn with_panel(&self, panel: RisPanel) -> Self {
        Self {
            panel,
            ..self.clone()
        }
    }

    pub fn wavelength(&self) -> f64 {
        self.radio.wavelength
    }
}

/// Everything about a fixed Tx/panel/Rx arrangement that does not depend on
/// the chosen phase shifts.
#[derive(Debug, Clone)]
pub struct Link {
    panel: RisPanel,
    radio: RadioConfig,
    geometry: PathGeometry,
    pattern: CellGrid<f64>,
    phases: PhaseMatrix,
    /// `sqrt(F) / (r_t r_r) * exp(-j 2π (r_t + r_r) / λ)` in grid order.
    terms: Vec<Complex64>,
}

impl Link {
    /// Link between arbitrary Tx and Rx positions. Antennas are pointed at
    /// the panel center.
    pub fn new(panel: &RisPanel, tx: Point3, rx: Point3, radio: &RadioConfig) -> Self {
        let geometry = path_lengths_between(panel, tx, rx);
        let angles = local_angles_between(panel, tx, rx);
        // shapes come from the same panel, so this cannot mismatch
        let pattern = combined_pattern_matrix(&angles, radio.alphas())
            .expect("angle grids share the panel shape");
        let phases = continuous_phase_matrix(&geometry, radio.wavelength);
        let k = TAU / radio.wavelength;
        let terms = Zip::from(&geometry.r_t)
            .and(&geometry.r_r)
            .and(&pattern)
            .map_collect(|&rt, &rr, &f| Complex64::from_polar(f.sqrt() / (rt * rr), -k * (rt + rr)))
            .into_iter()
            .collect();
        Self {
            panel: panel.clone(),
            radio: *radio,
            geometry,
            pattern,
            phases,
            terms,
        }
    }

    pub fn panel(&self) -> &RisPanel {
        &self.panel
    }

    pub fn radio(&self) -> &RadioConfig {
        &self.radio
    }

    pub fn geometry(&self) -> &PathGeometry {
        &self.geometry
    }

    pub fn pattern(&self) -> &CellGrid<f64> {
        &self.pattern
    }

    /// Ideal continuous shifts for this link.
    pub fn phases(&self) -> &PhaseMatrix {
        &self.phases
    }

    pub(crate) fn terms(&self) -> &[Complex64] {
        &self.terms
    }

    /// ξ for arbitrary per-cell shifts (radians).
    pub fn xi(&self, shifts: &CellGrid<f64>) -> Result<f64> {
        field_superposition(&self.geometry, &self.pattern, shifts, self.radio.wavelength)
    }

    /// ξ with the ideal continuous shifts applied.
    pub fn continuous_xi(&self) -> f64 {
        self.xi(self.phases.values())
            .expect("phase matrix shares the panel shape")
    }

    pub fn power_dbm(&self, xi: f64) -> f64 {
        power_from_xi(&self.panel, &self.radio, xi)
    }

    pub fn field_result(&self, xi: f64) -> FieldResult {
        field_result(&self.panel, &self.radio, xi)
    }
}

/// Received power in dBm for the scenario with the given shifts applied.
pub fn received_power_dbm(scenario: &Scenario, shifts: &CellGrid<f64>) -> Result<f64> {
    let link = scenario.link();
    let xi = link.xi(shifts)?;
    Ok(link.power_dbm(xi))
}

/// Reference setups with the parameters of two commercial-band surfaces:
/// a 1-bit 32x16 panel at 2.6 GHz and a 2-bit 50x25 panel at 4.9 GHz. Cells
/// are half a wavelength square, both antennas have 8.25 dBi gain, Tx sits at
/// 10 m / 45° / 0° and Rx at 45° / 180°.
pub mod presets {
    use super::*;

    pub const RIS1_FREQ_HZ: f64 = 2.6e9;
    pub const RIS2_FREQ_HZ: f64 = 4.9e9;

    fn radio(freq_hz: f64) -> RadioConfig {
        RadioConfig::from_frequency_hz(freq_hz, 0.0, 8.25, 8.25, 1.0).expect("valid preset")
    }

    fn placement(d2: f64) -> Placement {
        Placement::new(10.0, PI / 4.0, 0.0, d2, PI / 4.0, PI).expect("valid preset")
    }

    /// 32 x 16 cells, levels {55°, 235°}, Rx at `d2` meters.
    pub fn ris1(d2: f64) -> Scenario {
        let r = radio(RIS1_FREQ_HZ);
        let half = r.wavelength / 2.0;
        let panel = RisPanel::new(
            32,
            16,
            half,
            half,
            1,
            vec![55f64.to_radians(), 235f64.to_radians()],
            1.0,
        )
        .expect("valid preset");
        Scenario::new(panel, placement(d2), r).expect("valid preset")
    }

    /// 50 x 25 cells, levels {0°, 90°, 180°, 270°}, Rx at `d2` meters.
    pub fn ris2(d2: f64) -> Scenario {
        let r = radio(RIS2_FREQ_HZ);
        let half = r.wavelength / 2.0;
        let panel =
            RisPanel::with_uniform_levels(50, 25, half, half, 2, 0.0, 1.0).expect("valid preset");
        Scenario::new(panel, placement(d2), r).expect("valid preset")
    }
}
