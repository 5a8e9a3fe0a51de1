//! DTPQ against brute force on small random panels.

use std::f64::consts::TAU;

use ris_quant::quantization::{dtpq, exhaustive_search};
use ris_quant::{Placement, RadioConfig, RisPanel, Scenario};

fn main() -> ris_quant::Result<()> {
    let wavelength = 0.1;
    // deterministic spread of geometries
    for k in 0..8 {
        let t = k as f64;
        let bits = 1 + k % 2;
        let panel = RisPanel::with_uniform_levels(2, 3, 0.04, 0.06, bits as u32, 0.3 * t, 1.0)?;
        let placement = Placement::new(
            0.2 + 0.1 * t,
            0.1 * t,
            (0.9 * t) % TAU,
            0.5 + 0.07 * t,
            0.15 * t,
            (2.0 + t) % TAU,
        )?;
        let radio = RadioConfig::new(wavelength, 0.0, 6.0, 6.0, 1.0)?;
        let s = Scenario::new(panel, placement, radio)?;
        let d = dtpq(&s)?;
        let e = exhaustive_search(&s)?;
        println!(
            "q={bits}: dtpq xi {:.9e} ({} candidates), exhaustive xi {:.9e} ({} configurations)",
            d.xi, d.candidates_evaluated, e.xi, e.candidates_evaluated
        );
    }
    Ok(())
}
