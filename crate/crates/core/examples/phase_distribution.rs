//! Near- and far-field phase spread across the panel, and the residual
//! spread that remains after DTPQ.

use std::f64::consts::{FRAC_PI_4, PI};

use ris_quant::geometry::{wave_path_difference, CellIndex};
use ris_quant::quantization::{dtpq_on, residual_spread};
use ris_quant::{presets, Placement, RisPanel};

fn main() -> ris_quant::Result<()> {
    let panel = RisPanel::with_uniform_levels(32, 16, 0.5, 0.5, 1, 0.0, 1.0)?;
    let near = Placement::new(10.0, FRAC_PI_4, 0.0, 10.0, FRAC_PI_4, PI)?;
    let l = wave_path_difference(&panel, &near, CellIndex::new(1, 1), CellIndex::new(8, 16))?;
    println!(
        "wave-path difference between corner and center cell at 10 wavelengths: {l:.4} wavelengths"
    );

    for d2 in [2.0, 10.0, 100.0, 1000.0] {
        let s = presets::ris1(d2);
        let link = s.link();
        let phases: Vec<f64> = link.phases().iter().collect();
        let zero = ndarray::Array2::zeros(link.phases().dim());
        let raw = residual_spread(link.phases(), &zero)?;
        let d = dtpq_on(&link)?;
        let after = residual_spread(link.phases(), &d.shifts.values())?;
        println!(
            "d2 = {d2:>6} m: {} residuals span {:6.1} deg unshifted, {:5.1} deg after dtpq (bound {:.0})",
            phases.len(),
            raw.to_degrees(),
            after.to_degrees(),
            s.panel.interval().to_degrees()
        );
    }
    Ok(())
}
