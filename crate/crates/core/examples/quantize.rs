//! Quantize the RIS 1 link at d2 = 10 m with every search method.

use ris_quant::presets;
use ris_quant::quantization::{dtpq, eipq, fixed_threshold};

fn main() -> ris_quant::Result<()> {
    let s = presets::ris1(10.0);
    let link = s.link();
    println!(
        "continuous        P_r = {:8.4} dBm",
        link.power_dbm(link.continuous_xi())
    );

    let results = [
        ("dtpq", dtpq(&s)?),
        ("eipq (5 deg)", eipq(&s, 5f64.to_radians())?),
        ("fixed (235 deg)", fixed_threshold(&s, 235f64.to_radians())?),
    ];
    for (name, r) in &results {
        println!(
            "{name:<17} P_r = {:8.4} dBm  threshold {:7.2} deg  ({} candidates)",
            r.received_power_dbm,
            r.threshold.unwrap_or(0.0).to_degrees(),
            r.candidates_evaluated
        );
    }

    let shifts = &results[0].1.shifts;
    let ones = shifts.level_indices().iter().filter(|&&i| i == 1).count();
    println!(
        "dtpq puts {ones} of {} cells on the 235 deg level",
        s.panel.cell_count()
    );
    Ok(())
}
