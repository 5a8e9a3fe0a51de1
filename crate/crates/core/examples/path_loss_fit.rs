//! Path-loss exponents against distance and departure angle.

use ris_quant::analysis::{pl_slope_fit, GridRange, Method, SlopeVariable};
use ris_quant::presets;

fn main() -> ris_quant::Result<()> {
    let s = presets::ris1(50.0);
    let distances = GridRange::new(50.0, 500.0, 10.0).points()?;
    for method in [Method::Continuous, Method::Dtpq] {
        let fit = pl_slope_fit(&s, SlopeVariable::Log10D2, &distances, method)?;
        println!(
            "{:<10} PL vs 10log10(d2): slope {:.4}, r^2 {:.6}",
            method.name(),
            fit.slope,
            fit.r_squared
        );
    }

    // angle law at d2 = 10 m; DTPQ departs from it near the specular angle
    let near = presets::ris1(10.0);
    let angles: Vec<f64> = (20..=70).map(|d| (d as f64).to_radians()).collect();
    let cont = pl_slope_fit(
        &near,
        SlopeVariable::Log10CosThetaR,
        &angles,
        Method::Continuous,
    )?;
    for bits in [1, 2] {
        let panel = near.panel.with_bits(bits, 55f64.to_radians())?;
        let fit = pl_slope_fit(
            &near.with_panel(panel),
            SlopeVariable::Log10CosThetaR,
            &angles,
            Method::Dtpq,
        )?;
        let excess_at_45 = fit.samples[25].path_loss_db - cont.samples[25].path_loss_db;
        println!(
            "q={bits} PL vs 10log10(cos theta_r): slope {:.4}; excess over continuous at 45 deg {:.3} dB",
            fit.slope, excess_at_45
        );
    }
    println!(
        "continuous PL vs 10log10(cos theta_r): slope {:.4}",
        cont.slope
    );
    Ok(())
}
