//! Spatial power map around the design direction (45, 180) degrees.
//! Pass `fixed` as the first argument to map the fixed-threshold design.

use ris_quant::analysis::{gradient_map, GridRange, Method};
use ris_quant::io::write_gradient;
use ris_quant::presets;

fn main() -> ris_quant::Result<()> {
    let method: Method = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "dtpq".into())
        .parse()?;
    let rad = |r: GridRange| -> ris_quant::Result<Vec<f64>> {
        Ok(r.points()?.into_iter().map(f64::to_radians).collect())
    };
    let theta = rad(GridRange::new(0.0, 89.0, 1.0))?;
    let phi = rad(GridRange::new(90.0, 270.0, 1.0))?;
    let s = presets::ris1(10.0);
    let map = gradient_map(
        &s,
        (45f64.to_radians(), std::f64::consts::PI),
        &theta,
        &phi,
        method,
    )?;

    let (i, j) = map.argmax();
    eprintln!(
        "peak {:.2} dBm at theta {:.0}, phi {:.0}",
        map.power_dbm[[i, j]],
        map.theta[i].to_degrees(),
        map.phi[j].to_degrees()
    );
    write_gradient(std::io::stdout().lock(), &map, method.name())
}
