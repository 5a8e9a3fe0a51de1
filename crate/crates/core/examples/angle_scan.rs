//! Shifts designed for a 45 degree departure, then the receiver is moved
//! from -90 to 90 degrees.

use ris_quant::analysis::{angle_scan, GridRange, Method};
use ris_quant::io::write_sweep;
use ris_quant::presets;

fn main() -> ris_quant::Result<()> {
    let rows = angle_scan(
        &presets::ris1(10.0),
        GridRange::new(-90.0, 90.0, 1.0),
        45f64.to_radians(),
        &[
            Method::Continuous,
            Method::Dtpq,
            Method::Fixed {
                gamma: Some(235f64.to_radians()),
            },
        ],
    )?;
    write_sweep(std::io::stdout().lock(), &rows)?;
    Ok(())
}
