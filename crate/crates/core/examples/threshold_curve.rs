//! Received power as a function of a fixed quantization threshold, with the
//! DTPQ and EIPQ optima as reference columns.

use ris_quant::analysis::{run_sweep, GridRange, Method, SweepAxis, SweepSpec};
use ris_quant::io::write_sweep;
use ris_quant::presets;

fn main() -> ris_quant::Result<()> {
    let spec = SweepSpec {
        axis: SweepAxis::Threshold,
        range: GridRange::new(0.0, 360.0, 1.0),
        methods: vec![
            Method::Dtpq,
            Method::Eipq {
                epsilon: 5f64.to_radians(),
            },
            Method::Fixed { gamma: None },
        ],
    };
    let rows = run_sweep(&presets::ris1(10.0), &spec)?;
    write_sweep(std::io::stdout().lock(), &rows)?;
    Ok(())
}
