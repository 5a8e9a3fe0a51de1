//! Load a scenario file and quantize it. Defaults to the bundled RIS 1 file.

use std::path::PathBuf;

use ris_quant::config::load_scenario;
use ris_quant::io::write_shifts;
use ris_quant::quantization::dtpq;

fn main() -> ris_quant::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/ris1.json"));
    let s = load_scenario(&path)?;
    let r = dtpq(&s)?;
    eprintln!(
        "{}: threshold {:.2} deg, P_r {:.4} dBm",
        path.display(),
        r.threshold.unwrap_or(0.0).to_degrees(),
        r.received_power_dbm
    );
    write_shifts(std::io::stdout().lock(), &r.shifts)
}
