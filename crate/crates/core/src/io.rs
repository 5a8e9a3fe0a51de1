//! CSV tables. Every number is written with four decimals.

use std::io::{Read, Write};

use ndarray::Array2;

use crate::analysis::{GradientMap, SlopeFit, SweepRow};
use crate::error::{Error, Result};
use crate::geometry::RisPanel;
use crate::quantization::ShiftMatrix;

pub fn fmt4(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

/// `n,m,level_index,level_deg`, one row per cell with `n` outer. Indices are
/// 1-based.
pub fn write_shifts<W: Write>(out: W, shifts: &ShiftMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "m", "level_index", "level_deg"])?;
    let levels = shifts.levels();
    for ((i, j), &p) in shifts.level_indices().indexed_iter() {
        w.write_record([
            (i + 1).to_string(),
            (j + 1).to_string(),
            p.to_string(),
            fmt4(levels[p as usize].to_degrees()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a shifts table back onto `panel`. Every cell must appear exactly once.
pub fn read_shifts<R: Read>(input: R, panel: &RisPanel) -> Result<ShiftMatrix> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["n", "m", "level_index", "level_deg"] {
        return Err(Error::config(
            "shifts",
            "expected header n,m,level_index,level_deg",
        ));
    }
    let (rows, cols) = panel.grid_shape();
    let mut seen = Array2::from_elem((rows, cols), false);
    let mut idx = Array2::<u16>::zeros((rows, cols));
    for rec in r.records() {
        let rec = rec?;
        let field = |k: usize, name: &str| -> Result<usize> {
            rec.get(k)
                .and_then(|s| s.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::config("shifts", format!("bad `{name}` in row {rec:?}")))
        };
        let (n, m, p) = (field(0, "n")?, field(1, "m")?, field(2, "level_index")?);
        if !(1..=rows).contains(&n) || !(1..=cols).contains(&m) {
            return Err(Error::config(
                "shifts",
                format!("cell ({n}, {m}) is off the panel"),
            ));
        }
        if seen[[n - 1, m - 1]] {
            return Err(Error::config(
                "shifts",
                format!("cell ({n}, {m}) listed twice"),
            ));
        }
        seen[[n - 1, m - 1]] = true;
        idx[[n - 1, m - 1]] =
            u16::try_from(p).map_err(|_| Error::config("shifts", "level index too large"))?;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::config("shifts", "not every cell is listed"));
    }
    ShiftMatrix::from_indices(idx, panel)
}

/// `axis_value,<method>_dbm[,<method>_threshold_deg]...` in method order.
pub fn write_sweep<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let Some(first) = rows.first() else {
        w.flush()?;
        return Ok(());
    };
    let mut header = vec!["axis_value".to_string()];
    for o in &first.outcomes {
        header.push(format!("{}_dbm", o.method.name()));
        if o.method.has_threshold() {
            header.push(format!("{}_threshold_deg", o.method.name()));
        }
    }
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![fmt4(row.axis_value)];
        for o in &row.outcomes {
            rec.push(fmt4(o.received_power_dbm));
            if o.method.has_threshold() {
                rec.push(
                    o.threshold
                        .map(|t| fmt4(t.to_degrees()))
                        .unwrap_or_default(),
                );
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// `theta_deg,phi_deg,<method>_dbm`, theta outer.
pub fn write_gradient<W: Write>(out: W, map: &GradientMap, method_name: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["theta_deg", "phi_deg", &format!("{method_name}_dbm")])?;
    for ((i, j), &p) in map.power_dbm.indexed_iter() {
        w.write_record([
            fmt4(map.theta[i].to_degrees()),
            fmt4(map.phi[j].to_degrees()),
            fmt4(p),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-sample table of a slope fit: `axis_value,x_db,pl_db,residual_db`.
pub fn write_slope_samples<W: Write>(out: W, fit: &SlopeFit) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis_value", "x_db", "pl_db", "residual_db"])?;
    for (s, r) in fit.samples.iter().zip(fit.residuals()) {
        w.write_record([
            fmt4(s.axis_value),
            fmt4(s.x_db),
            fmt4(s.path_loss_db),
            fmt4(r),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt4(-50.33333), "-50.3333");
        assert_eq!(fmt4(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt4(0.0), "0.0000");
    }

    #[test]
    fn shifts_round_trip() {
        let panel = RisPanel::with_uniform_levels(3, 2, 0.05, 0.05, 2, 0.3, 1.0).unwrap();
        let idx = Array2::from_shape_fn(panel.grid_shape(), |(i, j)| ((i * 3 + j) % 4) as u16);
        let s = ShiftMatrix::from_indices(idx.clone(), &panel).unwrap();
        let mut buf = Vec::new();
        write_shifts(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,m,level_index,level_deg\n1,1,0,17.1887\n1,2,1,"));
        let back = read_shifts(buf.as_slice(), &panel).unwrap();
        assert_eq!(back.level_indices(), &idx);
    }

    #[test]
    fn shifts_reader_rejects_gaps() {
        let panel = RisPanel::with_uniform_levels(1, 2, 0.05, 0.05, 1, 0.0, 1.0).unwrap();
        let text = "n,m,level_index,level_deg\n1,1,0,0\n";
        assert!(read_shifts(text.as_bytes(), &panel).is_err());
        let text = "n,m,level_index,level_deg\n1,1,0,0\n1,1,1,180\n";
        assert!(read_shifts(text.as_bytes(), &panel).is_err());
        let text = "n,m,level_index,level_deg\n1,1,0,0\n1,2,2,0\n";
        assert!(read_shifts(text.as_bytes(), &panel).is_err());
    }
}
