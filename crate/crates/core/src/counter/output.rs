//! CSV emission of bias series and of the `(x, D(x))` figure data.

use std::io::{Read, Write};
use std::path::Path;

use super::series::BiasSeries;
use super::CounterError;
use crate::scalar::ClassValue;

pub const SERIES_HEADER: [&str; 9] = ["x", "pi_C1", "pi_C2", "theta_t", "psi_t", "R", "D", "logdens", "natdens"];

/// A real with 12 significant digits; `-0` is printed as `0`.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v:.11e}")
}

pub fn write_series<S: ClassValue, W: Write>(series: &BiasSeries<S>, out: W) -> Result<(), CounterError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SERIES_HEADER)?;
    for row in &series.rows {
        w.write_record([
            row.x.to_string(),
            series.pi_c1(row).to_string(),
            series.pi_c2(row).to_string(),
            format_real(row.theta),
            format_real(row.psi),
            format_real(row.r),
            format_real(row.d),
            format_real(row.log_density),
            format_real(row.natural_density),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes to a temporary sibling first so a failed run leaves no partial file.
pub fn emit_series<S: ClassValue>(series: &BiasSeries<S>, path: &Path) -> Result<(), CounterError> {
    let mut buf = Vec::new();
    write_series(series, &mut buf)?;
    write_atomically(path, &buf)
}

pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CounterError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// `(x, D)` pairs from a series CSV.
pub fn read_figure_points<R: Read>(input: R) -> Result<Vec<(String, String)>, CounterError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CounterError::Format(format!("series file has no {name:?} column")))
    };
    let (ix, id) = (col("x")?, col("D")?);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let x = rec.get(ix).unwrap_or_default().to_string();
        let d = rec.get(id).unwrap_or_default().to_string();
        x.parse::<u64>()
            .map_err(|_| CounterError::Format(format!("bad x value {x:?}")))?;
        d.parse::<f64>()
            .map_err(|_| CounterError::Format(format!("bad D value {d:?}")))?;
        out.push((x, d));
    }
    Ok(out)
}

pub fn emit_figure(series_path: &Path, out_path: &Path) -> Result<usize, CounterError> {
    let points = read_figure_points(std::fs::File::open(series_path)?)?;
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["x", "D"])?;
        for (x, d) in &points {
            w.write_record([x, d])?;
        }
        w.flush()?;
    }
    write_atomically(out_path, &buf)?;
    Ok(points.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::series::{BiasSeries, SeriesRow};

    fn series(rows: usize) -> BiasSeries<f64> {
        BiasSeries {
            c1: 0,
            c2: 1,
            class_sizes: vec![1, 1],
            rows: (0..rows)
                .map(|i| SeriesRow {
                    x: 10 + i as u64,
                    pi: vec![3, 1],
                    ideals: 4,
                    theta: 1.5,
                    psi: -0.0,
                    theta_weight: 1.0,
                    psi_weight: 0.0,
                    r: 2.0,
                    d: 1.0 / 3.0,
                    log_density: 0.25,
                    natural_density: 0.5,
                })
                .collect(),
            excluded: vec![2],
        }
    }

    #[test]
    fn header_only_when_empty() {
        let mut buf = Vec::new();
        write_series(&series(0), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,pi_C1,pi_C2,theta_t,psi_t,R,D,logdens,natdens\n");
    }

    #[test]
    fn one_row_per_checkpoint() {
        let mut buf = Vec::new();
        write_series(&series(5), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "10,3,1,1.50000000000e0,0,2.00000000000e0,3.33333333333e-1,2.50000000000e-1,5.00000000000e-1"
        );
    }

    #[test]
    fn figure_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = dir.path().join("s.csv");
        let f = dir.path().join("f.csv");
        emit_series(&series(3), &s).unwrap();
        assert_eq!(emit_figure(&s, &f).unwrap(), 3);
        let text = std::fs::read_to_string(&f).unwrap();
        assert_eq!(text.lines().next().unwrap(), "x,D");
        assert_eq!(text.lines().count(), 4);
        assert!(!dir.path().join("s.csv.partial").exists());
    }
}
