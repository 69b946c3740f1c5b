//! CSV input and output of sampled functions.

use std::io::Write;
use std::path::Path;

use orbitquant::quantize::{Axis, GridFunction, GridND};
use orbitquant::spectral::{c, C64};

use crate::CliError;

/// Rows of `coordinates..., re, im` from a CSV file with a header row.
pub struct Samples {
    pub header: Vec<String>,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<C64>,
}

fn parse_f64(s: &str, line: usize) -> Result<f64, CliError> {
    s.trim().parse::<f64>().map_err(|_| CliError::usage(format!("line {line}: {s:?} is not a number")))
}

/// Reads `dim` coordinate columns followed by `re` and, optionally, `im`.
pub fn read_samples(path: &Path, dim: usize) -> Result<Samples, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = rdr.headers().map_err(|e| CliError::usage(e.to_string()))?.iter().map(str::to_string).collect();
    if header.len() != dim + 1 && header.len() != dim + 2 {
        return Err(CliError::usage(format!(
            "{}: expected {dim} coordinate columns and re[,im], found {} columns",
            path.display(),
            header.len()
        )));
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::usage(e.to_string()))?;
        let line = k + 2;
        let nums = rec.iter().map(|s| parse_f64(s, line)).collect::<Result<Vec<_>, _>>()?;
        if nums.len() != header.len() {
            return Err(CliError::usage(format!("line {line}: expected {} fields", header.len())));
        }
        points.push(nums[..dim].to_vec());
        values.push(c(nums[dim], nums.get(dim + 1).copied().unwrap_or(0.0)));
    }
    Ok(Samples { header, points, values })
}

/// Reads coordinate rows only; extra columns are ignored.
pub fn read_points(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::usage(e.to_string()))?;
        if rec.len() < dim {
            return Err(CliError::usage(format!("line {}: expected {dim} coordinates", k + 2)));
        }
        out.push(rec.iter().take(dim).map(|s| parse_f64(s, k + 2)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(out)
}

/// The regular grid spanned by the sample points, with the values placed on it.
pub fn to_grid_function(s: &Samples) -> Result<GridFunction, CliError> {
    let dim = s.points.first().map(Vec::len).ok_or_else(|| CliError::usage("no samples"))?;
    let mut axes = Vec::with_capacity(dim);
    for d in 0..dim {
        let mut v: Vec<f64> = s.points.iter().map(|p| p[d]).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
        let step = if v.len() > 1 { (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64 } else { 1.0 };
        let axis = Axis::new(v[0], step, v.len()).map_err(|e| CliError::usage(e.to_string()))?;
        if v.iter().enumerate().any(|(k, x)| (axis.node(k) - x).abs() > 1e-9 * (1.0 + step.abs())) {
            return Err(CliError::usage(format!("column {} is not uniformly spaced", s.header[d])));
        }
        axes.push(axis);
    }
    let grid = GridND::new(axes).map_err(|e| CliError::usage(e.to_string()))?;
    if grid.len() != s.points.len() {
        return Err(CliError::usage(format!("{} samples do not fill a {}-point grid", s.points.len(), grid.len())));
    }
    let mut f = GridFunction::zeros(&grid);
    let mut seen = vec![false; grid.len()];
    for (p, v) in s.points.iter().zip(&s.values) {
        let idx: Vec<usize> = p.iter().zip(&grid.axes).map(|(x, a)| ((x - a.start) / a.step).round() as usize).collect();
        let flat = grid.flat_index(&idx);
        if seen[flat] {
            return Err(CliError::usage(format!("duplicate sample at {p:?}")));
        }
        seen[flat] = true;
        f.values[flat] = *v;
    }
    Ok(f)
}

fn closed_pipe(e: &csv::Error) -> bool {
    matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe)
}

/// Writes `names..., re, im` rows.
pub fn write_samples(out: Option<&Path>, names: &[String], points: &[Vec<f64>], values: &[C64]) -> Result<(), CliError> {
    match write_rows(out, names, points, values) {
        Err(e) if closed_pipe(&e) => Ok(()),
        Err(e) if matches!(e.kind(), csv::ErrorKind::Io(_)) => Err(CliError::usage(e.to_string())),
        r => r.map_err(CliError::internal),
    }
}

fn write_rows(out: Option<&Path>, names: &[String], points: &[Vec<f64>], values: &[C64]) -> Result<(), csv::Error> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    let mut header: Vec<String> = names.to_vec();
    header.push("re".into());
    header.push("im".into());
    w.write_record(&header)?;
    for (p, v) in points.iter().zip(values) {
        let mut row: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
        row.push(format!("{}", v.re));
        row.push(format!("{}", v.im));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_recovered_from_shuffled_rows() {
        let mut points = Vec::new();
        let mut values = Vec::new();
        for j in (0..3).rev() {
            for i in 0..4 {
                points.push(vec![i as f64 * 0.5 - 1.0, j as f64]);
                values.push(c(i as f64, j as f64));
            }
        }
        let s = Samples { header: vec!["x".into(), "y".into(), "re".into(), "im".into()], points, values };
        let f = to_grid_function(&s).unwrap();
        assert_eq!(f.grid.axes[0].len, 4);
        assert_eq!(f.grid.axes[1].len, 3);
        let k = f.grid.flat_index(&[2, 1]);
        assert_eq!(f.values[k], c(2.0, 1.0));
    }

    #[test]
    fn ragged_samples_are_rejected() {
        let s = Samples {
            header: vec!["x".into(), "re".into()],
            points: vec![vec![0.0], vec![1.0], vec![3.0]],
            values: vec![c(0.0, 0.0); 3],
        };
        assert!(to_grid_function(&s).is_err());
    }
}
