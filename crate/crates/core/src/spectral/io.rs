use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Writes named columns as CSV with a header row. Values use the shortest
/// representation that round-trips.
pub fn write_columns(path: &Path, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    if headers.len() != columns.len() {
        return Err(Error::Format("header/column count mismatch".into()));
    }
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != rows) {
        return Err(Error::Format("columns differ in length".into()));
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", headers.join(","))?;
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| format!("{:?}", c[r])).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV file of numeric columns with a header row.
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format(format!("{}: empty file", path.display())))??;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut cols = vec![Vec::new(); names.len()];
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != names.len() {
            return Err(Error::Format(format!("{}: line {} has {} fields", path.display(), i + 2, parts.len())));
        }
        for (c, p) in cols.iter_mut().zip(parts) {
            let v = p.trim().parse::<f64>().map_err(|e| {
                Error::Format(format!("{}: line {}: {e}", path.display(), i + 2))
            })?;
            c.push(v);
        }
    }
    Ok((names, cols))
}

/// CSV with columns `x,value`.
pub fn write_field_csv(path: &Path, f: &Field) -> Result<()> {
    write_columns(path, &["x", "value"], &[f.grid().x(), f.values()])
}

/// Reads an `x,value` CSV, reconstructing the grid from the sample points.
pub fn read_field_csv(path: &Path) -> Result<Field> {
    let (_, cols) = read_columns(path)?;
    if cols.len() < 2 || cols[0].len() < 2 {
        return Err(Error::Format(format!("{}: expected x,value columns", path.display())));
    }
    let x = &cols[0];
    let h = x[1] - x[0];
    let grid = Grid::new(x.len(), h * x.len() as f64)?;
    if (grid.x()[0] - x[0]).abs() > 1e-9 * grid.length() {
        return Err(Error::Format(format!("{}: sample points are not a centred grid", path.display())));
    }
    Field::new(&grid, cols[1].clone())
}

/// Binary layout: `N` as u64, `L` as f64, then `N` f64 samples, all
/// little-endian.
pub fn write_field_binary(path: &Path, f: &Field) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&(f.grid().n() as u64).to_le_bytes())?;
    w.write_all(&f.grid().length().to_le_bytes())?;
    for v in f.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field_binary(path: &Path) -> Result<Field> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 16 {
        return Err(Error::Format(format!("{}: truncated header", path.display())));
    }
    let word = |i: usize| -> [u8; 8] { bytes[8 * i..8 * i + 8].try_into().unwrap() };
    let n = u64::from_le_bytes(word(0)) as usize;
    let length = f64::from_le_bytes(word(1));
    if bytes.len() != 16 + 8 * n {
        return Err(Error::Format(format!(
            "{}: expected {} bytes, found {}",
            path.display(),
            16 + 8 * n,
            bytes.len()
        )));
    }
    let grid = Grid::new(n, length)?;
    let values = (0..n).map(|j| f64::from_le_bytes(word(2 + j))).collect();
    Field::new(&grid, values)
}
