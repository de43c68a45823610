//! Series files: a header row of column names, then one sample per line with
//! full-precision (`%.17g`) values.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::format::format_g17;

pub fn write_series<W: Write>(writer: W, names: &[&str], series: &DMatrix<f64>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(names)?;
    for row in series.row_iter() {
        w.write_record(row.iter().map(|&v| format_g17(v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series_csv(path: &Path, names: &[&str], series: &DMatrix<f64>) -> Result<()> {
    if names.len() != series.ncols() {
        return Err(Error::Dimension(format!(
            "{} column names for {} columns",
            names.len(),
            series.ncols()
        )));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_series(file, names, series).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, format!("{other:?}")),
    })
}

pub fn read_series<R: Read>(reader: R) -> std::result::Result<(Vec<String>, DMatrix<f64>), String> {
    let mut r = csv::Reader::from_reader(reader);
    let names: Vec<String> = r
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut values = Vec::new();
    let mut rows = 0;
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        if record.len() != names.len() {
            return Err(format!("row {} has {} fields, expected {}", line + 1, record.len(), names.len()));
        }
        for field in record.iter() {
            values.push(
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("row {}: `{field}`: {e}", line + 1))?,
            );
        }
        rows += 1;
    }
    Ok((names.clone(), DMatrix::from_row_slice(rows, names.len(), &values)))
}

pub fn read_series_csv(path: &Path) -> Result<(Vec<String>, DMatrix<f64>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_series(file).map_err(|m| Error::parse(path, m))
}
