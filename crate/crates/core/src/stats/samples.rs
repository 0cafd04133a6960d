//! Plain-text sample files: one record per line, comma separated reals.
//! Blank lines and lines starting with `#` are skipped.

use std::io::Read;
use std::path::Path;

use crate::{Error, Result};

/// Reads a rectangular table of reals.
pub fn read_sample_table<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Parse(format!("record {}: {field:?} is not a finite number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::InvalidSample(format!(
                    "record {} has {} values, expected {}",
                    line + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidSample("no samples".into()));
    }
    Ok(rows)
}

/// Reads a single column of reals, one per line.
pub fn read_sample_column<R: Read>(reader: R) -> Result<Vec<f64>> {
    let rows = read_sample_table(reader)?;
    if rows[0].len() != 1 {
        return Err(Error::InvalidSample(format!("expected one value per line, found {}", rows[0].len())));
    }
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

pub fn read_samples_file(path: &Path) -> Result<Vec<Vec<f64>>> {
    read_sample_table(std::fs::File::open(path)?)
}
