//! CSV ingestion and emission.
//!
//! Input schema (header row required):
//! - two columns `time_index,value`, consecutive time indices; or
//! - three columns `year,season,value`, consecutive year/season addresses.
//!
//! The period always comes from the command line. Output CSVs carry full
//! `f64` precision (shortest round-trip formatting).

use std::path::Path;

use piar::{PeriodicSeries, SeasonIndex};

use crate::error::{CliError, Result};

pub fn read_series(path: &Path, period: usize) -> Result<PeriodicSeries<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("cannot open {}: {e}", path.display())))?;

    let mut values: Vec<f64> = Vec::new();
    let mut origin: Option<usize> = None;
    let mut next_t: usize = 0;
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = row_idx + 2; // header is line 1
        let t = match record.len() {
            2 => parse_usize(&record[0], line, "time_index")?,
            3 => {
                let year = parse_usize(&record[0], line, "year")?;
                let season = parse_usize(&record[1], line, "season")?;
                if season < 1 || season > period {
                    return Err(CliError::Data(format!(
                        "line {line}: season {season} outside 1..={period}"
                    )));
                }
                SeasonIndex { year, season }.to_time(period)
            }
            other => {
                return Err(CliError::Data(format!(
                    "line {line}: expected 2 or 3 columns, found {other}"
                )))
            }
        };
        let value: f64 = record[record.len() - 1].parse().map_err(|_| {
            CliError::Data(format!("line {line}: value '{}' is not a number", &record[record.len() - 1]))
        })?;
        match origin {
            None => {
                origin = Some(t);
                next_t = t + 1;
            }
            Some(_) => {
                if t != next_t {
                    return Err(CliError::Data(format!(
                        "line {line}: time indices must be consecutive (expected {next_t}, got {t})"
                    )));
                }
                next_t += 1;
            }
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Data(format!("{}: no observations", path.display())));
    }
    PeriodicSeries::with_origin(values, period, origin.unwrap_or(1)).map_err(Into::into)
}

fn parse_usize(field: &str, line: usize, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| CliError::Data(format!("line {line}: {what} '{field}' is not a positive integer")))
}

pub fn write_series(path: &Path, x: &PeriodicSeries<f64>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    writer.write_record(["year", "season", "value"])?;
    for i in 0..x.len() {
        let idx = x.index_at(i);
        writer.write_record(&[
            idx.year.to_string(),
            idx.season.to_string(),
            x.value(i).to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Generic CSV writer: header plus stringified rows.
pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}
