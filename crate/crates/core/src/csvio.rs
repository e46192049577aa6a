//! Plain-text CSV for traces, spectra, field maps and generic numeric tables.
//!
//! Every file may start with `#` metadata lines. Floats are written in the
//! shortest form that parses back to the same value, so write → read is
//! bit-exact. A field map's first row is `tau_ps\t_ps, <t values...>` and
//! each further row is `<tau value>, <E values...>`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::polaron::Spectrum;
use crate::signal::{FieldMap2D, TimeTrace};

/// Corner cell of a field map file.
pub const MAP_CORNER: &str = "tau_ps\\t_ps";

/// A header row and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn metadata_block(metadata: &[String]) -> String {
    metadata.iter().map(|m| format!("# {m}\n")).collect()
}

fn write_rows(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is built from UTF-8 strings"))
}

fn parse_cell(cell: &str, origin: &str, line: usize) -> Result<f64> {
    cell.parse::<f64>().map_err(|_| Error::Parse {
        path: origin.to_string(),
        line,
        msg: format!("`{cell}` is not a number"),
    })
}

/// Data rows tagged with their line number.
type Rows = Vec<(usize, Vec<String>)>;

fn read_records(text: &str, origin: &str) -> Result<(Vec<String>, Rows)> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        rows.push((line, rec.iter().map(str::to_string).collect()));
    }
    if rows.is_empty() {
        return Err(Error::Parse { path: origin.to_string(), line: 0, msg: "no data rows".into() });
    }
    Ok((header, rows))
}

pub fn table_to_csv(table: &Table, metadata: &[String]) -> Result<String> {
    let body = write_rows(&table.header, table.rows.iter().map(|r| r.iter().map(f64::to_string).collect()))?;
    Ok(metadata_block(metadata) + &body)
}

pub fn table_from_csv(text: &str, origin: &str) -> Result<Table> {
    let (header, records) = read_records(text, origin)?;
    let rows = records
        .into_iter()
        .map(|(line, cells)| cells.iter().map(|c| parse_cell(c, origin, line)).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

fn two_columns(text: &str, origin: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let t = table_from_csv(text, origin)?;
    if t.header.len() != 2 {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 1,
            msg: format!("expected 2 columns, found {}", t.header.len()),
        });
    }
    Ok(t.rows.into_iter().map(|r| (r[0], r[1])).unzip())
}

pub fn trace_to_csv(trace: &TimeTrace, value_label: &str, metadata: &[String]) -> Result<String> {
    let table = Table {
        header: vec!["time_ps".into(), value_label.into()],
        rows: trace.times().iter().zip(trace.values()).map(|(t, v)| vec![*t, *v]).collect(),
    };
    table_to_csv(&table, metadata)
}

pub fn trace_from_csv(text: &str, origin: &str) -> Result<TimeTrace> {
    let (t, v) = two_columns(text, origin)?;
    TimeTrace::new(t, v)
}

pub fn spectrum_to_csv(spectrum: &Spectrum, value_label: &str, metadata: &[String]) -> Result<String> {
    let table = Table {
        header: vec!["nu_THz".into(), value_label.into()],
        rows: spectrum.frequencies_thz().iter().zip(spectrum.values()).map(|(f, v)| vec![*f, *v]).collect(),
    };
    table_to_csv(&table, metadata)
}

pub fn spectrum_from_csv(text: &str, origin: &str) -> Result<Spectrum> {
    let (f, v) = two_columns(text, origin)?;
    Spectrum::new(f, v)
}

pub fn map_to_csv(map: &FieldMap2D, metadata: &[String]) -> Result<String> {
    let header: Vec<String> = std::iter::once(MAP_CORNER.to_string())
        .chain(map.t_grid().iter().map(f64::to_string))
        .collect();
    let rows = map.tau_grid().iter().enumerate().map(|(i, tau)| {
        std::iter::once(tau.to_string()).chain(map.row(i).iter().map(f64::to_string)).collect()
    });
    Ok(metadata_block(metadata) + &write_rows(&header, rows)?)
}

pub fn map_from_csv(text: &str, origin: &str) -> Result<FieldMap2D> {
    let (header, records) = read_records(text, origin)?;
    if header.first().map(String::as_str) != Some(MAP_CORNER) {
        return Err(Error::Parse {
            path: origin.to_string(),
            line: 1,
            msg: format!("field map must start with `{MAP_CORNER}`"),
        });
    }
    let t = header[1..].iter().map(|c| parse_cell(c, origin, 1)).collect::<Result<Vec<f64>>>()?;
    let mut tau = Vec::with_capacity(records.len());
    let mut values = Vec::with_capacity(records.len() * t.len());
    for (line, cells) in records {
        tau.push(parse_cell(&cells[0], origin, line)?);
        for c in &cells[1..] {
            values.push(parse_cell(c, origin, line)?);
        }
    }
    FieldMap2D::new(t, tau, values)
}

/// `quantity,value` rows; labels may repeat.
pub fn record_to_csv(fields: &[(String, f64)], metadata: &[String]) -> Result<String> {
    let header = vec!["quantity".to_string(), "value".to_string()];
    let rows = fields.iter().map(|(k, v)| vec![k.clone(), v.to_string()]);
    Ok(metadata_block(metadata) + &write_rows(&header, rows)?)
}

pub fn record_from_csv(text: &str, origin: &str) -> Result<Vec<(String, f64)>> {
    let (header, records) = read_records(text, origin)?;
    if header.len() != 2 {
        return Err(Error::Parse { path: origin.to_string(), line: 1, msg: "expected `quantity,value`".into() });
    }
    records
        .into_iter()
        .map(|(line, cells)| Ok((cells[0].clone(), parse_cell(&cells[1], origin, line)?)))
        .collect()
}

pub fn read_map_file(path: impl AsRef<Path>) -> Result<FieldMap2D> {
    let path = path.as_ref();
    map_from_csv(&std::fs::read_to_string(path)?, &path.display().to_string())
}

pub fn read_trace_file(path: impl AsRef<Path>) -> Result<TimeTrace> {
    let path = path.as_ref();
    trace_from_csv(&std::fs::read_to_string(path)?, &path.display().to_string())
}

pub fn read_spectrum_file(path: impl AsRef<Path>) -> Result<Spectrum> {
    let path = path.as_ref();
    spectrum_from_csv(&std::fs::read_to_string(path)?, &path.display().to_string())
}
