//! Reader and writer for line-oriented liquid model files.
//!
//! ```text
//! # comment
//! name = water
//! type = debye
//! eps_inf = 4.5
//! eps_static = 81        # optional; checked against eps_inf + sum of strengths
//! term = 75.0, 8.3       # delta_eps, tau_ps
//!
//! name = flat
//! type = table
//! columns = nu_THz, eps_real, eps_imag
//! 0.1, 2.449, 0.0
//! 3.0, 2.449, 0.0
//! ```
//!
//! Permittivities follow the ε = ε′ + iε″ convention with ε″ ≥ 0 for
//! absorbing media; a Debye term contributes Δε / (1 − i·2πντ).

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::dielectric::{DebyeModel, DebyeTerm, LiquidModel, TabulatedModel};
use crate::error::{Error, Result};

const TABLE_COLUMNS: [&str; 3] = ["nu_THz", "eps_real", "eps_imag"];

pub fn read_liquid_file(path: impl AsRef<Path>) -> Result<LiquidModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_liquid(&text, &path.display().to_string())
}

/// Parse liquid model text; `origin` is used in error messages.
pub fn parse_liquid(text: &str, origin: &str) -> Result<LiquidModel> {
    let err = |line: usize, msg: String| Error::Parse { path: origin.to_string(), line, msg };

    let mut name: Option<String> = None;
    let mut kind: Option<String> = None;
    let mut eps_inf: Option<f64> = None;
    let mut eps_static: Option<f64> = None;
    let mut terms = Vec::new();
    let mut in_table = false;
    let mut freqs = Vec::new();
    let mut values = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if in_table && !line.contains('=') {
            let fields = parse_floats(line).map_err(|m| err(lineno, m))?;
            if fields.len() != 3 {
                return Err(err(lineno, format!("expected 3 columns, found {}", fields.len())));
            }
            freqs.push(fields[0]);
            values.push(Complex64::new(fields[1], fields[2]));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lineno, format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" => name = Some(value.to_string()),
            "type" => match value {
                "debye" | "table" => kind = Some(value.to_string()),
                other => return Err(err(lineno, format!("unknown model type `{other}`"))),
            },
            "eps_inf" => eps_inf = Some(parse_float(value).map_err(|m| err(lineno, m))?),
            "eps_static" => eps_static = Some(parse_float(value).map_err(|m| err(lineno, m))?),
            "term" => {
                let f = parse_floats(value).map_err(|m| err(lineno, m))?;
                if f.len() != 2 {
                    return Err(err(lineno, "term needs `<delta_eps>, <tau_ps>`".into()));
                }
                terms.push(DebyeTerm { strength: f[0], tau_ps: f[1] });
            }
            "columns" => {
                let cols: Vec<&str> = value.split(',').map(str::trim).collect();
                if cols != TABLE_COLUMNS {
                    return Err(err(
                        lineno,
                        format!("columns must be `{}`", TABLE_COLUMNS.join(", ")),
                    ));
                }
                in_table = true;
            }
            other => return Err(err(lineno, format!("unknown key `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| err(0, "missing `name`".into()))?;
    match kind.as_deref() {
        Some("debye") => {
            if in_table {
                return Err(err(0, "debye model cannot carry a table".into()));
            }
            let eps_inf = eps_inf.ok_or_else(|| err(0, "debye model needs `eps_inf`".into()))?;
            let model = match eps_static {
                Some(s) => DebyeModel::with_static(name, eps_inf, terms, s)?,
                None => DebyeModel::new(name, eps_inf, terms)?,
            };
            Ok(model.into())
        }
        Some("table") => {
            if eps_inf.is_some() || eps_static.is_some() || !terms.is_empty() {
                return Err(err(0, "table model takes no Debye keys".into()));
            }
            if !in_table {
                return Err(err(0, "table model needs a `columns` line".into()));
            }
            Ok(TabulatedModel::new(name, freqs, values)?.into())
        }
        _ => Err(err(0, "missing `type`".into())),
    }
}

/// Serialize a model in the file format; floats use shortest round-trip form.
pub fn format_liquid(model: &LiquidModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", model.name());
    match model {
        LiquidModel::Debye(m) => {
            let _ = writeln!(out, "type = debye");
            let _ = writeln!(out, "eps_inf = {}", m.eps_inf());
            for t in m.terms() {
                let _ = writeln!(out, "term = {}, {}", t.strength, t.tau_ps);
            }
        }
        LiquidModel::Tabulated(m) => {
            let _ = writeln!(out, "type = table");
            let _ = writeln!(out, "columns = {}", TABLE_COLUMNS.join(", "));
            for (f, v) in m.frequencies_thz().iter().zip(m.values()) {
                let _ = writeln!(out, "{}, {}, {}", f, v.re, v.im);
            }
        }
    }
    out
}

fn parse_float(s: &str) -> std::result::Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("`{}` is not a number", s.trim()))
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',').map(parse_float).collect()
}
