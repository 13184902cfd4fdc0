//! File formats: dictionary/query CSV and JSON, complex JSON, rho-grid
//! specs, and C-style `%.17g` float formatting for reproducible output.
//!
//! All readers are strict: they reject anything they would not themselves
//! write, and they never panic on malformed input (the fuzz targets hold
//! them to that).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::RhoGrid;
use crate::geometry::Dictionary;
use crate::oracle::ComplexFile;

/// Formats like C's `printf("%.17g", x)`: 17 significant digits, fixed or
/// scientific depending on the decimal exponent, trailing zeros stripped,
/// two-digit-minimum exponent field.
pub fn format_g17(x: f64) -> String {
    format_g(x, 17)
}

fn format_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // Decimal exponent from the scientific rendering (after rounding to the
    // requested precision, matching %g semantics).
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("numeric exponent");

    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let prec = (sig as i32 - 1 - exp).max(0) as usize;
    let fixed = format!("{x:.prec$}");
    if prec > 0 {
        trim_zeros(&fixed).to_string()
    } else {
        fixed
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Numeric CSV (dictionaries and query points): one point per row, no header.
// ---------------------------------------------------------------------------

/// Parses rows of comma-separated finite floats. Empty lines are rejected,
/// as are ragged rows.
pub fn parse_point_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    let mut width = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            return Err(Error::Parse(format!("blank line {} in point file", lineno + 1)));
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad float '{field}' on line {}", lineno + 1)))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!(
                    "non-finite value on line {}",
                    lineno + 1
                )));
            }
            row.push(v);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse(format!(
                    "row {} has {} fields, expected {w}",
                    lineno + 1,
                    row.len()
                )))
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty point file".into()));
    }
    Ok(rows)
}

pub fn parse_dictionary_csv(text: &str) -> Result<Dictionary> {
    Dictionary::from_rows(&parse_point_rows(text)?)
}

pub fn parse_queries_csv(text: &str, expected_d: usize) -> Result<Vec<Vec<f64>>> {
    let rows = parse_point_rows(text)?;
    if rows[0].len() != expected_d {
        return Err(Error::Parse(format!(
            "query dimension {} does not match dictionary d={expected_d}",
            rows[0].len()
        )));
    }
    Ok(rows)
}

pub fn write_point_rows(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        let fields: Vec<String> = row.iter().map(|&v| format_g17(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn dictionary_to_csv(x: &Dictionary) -> String {
    let rows: Vec<Vec<f64>> = (0..x.n()).map(|i| x.atom(i).to_vec()).collect();
    write_point_rows(&rows)
}

// ---------------------------------------------------------------------------
// Dictionary JSON: {"d": .., "n": .., "points": [[..], ..]} with atom rows.
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct DictionaryFile {
    d: usize,
    n: usize,
    points: Vec<Vec<f64>>,
}

pub fn parse_dictionary_json(text: &str) -> Result<Dictionary> {
    let file: DictionaryFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("dictionary JSON: {e}")))?;
    if file.points.len() != file.n {
        return Err(Error::Parse(format!(
            "JSON says n={} but lists {} points",
            file.n,
            file.points.len()
        )));
    }
    if file.points.iter().any(|p| p.len() != file.d) {
        return Err(Error::Parse("JSON point with wrong dimension".into()));
    }
    Dictionary::from_rows(&file.points)
}

pub fn dictionary_to_json(x: &Dictionary) -> String {
    let file = DictionaryFile {
        d: x.d(),
        n: x.n(),
        points: (0..x.n()).map(|i| x.atom(i).to_vec()).collect(),
    };
    serde_json::to_string(&file).expect("dictionary serializes")
}

// ---------------------------------------------------------------------------
// Complex JSON and rho grids.
// ---------------------------------------------------------------------------

pub fn parse_complex_json(text: &str) -> Result<ComplexFile> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("complex JSON: {e}")))
}

/// Parses a `base:kmin:kmax` grid spec, e.g. `2:-32:2`. The expanded values
/// `base^k` for `k = kmax..kmin` must come out strictly decreasing, positive
/// and finite, which bounds `base > 1` away from rounding collapse.
pub fn parse_rho_grid(spec: &str) -> Result<RhoGrid> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "rho grid spec '{spec}' is not of the form base:kmin:kmax"
        )));
    }
    let base: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid base '{}'", parts[0])))?;
    let k_min: i32 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid k_min '{}'", parts[1])))?;
    let k_max: i32 = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad grid k_max '{}'", parts[2])))?;
    let grid = RhoGrid { base, k_min, k_max };
    grid.validate()?;
    Ok(grid)
}

/// Envelope adding the schema version to serialized results.
#[derive(Debug, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema: String,
    #[serde(flatten)]
    pub payload: T,
}

pub fn to_schema_json<T: Serialize>(payload: &T) -> String {
    serde_json::to_string(&Versioned { schema: "v1".to_string(), payload })
        .expect("payload serializes")
}

pub fn to_schema_json_pretty<T: Serialize>(payload: &T) -> String {
    serde_json::to_string_pretty(&Versioned { schema: "v1".to_string(), payload })
        .expect("payload serializes")
}
