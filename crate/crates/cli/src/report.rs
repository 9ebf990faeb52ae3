//! Report rendering and failure diagnostics.

use std::fmt::Write as _;

use alf_core::Error;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "alf-mass/1";

/// Rounds to 12 significant figures so that reports are stable under
/// last-digit noise.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn num(x: f64) -> Value {
    let r = round12(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (None, None, Some(x)) => num(x),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

fn fmt_num(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 || (1e-4..1e15).contains(&r.abs()) || !r.is_finite() {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Num(x) => fmt_num(*x),
            Self::Int(i) => i.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

/// A finished command: JSON fields plus a plot-ready table.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub fields: Map<String, Value>,
    /// Scalar lines shown above the table in `table` output.
    pub summary: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn field(&mut self, key: &str, value: Value) {
        self.fields.insert(key.to_owned(), value);
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.summary.push((key.to_owned(), value.into()));
    }

    pub fn note_num(&mut self, key: &str, value: f64) {
        self.note(key, fmt_num(value));
    }

    pub fn columns(&mut self, names: &[&str]) {
        self.header = names.iter().map(|s| (*s).to_owned()).collect();
    }

    pub fn json(&self, command: &str) -> String {
        let mut out = Map::new();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), command.into());
        out.insert("status".into(), "ok".into());
        for (k, v) in &self.fields {
            out.insert(k.clone(), rounded(v.clone()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k:<width$}  {v}");
        }
        if self.header.is_empty() {
            return s;
        }
        if !s.is_empty() {
            s.push('\n');
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                cells
                    .iter()
                    .filter_map(|r| r.get(c).map(String::len))
                    .chain([self.header[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| -> String {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
            padded.join("  ").trim_end().to_owned() + "\n"
        };
        s.push_str(&line(&self.header));
        for r in &cells {
            s.push_str(&line(r));
        }
        s
    }
}

/// A failed run and the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub exit_code: i32,
    pub kind: &'static str,
    pub message: String,
    /// The offending configuration key, for exit code 2.
    pub key: Option<String>,
    /// Partial results, e.g. the per-radius values of a failed extrapolation.
    pub table: Vec<(f64, f64)>,
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

impl Failure {
    pub fn config(key: &str, reason: impl std::fmt::Display) -> Self {
        Self {
            exit_code: EXIT_CONFIG,
            kind: "invalid-config",
            message: format!("invalid value for `{key}`: {reason}"),
            key: Some(key.to_owned()),
            table: Vec::new(),
        }
    }

    pub fn io(key: &str, err: impl std::fmt::Display) -> Self {
        Self {
            kind: "io",
            ..Self::config(key, err)
        }
    }

    pub fn diagnostic(&self, command: Option<&str>) -> String {
        let table: Vec<Value> = self.table.iter().map(|&(r, v)| json!([num(r), num(v)])).collect();
        let v = json!({
            "schema": SCHEMA,
            "command": command,
            "status": "error",
            "exit_code": self.exit_code,
            "kind": self.kind,
            "key": self.key,
            "message": self.message,
            "table": table,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("diagnostic serializes");
        s.push('\n');
        s
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let config_key = match &e {
            Error::InvalidParameter { name, .. } => Some(*name),
            Error::Horizon { .. } | Error::Domain { .. } => Some("r0"),
            Error::Critical { .. } => Some("delta"),
            Error::UnsupportedModel(_) => Some("family"),
            _ => None,
        };
        if let Some(key) = config_key {
            return Self {
                message,
                ..Self::config(key, "")
            };
        }
        let (kind, table) = match e {
            Error::NonConvergence { table, .. } => ("non-convergence", table),
            Error::Resolution(_) => ("resolution", Vec::new()),
            Error::Decay(_) => ("decay", Vec::new()),
            Error::IllPosedWindow { .. } => ("ill-posed-window", Vec::new()),
            Error::LinearSolve(_) => ("linear-solve", Vec::new()),
            Error::NotHarmonic { .. } => ("not-harmonic", Vec::new()),
            Error::Aliasing { .. } => ("aliasing", Vec::new()),
            Error::Degenerate(_) => ("degenerate", Vec::new()),
            _ => ("numerical", Vec::new()),
        };
        Self {
            exit_code: EXIT_NUMERIC,
            kind,
            message,
            key: None,
            table,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round12(1.4999988161234567), 1.49999881612);
        assert_eq!(round12(-2.0), -2.0);
        assert_eq!(round12(1e-300 / 3.0), 3.33333333333e-301);
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(-3.205928036064e-11), "-3.20592803606e-11");
        assert_eq!(fmt_num(2048.0), "2048");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let f = Failure::from(Error::InvalidParameter {
            name: "gamma",
            reason: "need gamma > 0".into(),
        });
        assert_eq!((f.exit_code, f.key.as_deref()), (2, Some("gamma")));
        assert!(f.message.contains("gamma"));
        let f = Failure::from(Error::NonConvergence {
            reason: "oscillates".into(),
            table: vec![(16.0, 1.0)],
        });
        assert_eq!((f.exit_code, f.kind, f.table.len()), (3, "non-convergence", 1));
        let d: Value = serde_json::from_str(&f.diagnostic(Some("mass"))).unwrap();
        assert_eq!(d["schema"], SCHEMA);
        assert_eq!(d["exit_code"], 3);
    }

    #[test]
    fn csv_and_table_layout() {
        let mut r = Report::default();
        r.columns(&["j", "delta"]);
        r.rows.push(vec![Cell::from(0usize), Cell::from(1.5)]);
        r.rows.push(vec![Cell::from(10usize), Cell::from(-0.25)]);
        r.note("m", "3");
        assert_eq!(r.csv(), "j,delta\n0,1.5\n10,-0.25\n");
        assert_eq!(r.table(), "m  3\n\n j  delta\n 0    1.5\n10  -0.25\n");
    }
}
