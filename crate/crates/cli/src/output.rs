//! Rendering of command results as JSON, CSV or plain text.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Val {
    F(f64),
    U(usize),
    I(i64),
    B(bool),
    S(String),
    Null,
}

impl Val {
    fn to_json(&self) -> Value {
        match self {
            Val::F(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Val::U(v) => json!(v),
            Val::I(v) => json!(v),
            Val::B(v) => json!(v),
            Val::S(v) => json!(v),
            Val::Null => Value::Null,
        }
    }

    fn to_text(&self) -> String {
        match self {
            Val::F(v) => fmt_f64(*v),
            Val::U(v) => v.to_string(),
            Val::I(v) => v.to_string(),
            Val::B(v) => v.to_string(),
            Val::S(v) => v.clone(),
            Val::Null => "n/a".to_string(),
        }
    }
}

impl From<f64> for Val {
    fn from(v: f64) -> Self {
        Val::F(v)
    }
}

impl From<usize> for Val {
    fn from(v: usize) -> Self {
        Val::U(v)
    }
}

impl From<bool> for Val {
    fn from(v: bool) -> Self {
        Val::B(v)
    }
}

impl From<String> for Val {
    fn from(v: String) -> Self {
        Val::S(v)
    }
}

impl<T: Into<Val>> From<Option<T>> for Val {
    fn from(v: Option<T>) -> Self {
        v.map_or(Val::Null, Into::into)
    }
}

/// Shortest round-trip text, switching to exponent form outside `[1e-5, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub enum Body {
    Scalar { name: &'static str, value: Val },
    Record(Vec<(&'static str, Val)>),
    List { name: &'static str, values: Vec<Val> },
    Table { columns: Vec<String>, rows: Vec<Vec<Val>> },
    Matrix(Vec<Vec<Val>>),
}

impl Body {
    fn to_json(&self) -> Value {
        match self {
            Body::Scalar { value, .. } => value.to_json(),
            Body::Record(fields) => {
                Value::Object(fields.iter().map(|(k, v)| (k.to_string(), v.to_json())).collect())
            }
            Body::List { values, .. } => Value::Array(values.iter().map(Val::to_json).collect()),
            Body::Table { columns, rows } => Value::Array(
                rows.iter()
                    .map(|row| {
                        Value::Object(columns.iter().zip(row).map(|(k, v)| (k.to_string(), v.to_json())).collect())
                    })
                    .collect(),
            ),
            Body::Matrix(rows) => {
                Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(Val::to_json).collect())).collect())
            }
        }
    }

    fn header_and_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let text = |row: &[Val]| row.iter().map(Val::to_text).collect::<Vec<_>>();
        match self {
            Body::Scalar { name, value } => (vec![name.to_string()], vec![vec![value.to_text()]]),
            Body::Record(fields) => (
                fields.iter().map(|(k, _)| k.to_string()).collect(),
                vec![fields.iter().map(|(_, v)| v.to_text()).collect()],
            ),
            Body::List { name, values } => (
                vec!["k".into(), name.to_string()],
                values.iter().enumerate().map(|(k, v)| vec![(k + 1).to_string(), v.to_text()]).collect(),
            ),
            Body::Table { columns, rows } => {
                (columns.clone(), rows.iter().map(|r| text(r)).collect())
            }
            Body::Matrix(rows) => {
                let mut header = vec!["i".to_string()];
                header.extend((1..=rows.len()).map(|j| j.to_string()));
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| std::iter::once((i + 1).to_string()).chain(r.iter().map(Val::to_text)).collect())
                    .collect();
                (header, rows)
            }
        }
    }

    fn to_plain(&self) -> String {
        match self {
            Body::Scalar { value, .. } => format!("{}\n", value.to_text()),
            Body::Record(fields) => {
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                fields.iter().map(|(k, v)| format!("{k:<width$}  {}\n", v.to_text())).collect()
            }
            Body::List { values, .. } => values.iter().map(|v| format!("{}\n", v.to_text())).collect(),
            Body::Matrix(rows) => rows
                .iter()
                .map(|r| r.iter().map(Val::to_text).collect::<Vec<_>>().join(" ") + "\n")
                .collect(),
            Body::Table { .. } => {
                let (header, rows) = self.header_and_rows();
                let widths: Vec<usize> = (0..header.len())
                    .map(|c| rows.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
                    .collect();
                std::iter::once(&header)
                    .chain(&rows)
                    .map(|r| {
                        let cells: Vec<String> =
                            r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
                        cells.join("  ").trim_end().to_string() + "\n"
                    })
                    .collect()
            }
        }
    }

    fn to_csv(&self) -> String {
        let (header, rows) = self.header_and_rows();
        std::iter::once(header).chain(rows).map(|r| r.join(",") + "\n").collect()
    }
}

/// The `spec` echo block; also the accepted `--spec-file` layout.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpecEcho {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: Option<usize>,
    #[serde(default, skip_deserializing)]
    pub symmetrisable: bool,
}

pub struct Report {
    pub spec: SpecEcho,
    pub body: Body,
    pub tolerances: Vec<(&'static str, f64)>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => self.body.to_plain(),
            Format::Csv => self.body.to_csv(),
            Format::Json => {
                let mut meta = Map::new();
                meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
                meta.insert(
                    "tolerances".into(),
                    Value::Object(self.tolerances.iter().map(|(k, v)| (k.to_string(), Val::F(*v).to_json())).collect()),
                );
                let top = json!({
                    "spec": self.spec,
                    "result": self.body.to_json(),
                    "meta": Value::Object(meta),
                });
                serde_json::to_string_pretty(&top).expect("JSON values always serialise") + "\n"
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_text_round_trips() {
        for v in [0.0, 1.0, -2.5, 1e-7, 3.414_213_562_373_095, 1e300, -5e-320] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(1e20), "1e20");
    }

    #[test]
    fn table_renders_in_all_formats() {
        let body = Body::Table { columns: vec!["n".into(), "x".into()], rows: vec![vec![Val::U(8), Val::F(0.5)], vec![Val::U(16), Val::Null]] };
        assert_eq!(body.to_csv(), "n,x\n8,0.5\n16,n/a\n");
        assert_eq!(body.to_plain(), "n   x\n8   0.5\n16  n/a\n");
        assert_eq!(body.to_json(), json!([{"n": 8, "x": 0.5}, {"n": 16, "x": null}]));
    }

    #[test]
    fn spec_echo_round_trips() {
        let echo = SpecEcho { a: 1.0, b: -2.0, c: 3.0, n: Some(4), symmetrisable: true };
        let text = serde_json::to_string(&echo).unwrap();
        let back: SpecEcho = serde_json::from_str(&text).unwrap();
        assert_eq!((back.a, back.b, back.c, back.n), (1.0, -2.0, 3.0, Some(4)));
    }
}
