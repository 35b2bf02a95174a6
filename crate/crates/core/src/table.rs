//! Tabulated sweeps with CSV and JSON serialization.
//!
//! CSV files start with `# key = <json>` metadata lines followed by a header
//! row and one row per grid point. Numbers are written with 17 significant
//! digits so that both formats round-trip doubles exactly. Missing values
//! are `NaN` in CSV and `null` in JSON.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Serialization format of a [`SweepTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

/// Named columns sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub grid_name: String,
    pub grid: Vec<f64>,
    pub columns: IndexMap<String, Vec<f64>>,
    pub meta: IndexMap<String, Value>,
}

const GRID_KEY: &str = "grid_variable";

fn number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn to_json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

impl SweepTable {
    pub fn new(grid_name: impl Into<String>, grid: Vec<f64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::domain("grid", "must not be empty"));
        }
        if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("grid", "must be finite and strictly increasing"));
        }
        Ok(SweepTable {
            grid_name: grid_name.into(),
            grid,
            columns: IndexMap::new(),
            meta: IndexMap::new(),
        })
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.grid.len() {
            return Err(Error::domain(
                "column",
                format!(
                    "`{name}` has {} values for {} grid points",
                    values.len(),
                    self.grid.len()
                ),
            ));
        }
        self.columns.insert(name, values);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.get(name).map(Vec::as_slice)
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.meta.insert(key.into(), value.into());
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k} = {v}").unwrap();
        }
        let mut header = vec![self.grid_name.as_str()];
        header.extend(self.columns.keys().map(String::as_str));
        writeln!(out, "{}", header.join(",")).unwrap();
        for (i, g) in self.grid.iter().enumerate() {
            let mut row = vec![number(*g)];
            row.extend(self.columns.values().map(|c| number(c[i])));
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut meta = IndexMap::new();
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
        let header = loop {
            let line = lines.next().ok_or_else(|| Error::Parse("missing CSV header".into()))?;
            if let Some(rest) = line.strip_prefix('#') {
                let (k, v) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad metadata line `{line}`")))?;
                let value: Value = serde_json::from_str(v.trim())
                    .map_err(|e| Error::Parse(format!("metadata `{}`: {e}", k.trim())))?;
                meta.insert(k.trim().to_string(), value);
            } else if !line.trim().is_empty() {
                break line;
            }
        };
        let names: Vec<&str> = header.split(',').map(str::trim).collect();
        let mut grid = Vec::new();
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len() - 1];
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(Error::Parse(format!(
                    "row {} has {} fields, expected {}",
                    lineno + 1,
                    fields.len(),
                    names.len()
                )));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{s}` in row {}", lineno + 1)))
            };
            grid.push(parse(fields[0])?);
            for (c, f) in cols.iter_mut().zip(&fields[1..]) {
                c.push(parse(f)?);
            }
        }
        let mut table = SweepTable::new(names[0], grid)?;
        for (name, values) in names[1..].iter().zip(cols) {
            table.push_column(*name, values)?;
        }
        table.meta = meta;
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let mut meta = serde_json::Map::new();
        meta.insert(GRID_KEY.into(), Value::String(self.grid_name.clone()));
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.clone());
        }
        let columns: serde_json::Map<String, Value> = self
            .columns
            .iter()
            .map(|(k, v)| (k.clone(), Value::Array(v.iter().map(|x| to_json_number(*x)).collect())))
            .collect();
        let doc = json!({
            "meta": meta,
            "grid": self.grid.iter().map(|x| to_json_number(*x)).collect::<Vec<_>>(),
            "columns": columns,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let numbers = |v: &Value, what: &str| -> Result<Vec<f64>> {
            v.as_array()
                .ok_or_else(|| Error::Parse(format!("`{what}` must be an array")))?
                .iter()
                .map(|x| match x {
                    Value::Null => Ok(f64::NAN),
                    _ => x
                        .as_f64()
                        .ok_or_else(|| Error::Parse(format!("non-numeric entry in `{what}`"))),
                })
                .collect()
        };
        let mut meta: IndexMap<String, Value> = doc
            .get("meta")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing `meta` object".into()))?
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let grid_name = match meta.shift_remove(GRID_KEY) {
            Some(Value::String(s)) => s,
            _ => "n_g".to_string(),
        };
        let grid = numbers(doc.get("grid").unwrap_or(&Value::Null), "grid")?;
        let mut table = SweepTable::new(grid_name, grid)?;
        let columns = doc
            .get("columns")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing `columns` object".into()))?;
        for (name, values) in columns {
            table.push_column(name.clone(), numbers(values, name)?)?;
        }
        table.meta = meta;
        Ok(table)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::from_csv(text),
            Format::Json => Self::from_json(text),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>, format: Format) -> Result<()> {
        std::fs::write(path, self.render(format))?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>, format: Format) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, format)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SweepTable {
        let mut t = SweepTable::new("n_g", vec![-1.0, 0.1, 1.0 / 3.0]).unwrap();
        t.push_column("E0", vec![0.1 + 0.2, -1e-300, 12345.678901234567])
            .unwrap();
        t.push_column("chi", vec![f64::NAN, 1.0, std::f64::consts::PI]).unwrap();
        t.set_meta("e_j", 0.2);
        t.set_meta("pairs_total", 10);
        t.set_meta("policy", json!({"mode": "adaptive", "rtol": 1e-9}));
        t
    }

    fn same(a: &SweepTable, b: &SweepTable) -> bool {
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        a.grid_name == b.grid_name
            && bits(&a.grid) == bits(&b.grid)
            && a.meta == b.meta
            && a.columns.len() == b.columns.len()
            && a.columns.iter().zip(&b.columns).all(|((ka, va), (kb, vb))| {
                ka == kb
                    && va
                        .iter()
                        .zip(vb)
                        .all(|(x, y)| x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()))
            })
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let text = t.to_csv();
        assert!(text.contains("\nn_g,E0,chi\n"));
        assert!(text.starts_with("# e_j = 0.2\n"));
        assert!(same(&t, &SweepTable::from_csv(&text).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        let text = t.to_json();
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert!(doc["columns"]["chi"][0].is_null());
        assert!(same(&t, &SweepTable::from_json(&text).unwrap()));
    }

    #[test]
    fn rejects_bad_grids_and_columns() {
        assert!(SweepTable::new("x", vec![]).is_err());
        assert!(SweepTable::new("x", vec![0.0, 0.0]).is_err());
        assert!(SweepTable::new("x", vec![1.0, f64::NAN]).is_err());
        let mut t = SweepTable::new("x", vec![0.0, 1.0]).unwrap();
        assert!(t.push_column("y", vec![1.0]).is_err());
        assert!(SweepTable::from_csv("x,y\n1,2,3\n").is_err());
        assert!(SweepTable::from_csv("x,y\n1,abc\n").is_err());
        assert!(SweepTable::from_json("{\"grid\": []}").is_err());
    }

    #[test]
    fn format_parsing() {
        assert_eq!("CSV".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }

    proptest! {
        #[test]
        fn doubles_round_trip(values in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..20)) {
            let grid: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
            let mut t = SweepTable::new("n_g", grid).unwrap();
            t.push_column("v", values).unwrap();
            prop_assert!(same(&t, &SweepTable::from_csv(&t.to_csv()).unwrap()));
            prop_assert!(same(&t, &SweepTable::from_json(&t.to_json()).unwrap()));
        }
    }
}
