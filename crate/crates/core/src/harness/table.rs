use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "projgap.v1";

/// Formats a float with 17 significant digits; non-finite values print as
/// `nan`, `inf` or `-inf`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => fmt_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(_) => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

/// A named report: key/value metadata plus an optional table.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub name: String,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    /// Adds every field of a serializable struct as metadata, prefixed
    /// with `prefix.` when the prefix is nonempty.
    pub fn meta_struct(&mut self, prefix: &str, value: &impl Serialize) -> &mut Self {
        if let Value::Object(map) = serde_json::to_value(value).expect("report value serializes") {
            for (k, v) in map {
                let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
                let cell = match v {
                    Value::Bool(b) => Cell::Bool(b),
                    Value::Number(n) if n.is_u64() || n.is_i64() => Cell::Int(n.as_i64().unwrap_or(i64::MAX)),
                    Value::Number(n) => Cell::Float(n.as_f64().unwrap_or(f64::NAN)),
                    Value::Null => Cell::Float(f64::NAN),
                    other => Cell::Text(other.to_string()),
                };
                self.meta.push((key, cell));
            }
        }
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    /// First line `#schema=projgap.v1`, then `#key=value` metadata, then
    /// the table. Without a table the metadata is written as `key,value`
    /// rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!("#schema={SCHEMA}\n#report={}\n", self.name);
        if self.columns.is_empty() {
            out.push_str("key,value\n");
            for (k, v) in &self.meta {
                out.push_str(&format!("{k},{}\n", v.csv()));
            }
            return out;
        }
        for (k, v) in &self.meta {
            out.push_str(&format!("#{k}={}\n", v.csv()));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), v.json());
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> =
                    self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA));
        doc.insert("report".into(), json!(self.name));
        doc.insert("meta".into(), Value::Object(meta));
        if !self.columns.is_empty() {
            doc.insert("columns".into(), json!(self.columns));
            doc.insert("rows".into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serializes");
        s.push('\n');
        s
    }
}
