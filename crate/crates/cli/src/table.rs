//! Tabular output. Floats are written with 12 significant digits in both
//! CSV and JSON so a table read back and rewritten is byte-identical.

use std::io::{Read, Write};

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

/// `{:.11e}`: one leading digit plus eleven decimals.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

fn rounded(x: f64) -> f64 {
    format_float(x).parse().unwrap_or(x)
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => Number::from_f64(rounded(*x)).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }

    /// Inverse of the CSV rendering.
    fn from_csv(field: &str) -> Cell {
        if field.is_empty() {
            return Cell::Empty;
        }
        if let Ok(b) = field.parse::<bool>() {
            return Cell::Bool(b);
        }
        if let Ok(i) = field.parse::<i64>() {
            return Cell::Int(i);
        }
        let numeric = field.contains(['.', 'e']) || matches!(field, "NaN" | "inf" | "-inf");
        match field.parse::<f64>() {
            Ok(x) if numeric => Cell::Float(x),
            _ => Cell::Text(field.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    /// An array of row objects with keys in column order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn read_csv<R: Read>(input: R) -> csv::Result<Table> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(Cell::from_csv).collect());
        }
        Ok(Table { columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["n", "x", "flag", "label", "maybe"]);
        t.push(vec![1usize.into(), 0.1.into(), true.into(), "a b".into(), None.into()]);
        t.push(vec![2usize.into(), (-1.0 / 3.0).into(), false.into(), "c,d".into(), Some(2e-300).into()]);
        t.push(vec![3usize.into(), f64::NAN.into(), false.into(), "x\"y".into(), Some(0.0).into()]);
        t
    }

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(format_float(0.1), "1.00000000000e-1");
        assert_eq!(format_float(-1.0 / 3.0), "-3.33333333333e-1");
        assert_eq!(format_float(0.0), "0.00000000000e0");
    }

    #[test]
    fn csv_layout() {
        let s = sample().to_csv_string();
        let first: Vec<&str> = s.lines().take(2).collect();
        assert_eq!(first, ["n,x,flag,label,maybe", "1,1.00000000000e-1,true,a b,"]);
        assert!(!s.contains('\r'));
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let s = sample().to_csv_string();
        let back = Table::read_csv(s.as_bytes()).unwrap();
        assert_eq!(back.to_csv_string(), s);
        assert_eq!(back.rows[0][1], Cell::Float(0.1));
    }

    #[test]
    fn json_keeps_column_order_and_rounds() {
        let v = sample().to_json();
        let row = v[1].as_object().unwrap();
        assert_eq!(row.keys().cloned().collect::<Vec<_>>(), ["n", "x", "flag", "label", "maybe"]);
        assert_eq!(row["x"].as_f64().unwrap(), -0.333333333333);
        assert!(v[0]["maybe"].is_null());
        assert!(v[2]["x"].is_null());
    }
}
