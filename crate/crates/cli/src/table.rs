//! Numeric tables and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde::Serialize;

/// A single table cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Int(usize),
    Num(f64),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Value::Int(i) => i as f64,
            Value::Num(x) => x,
        }
    }
}

/// Formats `x` with 9 significant digits: fixed notation, or scientific
/// below `1e-4` in magnitude.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return "nan".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    if x.abs() < 1e-4 {
        return format!("{x:.8e}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Self {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Values of one column, by header name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match *v {
                    Value::Int(i) => i.to_string(),
                    Value::Num(x) => format_sig9(x),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_sig9(0.8535533905932737), "0.853553391");
        assert_eq!(format_sig9(1.0), "1.00000000");
        assert_eq!(format_sig9(0.0), "0");
        assert_eq!(format_sig9(123.456), "123.456000");
        assert_eq!(format_sig9(-0.0012345678912), "-0.00123456789");
        assert_eq!(format_sig9(2.5258684e-12), "2.52586840e-12");
        assert_eq!(format_sig9(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("t", &["d", "F"]);
        t.push(vec![2usize.into(), 0.5.into()]);
        t.push(vec![3usize.into(), 0.25.into()]);
        assert_eq!(t.to_csv(), "d,F\n2,0.500000000\n3,0.250000000\n");
        assert_eq!(t.column("F").unwrap(), vec![0.5, 0.25]);
        assert!(t.column("x").is_none());
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new("t", &["d", "F"]);
        t.push(vec![2usize.into(), 0.5.into()]);
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["columns"][1], "F");
        assert_eq!(v["rows"][0][0], 2);
        assert_eq!(v["rows"][0][1], 0.5);
    }
}
