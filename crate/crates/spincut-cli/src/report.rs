//! Deterministic reports with stable key order.
//!
//! Reports render either as `key = value` text lines or as a JSON object
//! whose keys appear in insertion order. Both renderings are byte-stable
//! for identical inputs, seeds and tool versions, which the golden tests
//! rely on.

use std::fmt::Write as _;

#[derive(Debug, Clone)]
pub enum Value {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    Bits(Vec<u8>),
    FloatList(Vec<f64>),
    /// Rows of `(value, multiplicity)`, used for spectrum slices.
    Spectrum(Vec<(f64, usize)>),
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn float_repr(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v}")
    }
}

impl Value {
    fn render_text(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::Int(v) => v.to_string(),
            Value::Float(v) => float_repr(*v),
            Value::Bool(v) => v.to_string(),
            Value::Bits(bits) => bits.iter().map(|b| b.to_string()).collect(),
            Value::FloatList(vs) => {
                let items: Vec<String> = vs.iter().map(|v| float_repr(*v)).collect();
                format!("[{}]", items.join(", "))
            }
            Value::Spectrum(rows) => {
                let items: Vec<String> =
                    rows.iter().map(|(v, m)| format!("{} x{m}", float_repr(*v))).collect();
                format!("[{}]", items.join(", "))
            }
        }
    }

    fn render_json(&self) -> String {
        match self {
            Value::Str(s) => format!("\"{}\"", json_escape(s)),
            Value::Int(v) => v.to_string(),
            Value::Float(v) => float_repr(*v),
            Value::Bool(v) => v.to_string(),
            Value::Bits(bits) => {
                let items: Vec<String> = bits.iter().map(|b| b.to_string()).collect();
                format!("[{}]", items.join(", "))
            }
            Value::FloatList(vs) => {
                let items: Vec<String> = vs.iter().map(|v| float_repr(*v)).collect();
                format!("[{}]", items.join(", "))
            }
            Value::Spectrum(rows) => {
                let items: Vec<String> = rows
                    .iter()
                    .map(|(v, m)| format!("[{}, {m}]", float_repr(*v)))
                    .collect();
                format!("[{}]", items.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        let mut report = Report { entries: Vec::new() };
        report.push("tool", format!("spincut {}", env!("CARGO_PKG_VERSION")));
        report.push("command", command);
        report.push("seed", seed as i64);
        report
    }

    pub fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.entries.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = String::new();
                for (k, v) in &self.entries {
                    let _ = writeln!(out, "{k} = {}", v.render_text());
                }
                out
            }
            Format::Structured => {
                let mut out = String::from("{\n");
                for (i, (k, v)) in self.entries.iter().enumerate() {
                    let comma = if i + 1 == self.entries.len() { "" } else { "," };
                    let _ =
                        writeln!(out, "  \"{}\": {}{comma}", json_escape(k), v.render_json());
                }
                out.push_str("}\n");
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_are_deterministic() {
        let mut r = Report::new("analyze", 0);
        r.push("mesh.genus", 1usize);
        r.push("mesh.area", 1.0);
        r.push("spin.q", Value::Bits(vec![0, 1]));
        r.push("status", "pass");
        let a = r.render(Format::Text);
        let b = r.render(Format::Text);
        assert_eq!(a, b);
        assert!(a.contains("mesh.area = 1.0"));
        let j = r.render(Format::Structured);
        assert!(j.contains("\"spin.q\": [0, 1]"));
    }

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(float_repr(1.0), "1.0");
        // shortest round-trip representation: parsing recovers the value
        let v = 0.46001857571121755_f64;
        assert_eq!(float_repr(v).parse::<f64>().unwrap(), v);
    }
}
