//! Deterministic output: a small JSON value with fixed field order and
//! 17-significant-digit floats, CSV rows built from the same float
//! formatter, and 6-significant-digit human rendering.

use std::fmt::Write as _;

/// 17 significant digits, fixed scientific form. Identical inputs always
/// produce identical bytes, and 17 digits round-trip f64 exactly.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Human-facing rendering rounded to 6 significant digits.
pub fn g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e7).contains(&a) {
        let digits = (5 - a.log10().floor() as i64).max(0) as usize;
        format!("{x:.digits$}")
    } else {
        format!("{x:.5e}")
    }
}

/// JSON value with insertion-ordered object fields.
#[derive(Debug, Clone)]
pub enum JVal {
    Null,
    Bool(bool),
    UInt(u64),
    Num(f64),
    Str(String),
    Arr(Vec<JVal>),
    Obj(Vec<(String, JVal)>),
}

impl JVal {
    pub fn obj() -> Self {
        JVal::Obj(Vec::new())
    }

    pub fn field(mut self, key: &str, value: JVal) -> Self {
        match &mut self {
            JVal::Obj(fields) => fields.push((key.to_string(), value)),
            _ => panic!("field() on a non-object"),
        }
        self
    }

    pub fn str(s: &str) -> Self {
        JVal::Str(s.to_string())
    }

    /// Floats that are not finite become `null` rather than invalid JSON.
    pub fn num(x: f64) -> Self {
        if x.is_finite() {
            JVal::Num(x)
        } else {
            JVal::Null
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            JVal::Null => out.push_str("null"),
            JVal::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JVal::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            JVal::Num(x) => out.push_str(&f17(*x)),
            JVal::Str(s) => write_escaped(s, out),
            JVal::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            JVal::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_escaped(k, out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
