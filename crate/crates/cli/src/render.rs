use std::io::{self, Write};

use lowdin::format::significant;
use lowdin::{CMatrix, CVector};
use serde_json::{Map, Value};

use crate::args::Format;

/// Builds output values rounded to a fixed number of significant digits.
#[derive(Debug, Clone, Copy)]
pub struct Rounder {
    pub digits: usize,
}

impl Rounder {
    pub fn num(&self, x: f64) -> Value {
        let rounded: f64 = significant(x, self.digits).parse().unwrap_or(x);
        // -0 prints as "-0" in JSON; keep outputs sign-stable.
        let rounded = if rounded == 0.0 { 0.0 } else { rounded };
        serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }

    pub fn nums(&self, xs: &[f64]) -> Value {
        Value::Array(xs.iter().map(|&x| self.num(x)).collect())
    }

    pub fn cvec(&self, v: &CVector<f64>) -> Value {
        let mut m = Map::new();
        m.insert("re".into(), Value::Array(v.iter().map(|z| self.num(z.re)).collect()));
        if v.iter().any(|z| self.num(z.im).as_f64() != Some(0.0)) {
            m.insert("im".into(), Value::Array(v.iter().map(|z| self.num(z.im)).collect()));
        }
        Value::Object(m)
    }

    pub fn cmat(&self, a: &CMatrix<f64>) -> Value {
        let part = |f: &dyn Fn(usize, usize) -> f64| {
            Value::Array(
                (0..a.nrows())
                    .map(|i| Value::Array((0..a.ncols()).map(|j| self.num(f(i, j))).collect()))
                    .collect(),
            )
        };
        let mut m = Map::new();
        m.insert("re".into(), part(&|i, j| a[(i, j)].re));
        if a.iter().any(|z| self.num(z.im).as_f64() != Some(0.0)) {
            m.insert("im".into(), part(&|i, j| a[(i, j)].im));
        }
        Value::Object(m)
    }
}

pub fn emit(value: &Value, format: Format, digits: usize, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, value)?;
            writeln!(out)
        }
        Format::Text => {
            let mut lines = Vec::new();
            text(value, "", digits, &mut lines);
            for line in lines {
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        Format::Csv => {
            writeln!(out, "field,value")?;
            let mut rows = Vec::new();
            csv(value, "", digits, &mut rows);
            for (k, v) in rows {
                writeln!(out, "{k},{v}")?;
            }
            Ok(())
        }
    }
}

fn scalar(v: &Value, digits: usize) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| significant(x, digits)),
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn is_flat(items: &[Value]) -> bool {
    items.iter().all(|v| !v.is_array() && !v.is_object())
}

fn complex(re: &Value, im: Option<&Value>, digits: usize) -> String {
    let re_s = scalar(re, digits);
    match im.and_then(Value::as_f64) {
        Some(i) if i != 0.0 => {
            let sign = if i < 0.0 { '-' } else { '+' };
            format!("{re_s}{sign}{}i", significant(i.abs(), digits))
        }
        _ => re_s,
    }
}

/// `{re, im?}` objects holding a vector or matrix render as complex entries.
fn complex_rows(map: &Map<String, Value>, digits: usize) -> Option<Vec<String>> {
    let re = map.get("re")?.as_array()?;
    if map.keys().any(|k| k != "re" && k != "im") {
        return None;
    }
    let im = map.get("im").and_then(Value::as_array);
    if is_flat(re) {
        let cells: Vec<String> = re
            .iter()
            .enumerate()
            .map(|(i, r)| complex(r, im.and_then(|m| m.get(i)), digits))
            .collect();
        return Some(vec![cells.join("  ")]);
    }
    let mut rows = Vec::new();
    for (i, row) in re.iter().enumerate() {
        let row = row.as_array()?;
        let im_row = im.and_then(|m| m.get(i)).and_then(Value::as_array);
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, r)| complex(r, im_row.and_then(|m| m.get(j)), digits))
            .collect();
        rows.push(cells.join("  "));
    }
    Some(rows)
}

fn text(value: &Value, prefix: &str, digits: usize, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            if let Some(rows) = complex_rows(map, digits) {
                if rows.len() == 1 {
                    lines.push(format!("{prefix}: {}", rows[0]));
                } else {
                    lines.push(format!("{prefix}:"));
                    lines.extend(rows.into_iter().map(|r| format!("  {r}")));
                }
                return;
            }
            for (k, v) in map {
                text(v, &join(prefix, k), digits, lines);
            }
        }
        Value::Array(items) if is_flat(items) => {
            let cells: Vec<String> = items.iter().map(|v| scalar(v, digits)).collect();
            lines.push(format!("{prefix}: {}", cells.join("  ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                text(v, &format!("{prefix}[{i}]"), digits, lines);
            }
        }
        v => lines.push(format!("{prefix}: {}", scalar(v, digits))),
    }
}

fn csv(value: &Value, prefix: &str, digits: usize, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                csv(v, &join(prefix, k), digits, rows);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                csv(v, &format!("{prefix}[{i}]"), digits, rows);
            }
        }
        v => rows.push((prefix.to_string(), scalar(v, digits))),
    }
}
