//! Canonical JSON rendering: keys sorted, floats at 15 significant digits.
//!
//! serde_json already stores objects as ordered maps; this writer fixes the
//! one remaining source of nondeterminism, float formatting, by emitting
//! every non-integer number as `{:.14e}`. Integers print exactly.

use serde::Serialize;
use serde_json::Value;

pub fn fmt_float(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&v, &mut out, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(v: &Value, out: &mut String, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_float(n.as_f64().expect("finite float")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string encodes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                newline_indent(out, depth + 1);
                write_value(item, out, depth + 1);
            }
            newline_indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                newline_indent(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("key encodes"));
                out.push_str(": ");
                write_value(item, out, depth + 1);
            }
            newline_indent(out, depth);
            out.push('}');
        }
    }
}

fn newline_indent(out: &mut String, depth: usize) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_sort_and_floats_pin_to_fifteen_digits() {
        let v = json!({"zeta": 0.5, "alpha": {"b": 2u64, "a": [1.0, -3.25]}, "s": "x\"y"});
        let s = to_canonical_string(&v).unwrap();
        let alpha = s.find("\"alpha\"").unwrap();
        let zeta = s.find("\"zeta\"").unwrap();
        assert!(alpha < zeta);
        assert!(s.contains("5.00000000000000e-1"));
        assert!(s.contains("-3.25000000000000e0"));
        assert!(s.contains("\"x\\\"y\""));
        assert!(s.contains(": 2"));
        assert!(!s.contains("2.0"));
    }

    #[test]
    fn rendering_is_reproducible() {
        let v = json!({"t": [0.1, 0.2, 1e-17], "n": 7u32});
        assert_eq!(
            to_canonical_string(&v).unwrap(),
            to_canonical_string(&v).unwrap()
        );
    }
}
