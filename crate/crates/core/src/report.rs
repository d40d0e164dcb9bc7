//! Canonical JSON: sorted keys, floats at 12 significant digits, plain
//! decimals for magnitudes in `[1e-3, 1e15)` and exponent form otherwise.

use serde_json::{Map, Number, Value};

const SIG_DIGITS: usize = 12;

pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs();
    if (1e-3..1e15).contains(&mag) {
        let exponent = mag.log10().floor() as i32;
        let decimals = (SIG_DIGITS as i32 - 1 - exponent).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_fraction(&s).to_string()
    } else {
        let s = format!("{x:.prec$e}", prec = SIG_DIGITS - 1);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_fraction(mantissa), exp)
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn format_number(n: &Number) -> String {
    if let Some(u) = n.as_u64() {
        u.to_string()
    } else if let Some(i) = n.as_i64() {
        i.to_string()
    } else {
        format_float(n.as_f64().expect("finite JSON number"))
    }
}

/// Serializes `value` canonically, pretty-printed with two-space indents and
/// a trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, indent: usize, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                newline(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            newline(indent, out);
            out.push(']');
        }
        Value::Object(map) => write_object(map, indent, out),
    }
}

fn write_object(map: &Map<String, Value>, indent: usize, out: &mut String) {
    if map.is_empty() {
        out.push_str("{}");
        return;
    }
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    out.push('{');
    for (i, key) in keys.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        newline(indent + 1, out);
        out.push_str(&Value::String((*key).clone()).to_string());
        out.push_str(": ");
        write_value(&map[*key], indent + 1, out);
    }
    newline(indent, out);
    out.push('}');
}

fn newline(indent: usize, out: &mut String) {
    out.push('\n');
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(-0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(0.75), "0.75");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(123456.789), "123456.789");
        assert_eq!(format_float(0.001), "0.001");
        assert_eq!(format_float(2.5e-10), "2.5e-10");
        assert_eq!(format_float(-1.234e-16), "-1.234e-16");
        assert_eq!(format_float(0.49999999999999994), "0.5");
        assert_eq!(format_float(2e20), "2e20");
    }

    #[test]
    fn keys_are_sorted_and_output_parses() {
        let v = json!({"b": 1, "a": [0.1, {"z": null, "y": true}], "c": "x\"y"});
        let s = to_canonical_string(&v);
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"y\"").unwrap() < s.find("\"z\"").unwrap());
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
