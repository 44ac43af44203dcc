//! Plain-text rendering of JSON reports for `--format table`.

use serde_json::{Map, Value};

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("{{{}}}", parts.join(","))
        }
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat_row(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.values().all(|x| is_scalar(x) || matches!(x, Value::Array(a) if a.iter().all(is_scalar))),
        _ => false,
    }
}

/// Rows of flat objects as an aligned table; columns in key order.
fn rows(items: &[Value], indent: &str) -> String {
    let mut columns: Vec<String> = Vec::new();
    for item in items {
        if let Value::Object(m) = item {
            for k in m.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| columns.iter().map(|c| item.get(c).map_or("-".to_string(), scalar)).collect())
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |values: &[String]| -> String {
        let padded: Vec<String> = values.iter().zip(&widths).map(|(v, &w)| format!("{v:<w$}")).collect();
        format!("{indent}{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&columns);
    out.push_str(&line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
    for r in &cells {
        out.push_str(&line(r));
    }
    out
}

fn object(m: &Map<String, Value>, indent: &str) -> String {
    let mut out = String::new();
    let nested = format!("{indent}  ");
    for (k, v) in m {
        match v {
            Value::Array(items) if !items.is_empty() && items.iter().all(is_flat_row) => {
                out.push_str(&format!("{indent}{k}:\n"));
                out.push_str(&rows(items, &nested));
            }
            Value::Array(items) if !items.iter().all(is_scalar) => {
                out.push_str(&format!("{indent}{k}:\n"));
                for item in items {
                    out.push_str(&block(item, &nested));
                }
            }
            Value::Object(inner) => {
                out.push_str(&format!("{indent}{k}:\n"));
                out.push_str(&object(inner, &nested));
            }
            _ => out.push_str(&format!("{indent}{k}: {}\n", scalar(v))),
        }
    }
    out
}

fn block(v: &Value, indent: &str) -> String {
    match v {
        Value::Object(m) => object(m, indent),
        Value::Array(items) if !items.is_empty() && items.iter().all(is_flat_row) => rows(items, indent),
        Value::Array(items) if items.iter().all(is_scalar) => format!("{indent}{}\n", scalar(v)),
        Value::Array(items) => items.iter().map(|i| block(i, indent)).collect(),
        other => format!("{indent}{}\n", scalar(other)),
    }
}

pub fn table(v: &Value) -> String {
    block(v, "")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flat_rows_align() {
        let v = json!([{"cover": [2], "full": "010101"}, {"cover": [1, 3], "full": "101010"}]);
        assert_eq!(table(&v), "cover  full\n-----  ------\n{2}    010101\n{1,3}  101010\n");
    }

    #[test]
    fn objects_nest() {
        let v = json!({"reachable": false, "witness": {"start": "00", "steps": [{"step": 1, "variable": "N1"}]}});
        let text = table(&v);
        assert!(text.starts_with("reachable: false\nwitness:\n"));
        assert!(text.contains("    step  variable\n"));
    }
}
