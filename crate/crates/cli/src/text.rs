//! Plain-text rendering of reports for `--format text`.

use serde_json::Value;

use crate::Report;

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    let status = if report.ok() { "ok" } else { "error" };
    out.push_str(&format!("{}: {status}\n", report.command));
    if let Some(m) = &report.message {
        out.push_str(&format!("message: {m}\n"));
    }
    if let Some(p) = &report.pointer {
        out.push_str(&format!("pointer: {p}\n"));
    }
    if let Some(r) = &report.result {
        write_value(&mut out, r, 0);
    }
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_string() && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_flat(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    write_value(out, x, depth + 1);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    write_value(out, x, depth + 1);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}
