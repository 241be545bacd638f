//! Minimal RFC 4180 CSV writer: header row, CRLF-free LF line endings,
//! quoting only where required.

use std::fmt::Write as _;

pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    writeln_row(&mut out, header.iter().map(|s| s.to_string()));
    for row in rows {
        writeln_row(&mut out, row.iter().cloned());
    }
    out
}

fn writeln_row(out: &mut String, fields: impl Iterator<Item = String>) {
    let mut first = true;
    for field in fields {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&quote(&field));
    }
    out.push('\n');
}

fn quote(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        let mut quoted = String::with_capacity(field.len() + 2);
        quoted.push('"');
        for c in field.chars() {
            if c == '"' {
                quoted.push('"');
            }
            quoted.push(c);
        }
        quoted.push('"');
        quoted
    } else {
        field.to_string()
    }
}

pub fn fmt_f64(v: f64) -> String {
    let mut s = String::new();
    let _ = write!(s, "{v}");
    s
}
