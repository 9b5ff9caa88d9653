//! Deterministic serialization: JSON with floats at 17 significant digits
//! and CSV with a stable column order.

use serde::Serialize;
use serde_json::ser::Formatter;
use std::io;

/// JSON formatter writing every float with 17 significant digits, so that
/// reports are byte-identical across runs and platforms and round-trip
/// losslessly.
pub struct Float17Formatter;

impl Formatter for Float17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{:.16e}", value)
        } else {
            // JSON has no inf/nan; emit null like serde_json does.
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any report to deterministic JSON text.
pub fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17Formatter);
    value.serialize(&mut ser).expect("serializable report");
    out.push(b'\n');
    String::from_utf8(out).expect("json is utf8")
}

/// One float cell with 17 significant digits.
pub fn csv_f64(value: f64) -> String {
    format!("{:.16e}", value)
}

/// Assemble a CSV from a header and rows (no quoting needed for the
/// numeric/tag columns used here).
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    s.push_str(&header.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_17_digits() {
        #[derive(Serialize)]
        struct S {
            x: f64,
        }
        let j = to_json_17(&S { x: 0.1 });
        assert!(j.contains("1.0000000000000001e-1"), "{j}");
    }

    #[test]
    fn csv_shape() {
        let doc = csv_document(
            &["a", "b"],
            &[vec!["1".into(), csv_f64(2.0)], vec!["3".into(), csv_f64(0.5)]],
        );
        assert_eq!(doc.lines().count(), 3);
        assert!(doc.starts_with("a,b\n"));
    }
}
