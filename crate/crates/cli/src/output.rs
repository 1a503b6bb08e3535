//! Deterministic CSV and JSON writers. Payload bytes depend only on the
//! resolved configuration and the computed rows, never on timing, so
//! identical runs produce identical files.

use std::fmt::Write as _;

/// One table cell. `Null` renders as an empty CSV field / JSON null, for
/// columns that do not apply to a given row kind.
#[derive(Debug, Clone)]
pub enum Cell {
    UInt(u64),
    Float(f64),
    Str(String),
    Null,
}

/// A finished result set: the resolved configuration echo, a column header,
/// and the data rows in their final (sorted) order.
#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub command: &'static str,
    pub config: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub precision: usize,
}

/// Floating-point value at `p` significant digits: plain decimal notation in
/// the printf `%g` window, scientific outside it. Trailing zeros are kept so
/// every value carries exactly the configured precision.
pub fn format_sig(v: f64, p: usize) -> String {
    let p = p.max(1);
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exponent) = sci.split_once('e').expect("{:e} always has an exponent");
    let e: i32 = exponent.parse().expect("exponent is an integer");
    if e >= -4 && e < p as i32 {
        let decimals = (p as i32 - 1 - e).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{mantissa}e{e}")
    }
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
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
    out
}

impl OutputRecord {
    fn cell_csv(&self, cell: &Cell) -> String {
        match cell {
            Cell::UInt(v) => v.to_string(),
            Cell::Float(v) => format_sig(*v, self.precision),
            Cell::Str(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }

    fn cell_json(&self, cell: &Cell) -> String {
        match cell {
            Cell::UInt(v) => v.to_string(),
            // JSON has no inf/nan tokens; those surface as strings
            Cell::Float(v) if v.is_finite() => format_sig(*v, self.precision),
            Cell::Float(v) => format!("\"{}\"", format_sig(*v, self.precision)),
            Cell::Str(s) => format!("\"{}\"", escape_json(s)),
            Cell::Null => "null".into(),
        }
    }

    /// `#`-prefixed header block (version, resolved config), then a column
    /// header row, then one line per data row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# brickdist {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# command = {}", self.command);
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k} = {v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| self.cell_csv(c)).collect();
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    /// The same schema as one flat JSON object.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push('{');
        let _ = write!(out, "\"version\":\"{}\"", env!("CARGO_PKG_VERSION"));
        let _ = write!(out, ",\"command\":\"{}\"", escape_json(self.command));
        out.push_str(",\"config\":{");
        for (i, (k, v)) in self.config.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{}\":\"{}\"", escape_json(k), escape_json(v));
        }
        out.push_str("},\"columns\":[");
        for (i, c) in self.columns.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{c}\"");
        }
        out.push_str("],\"rows\":[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&self.cell_json(cell));
            }
            out.push(']');
        }
        out.push_str("]}");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(0.25, 3), "0.250");
        assert_eq!(format_sig(1.0 / 3.0, 5), "0.33333");
        assert_eq!(format_sig(3.8146827e-6, 6), "3.81468e-6");
        assert_eq!(format_sig(-1234.5, 3), "-1.23e3");
        assert_eq!(format_sig(123.0, 6), "123.000");
        assert_eq!(format_sig(1e15, 4), "1.000e15");
        assert_eq!(format_sig(f64::INFINITY, 4), "inf");
    }

    #[test]
    fn csv_and_json_round_the_same_data() {
        let rec = OutputRecord {
            command: "demo",
            config: vec![("q".into(), "2".into())],
            columns: vec!["t", "value", "provenance"],
            rows: vec![
                vec![Cell::UInt(0), Cell::Float(0.5), Cell::Str("exact".into())],
                vec![Cell::UInt(1), Cell::Null, Cell::Str("exact".into())],
            ],
            precision: 12,
        };
        let csv = rec.to_csv();
        assert!(csv.starts_with("# brickdist "));
        assert!(csv.contains("# q = 2"));
        assert!(csv.contains("t,value,provenance"));
        assert!(csv.contains("0,0.500000000000,exact"));
        assert!(csv.contains("1,,exact"));
        let json = rec.to_json();
        assert!(json.contains("\"config\":{\"q\":\"2\"}"));
        assert!(json.contains("[1,null,\"exact\"]"));
    }
}
