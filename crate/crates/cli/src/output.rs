//! Output formatting shared by all subcommands: 12-significant-digit
//! numbers, table/csv/json rendering, deterministic byte-for-byte.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Formats with 12 significant digits, positional notation for moderate
/// exponents and scientific otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        format!("{:.*e}", 11, x)
    }
}

/// A column-aligned table, a csv body, or rows for a json array — all from
/// the same header + string rows.
pub struct Rows {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Rows {
    pub fn new(header: &[&str]) -> Self {
        Rows {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_table(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        let write_row = |cells: &[String], out: &mut String| {
            for (i, cell) in cells.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                let _ = write!(out, "{:<width$}", cell, width = widths[i]);
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        };
        write_row(&self.header, &mut out);
        for row in &self.rows {
            write_row(row, &mut out);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let escape = |cell: &str| -> String {
            if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
                format!("\"{}\"", cell.replace('"', "\"\""))
            } else {
                cell.to_string()
            }
        };
        out.push_str(
            &self
                .header
                .iter()
                .map(|c| escape(c))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    /// Rows as an array of objects keyed by the header.
    pub fn to_json_rows(&self) -> serde_json::Value {
        let arr: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (key, cell) in self.header.iter().zip(row) {
                    obj.insert(key.clone(), serde_json::Value::String(cell.clone()));
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(arr)
    }
}

/// Serializes a json value with a stable layout and a trailing newline.
pub fn json_to_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_is_twelve_significant_digits() {
        assert_eq!(sig12(0.4426949596407923), "0.442694959641");
        assert_eq!(sig12(2.1972245773362196), "2.19722457734");
        assert_eq!(sig12(-0.4426949596407923), "-0.442694959641");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1e-7), "1.00000000000e-7");
    }

    #[test]
    fn csv_escapes_commas() {
        let mut rows = Rows::new(&["a", "b"]);
        rows.push(vec!["x,y".into(), "plain".into()]);
        assert_eq!(rows.to_csv(), "a,b\n\"x,y\",plain\n");
    }

    #[test]
    fn table_alignment() {
        let mut rows = Rows::new(&["k", "value"]);
        rows.push(vec!["x".into(), "1".into()]);
        rows.push(vec!["long".into(), "22".into()]);
        let t = rows.to_table();
        assert_eq!(t, "k     value\nx     1\nlong  22\n");
    }
}
