//! CSV table writers with a fixed 17-significant-digit float format, so
//! every output byte is reproducible across runs and thread counts.

use crate::curve::fmt17;

/// A CSV table under construction.
#[derive(Debug, Default)]
pub struct CsvTable {
    text: String,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    /// Append a row of cells; use [`CsvTable::float`] / [`CsvTable::int`]
    /// to format the cells.
    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn float(x: f64) -> String {
        fmt17(x)
    }

    pub fn int(x: i64) -> String {
        x.to_string()
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Convergence-trace table: (cutoff, value) pairs.
pub fn trace_csv(name: &str, trace: &[(f64, f64)]) -> String {
    let mut t = CsvTable::new(&["cutoff", name]);
    for &(d, v) in trace {
        t.row(&[CsvTable::float(d), CsvTable::float(v)]);
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &x in &[0.1, -3.5e-14, 2.0 / 3.0, 1e300, 0.0] {
            let s = CsvTable::float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn table_layout() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.row(&[CsvTable::int(1), CsvTable::float(0.5)]);
        let s = t.finish();
        assert!(s.starts_with("a,b\n1,"));
        assert_eq!(s.lines().count(), 2);
    }
}
