//! Plain CSV tables for experiment output.

use std::fmt::Write as _;

/// A row type with a fixed CSV schema.
pub trait CsvRow {
    const HEADER: &'static [&'static str];

    fn values(&self) -> Vec<f64>;
}

/// Header line plus one line per row; numbers use shortest round-trip
/// decimals so the file is byte-stable and parses back exactly.
pub fn to_csv<R: CsvRow>(rows: &[R]) -> String {
    let mut out = R::HEADER.join(",");
    out.push('\n');
    for row in rows {
        for (i, v) in row.values().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Pair(f64, f64);

    impl CsvRow for Pair {
        const HEADER: &'static [&'static str] = &["a", "b"];

        fn values(&self) -> Vec<f64> {
            vec![self.0, self.1]
        }
    }

    #[test]
    fn writes_header_and_rows() {
        let csv = to_csv(&[Pair(1.0, 0.1), Pair(20.0, 1.0 / 3.0)]);
        assert_eq!(csv, "a,b\n1,0.1\n20,0.3333333333333333\n");
        let back: f64 = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }
}
