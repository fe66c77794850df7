//! Matrix literals: JSON `{"n": int, "rows": [[...], ...]}` and plain CSV
//! (n rows of n comma-separated decimals). Decimal text preserves at least
//! 15 significant digits; both writers use shortest round-trip formatting,
//! so reloading reproduces the value bit-for-bit.

use super::SquareMatrix;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl SquareMatrix {
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<f64>> = (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.get(i, j)).collect())
            .collect();
        serde_json::to_string(&MatrixJson { n: self.n(), rows })
            .expect("matrix serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: MatrixJson = serde_json::from_str(text)?;
        if parsed.rows.len() != parsed.n || parsed.rows.iter().any(|r| r.len() != parsed.n) {
            return Err(Error::InvalidData {
                expected: parsed.n * parsed.n,
                got: parsed.rows.iter().map(Vec::len).sum(),
            });
        }
        Self::from_rows(&parsed.rows)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n() {
            let row: Vec<String> = (0..self.n())
                .map(|j| format!("{}", self.get(i, j)))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let rows: Vec<Vec<f64>> = text
            .lines()
            .filter(|line| !line.trim().is_empty())
            .map(|line| {
                line.split(',')
                    .map(|cell| {
                        cell.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse(format!("bad matrix entry {cell:?}: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&rows)
    }

    /// Reads a matrix from a file, dispatching on the `.csv` extension;
    /// anything else is treated as JSON.
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        {
            Self::from_csv(&text)
        } else {
            Self::from_json(&text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn json_fixture_parses() {
        let m = SquareMatrix::from_json(r#"{"n": 2, "rows": [[1, 2], [3, 4]]}"#).unwrap();
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.n(), 2);
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let mut rng = sample::rng(41);
        for n in 1..=6 {
            let m = sample::matrix(&mut rng, n);
            let back = SquareMatrix::from_json(&m.to_json()).unwrap();
            // shortest round-trip formatting reproduces every bit
            assert_eq!(back, m);
        }
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let mut rng = sample::rng(42);
        let m = sample::matrix(&mut rng, 4);
        let back = SquareMatrix::from_csv(&m.to_csv()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn csv_accepts_whitespace_and_rejects_garbage() {
        let m = SquareMatrix::from_csv("1, 2\n3 ,4\n").unwrap();
        assert_eq!(m.get(0, 1), 2.0);
        assert!(SquareMatrix::from_csv("1,2\n3\n").is_err());
        assert!(SquareMatrix::from_csv("1,x\n3,4\n").is_err());
    }

    #[test]
    fn json_shape_mismatch_is_rejected() {
        assert!(SquareMatrix::from_json(r#"{"n": 3, "rows": [[1, 2], [3, 4]]}"#).is_err());
        assert!(SquareMatrix::from_json(r#"{"n": 2, "rows": [[1, 2], [3]]}"#).is_err());
        assert!(SquareMatrix::from_json("not json").is_err());
    }
}
