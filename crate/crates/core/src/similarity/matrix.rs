use std::fmt::Write as _;

use super::Snapshot;

/// Cell similarities `s[i][j]` in `[0, 1]` between context snapshot `i`
/// (rows) and evaluated snapshot `j` (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics unless all rows have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows: rows.len(), cols, data: rows.concat() }
    }

    /// `s = 1 - d / 2` with `d` the mean absolute feature difference of two
    /// normalized snapshots.
    pub fn build(context: &[Snapshot], evaluated: &[Snapshot]) -> Self {
        Self::from_fn(context.len(), evaluated.len(), |i, j| cell_similarity(&context[i], &evaluated[j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Whitespace-separated dense dump, one row per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    out.push(' ');
                }
                write!(out, "{:.6}", self.get(i, j)).expect("string write");
            }
            out.push('\n');
        }
        out
    }
}

/// Mean Manhattan distance of two snapshots in `[-1, 1]^k`, in `[0, 2]`.
pub fn snapshot_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "snapshot dimension mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

pub fn cell_similarity(a: &[f64], b: &[f64]) -> f64 {
    1.0 - snapshot_distance(a, b) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        assert_eq!(snapshot_distance(&[0.0, 0.5], &[0.5, 0.5]), 0.25);
        assert_eq!(cell_similarity(&[0.0, 0.5], &[0.5, 0.5]), 0.875);
        assert_eq!(cell_similarity(&[-1.0; 10], &[1.0; 10]), 0.0);
        assert_eq!(cell_similarity(&[0.3; 10], &[0.3; 10]), 1.0);
    }

    #[test]
    fn build_orients_rows_as_context() {
        let c = [[0.0; 10]; 3];
        let e = [[1.0; 10]; 2];
        let m = SimilarityMatrix::build(&c, &e);
        assert_eq!((m.rows(), m.cols()), (3, 2));
        assert_eq!(m.get(2, 1), 0.5);
        assert_eq!(m.dump().lines().count(), 3);
    }
}
