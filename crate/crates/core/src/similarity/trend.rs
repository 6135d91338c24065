use serde::{Deserialize, Serialize};

use super::SimilarityMatrix;

/// Diagonal run of `len` cells starting at `(row, col)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trend {
    pub row: usize,
    pub col: usize,
    pub len: usize,
}

impl Trend {
    pub fn end_row(&self) -> usize {
        self.row + self.len - 1
    }

    pub fn end_col(&self) -> usize {
        self.col + self.len - 1
    }

    pub fn fits(&self, m: &SimilarityMatrix) -> bool {
        self.len >= 1 && self.row + self.len <= m.rows() && self.col + self.len <= m.cols()
    }
}

/// Sum of the trend's cells times its length squared.
pub fn trend_value(t: &Trend, m: &SimilarityMatrix) -> f64 {
    let sum: f64 = (0..t.len).map(|k| m.get(t.row + k, t.col + k)).sum();
    sum * (t.len * t.len) as f64
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("trend {0:?} leaves the matrix")]
    OutOfBounds(Trend),
    #[error("column {0} is not covered exactly once")]
    Coverage(usize),
    #[error("trends {0:?} and {1:?} could be merged")]
    Mergeable(Trend, Trend),
}

/// Trends covering every column exactly once, ordered by column.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendSeries {
    pub trends: Vec<Trend>,
}

impl TrendSeries {
    pub fn validate(&self, m: &SimilarityMatrix) -> Result<(), SeriesError> {
        let mut sorted = self.trends.clone();
        sorted.sort_by_key(|t| t.col);
        let mut next_col = 0;
        for t in &sorted {
            if !t.fits(m) {
                return Err(SeriesError::OutOfBounds(*t));
            }
            if t.col != next_col {
                return Err(SeriesError::Coverage(next_col.min(t.col)));
            }
            next_col = t.col + t.len;
        }
        if next_col != m.cols() {
            return Err(SeriesError::Coverage(next_col));
        }
        for w in sorted.windows(2) {
            if w[1].row == w[0].end_row() + 1 {
                return Err(SeriesError::Mergeable(w[0], w[1]));
            }
        }
        Ok(())
    }

    /// `sum of v(t)` divided by the cube of the column count.
    pub fn value(&self, m: &SimilarityMatrix) -> Result<f64, SeriesError> {
        self.validate(m)?;
        Ok(self.raw_value(m))
    }

    pub(crate) fn raw_value(&self, m: &SimilarityMatrix) -> f64 {
        let n = m.cols() as f64;
        self.trends.iter().map(|t| trend_value(t, m)).sum::<f64>() / (n * n * n)
    }
}

/// Largest side accepted by [`brute_force_trend_series`].
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Exhaustive maximum over all trend-series; `None` above the size limit
/// or for an empty matrix.
pub fn brute_force_trend_series(m: &SimilarityMatrix) -> Option<(f64, TrendSeries)> {
    if m.rows() == 0 || m.cols() == 0 || m.rows() > BRUTE_FORCE_LIMIT || m.cols() > BRUTE_FORCE_LIMIT {
        return None;
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut stack = Vec::new();
    enumerate(m, 0, None, &mut stack, &mut best);
    let n = m.cols() as f64;
    Some((best.0 / (n * n * n), TrendSeries { trends: best.1 }))
}

fn enumerate(
    m: &SimilarityMatrix,
    col: usize,
    prev_end_row: Option<usize>,
    stack: &mut Vec<Trend>,
    best: &mut (f64, Vec<Trend>),
) {
    if col == m.cols() {
        let total: f64 = stack.iter().map(|t| trend_value(t, m)).sum();
        if total > best.0 {
            *best = (total, stack.clone());
        }
        return;
    }
    for len in 1..=m.cols() - col {
        for row in 0..m.rows() {
            let t = Trend { row, col, len };
            if !t.fits(m) || prev_end_row.is_some_and(|p| p + 1 == row) {
                continue;
            }
            stack.push(t);
            enumerate(m, col + len, Some(t.end_row()), stack, best);
            stack.pop();
        }
    }
}
