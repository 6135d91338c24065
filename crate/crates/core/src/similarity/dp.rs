use super::{SimilarityMatrix, Trend, TrendSeries};

/// Maximum trend-series value of `m` with one optimal witness.
///
/// `best(r, c)` is the largest `sum of v(t)` over series covering columns
/// `0..=c` whose last trend ends at `(r, c)`. A last trend of length `l`
/// adds its diagonal sum times `l^2` to the best series ending in column
/// `c - l` at any row except `r - l`, the one it would merge with. Keeping
/// the two best rows of each finished column makes that lookup O(1), so
/// the whole program visits `O(m * n * min(m, n))` cells. Diagonal prefix
/// sums are stored diagonal by diagonal so the inner loop reads memory in
/// order.
///
/// Among equal values the longer last trend wins, then the smaller row.
/// An empty matrix scores 0.
pub fn best_trend_series(m: &SimilarityMatrix) -> (f64, TrendSeries) {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return (0.0, TrendSeries::default());
    }
    let (offsets, prefix) = diagonal_prefix(m);
    let mut top1v = vec![f64::NEG_INFINITY; cols];
    let mut top1r = vec![-1isize; cols];
    let mut top2v = vec![f64::NEG_INFINITY; cols];
    let mut top2r = vec![-1isize; cols];
    // diagonal of each column's best row, compared against the merge shift
    let mut top1d = vec![isize::MIN; cols];
    let mut lens = vec![0u32; rows * cols];
    let mut column = vec![0.0; rows];

    for c in 0..cols {
        for r in 0..rows {
            let t = r.min(c);
            let base = offsets[c + rows - 1 - r];
            let diag = &prefix[base..base + t + 2];
            let end = diag[t + 1];
            // a predecessor at (r', c - l) merges iff r' - (c - l) == r - c
            let shift = r as isize - c as isize;
            let mut best = f64::NEG_INFINITY;
            let mut best_len = 0;
            let with_pred = (t + 1).min(c);
            let mut lf = 0.0;
            for l in 1..=with_pred {
                lf += 1.0;
                let k = c - l;
                let q = if top1d[k] != shift { top1v[k] } else { top2v[k] };
                let v = (end - diag[t + 1 - l]) * (lf * lf) + q;
                if v >= best {
                    best = v;
                    best_len = l;
                }
            }
            if c <= r {
                let l = c + 1;
                let v = (end - diag[0]) * (l * l) as f64;
                if v >= best {
                    best = v;
                    best_len = l;
                }
            }
            column[r] = best;
            lens[r * cols + c] = best_len as u32;
        }
        for (r, &v) in column.iter().enumerate() {
            let r = r as isize;
            if v > top1v[c] {
                (top2v[c], top2r[c]) = (top1v[c], top1r[c]);
                (top1v[c], top1r[c]) = (v, r);
            } else if v > top2v[c] {
                (top2v[c], top2r[c]) = (v, r);
            }
        }
        top1d[c] = top1r[c] - c as isize;
    }

    let last = cols - 1;
    let mut end_row = 0;
    for r in 1..rows {
        let (v, l) = (column[r], lens[r * cols + last]);
        let (bv, bl) = (column[end_row], lens[end_row * cols + last]);
        if v > bv || (v == bv && l > bl) {
            end_row = r;
        }
    }
    let n = cols as f64;
    let value = column[end_row] / (n * n * n);

    let mut trends = Vec::new();
    let (mut r, mut c) = (end_row, last);
    loop {
        let l = lens[r * cols + c] as usize;
        trends.push(Trend { row: r + 1 - l, col: c + 1 - l, len: l });
        if l == c + 1 {
            break;
        }
        let k = c - l;
        let banned = r as isize - l as isize;
        r = if top1r[k] != banned { top1r[k] } else { top2r[k] } as usize;
        c = k;
    }
    trends.reverse();
    (value, TrendSeries { trends })
}

/// Per-diagonal running sums with a leading zero. Diagonal `g` holds the
/// cells with `c - r == g - (rows - 1)`, in increasing column order.
fn diagonal_prefix(m: &SimilarityMatrix) -> (Vec<usize>, Vec<f64>) {
    let (rows, cols) = (m.rows(), m.cols());
    let diagonals = rows + cols - 1;
    let mut offsets = Vec::with_capacity(diagonals);
    let mut prefix = Vec::with_capacity(rows * cols + diagonals);
    for g in 0..diagonals {
        let delta = g as isize - (rows as isize - 1);
        let (r0, c0) = if delta < 0 { ((-delta) as usize, 0) } else { (0, delta as usize) };
        let len = (rows - r0).min(cols - c0);
        offsets.push(prefix.len());
        let mut acc = 0.0;
        prefix.push(acc);
        for t in 0..len {
            acc += m.get(r0 + t, c0 + t);
            prefix.push(acc);
        }
    }
    (offsets, prefix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::brute_force_trend_series;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_diagonal_scores_one() {
        for n in 1..12 {
            let m = SimilarityMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.2 });
            let (v, w) = best_trend_series(&m);
            assert_eq!(v, 1.0);
            assert_eq!(w.trends, vec![Trend { row: 0, col: 0, len: n }]);
        }
    }

    #[test]
    fn single_cell_and_single_row() {
        let (v, _) = best_trend_series(&SimilarityMatrix::from_rows(&[vec![0.4]]));
        assert_eq!(v, 0.4);
        let row = SimilarityMatrix::from_rows(&[vec![0.5, 1.0, 0.25]]);
        let (v, w) = best_trend_series(&row);
        assert!((v - 1.75 / 27.0).abs() < 1e-15);
        assert_eq!(w.trends.len(), 3);
        assert_eq!(w.value(&row), Ok(v));
    }

    #[test]
    fn merge_ban_forces_gap() {
        // the best unconstrained pick would be two runs that merge
        let m = SimilarityMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        let (v, _) = best_trend_series(&m);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn matches_brute_force_on_rectangles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (r, c) = (rng.random_range(1..=6), rng.random_range(1..=6));
            let m = SimilarityMatrix::from_fn(r, c, |_, _| rng.random::<f64>());
            let (dp, w) = best_trend_series(&m);
            let (bf, _) = brute_force_trend_series(&m).unwrap();
            assert!((dp - bf).abs() <= 1e-12, "{r}x{c}: {dp} vs {bf}");
            assert!((w.value(&m).unwrap() - dp).abs() <= 1e-12);
        }
    }

    #[test]
    fn ties_prefer_longer_final_trend() {
        let m = SimilarityMatrix::from_fn(3, 3, |_, _| 1.0);
        let (_, w) = best_trend_series(&m);
        assert_eq!(w.trends, vec![Trend { row: 0, col: 0, len: 3 }]);
    }
}
