//! Similarity of two gameplays.
//!
//! Both games are reduced to snapshot time-lines of one player, normalized
//! together, and compared cell by cell. The score rewards long diagonal
//! runs of similar snapshots: a trend of length `l` is worth its summed
//! cell similarity times `l^2`, and a trend-series that covers every column
//! of the matrix once is worth the sum over its trends divided by `n^3`.
//! The best series scores 1 for identical time-lines and less the more the
//! match is fragmented or the snapshots differ.

mod dp;
mod matrix;
mod timeline;
mod trend;

pub use dp::best_trend_series;
pub use matrix::{cell_similarity, snapshot_distance, SimilarityMatrix};
pub use timeline::{normalize_joint, Snapshot, Timeline};
pub use trend::{brute_force_trend_series, trend_value, SeriesError, Trend, TrendSeries, BRUTE_FORCE_LIMIT};

use crate::hexsim::{GameRecord, Player};

/// Snapshot rate of 2 Hz at ten rounds per second.
pub const DEFAULT_SAMPLE_INTERVAL: u32 = 5;

/// Similarity of two time-lines in `[0, 1]`; 0 if either is empty.
pub fn timeline_similarity(context: &Timeline, evaluated: &Timeline) -> f64 {
    if context.is_empty() || evaluated.is_empty() {
        return 0.0;
    }
    let (c, e) = normalize_joint(&context.snapshots, &evaluated.snapshots);
    best_trend_series(&SimilarityMatrix::build(&c, &e)).0
}

/// Similarity of `evaluated` to `context` seen from `player`.
pub fn gameplay_similarity(context: &GameRecord, evaluated: &GameRecord, player: Player, interval: u32) -> f64 {
    timeline_similarity(
        &Timeline::from_record(context, player, interval),
        &Timeline::from_record(evaluated, player, interval),
    )
}

/// `|1 - evaluated / context|` over game lengths in rounds, computed as
/// `|context - evaluated| / context` so round ratios come out exact.
pub fn length_penalty(context_len: u32, evaluated_len: u32) -> f64 {
    assert!(context_len > 0, "context gameplay is empty");
    (context_len as f64 - evaluated_len as f64).abs() / context_len as f64
}
