//! Times the trend-series DP on random square similarity matrices.
//!
//! `cargo run --release -p abtune --example dp_benchmark -- 400 1000 2000`

use std::time::Instant;

use abtune::similarity::{best_trend_series, SimilarityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let sizes: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("sizes are integers")).collect();
    let sizes = if sizes.is_empty() { vec![100, 400, 1000, 2000] } else { sizes };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in sizes {
        let m = SimilarityMatrix::from_fn(n, n, |_, _| rng.random::<f64>());
        let t = Instant::now();
        let (v, series) = best_trend_series(&m);
        println!("{n}x{n}: {:.3} s, value {v:.6}, {} trends", t.elapsed().as_secs_f64(), series.trends.len());
    }
}
