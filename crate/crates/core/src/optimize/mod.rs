//! Memetic search for tree parameters that reproduce a context gameplay.
//!
//! The criterion of a parameter vector `p` is the similarity of the game
//! played by the tree bound to `p` to the context game, minus the relative
//! difference of their lengths. Every iteration runs one [`TaskGraph`]:
//! elite and roulette selection, uniform crossover, mutation, a short
//! simulated annealing of each child, and survival of the best `m`.

mod evaluate;
mod graph;
mod operators;

pub use evaluate::{CachedEvaluator, EvalCache, EvalError, Evaluation, Evaluator, GameplayContext, GameplayEvaluator};
pub use graph::{
    evaluate_all, sort_best_first, GraphError, GraphNode, NodeTrace, OptimizeError, Task, TaskContext, TaskGraph,
};
pub use operators::{
    crossover_uniform, mutate, neighbor, roulette_select, sa_accept, simulated_annealing, SaChain, SaConfig,
    ROULETTE_EPSILON,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::btree::ParameterVector;

/// A parameter vector and, once computed, its criterion value.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub p: ParameterVector,
    pub eval: Option<Evaluation>,
}

impl Solution {
    pub fn new(p: ParameterVector) -> Self {
        Self { p, eval: None }
    }

    pub fn fitness(&self) -> Option<f64> {
        self.eval.map(|e| e.fitness)
    }
}

/// Mixes `parts` into one RNG seed (splitmix64 finalizer per part).
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h = 0x6a09_e667_f3bc_c909u64;
    for &x in parts {
        h ^= x;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemeticConfig {
    /// Population size.
    pub m: usize,
    /// Iterations.
    pub n: usize,
    pub mutation_prob: f64,
}

impl Default for MemeticConfig {
    fn default() -> Self {
        Self { m: 12, n: 20, mutation_prob: 0.05 }
    }
}

impl MemeticConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.m < 2 {
            return Err(format!("population size m must be at least 2, got {}", self.m));
        }
        if self.n < 1 {
            return Err("iteration count n must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(format!("mutation probability {} outside [0, 1]", self.mutation_prob));
        }
        Ok(())
    }
}

/// Best-so-far state after one iteration; iteration 0 is the initial
/// population. Counters are cumulative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub best_f: f64,
    pub best_similarity: f64,
    pub penalty: f64,
    pub evaluations: u64,
    pub cache_hits: u64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best: Solution,
    pub history: Vec<IterationRecord>,
    /// Node traces of every iteration.
    pub traces: Vec<Vec<NodeTrace>>,
    pub population: Vec<Solution>,
}

/// Runs `config.n` iterations of the memetic graph from a population drawn
/// uniformly from the domain.
pub fn memetic_search<E: Evaluator>(
    evaluator: &CachedEvaluator<E>,
    config: &MemeticConfig,
    sa: &SaConfig,
    seed: u64,
) -> Result<SearchResult, OptimizeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[seed, u64::MAX]));
    let initial = (0..config.m).map(|_| Solution::new(evaluator.domain().sample(&mut rng))).collect();
    memetic_search_from(evaluator, initial, config, sa, seed)
}

pub fn memetic_search_from<E: Evaluator>(
    evaluator: &CachedEvaluator<E>,
    mut population: Vec<Solution>,
    config: &MemeticConfig,
    sa: &SaConfig,
    seed: u64,
) -> Result<SearchResult, OptimizeError> {
    config.validate().expect("valid memetic config");
    sa.validate().expect("valid annealing config");
    let graph = TaskGraph::memetic(config.m);
    evaluate_all(&mut population, evaluator)?;
    let mut best = best_of(&population);
    let mut history = vec![record(0, &best, evaluator)];
    let mut traces = Vec::with_capacity(config.n);
    for iteration in 1..=config.n {
        let ctx = TaskContext { evaluator, mutation_prob: config.mutation_prob, sa, seed, iteration: iteration as u64 };
        let (next, trace) = graph.execute(population, &ctx)?;
        population = next;
        let candidate = best_of(&population);
        if candidate.fitness() > best.fitness() {
            best = candidate;
        }
        history.push(record(iteration, &best, evaluator));
        traces.push(trace);
    }
    Ok(SearchResult { best, history, traces, population })
}

fn best_of(pop: &[Solution]) -> Solution {
    let mut sorted = pop.to_vec();
    sort_best_first(&mut sorted);
    sorted.swap_remove(0)
}

fn record<E: Evaluator>(iteration: usize, best: &Solution, evaluator: &CachedEvaluator<E>) -> IterationRecord {
    let e = best.eval.expect("evaluated");
    IterationRecord {
        iteration,
        best_f: e.fitness,
        best_similarity: e.similarity,
        penalty: e.penalty,
        evaluations: evaluator.cache().evaluations(),
        cache_hits: evaluator.cache().hits(),
    }
}

/// History as CSV with a header row.
pub fn history_csv(history: &[IterationRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in history {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
