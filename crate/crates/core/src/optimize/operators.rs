use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::btree::{ParameterDomain, ParameterVector, SlotDomain};

use super::{CachedEvaluator, EvalError, Evaluator, Solution};

/// Shift added to every roulette weight so the worst solution keeps a
/// nonzero chance.
pub const ROULETTE_EPSILON: f64 = 1e-6;

/// `count` draws with replacement, each solution weighted by
/// `f - min f + ROULETTE_EPSILON`.
///
/// Panics if `pop` is empty or holds an unevaluated solution.
pub fn roulette_select<R: Rng + ?Sized>(pop: &[Solution], count: usize, rng: &mut R) -> Vec<Solution> {
    assert!(!pop.is_empty(), "roulette over an empty population");
    let f: Vec<f64> = pop.iter().map(|s| s.fitness().expect("evaluated solution")).collect();
    let min = f.iter().copied().fold(f64::INFINITY, f64::min);
    let mut cumulative = Vec::with_capacity(f.len());
    let mut total = 0.0;
    for v in &f {
        total += v - min + ROULETTE_EPSILON;
        cumulative.push(total);
    }
    (0..count)
        .map(|_| {
            let x = rng.random::<f64>() * total;
            let i = cumulative.partition_point(|&c| c <= x).min(pop.len() - 1);
            pop[i].clone()
        })
        .collect()
}

/// Uniform crossover: each slot is swapped between the children with
/// probability 1/2.
pub fn crossover_uniform<R: Rng + ?Sized>(
    a: &ParameterVector,
    b: &ParameterVector,
    rng: &mut R,
) -> (ParameterVector, ParameterVector) {
    assert_eq!(a.len(), b.len(), "parents of different length");
    let (mut x, mut y) = (a.clone(), b.clone());
    for i in 0..a.len() {
        if rng.random_bool(0.5) {
            x.set(i, b.get(i));
            y.set(i, a.get(i));
        }
    }
    (x, y)
}

/// Resamples each slot uniformly from its domain with probability `prob`.
pub fn mutate<R: Rng + ?Sized>(
    p: &ParameterVector,
    domain: &ParameterDomain,
    prob: f64,
    rng: &mut R,
) -> ParameterVector {
    let mut out = p.clone();
    for (i, slot) in domain.slots().iter().enumerate() {
        if rng.random_bool(prob) {
            out.set(i, slot.domain.sample(rng));
        }
    }
    out
}

/// Metropolis rule for maximization. Improvements are accepted without a
/// draw.
pub fn sa_accept<R: Rng + ?Sized>(f_old: f64, f_new: f64, tau: f64, rng: &mut R) -> bool {
    assert!(tau > 0.0, "temperature must be positive");
    if f_new > f_old {
        return true;
    }
    rng.random::<f64>() < (-(f_old - f_new) / tau).exp()
}

/// One slot perturbed: continuous slots take a clamped Gaussian step of
/// `step * width`, discrete slots are resampled.
pub fn neighbor<R: Rng + ?Sized>(
    p: &ParameterVector,
    domain: &ParameterDomain,
    step: f64,
    rng: &mut R,
) -> ParameterVector {
    let mut out = p.clone();
    let i = rng.random_range(0..domain.len());
    let slot = &domain.slot(i).domain;
    let v = match slot {
        SlotDomain::Discrete { .. } => slot.sample(rng),
        SlotDomain::Continuous { .. } => {
            let sigma = step * slot.width();
            let delta = if sigma > 0.0 { Normal::new(0.0, sigma).expect("finite sigma").sample(rng) } else { 0.0 };
            slot.clamp(p.get(i) + delta)
        }
    };
    out.set(i, v);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaConfig {
    pub tau0: f64,
    /// Geometric cooling factor.
    pub alpha: f64,
    pub i_max: usize,
    /// Standard deviation of continuous steps as a fraction of the slot width.
    pub step: f64,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self { tau0: 50.0, alpha: 0.998, i_max: 5, step: 0.1 }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.tau0.is_nan() || self.tau0 <= 0.0 {
            return Err(format!("tau0 must be positive, got {}", self.tau0));
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 || self.alpha >= 1.0 {
            return Err(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if self.i_max == 0 {
            return Err("i_max must be at least 1".into());
        }
        if self.step.is_nan() || self.step <= 0.0 {
            return Err(format!("step must be positive, got {}", self.step));
        }
        Ok(())
    }

    /// Temperature after `i` coolings.
    pub fn temperature(&self, i: usize) -> f64 {
        self.tau0 * self.alpha.powi(i as i32)
    }
}

/// State of one annealing run, advanced one proposal at a time so several
/// chains can share evaluation batches.
#[derive(Clone, Debug)]
pub struct SaChain {
    pub current: Solution,
    pub best: Solution,
    pub tau: f64,
    pub iterations: usize,
    pub accepted: usize,
    rng: ChaCha8Rng,
}

impl SaChain {
    /// `start` must be evaluated.
    pub fn new(start: Solution, tau0: f64, rng: ChaCha8Rng) -> Self {
        assert!(start.fitness().is_some(), "annealing starts from an evaluated solution");
        Self { best: start.clone(), current: start, tau: tau0, iterations: 0, accepted: 0, rng }
    }

    pub fn propose(&mut self, domain: &ParameterDomain, config: &SaConfig) -> ParameterVector {
        neighbor(&self.current.p, domain, config.step, &mut self.rng)
    }

    /// Applies the acceptance rule to an evaluated proposal and cools.
    pub fn advance(&mut self, candidate: Solution, config: &SaConfig) {
        let f_new = candidate.fitness().expect("evaluated candidate");
        let f_old = self.current.fitness().expect("evaluated current");
        if sa_accept(f_old, f_new, self.tau, &mut self.rng) {
            if f_new > self.best.fitness().expect("evaluated best") {
                self.best = candidate.clone();
            }
            self.current = candidate;
            self.accepted += 1;
        }
        self.tau *= config.alpha;
        self.iterations += 1;
    }
}

/// Runs `config.i_max` annealing steps from `start` and returns the best
/// solution visited.
pub fn simulated_annealing<E: Evaluator>(
    start: Solution,
    config: &SaConfig,
    evaluator: &CachedEvaluator<E>,
    rng: ChaCha8Rng,
) -> Result<Solution, EvalError> {
    let start = evaluated(start, evaluator)?;
    let mut chain = SaChain::new(start, config.tau0, rng);
    for _ in 0..config.i_max {
        let p = chain.propose(evaluator.domain(), config);
        let candidate = evaluated(Solution::new(p), evaluator)?;
        chain.advance(candidate, config);
    }
    Ok(chain.best)
}

fn evaluated<E: Evaluator>(s: Solution, evaluator: &CachedEvaluator<E>) -> Result<Solution, EvalError> {
    if s.eval.is_some() {
        return Ok(s);
    }
    let e = evaluator.evaluate(&s.p)?;
    Ok(Solution { p: s.p, eval: Some(e) })
}

pub fn shuffle<R: Rng + ?Sized>(pop: &mut [Solution], rng: &mut R) {
    pop.shuffle(rng);
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::btree::ParameterDescriptor;
    use crate::optimize::Evaluation;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn scored(f: f64) -> Solution {
        Solution { p: ParameterVector(vec![f]), eval: Some(Evaluation::new(f, 0.0, true, 1)) }
    }

    fn mixed_domain() -> ParameterDomain {
        ParameterDomain::new(vec![
            ParameterDescriptor::new("x", SlotDomain::continuous(0.0, 10.0)),
            ParameterDescriptor::new("k", SlotDomain::int_range(1, 4)),
            ParameterDescriptor::new("s", SlotDomain::values(&[0.25, 0.5, 0.75])),
        ])
    }

    #[test]
    fn roulette_frequencies_follow_weights() {
        let pop = vec![scored(0.0), scored(1.0), scored(3.0)];
        let draws = roulette_select(&pop, 100_000, &mut rng(1));
        let total = 0.0 + 1.0 + 3.0 + 3.0 * ROULETTE_EPSILON;
        for (i, w) in [ROULETTE_EPSILON, 1.0 + ROULETTE_EPSILON, 3.0 + ROULETTE_EPSILON].iter().enumerate() {
            let n = draws.iter().filter(|s| s.p.get(0) == pop[i].p.get(0)).count();
            assert!((n as f64 / 1e5 - w / total).abs() < 0.01, "slot {i}: {n}");
        }
    }

    #[test]
    fn roulette_equal_fitness_is_uniform() {
        let pop: Vec<Solution> =
            (0..4).map(|i| Solution { p: ParameterVector(vec![i as f64]), ..scored(0.5) }).collect();
        let draws = roulette_select(&pop, 40_000, &mut rng(2));
        for i in 0..4 {
            let n = draws.iter().filter(|s| s.p.get(0) == i as f64).count();
            assert!((n as f64 / 40_000.0 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn roulette_handles_negative_fitness() {
        let pop = vec![scored(-2.0), scored(-1.5)];
        let draws = roulette_select(&pop, 1000, &mut rng(3));
        assert!(draws.iter().filter(|s| s.fitness() == Some(-1.5)).count() > 990);
    }

    #[test]
    fn crossover_keeps_genes() {
        let a = ParameterVector(vec![1.0, 2.0, 3.0, 4.0]);
        let b = ParameterVector(vec![5.0, 6.0, 7.0, 8.0]);
        let (x, y) = crossover_uniform(&a, &b, &mut rng(4));
        for i in 0..4 {
            assert!(x.get(i) == a.get(i) && y.get(i) == b.get(i) || x.get(i) == b.get(i) && y.get(i) == a.get(i));
        }
        assert_eq!(crossover_uniform(&a, &a, &mut rng(5)), (a.clone(), a));
    }

    #[test]
    fn mutate_extremes() {
        let d = mixed_domain();
        let p = ParameterVector(vec![5.0, 2.0, 0.5]);
        assert_eq!(mutate(&p, &d, 0.0, &mut rng(6)), p);
        let mut changed = 0;
        for s in 0..200 {
            let q = mutate(&p, &d, 1.0, &mut rng(s));
            assert!(d.contains(&q));
            changed += usize::from(q.get(0) != p.get(0));
        }
        assert_eq!(changed, 200);
    }

    #[test]
    fn mutate_rate_matches_probability() {
        let d = ParameterDomain::new(
            (0..20).map(|i| ParameterDescriptor::new(format!("x{i}"), SlotDomain::continuous(0.0, 1.0))).collect(),
        );
        let p = ParameterVector(vec![0.5; 20]);
        let mut r = rng(7);
        let trials = 5000;
        let changed: usize = (0..trials)
            .map(|_| {
                let q = mutate(&p, &d, 0.05, &mut r);
                (0..20).filter(|&i| q.get(i) != 0.5).count()
            })
            .sum();
        let mean = changed as f64 / trials as f64;
        assert!((mean - 1.0).abs() < 0.05, "{mean}");
    }

    #[test]
    fn acceptance_at_ln2_is_one_half() {
        let tau = 50.0;
        let mut r = rng(8);
        let n = 100_000;
        let hits = (0..n).filter(|_| sa_accept(1.0, 1.0 - tau * 2f64.ln(), tau, &mut r)).count();
        assert!((hits as f64 / n as f64 - 0.5).abs() < 0.01);
        assert!((0..1000).all(|_| sa_accept(0.2, 0.3, 1e-9, &mut r)));
        assert!((0..1000).all(|_| sa_accept(0.2, 0.2, 1.0, &mut r)));
    }

    #[test]
    fn neighbor_changes_one_slot_within_domain() {
        let d = mixed_domain();
        let p = ParameterVector(vec![9.9, 2.0, 0.5]);
        let mut r = rng(9);
        for _ in 0..500 {
            let q = neighbor(&p, &d, 0.1, &mut r);
            assert!(d.contains(&q));
            assert!((0..3).filter(|&i| q.get(i) != p.get(i)).count() <= 1);
        }
    }

    #[test]
    fn temperature_after_five_steps() {
        let c = SaConfig::default();
        assert_eq!(c.temperature(5), 50.0 * 0.998f64.powi(5));
        assert!(SaConfig { alpha: 1.0, ..c.clone() }.validate().is_err());
        assert!(c.validate().is_ok());
    }
}
