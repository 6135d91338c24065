use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::btree::{AdaptiveTree, BindError, DomainError, ParameterDomain, ParameterVector};
use crate::hexsim::{
    run_match, ActionTimeList, AtlPlayer, BalanceTable, ConfigError, GameRecord, GameStatus, Map, MatchConfig, Player,
};
use crate::similarity::{length_penalty, timeline_similarity, Timeline};
use crate::strategies::{BhtPlayer, StrategyLeafFactory};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Criterion value of one parameter vector and its parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    /// `similarity - penalty`.
    pub fitness: f64,
    pub similarity: f64,
    pub penalty: f64,
    /// False if the replayed opponent broke the game.
    pub feasible: bool,
    /// Rounds played.
    pub length: u32,
}

impl Evaluation {
    pub fn new(similarity: f64, penalty: f64, feasible: bool, length: u32) -> Self {
        Self { fitness: similarity - penalty, similarity, penalty, feasible, length }
    }
}

pub trait Evaluator: Sync {
    fn domain(&self) -> &ParameterDomain;
    fn evaluate(&self, p: &ParameterVector) -> Result<Evaluation, EvalError>;
}

/// Everything an evaluation replays against: the opponent's recorded
/// actions, the game settings and the tuned player's context time-line.
#[derive(Clone, Debug)]
pub struct GameplayContext {
    pub map: Arc<Map>,
    pub balance: Arc<BalanceTable>,
    pub seed: u64,
    pub horizon: u32,
    /// Side played by the tree under evaluation.
    pub player: Player,
    pub opponent_atl: ActionTimeList,
    pub timeline: Timeline,
    pub length: u32,
}

impl GameplayContext {
    pub fn from_record(
        record: &GameRecord,
        map: Arc<Map>,
        balance: Arc<BalanceTable>,
        player: Player,
        interval: u32,
    ) -> Self {
        Self {
            map,
            balance,
            seed: record.seed,
            horizon: record.horizon,
            player,
            opponent_atl: record.atl(player.opponent()).clone(),
            timeline: Timeline::from_record(record, player, interval),
            length: record.length,
        }
    }

    pub fn match_config(&self) -> MatchConfig {
        MatchConfig {
            map: Arc::clone(&self.map),
            balance: Arc::clone(&self.balance),
            seed: self.seed,
            horizon: self.horizon,
        }
    }
}

/// Plays the tree bound to `p` against the context opponent's recorded
/// actions and scores the result against the context time-line.
#[derive(Clone, Debug)]
pub struct GameplayEvaluator {
    pub tree: AdaptiveTree,
    pub factory: StrategyLeafFactory,
    pub context: Arc<GameplayContext>,
}

impl GameplayEvaluator {
    pub fn new(tree: AdaptiveTree, context: Arc<GameplayContext>) -> Self {
        Self { tree, factory: StrategyLeafFactory::default(), context }
    }

    /// The game an evaluation of `p` plays.
    pub fn play(&self, p: &ParameterVector) -> Result<GameRecord, EvalError> {
        let mut tuned = BhtPlayer::from_tree_with(&self.tree, p, &self.factory)?;
        let mut opponent = AtlPlayer::new(self.context.opponent_atl.clone());
        let config = self.context.match_config();
        let record = match self.context.player {
            Player::Red => run_match(&mut tuned, &mut opponent, &config)?,
            Player::Green => run_match(&mut opponent, &mut tuned, &config)?,
        };
        Ok(record)
    }

    pub fn score(&self, record: &GameRecord) -> Evaluation {
        let ctx = &self.context;
        let timeline = Timeline::from_record(record, ctx.player, ctx.timeline.interval);
        let similarity = timeline_similarity(&ctx.timeline, &timeline);
        let feasible = !matches!(record.status, GameStatus::Failure { .. });
        Evaluation::new(similarity, length_penalty(ctx.length, record.length), feasible, record.length)
    }
}

impl Evaluator for GameplayEvaluator {
    fn domain(&self) -> &ParameterDomain {
        self.tree.domain()
    }

    fn evaluate(&self, p: &ParameterVector) -> Result<Evaluation, EvalError> {
        Ok(self.score(&self.play(p)?))
    }
}

/// Results keyed by the exact bits of each parameter value.
#[derive(Debug, Default)]
pub struct EvalCache {
    map: RwLock<HashMap<Vec<u64>, Evaluation>>,
    evaluations: AtomicU64,
    hits: AtomicU64,
}

impl EvalCache {
    pub fn get(&self, p: &ParameterVector) -> Option<Evaluation> {
        self.map.read().expect("cache lock").get(&p.key()).copied()
    }

    pub fn insert(&self, p: &ParameterVector, e: Evaluation) {
        self.map.write().expect("cache lock").insert(p.key(), e);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Simulations run so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations.load(Ordering::Relaxed)
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }
}

/// An evaluator behind an [`EvalCache`].
///
/// Batches are deduplicated before any simulation runs, so the counters do
/// not depend on how the batch is scheduled.
#[derive(Debug)]
pub struct CachedEvaluator<E> {
    inner: E,
    cache: EvalCache,
}

impl<E: Evaluator> CachedEvaluator<E> {
    pub fn new(inner: E) -> Self {
        Self { inner, cache: EvalCache::default() }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn cache(&self) -> &EvalCache {
        &self.cache
    }

    pub fn domain(&self) -> &ParameterDomain {
        self.inner.domain()
    }

    pub fn evaluate(&self, p: &ParameterVector) -> Result<Evaluation, EvalError> {
        Ok(self.evaluate_batch(std::slice::from_ref(p))?[0])
    }

    pub fn evaluate_batch(&self, ps: &[ParameterVector]) -> Result<Vec<Evaluation>, EvalError> {
        let mut known: HashMap<Vec<u64>, Option<Evaluation>> = HashMap::new();
        let mut missing = Vec::new();
        {
            let map = self.cache.map.read().expect("cache lock");
            for p in ps {
                let key = p.key();
                if known.contains_key(&key) {
                    self.cache.hits.fetch_add(1, Ordering::Relaxed);
                    continue;
                }
                let cached = map.get(&key).copied();
                match cached {
                    Some(_) => {
                        self.cache.hits.fetch_add(1, Ordering::Relaxed);
                    }
                    None => missing.push(p),
                }
                known.insert(key, cached);
            }
        }
        for p in &missing {
            self.inner.domain().validate(p)?;
        }
        let fresh: Vec<Evaluation> = missing.par_iter().map(|p| self.inner.evaluate(p)).collect::<Result<_, _>>()?;
        self.cache.evaluations.fetch_add(fresh.len() as u64, Ordering::Relaxed);
        for (p, e) in missing.iter().zip(&fresh) {
            self.cache.insert(p, *e);
            known.insert(p.key(), Some(*e));
        }
        Ok(ps.iter().map(|p| known[&p.key()].expect("evaluated")).collect())
    }
}
