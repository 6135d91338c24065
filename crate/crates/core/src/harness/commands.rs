use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::btree::{DomainListing, ParameterVector};
use crate::hexsim::{run_match, AtlPlayer, GameRecord, GameStatus, MatchConfig, Player};
use crate::optimize::{
    history_csv, memetic_search, CachedEvaluator, GameplayContext, GameplayEvaluator, IterationRecord,
};
use crate::similarity::{gameplay_similarity, Timeline};

use super::experiment::read;
use super::{ExperimentSpec, HarnessError, PlayerSetup};

pub const CONTEXT_RECORD: &str = "context.json";

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| HarnessError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, contents).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}

fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Plays the context game: red runs A with its defaults, green runs B.
pub fn play_context(spec: &ExperimentSpec) -> Result<GameRecord, HarnessError> {
    let c = &spec.context;
    let mut red = c.a.player(&c.a.defaults)?;
    let mut green = c.b.player(&c.b.defaults)?;
    let config =
        MatchConfig { map: Arc::clone(&c.map), balance: Arc::clone(&c.balance), seed: c.seed, horizon: c.horizon };
    let record = run_match(&mut red, &mut green, &config)?;
    if let GameStatus::Failure { player } = record.status {
        return Err(HarnessError::ContextFailed(format!("{player:?} failed after {} rounds", record.length)));
    }
    Ok(record)
}

/// Records the context game into the output directory: the full record,
/// both action lists, a one-line summary and red's time-line.
pub fn cmd_record(spec: &ExperimentSpec) -> Result<GameRecord, HarnessError> {
    let record = play_context(spec)?;
    let out = &spec.output;
    write(&out.join(CONTEXT_RECORD), record.to_json())?;
    write(&out.join("atl_red.txt"), record.atl(Player::Red).to_text())?;
    write(&out.join("atl_green.txt"), record.atl(Player::Green).to_text())?;
    write(&out.join("status.txt"), format!("status={:?} length={}\n", record.status, record.length))?;
    let timeline = Timeline::from_record(&record, Player::Red, spec.context.interval);
    write(&out.join("timeline_red.csv"), timeline.to_csv())?;
    Ok(record)
}

pub fn load_record(path: &Path) -> Result<GameRecord, HarnessError> {
    Ok(GameRecord::from_json(&read(path)?)?)
}

/// Recorded context from the output directory.
pub fn load_context(spec: &ExperimentSpec) -> Result<GameRecord, HarnessError> {
    let path = spec.output.join(CONTEXT_RECORD);
    if !path.exists() {
        return Err(HarnessError::MissingContext(path));
    }
    let record = load_record(&path)?;
    if record.seed != spec.context.seed || record.horizon != spec.context.horizon {
        return Err(HarnessError::MissingContext(path));
    }
    Ok(record)
}

/// Evaluator of one player setup against `context`, from red's side.
pub fn player_evaluator(
    spec: &ExperimentSpec,
    player: &PlayerSetup,
    context: &GameRecord,
) -> Result<GameplayEvaluator, HarnessError> {
    let c = &spec.context;
    let tree = spec
        .strategy(player.kind)
        .tree
        .with_domain(spec.player_domain(player)?)
        .map_err(|e| HarnessError::Spec(format!("player `{}`: {e}", player.label)))?;
    let ctx =
        GameplayContext::from_record(context, Arc::clone(&c.map), Arc::clone(&c.balance), Player::Red, c.interval);
    Ok(GameplayEvaluator::new(tree, Arc::new(ctx)))
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub run: u32,
    pub seed: u64,
    pub best: ParameterVector,
    pub history: Vec<IterationRecord>,
}

impl RunOutcome {
    pub fn final_similarity(&self) -> f64 {
        self.history.last().expect("history has iteration 0").best_similarity
    }
}

#[derive(Clone, Debug)]
pub struct PlayerOutcome {
    pub label: String,
    pub runs: Vec<RunOutcome>,
}

impl PlayerOutcome {
    pub fn mean_final_similarity(&self) -> f64 {
        self.runs.iter().map(RunOutcome::final_similarity).sum::<f64>() / self.runs.len() as f64
    }

    /// Mean over runs of best similarity and criterion, per iteration.
    pub fn mean_history(&self) -> Vec<MeanRow> {
        let n = self.runs.iter().map(|r| r.history.len()).min().unwrap_or(0);
        let k = self.runs.len() as f64;
        (0..n)
            .map(|i| MeanRow {
                iteration: i,
                mean_best_similarity: self.runs.iter().map(|r| r.history[i].best_similarity).sum::<f64>() / k,
                mean_best_f: self.runs.iter().map(|r| r.history[i].best_f).sum::<f64>() / k,
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanRow {
    pub iteration: usize,
    pub mean_best_similarity: f64,
    pub mean_best_f: f64,
}

/// One memetic run of `player` with the given run index.
pub fn optimize_run(
    spec: &ExperimentSpec,
    player: &PlayerSetup,
    context: &GameRecord,
    run: u32,
) -> Result<RunOutcome, HarnessError> {
    let evaluator = CachedEvaluator::new(player_evaluator(spec, player, context)?);
    let seed = spec.run_seed(run);
    let result = memetic_search(&evaluator, &spec.memetic, &spec.sa, seed)?;
    Ok(RunOutcome { run, seed, best: result.best.p, history: result.history })
}

/// Runs every player setup `spec.runs` times and writes, per player,
/// `run_<r>.csv` histories, `best_<r>.toml` parameters and `mean.csv`,
/// plus a `summary.csv` over players.
pub fn cmd_optimize(spec: &ExperimentSpec) -> Result<Vec<PlayerOutcome>, HarnessError> {
    let context = load_context(spec)?;
    let mut outcomes = Vec::with_capacity(spec.players.len());
    for player in &spec.players {
        let dir = spec.output.join(&player.label);
        let domain = spec.player_domain(player)?;
        let mut runs = Vec::with_capacity(spec.runs as usize);
        for r in 1..=spec.runs {
            let run = optimize_run(spec, player, &context, r)?;
            write(&dir.join(format!("run_{r}.csv")), history_csv(&run.history))?;
            write(&dir.join(format!("best_{r}.toml")), DomainListing::render(&domain, Some(&run.best)))?;
            runs.push(run);
        }
        let outcome = PlayerOutcome { label: player.label.clone(), runs };
        write(&dir.join("mean.csv"), to_csv(&outcome.mean_history()))?;
        outcomes.push(outcome);
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        player: &'a str,
        runs: usize,
        mean_final_similarity: f64,
    }
    let summary: Vec<Summary> = outcomes
        .iter()
        .map(|o| Summary { player: &o.label, runs: o.runs.len(), mean_final_similarity: o.mean_final_similarity() })
        .collect();
    write(&spec.output.join("summary.csv"), to_csv(&summary))?;
    Ok(outcomes)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LandscapeRow {
    pub x: f64,
    pub y: f64,
    pub similarity: f64,
    pub penalty: f64,
    pub f: f64,
    pub feasible: bool,
}

/// Evaluates template A over a grid of two slots, every other slot at the
/// context defaults. Each axis covers the slot's domain with `grid` points.
pub fn landscape(
    spec: &ExperimentSpec,
    context: &GameRecord,
    slot_x: &str,
    slot_y: &str,
    grid: (usize, usize),
) -> Result<Vec<LandscapeRow>, HarnessError> {
    if grid.0 < 2 || grid.1 < 2 {
        return Err(HarnessError::Spec("landscape grids need at least 2 points per axis".into()));
    }
    let a = &spec.context.a;
    let domain = a.tree.domain();
    let index = |name: &str| domain.index_of(name).ok_or_else(|| HarnessError::Spec(format!("unknown slot `{name}`")));
    let (ix, iy) = (index(slot_x)?, index(slot_y)?);
    let xs = domain.slot(ix).domain.grid(grid.0);
    let ys = domain.slot(iy).domain.grid(grid.1);
    let player = PlayerSetup { label: "landscape".into(), kind: a.kind, restrict: vec![] };
    let evaluator = CachedEvaluator::new(player_evaluator(spec, &player, context)?);
    let mut points = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            let mut p = a.defaults.clone();
            p.set(ix, x);
            p.set(iy, y);
            points.push((x, y, p));
        }
    }
    let ps: Vec<ParameterVector> = points.iter().map(|(_, _, p)| p.clone()).collect();
    let evals = evaluator.evaluate_batch(&ps)?;
    Ok(points
        .iter()
        .zip(evals)
        .map(|(&(x, y, _), e)| LandscapeRow {
            x,
            y,
            similarity: e.similarity,
            penalty: e.penalty,
            f: e.fitness,
            feasible: e.feasible,
        })
        .collect())
}

/// [`landscape`] against the recorded context, written to `landscape.csv`.
pub fn cmd_landscape(
    spec: &ExperimentSpec,
    slot_x: &str,
    slot_y: &str,
    grid: (usize, usize),
) -> Result<Vec<LandscapeRow>, HarnessError> {
    let context = load_context(spec)?;
    let rows = landscape(spec, &context, slot_x, slot_y, grid)?;
    write(&spec.output.join("landscape.csv"), to_csv(&rows))?;
    Ok(rows)
}

/// Replays both action lists of `record` strictly and checks that the
/// game comes out identical.
pub fn replay(spec: &ExperimentSpec, record: &GameRecord) -> Result<GameRecord, HarnessError> {
    let config = MatchConfig {
        map: Arc::clone(&spec.context.map),
        balance: Arc::clone(&spec.context.balance),
        seed: record.seed,
        horizon: record.horizon,
    };
    let mut red = AtlPlayer::new(record.atl(Player::Red).clone());
    let mut green = AtlPlayer::new(record.atl(Player::Green).clone());
    let again = run_match(&mut red, &mut green, &config)?;
    if again.to_bytes() != record.to_bytes() {
        return Err(HarnessError::ReplayMismatch(format!(
            "replay ended {:?} after {} rounds, record says {:?} after {}",
            again.status, again.length, record.status, record.length
        )));
    }
    Ok(again)
}

/// Similarity of two recorded games seen from `player`.
pub fn cmd_similarity(a: &Path, b: &Path, player: Player, interval: u32) -> Result<f64, HarnessError> {
    let (ra, rb) = (load_record(a)?, load_record(b)?);
    Ok(gameplay_similarity(&ra, &rb, player, interval))
}

/// Default location of the context record for `spec`.
pub fn context_path(spec: &ExperimentSpec) -> PathBuf {
    spec.output.join(CONTEXT_RECORD)
}
