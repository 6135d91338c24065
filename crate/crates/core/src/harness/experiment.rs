use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use crate::btree::{AdaptiveTree, DomainListing, ParameterDomain, ParameterVector};
use crate::hexsim::{BalanceTable, Map};
use crate::optimize::{MemeticConfig, SaConfig};
use crate::similarity::DEFAULT_SAMPLE_INTERVAL;
use crate::strategies::{build_strategy, Strategy, StrategyKind};

use super::HarnessError;

pub const SPEC_VERSION: u32 = 1;

/// Experiment description as read from TOML. Relative paths resolve
/// against the file's directory.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct RawSpec {
    spec_version: u32,
    output: PathBuf,
    #[serde(default = "one")]
    runs: u32,
    #[serde(default)]
    base_seed: u64,
    #[serde(default)]
    parallelism: Option<usize>,
    context: RawContext,
    #[serde(default)]
    optimizer: RawOptimizer,
    #[serde(default, rename = "player")]
    players: Vec<RawPlayer>,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct RawContext {
    seed: u64,
    horizon: u32,
    #[serde(default)]
    interval: Option<u32>,
    #[serde(default)]
    map: Option<PathBuf>,
    #[serde(default)]
    balance: Option<PathBuf>,
    /// Domain listings with defaults; built-in defaults when absent.
    #[serde(default)]
    defaults_a: Option<PathBuf>,
    #[serde(default)]
    defaults_b: Option<PathBuf>,
    /// Phase lengths of the red context player, overriding its defaults.
    #[serde(default)]
    phases: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct RawOptimizer {
    m: usize,
    n: usize,
    mutation_prob: f64,
    tau0: f64,
    alpha: f64,
    i_max: usize,
    step: f64,
}

impl Default for RawOptimizer {
    fn default() -> Self {
        let (mc, sa) = (MemeticConfig::default(), SaConfig::default());
        Self {
            m: mc.m,
            n: mc.n,
            mutation_prob: mc.mutation_prob,
            tau0: sa.tau0,
            alpha: sa.alpha,
            i_max: sa.i_max,
            step: sa.step,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct RawPlayer {
    label: String,
    template: String,
    #[serde(default)]
    restrict: Vec<Restriction>,
}

/// Narrows one slot to an interval or to an explicit value set.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Restriction {
    pub slot: String,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

impl Restriction {
    pub fn apply(&self, domain: &mut ParameterDomain) -> Result<(), HarnessError> {
        let fail = |m: String| HarnessError::Spec(format!("restriction of `{}`: {m}", self.slot));
        match (self.lo, self.hi, &self.values) {
            (Some(lo), Some(hi), None) => domain.restrict(&self.slot, lo, hi).map_err(|e| fail(e.to_string())),
            (None, None, Some(v)) => domain.restrict_values(&self.slot, v).map_err(|e| fail(e.to_string())),
            _ => Err(fail("give either `lo` and `hi` or `values`".into())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlayerSetup {
    pub label: String,
    pub kind: StrategyKind,
    pub restrict: Vec<Restriction>,
}

#[derive(Clone, Debug)]
pub struct ContextSetup {
    pub seed: u64,
    pub horizon: u32,
    pub interval: u32,
    pub map: Arc<Map>,
    pub balance: Arc<BalanceTable>,
    /// Red plays A, green plays B.
    pub a: Strategy,
    pub b: Strategy,
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub output: PathBuf,
    pub runs: u32,
    pub base_seed: u64,
    pub parallelism: Option<usize>,
    pub context: ContextSetup,
    pub memetic: MemeticConfig,
    pub sa: SaConfig,
    pub players: Vec<PlayerSetup>,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = read(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, HarnessError> {
        let raw: RawSpec = toml::from_str(text)
            .map_err(|e| HarnessError::Parse { what: "experiment".into(), message: e.message().to_string() })?;
        if raw.spec_version != SPEC_VERSION {
            return Err(HarnessError::Spec(format!(
                "unsupported spec-version {} (expected {SPEC_VERSION})",
                raw.spec_version
            )));
        }
        if raw.runs < 1 {
            return Err(HarnessError::Spec("runs must be at least 1".into()));
        }
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        let c = raw.context;
        let map = match &c.map {
            Some(p) => Map::parse(&read(&resolve(p))?)?,
            None => Map::default_map(),
        };
        let balance = match &c.balance {
            Some(p) => BalanceTable::parse(&read(&resolve(p))?)?,
            None => BalanceTable::default(),
        };
        let mut a = strategy(StrategyKind::A, c.horizon, c.defaults_a.as_deref().map(resolve))?;
        let b = strategy(StrategyKind::B, c.horizon, c.defaults_b.as_deref().map(resolve))?;
        if let Some(phases) = &c.phases {
            a.defaults = with_phases(&a, phases)?;
        }
        let interval = c.interval.unwrap_or(DEFAULT_SAMPLE_INTERVAL);
        if interval == 0 || c.horizon == 0 {
            return Err(HarnessError::Spec("horizon and interval must be positive".into()));
        }
        let o = raw.optimizer;
        let memetic = MemeticConfig { m: o.m, n: o.n, mutation_prob: o.mutation_prob };
        let sa = SaConfig { tau0: o.tau0, alpha: o.alpha, i_max: o.i_max, step: o.step };
        memetic.validate().map_err(HarnessError::Spec)?;
        sa.validate().map_err(HarnessError::Spec)?;
        let players = raw
            .players
            .into_iter()
            .map(|p| {
                let kind = p.template.parse().map_err(HarnessError::Spec)?;
                Ok(PlayerSetup { label: p.label, kind, restrict: p.restrict })
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        let mut labels: Vec<&str> = players.iter().map(|p| p.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Spec("player labels must be unique".into()));
        }
        let spec = Self {
            output: resolve(&raw.output),
            runs: raw.runs,
            base_seed: raw.base_seed,
            parallelism: raw.parallelism,
            context: ContextSetup {
                seed: c.seed,
                horizon: c.horizon,
                interval,
                map: Arc::new(map),
                balance: Arc::new(balance),
                a,
                b,
            },
            memetic,
            sa,
            players,
        };
        for p in &spec.players {
            spec.player_domain(p)?;
        }
        Ok(spec)
    }

    pub fn strategy(&self, kind: StrategyKind) -> &Strategy {
        match kind {
            StrategyKind::A => &self.context.a,
            StrategyKind::B => &self.context.b,
        }
    }

    /// The player's template domain with its restrictions applied.
    pub fn player_domain(&self, player: &PlayerSetup) -> Result<ParameterDomain, HarnessError> {
        let mut domain = self.strategy(player.kind).tree.domain().clone();
        for r in &player.restrict {
            r.apply(&mut domain)?;
        }
        Ok(domain)
    }

    /// Seed of run `r`, counted from 1.
    pub fn run_seed(&self, r: u32) -> u64 {
        self.base_seed * 1000 + r as u64
    }
}

fn strategy(kind: StrategyKind, horizon: u32, defaults: Option<PathBuf>) -> Result<Strategy, HarnessError> {
    let mut s = build_strategy(kind, horizon);
    if let Some(path) = defaults {
        let at = |m: String| HarnessError::Spec(format!("{}: {m}", path.display()));
        let listing = DomainListing::parse(&read(&path)?)
            .map_err(|message| HarnessError::Parse { what: path.display().to_string(), message })?;
        s.tree = AdaptiveTree::from_descriptors(s.tree.template().clone(), listing.descriptors.clone())
            .map_err(|e| at(e.to_string()))?;
        s.defaults = listing.defaults_for(s.tree.domain()).map_err(at)?;
    }
    Ok(s)
}

fn with_phases(s: &Strategy, phases: &[f64]) -> Result<ParameterVector, HarnessError> {
    let mut p = s.defaults.clone();
    for (i, &v) in phases.iter().enumerate() {
        let name = format!("{}.phase.{}", s.kind.name(), i + 1);
        let idx = s
            .tree
            .domain()
            .index_of(&name)
            .ok_or_else(|| HarnessError::Spec(format!("too many phase lengths ({})", phases.len())))?;
        p.set(idx, v);
    }
    s.tree.domain().validate(&p).map_err(|e| HarnessError::Spec(format!("context phases: {e}")))?;
    Ok(p)
}

pub(super) fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })
}
