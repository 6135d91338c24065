//! The two expert strategies and the leaves they are made of.
//!
//! Both trees share one layout: `Sequence(DelayManager, GameQuery,
//! TimeSelector(S1..S4))`, where each sub-strategy `Sk` is
//! `Sequence(StrategyInfo, Selector(...))` over service/action pairs in
//! priority order. [`StrategyKind::A`] grows more aggressive phase by phase;
//! [`StrategyKind::B`] keeps most units home and builds up first.
//!
//! Slot names look like `a.s2.spawn.fraction` or `b.phase.1`.

mod info;
mod layout;
mod leaf;
mod player;
mod services;

use std::fmt;
use std::str::FromStr;

use crate::btree::{AdaptiveTree, DomainListing, ParameterVector};

pub use info::{assess, expected_battle_result, InfoParams, Situation};
pub use leaf::{StrategyLeaf, StrategyLeafFactory, PREPARED, SITUATION};
pub use player::BhtPlayer;
pub use services::{Service, ServiceInput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    A,
    B,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 2] = [StrategyKind::A, StrategyKind::B];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::A => "a",
            StrategyKind::B => "b",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_uppercase())
    }
}

impl FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "A" => Ok(StrategyKind::A),
            "b" | "B" => Ok(StrategyKind::B),
            other => Err(format!("unknown strategy `{other}` (expected A or B)")),
        }
    }
}

/// A strategy tree together with its default parameter vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Strategy {
    pub kind: StrategyKind,
    pub tree: AdaptiveTree,
    pub defaults: ParameterVector,
}

impl Strategy {
    /// Template in RON.
    pub fn template_ron(&self) -> String {
        self.tree.template().to_ron()
    }

    /// Domain listing in TOML with the defaults filled in.
    pub fn domain_toml(&self) -> String {
        DomainListing::render(self.tree.domain(), Some(&self.defaults))
    }

    pub fn player(&self, p: &ParameterVector) -> Result<BhtPlayer, crate::btree::BindError> {
        BhtPlayer::from_tree(&self.tree, p)
    }
}

/// Phase-length slots range over `[0, horizon / 2]` and default to
/// `horizon / 4`.
pub fn build_strategy(kind: StrategyKind, horizon: u32) -> Strategy {
    match kind {
        StrategyKind::A => layout::strategy_a(horizon),
        StrategyKind::B => layout::strategy_b(horizon),
    }
}

/// Horizon the files under `strategies/` are generated for.
pub const REFERENCE_HORIZON: u32 = 2000;
