//! Deterministic round-based hex RTS simulation.
//!
//! Two players (red, green) start with one castle each and spend gold on
//! buildings and units. A round runs in a fixed order: queued actions of red
//! then green, unit tasks in id order, building production, removal of the
//! dead, round increment and terminal-status resolution. Nothing in the core
//! rules is random, so a game is a pure function of its inputs and can be
//! replayed from the executed action lists.

mod action;
mod balance;
mod coord;
mod entity;
mod map;
pub mod path;
mod record;
mod rng;
mod state;
mod view;

pub use action::{Action, ActionKind, ActionTimeList, Proportion, TimedAction};
pub use balance::{BalanceTable, BarracksSpec, CastleSpec, FarmSpec, TowerSpec, UnitSpec};
pub use coord::HexCoord;
pub use entity::{Attacker, Building, BuildingState, BuildingType, EntityId, Player, Unit, UnitState, UnitType};
pub use map::{Map, DEFAULT_MAP};
pub use record::{run_match, AtlPlayer, GameRecord, MatchConfig, PlayerDriver};
pub use rng::XorShift64;
pub use state::{Features, GameState, GameStatus, RoundOutcome, FEATURE_COUNT, FEATURE_NAMES};
pub use view::{BuildingInfo, UnitInfo, WorldView};

/// Full-length game in rounds of 1/10 s.
pub const DEFAULT_HORIZON: u32 = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("map: {0}")]
    Map(String),
    #[error("balance table: {0}")]
    Balance(String),
    #[error("action list: {0}")]
    Atl(String),
    #[error("record: {0}")]
    Record(String),
    #[error("horizon must be positive")]
    Horizon,
}
