use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    Action, ActionTimeList, BalanceTable, ConfigError, Features, GameState, GameStatus, Map, Player, TimedAction,
};

/// Something that decides a player's actions each round.
pub trait PlayerDriver {
    /// Actions to issue this round, in order.
    fn decide(&mut self, state: &GameState, player: Player) -> Vec<Action>;

    /// Replaying drivers fail the game on an infeasible action.
    fn is_strict(&self) -> bool;
}

/// Replays a recorded action time-list verbatim.
#[derive(Clone, Debug)]
pub struct AtlPlayer {
    atl: ActionTimeList,
    cursor: usize,
}

impl AtlPlayer {
    pub fn new(atl: ActionTimeList) -> Self {
        Self { atl, cursor: 0 }
    }
}

impl PlayerDriver for AtlPlayer {
    fn decide(&mut self, state: &GameState, _player: Player) -> Vec<Action> {
        let entries = self.atl.entries();
        while self.cursor < entries.len() && entries[self.cursor].round < state.round() {
            self.cursor += 1;
        }
        let mut out = Vec::new();
        while self.cursor < entries.len() && entries[self.cursor].round == state.round() {
            out.push(entries[self.cursor].action.clone());
            self.cursor += 1;
        }
        out
    }

    fn is_strict(&self) -> bool {
        true
    }
}

/// Result of a match: the executed actions of both players, per-round
/// features of both players, the final status and the number of completed
/// rounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub seed: u64,
    pub horizon: u32,
    pub atl: [ActionTimeList; 2],
    /// `features[p][r]` is player `p`'s state after round `r + 1`.
    pub features: [Vec<Features>; 2],
    pub status: GameStatus,
    pub length: u32,
}

impl GameRecord {
    pub fn atl(&self, p: Player) -> &ActionTimeList {
        &self.atl[p.index()]
    }

    pub fn features(&self, p: Player) -> &[Features] {
        &self.features[p.index()]
    }

    /// Canonical byte encoding, used to compare records.
    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("record serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Record(e.to_string()))
    }
}

/// Match setup shared by every game of an experiment.
#[derive(Clone, Debug)]
pub struct MatchConfig {
    pub map: Arc<Map>,
    pub balance: Arc<BalanceTable>,
    pub seed: u64,
    pub horizon: u32,
}

impl MatchConfig {
    pub fn new(map: Map, balance: BalanceTable, seed: u64, horizon: u32) -> Self {
        Self { map: Arc::new(map), balance: Arc::new(balance), seed, horizon }
    }
}

/// Plays red against green until a terminal status or the horizon.
pub fn run_match(
    red: &mut dyn PlayerDriver,
    green: &mut dyn PlayerDriver,
    config: &MatchConfig,
) -> Result<GameRecord, ConfigError> {
    let mut state = GameState::new(Arc::clone(&config.map), Arc::clone(&config.balance), config.seed, config.horizon)?;
    state.set_strict(Player::Red, red.is_strict());
    state.set_strict(Player::Green, green.is_strict());
    let mut record = GameRecord {
        seed: config.seed,
        horizon: config.horizon,
        atl: Default::default(),
        features: [Vec::with_capacity(config.horizon as usize), Vec::with_capacity(config.horizon as usize)],
        status: GameStatus::Running,
        length: 0,
    };
    while state.status() == GameStatus::Running {
        let round = state.round();
        for a in red.decide(&state, Player::Red) {
            state.issue_action(Player::Red, a);
        }
        for a in green.decide(&state, Player::Green) {
            state.issue_action(Player::Green, a);
        }
        let outcome = state.step_round();
        for p in Player::BOTH {
            for action in &outcome.executed[p.index()] {
                record.atl[p.index()].push(TimedAction { round, player: p, action: action.clone() });
            }
        }
        if state.status().is_failure() {
            break;
        }
        for p in Player::BOTH {
            record.features[p.index()].push(state.features(p));
        }
    }
    record.status = state.status();
    record.length = state.round();
    Ok(record)
}
