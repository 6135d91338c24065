use crate::hexsim::{Action, ActionKind, GameState, Player, WorldView};

use super::{Blackboard, Clock, Status};

/// Blackboard key of the latest [`WorldView`].
pub const WORLD: &str = "world";
/// Blackboard key of the [`ActionKind`] issued during the current tick.
pub const ISSUED: &str = "action.issued";
/// Blackboard key of the remaining pause in rounds.
pub const COUNTDOWN: &str = "delay.countdown";

/// Rounds to pause after issuing each kind of action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelayTable {
    pub rounds: [u32; 6],
}

impl Default for DelayTable {
    fn default() -> Self {
        Self { rounds: [10; 6] }
    }
}

impl DelayTable {
    pub fn delay(&self, kind: ActionKind) -> u32 {
        self.rounds[kind.index()]
    }
}

/// Context of one tick of a game-playing tree: read access to the game,
/// the tree's blackboard and the actions issued so far.
pub struct GameTick<'a> {
    pub state: &'a GameState,
    pub player: Player,
    pub bb: &'a mut Blackboard,
    pub issued: Vec<Action>,
}

impl Clock for GameTick<'_> {
    fn now(&self) -> f64 {
        self.state.round() as f64
    }
}

impl<'a> GameTick<'a> {
    pub fn new(state: &'a GameState, player: Player, bb: &'a mut Blackboard) -> Self {
        Self { state, player, bb, issued: Vec::new() }
    }

    pub fn feasible(&self, action: &Action) -> bool {
        self.state.check_feasible(self.player, action)
    }

    /// Issues `action` if it is feasible right now and records its kind for
    /// the delay manager.
    pub fn issue(&mut self, action: Action) -> bool {
        if !self.feasible(&action) {
            return false;
        }
        self.bb.set(ISSUED, action.kind());
        self.issued.push(action);
        true
    }

    pub fn world(&self) -> Option<&WorldView> {
        self.bb.get(WORLD)
    }

    /// Pauses after each issued action. Fails while a countdown is running
    /// and on the tick right after an action was issued; succeeds otherwise.
    pub fn delay_manager(&mut self, table: &DelayTable) -> Status {
        if let Some(left) = self.bb.get_mut::<u32>(COUNTDOWN).filter(|c| **c > 0) {
            *left -= 1;
            return Status::Failure;
        }
        if let Some(kind) = self.bb.take::<ActionKind>(ISSUED) {
            self.bb.set(COUNTDOWN, table.delay(kind));
            return Status::Failure;
        }
        Status::Success
    }

    /// Stores a fresh world view on the blackboard.
    pub fn game_query(&mut self) -> Status {
        let view = self.state.world_view(self.player);
        self.bb.set(WORLD, view);
        Status::Success
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::hexsim::{BalanceTable, EntityId, Map};

    fn state() -> GameState {
        GameState::new(Arc::new(Map::default_map()), Arc::new(BalanceTable::default()), 0, 100).unwrap()
    }

    #[test]
    fn delay_manager_pauses_after_action() {
        let s = state();
        let mut bb = Blackboard::new();
        let table = DelayTable { rounds: [3; 6] };
        let mut statuses = Vec::new();
        {
            let mut t = GameTick::new(&s, Player::Red, &mut bb);
            assert_eq!(t.delay_manager(&table), Status::Success);
            assert!(t.issue(Action::Query));
        }
        for _ in 0..6 {
            let mut t = GameTick::new(&s, Player::Red, &mut bb);
            statuses.push(t.delay_manager(&table));
        }
        use Status::*;
        assert_eq!(statuses, vec![Failure, Failure, Failure, Failure, Success, Success]);
    }

    #[test]
    fn infeasible_actions_are_not_issued() {
        let s = state();
        let mut bb = Blackboard::new();
        let mut t = GameTick::new(&s, Player::Red, &mut bb);
        assert!(!t.issue(Action::Repair { id: EntityId(0) }));
        assert!(t.issued.is_empty());
        assert!(!t.bb.contains(ISSUED));
    }

    #[test]
    fn query_stores_view() {
        let s = state();
        let mut bb = Blackboard::new();
        let mut t = GameTick::new(&s, Player::Green, &mut bb);
        assert!(t.world().is_none());
        t.game_query();
        assert_eq!(t.world().unwrap().player, Player::Green);
        assert_eq!(t.now(), 0.0);
    }
}
