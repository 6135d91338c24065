use crate::btree::{AdaptiveTree, BindError, Blackboard, GameTick, Node, ParameterVector};
use crate::hexsim::{Action, GameState, Player, PlayerDriver};

use super::{StrategyLeaf, StrategyLeafFactory};

/// Plays by ticking a bound strategy tree once per round. Infeasible
/// actions are never issued, so the driver is lenient.
pub struct BhtPlayer {
    tree: Node<StrategyLeaf>,
    bb: Blackboard,
}

impl BhtPlayer {
    pub fn new(tree: Node<StrategyLeaf>) -> Self {
        Self { tree, bb: Blackboard::new() }
    }

    pub fn from_tree(tree: &AdaptiveTree, p: &ParameterVector) -> Result<Self, BindError> {
        Self::from_tree_with(tree, p, &StrategyLeafFactory::default())
    }

    pub fn from_tree_with(
        tree: &AdaptiveTree,
        p: &ParameterVector,
        factory: &StrategyLeafFactory,
    ) -> Result<Self, BindError> {
        Ok(Self::new(tree.bind(p, factory)?))
    }

    pub fn blackboard(&self) -> &Blackboard {
        &self.bb
    }
}

impl PlayerDriver for BhtPlayer {
    fn decide(&mut self, state: &GameState, player: Player) -> Vec<Action> {
        let mut ctx = GameTick::new(state, player, &mut self.bb);
        self.tree.tick(&mut ctx);
        ctx.issued
    }

    fn is_strict(&self) -> bool {
        false
    }
}
