use crate::hexsim::{BuildingType, EntityId, UnitState, WorldView};

/// Goals of one sub-strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoParams {
    /// Desired total unit quantity.
    pub units: u32,
    /// Desired building counts, indexed by [`BuildingType::index`].
    pub buildings: [u32; 4],
    pub offensive: bool,
    /// Fraction of unit groups kept in defence.
    pub balance: f64,
}

/// What StrategyInfo concluded this tick. Strategy services only act on
/// the triggers set here.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Situation {
    pub offensive: bool,
    pub forced_defence: bool,
    pub defenders: Vec<EntityId>,
    pub attackers: Vec<EntityId>,
    /// Units still missing to reach the desired total quantity.
    pub need_units: u32,
    pub settle: [bool; 4],
    pub attack: bool,
    pub defence: bool,
    pub unit_return: bool,
    pub split: bool,
    pub merge: bool,
    /// Lowest-id idle unit of the side that currently leads.
    pub selected: Option<EntityId>,
}

impl Situation {
    pub fn is_defender(&self, id: EntityId) -> bool {
        self.defenders.contains(&id)
    }

    pub fn settle_triggered(&self, kind: BuildingType) -> bool {
        self.settle[kind.index()]
    }
}

/// Sum of `quantity * attack` of one side's battling units, own minus enemy.
pub fn expected_battle_result(view: &WorldView) -> i64 {
    let strength = |units: &[crate::hexsim::UnitInfo]| -> i64 {
        units
            .iter()
            .filter(|u| u.state == UnitState::Battling)
            .map(|u| u.quantity as i64 * view.balance.unit(u.kind).attack as i64)
            .sum()
    };
    strength(&view.units) - strength(&view.enemy_units)
}

pub fn assess(params: &InfoParams, view: &WorldView) -> Situation {
    let mut ids: Vec<EntityId> = view.units.iter().map(|u| u.id).collect();
    ids.sort_unstable();
    let n_def = ((params.balance * ids.len() as f64).round() as usize).min(ids.len());
    let attackers = ids.split_off(n_def);
    let defenders = ids;

    let castle_threat = view.castles().any(|c| view.enemy_units.iter().any(|e| e.pos.distance(c.pos) <= 1));
    let forced_defence = castle_threat || expected_battle_result(view) < 0;
    let offensive = params.offensive && !forced_defence;

    let settle = std::array::from_fn(|i| {
        let kind = BuildingType::from_index(i).expect("four building types");
        (view.count_buildings(kind) as u32) < params.buildings[i]
    });
    let idle = |id: &&EntityId| view.unit(**id).is_some_and(|u| u.state == UnitState::Idle && u.destination.is_none());
    let lead = if offensive && !attackers.is_empty() { &attackers } else { &defenders };
    let selected = lead.iter().find(idle).copied();

    Situation {
        offensive,
        forced_defence,
        need_units: params.units.saturating_sub(view.total_unit_quantity()),
        settle,
        attack: offensive && !attackers.is_empty(),
        defence: !defenders.is_empty(),
        unit_return: !defenders.is_empty(),
        split: !offensive,
        merge: offensive,
        selected,
        defenders,
        attackers,
    }
}
