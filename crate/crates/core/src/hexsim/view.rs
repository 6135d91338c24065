use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    BalanceTable, Building, BuildingState, BuildingType, EntityId, HexCoord, Map, Player, Unit, UnitState, UnitType,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitInfo {
    pub id: EntityId,
    pub owner: Player,
    pub kind: UnitType,
    pub quantity: u32,
    pub hp: i64,
    pub pos: HexCoord,
    pub state: UnitState,
    pub destination: Option<HexCoord>,
}

impl From<&Unit> for UnitInfo {
    fn from(u: &Unit) -> Self {
        Self {
            id: u.id,
            owner: u.owner,
            kind: u.kind,
            quantity: u.quantity,
            hp: u.hp,
            pos: u.pos,
            state: u.state,
            destination: u.destination(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildingInfo {
    pub id: EntityId,
    pub owner: Player,
    pub kind: BuildingType,
    pub level: u32,
    pub hp: i64,
    pub max_hp: i64,
    pub pos: HexCoord,
    pub state: BuildingState,
}

impl BuildingInfo {
    pub(crate) fn new(b: &Building, balance: &BalanceTable) -> Self {
        Self {
            id: b.id,
            owner: b.owner,
            kind: b.kind,
            level: b.level,
            hp: b.hp,
            max_hp: balance.building_hp(b.kind, b.level) as i64,
            pos: b.pos,
            state: b.state,
        }
    }
}

/// Everything a player may know about the world at one instant: own and
/// enemy entities, settle-able cells, barracks pools and the rule constants.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldView {
    pub player: Player,
    pub round: u32,
    pub gold: i64,
    pub buildings: Vec<BuildingInfo>,
    pub units: Vec<UnitInfo>,
    pub enemy_buildings: Vec<BuildingInfo>,
    pub enemy_units: Vec<UnitInfo>,
    /// Enabled cells with no unit or building, inside the settle radius of
    /// one of the player's castles. Sorted by `(q, r)`.
    pub free_cells: Vec<HexCoord>,
    pub barracks_pools: Vec<(EntityId, [u32; 3])>,
    pub balance: Arc<BalanceTable>,
    pub map: Arc<Map>,
}

impl WorldView {
    pub fn unit(&self, id: EntityId) -> Option<&UnitInfo> {
        self.units.iter().find(|u| u.id == id)
    }

    pub fn building(&self, id: EntityId) -> Option<&BuildingInfo> {
        self.buildings.iter().find(|b| b.id == id)
    }

    pub fn count_buildings(&self, kind: BuildingType) -> usize {
        self.buildings.iter().filter(|b| b.kind == kind).count()
    }

    pub fn castles(&self) -> impl Iterator<Item = &BuildingInfo> {
        self.buildings.iter().filter(|b| b.kind == BuildingType::Castle)
    }

    pub fn total_unit_quantity(&self) -> u32 {
        self.units.iter().map(|u| u.quantity).sum()
    }

    /// True when no unit of either side and no building stands on `c`.
    pub fn cell_is_empty(&self, c: HexCoord) -> bool {
        self.map.is_enabled(c)
            && !self.units.iter().chain(&self.enemy_units).any(|u| u.pos == c)
            && !self.buildings.iter().chain(&self.enemy_buildings).any(|b| b.pos == c)
    }

    pub fn friendly_unit_at(&self, c: HexCoord) -> Option<&UnitInfo> {
        self.units.iter().find(|u| u.pos == c)
    }
}
