use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HexCoord;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Red,
    Green,
}

impl Player {
    /// Execution order within a round.
    pub const BOTH: [Player; 2] = [Player::Red, Player::Green];

    pub fn index(self) -> usize {
        match self {
            Player::Red => 0,
            Player::Green => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Red => Player::Green,
            Player::Green => Player::Red,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Red => "red",
            Player::Green => "green",
        })
    }
}

impl FromStr for Player {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "red" => Ok(Player::Red),
            "green" => Ok(Player::Green),
            other => Err(format!("unknown player `{other}`")),
        }
    }
}

/// Entity identifier.
///
/// Ids are allocated per owner as `2 * seq + owner_index`, so one player's ids
/// depend only on that player's own creations. This keeps a replayed action
/// list valid when the opponent plays differently.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId(pub u32);

impl EntityId {
    pub(crate) fn allocate(owner: Player, seq: u32) -> Self {
        EntityId(seq * 2 + owner.index() as u32)
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UnitType {
    Peasant,
    Knight,
    Archer,
}

impl UnitType {
    pub const ALL: [UnitType; 3] = [UnitType::Peasant, UnitType::Knight, UnitType::Archer];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitType::Peasant => "peasant",
            UnitType::Knight => "knight",
            UnitType::Archer => "archer",
        }
    }
}

impl FromStr for UnitType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        UnitType::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown unit type `{s}`"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BuildingType {
    Castle,
    Farm,
    Barracks,
    Tower,
}

impl BuildingType {
    pub const ALL: [BuildingType; 4] =
        [BuildingType::Castle, BuildingType::Farm, BuildingType::Barracks, BuildingType::Tower];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            BuildingType::Castle => "castle",
            BuildingType::Farm => "farm",
            BuildingType::Barracks => "barracks",
            BuildingType::Tower => "tower",
        }
    }
}

impl FromStr for BuildingType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuildingType::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown building type `{s}`"))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitState {
    Idle,
    Moving,
    Battling,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuildingState {
    Idle,
    Producing,
    UnderAttack,
}

/// Who hit an entity most recently.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Attacker {
    Unit(EntityId),
    Building(EntityId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unit {
    pub id: EntityId,
    pub owner: Player,
    pub kind: UnitType,
    pub quantity: u32,
    /// Remaining hit points of the whole group; never above
    /// `quantity * hp_per_member`.
    pub hp: i64,
    pub pos: HexCoord,
    pub state: UnitState,
    /// Remaining steps, next cell first. The last entry is the destination.
    pub path: VecDeque<HexCoord>,
    pub move_timer: u32,
    pub last_attacker: Option<Attacker>,
}

impl Unit {
    pub fn destination(&self) -> Option<HexCoord> {
        self.path.back().copied()
    }

    pub fn is_alive(&self) -> bool {
        self.quantity > 0 && self.hp > 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Building {
    pub id: EntityId,
    pub owner: Player,
    pub kind: BuildingType,
    pub level: u32,
    pub hp: i64,
    pub pos: HexCoord,
    pub state: BuildingState,
    /// Trained units ready to be bought, indexed by [`UnitType::index`].
    pub pool: [u32; 3],
    pub train_timer: u32,
}
