use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BuildingType, ConfigError, EntityId, HexCoord, Player, UnitType};

/// Share of a unit that follows a move order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Proportion {
    Quarter,
    Half,
    ThreeQuarters,
    Full,
}

impl Proportion {
    pub const ALL: [Proportion; 4] =
        [Proportion::Quarter, Proportion::Half, Proportion::ThreeQuarters, Proportion::Full];

    pub fn quarters(self) -> u32 {
        match self {
            Proportion::Quarter => 1,
            Proportion::Half => 2,
            Proportion::ThreeQuarters => 3,
            Proportion::Full => 4,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.quarters() as f64 / 4.0
    }

    /// Accepts only 0.25, 0.5, 0.75 and 1.0.
    pub fn from_f64(v: f64) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_f64() == v)
    }

    /// Members that leave when a group of `quantity` is split.
    pub fn moving_part(self, quantity: u32) -> u32 {
        quantity * self.quarters() / 4
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ActionKind {
    Move,
    SpawnUnit,
    SettleBuilding,
    Upgrade,
    Repair,
    Query,
}

impl ActionKind {
    pub const ALL: [ActionKind; 6] = [
        ActionKind::Move,
        ActionKind::SpawnUnit,
        ActionKind::SettleBuilding,
        ActionKind::Upgrade,
        ActionKind::Repair,
        ActionKind::Query,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Move => "move",
            ActionKind::SpawnUnit => "spawn",
            ActionKind::SettleBuilding => "settle",
            ActionKind::Upgrade => "upgrade",
            ActionKind::Repair => "repair",
            ActionKind::Query => "query",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    Move { id: EntityId, to: HexCoord, proportion: Proportion },
    SpawnUnit { id: EntityId, kind: UnitType, quantity: u32 },
    SettleBuilding { id: EntityId, kind: BuildingType, at: HexCoord },
    Upgrade { id: EntityId },
    Repair { id: EntityId },
    Query,
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Move { .. } => ActionKind::Move,
            Action::SpawnUnit { .. } => ActionKind::SpawnUnit,
            Action::SettleBuilding { .. } => ActionKind::SettleBuilding,
            Action::Upgrade { .. } => ActionKind::Upgrade,
            Action::Repair { .. } => ActionKind::Repair,
            Action::Query => ActionKind::Query,
        }
    }

    /// Parameter fields in signature order.
    fn params(&self) -> Vec<String> {
        match self {
            Action::Move { id, to, proportion } => {
                vec![id.to_string(), to.to_string(), proportion.as_f64().to_string()]
            }
            Action::SpawnUnit { id, kind, quantity } => {
                vec![id.to_string(), kind.name().into(), quantity.to_string()]
            }
            Action::SettleBuilding { id, kind, at } => {
                vec![id.to_string(), kind.name().into(), at.to_string()]
            }
            Action::Upgrade { id } | Action::Repair { id } => vec![id.to_string()],
            Action::Query => vec![],
        }
    }

    fn parse(name: &str, params: &[&str]) -> Result<Self, String> {
        let id = |s: &str| s.parse::<u32>().map(EntityId).map_err(|_| format!("bad id `{s}`"));
        let pos = |s: &str| s.parse::<HexCoord>();
        match (name, params) {
            ("move", [i, p, prop]) => {
                let v: f64 = prop.parse().map_err(|_| format!("bad proportion `{prop}`"))?;
                let proportion = Proportion::from_f64(v).ok_or_else(|| format!("proportion {v} not allowed"))?;
                Ok(Action::Move { id: id(i)?, to: pos(p)?, proportion })
            }
            ("spawn", [i, k, q]) => Ok(Action::SpawnUnit {
                id: id(i)?,
                kind: k.parse()?,
                quantity: q.parse().map_err(|_| format!("bad quantity `{q}`"))?,
            }),
            ("settle", [i, k, p]) => Ok(Action::SettleBuilding { id: id(i)?, kind: k.parse()?, at: pos(p)? }),
            ("upgrade", [i]) => Ok(Action::Upgrade { id: id(i)? }),
            ("repair", [i]) => Ok(Action::Repair { id: id(i)? }),
            ("query", []) => Ok(Action::Query),
            _ => Err(format!("unknown action `{name}` with {} params", params.len())),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())?;
        for p in self.params() {
            write!(f, ";{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedAction {
    pub round: u32,
    pub player: Player,
    pub action: Action,
}

/// Action time-list: actions with the round they were issued in, rounds
/// non-decreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionTimeList {
    entries: Vec<TimedAction>,
}

impl ActionTimeList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: TimedAction) {
        debug_assert!(self.entries.last().is_none_or(|l| l.round <= entry.round));
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[TimedAction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One line per action: `round;player;action-name;param1;...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{};{};{}", e.round, e.player, e.action);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut atl = ActionTimeList::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |m: String| ConfigError::Atl(format!("line {}: {m}", n + 1));
            let fields: Vec<&str> = line.split(';').collect();
            if fields.len() < 3 {
                return Err(err(format!("too few fields in `{line}`")));
            }
            let round: u32 = fields[0].parse().map_err(|_| err(format!("bad round `{}`", fields[0])))?;
            let player: Player = fields[1].parse().map_err(err)?;
            let action = Action::parse(fields[2], &fields[3..]).map_err(err)?;
            if atl.entries.last().is_some_and(|l| l.round > round) {
                return Err(err("rounds must be non-decreasing".into()));
            }
            atl.entries.push(TimedAction { round, player, action });
        }
        Ok(atl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportion_values() {
        assert_eq!(Proportion::from_f64(0.5), Some(Proportion::Half));
        assert_eq!(Proportion::from_f64(0.3), None);
        assert_eq!(Proportion::Half.moving_part(30), 15);
        assert_eq!(Proportion::Quarter.moving_part(3), 0);
    }

    #[test]
    fn atl_line_format() {
        let mut atl = ActionTimeList::new();
        atl.push(TimedAction {
            round: 12,
            player: Player::Red,
            action: Action::Move { id: EntityId(7), to: HexCoord::new(5, 3), proportion: Proportion::Half },
        });
        atl.push(TimedAction {
            round: 40,
            player: Player::Red,
            action: Action::SettleBuilding { id: EntityId(0), kind: BuildingType::Farm, at: HexCoord::new(3, 4) },
        });
        let text = atl.to_text();
        assert_eq!(text, "12;red;move;7;5,3;0.5\n40;red;settle;0;farm;3,4\n");
        assert_eq!(ActionTimeList::parse(&text).unwrap(), atl);
    }

    #[test]
    fn atl_rejects_bad_input() {
        assert!(ActionTimeList::parse("5;red;move;1;2,2;0.3\n").is_err());
        assert!(ActionTimeList::parse("5;blue;query\n").is_err());
        assert!(ActionTimeList::parse("9;red;query\n5;red;query\n").is_err());
        assert!(ActionTimeList::parse("x;red;query\n").is_err());
    }
}
