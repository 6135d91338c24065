use serde::{Deserialize, Serialize};

use super::{BuildingType, ConfigError, UnitType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSpec {
    pub attack: u32,
    pub hp: u32,
    /// Rounds per cell.
    pub move_period: u32,
    pub cost: u32,
    /// 0 = same cell, 1 = adjacent.
    pub range: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CastleSpec {
    pub cost: u32,
    pub hp: u32,
    pub settle_radius: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FarmSpec {
    pub cost: u32,
    pub hp: u32,
    pub income: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarracksSpec {
    pub cost: u32,
    pub hp: u32,
    /// Rounds per trained unit at level 1; level `L` uses `train_period / L`.
    pub train_period: u32,
    pub capacity: u32,
    pub archer_level: u32,
    pub knight_level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub cost: u32,
    pub hp: u32,
    pub radius: u32,
    pub damage: u32,
}

/// Rule constants. Per-level building values scale linearly with level
/// (`cost * L`, `hp * L`, `income * L`, `capacity * L`, `damage * L`); the castle
/// settle radius is `settle_radius + L`.
///
/// Stored as TOML with dotted keys, e.g. `peasant.attack = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct BalanceTable {
    pub starting_gold: u32,
    pub max_level: u32,
    /// Gold buys this much missing hp during a repair.
    pub repair_hp_per_gold: u32,
    /// Extra cells disabled at game creation, drawn from the seeded generator.
    pub terrain_noise: u32,
    pub peasant: UnitSpec,
    pub knight: UnitSpec,
    pub archer: UnitSpec,
    pub castle: CastleSpec,
    pub farm: FarmSpec,
    pub barracks: BarracksSpec,
    pub tower: TowerSpec,
}

impl Default for BalanceTable {
    fn default() -> Self {
        Self {
            starting_gold: 500,
            max_level: 3,
            repair_hp_per_gold: 10,
            terrain_noise: 0,
            peasant: UnitSpec { attack: 1, hp: 5, move_period: 10, cost: 10, range: 0 },
            knight: UnitSpec { attack: 3, hp: 15, move_period: 8, cost: 30, range: 0 },
            archer: UnitSpec { attack: 2, hp: 8, move_period: 10, cost: 20, range: 1 },
            castle: CastleSpec { cost: 300, hp: 500, settle_radius: 3 },
            farm: FarmSpec { cost: 100, hp: 100, income: 1 },
            barracks: BarracksSpec {
                cost: 150,
                hp: 150,
                train_period: 20,
                capacity: 50,
                archer_level: 2,
                knight_level: 3,
            },
            tower: TowerSpec { cost: 200, hp: 200, radius: 2, damage: 5 },
        }
    }
}

impl BalanceTable {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let table: BalanceTable = toml::from_str(text).map_err(|e| ConfigError::Balance(e.to_string()))?;
        table.validate()?;
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("balance table serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |what: &str| Err(ConfigError::Balance(format!("{what} must be positive")));
        if self.max_level == 0 {
            return bad("max-level");
        }
        if self.repair_hp_per_gold == 0 {
            return bad("repair-hp-per-gold");
        }
        for kind in UnitType::ALL {
            let u = self.unit(kind);
            if u.attack == 0 || u.hp == 0 || u.move_period == 0 || u.cost == 0 {
                return bad(kind.name());
            }
            if u.range > 1 {
                return Err(ConfigError::Balance(format!("{} range must be 0 or 1", kind.name())));
            }
        }
        if self.peasant.range != 0 || self.knight.range != 0 {
            return Err(ConfigError::Balance("melee units must have range 0".into()));
        }
        for kind in BuildingType::ALL {
            if self.base_cost(kind) == 0 || self.base_hp(kind) == 0 {
                return bad(kind.name());
            }
        }
        if self.farm.income == 0
            || self.barracks.train_period == 0
            || self.barracks.capacity == 0
            || self.tower.damage == 0
            || self.tower.radius == 0
        {
            return bad("building production values");
        }
        Ok(())
    }

    pub fn unit(&self, kind: UnitType) -> &UnitSpec {
        match kind {
            UnitType::Peasant => &self.peasant,
            UnitType::Knight => &self.knight,
            UnitType::Archer => &self.archer,
        }
    }

    fn base_cost(&self, kind: BuildingType) -> u32 {
        match kind {
            BuildingType::Castle => self.castle.cost,
            BuildingType::Farm => self.farm.cost,
            BuildingType::Barracks => self.barracks.cost,
            BuildingType::Tower => self.tower.cost,
        }
    }

    fn base_hp(&self, kind: BuildingType) -> u32 {
        match kind {
            BuildingType::Castle => self.castle.hp,
            BuildingType::Farm => self.farm.hp,
            BuildingType::Barracks => self.barracks.hp,
            BuildingType::Tower => self.tower.hp,
        }
    }

    /// Price of a building at `level`; settling costs level 1, an upgrade
    /// costs the next level.
    pub fn building_cost(&self, kind: BuildingType, level: u32) -> u32 {
        self.base_cost(kind) * level
    }

    pub fn building_hp(&self, kind: BuildingType, level: u32) -> u32 {
        self.base_hp(kind) * level
    }

    pub fn settle_radius(&self, level: u32) -> u32 {
        self.castle.settle_radius + level
    }

    pub fn farm_income(&self, level: u32) -> u32 {
        self.farm.income * level
    }

    pub fn train_period(&self, level: u32) -> u32 {
        (self.barracks.train_period / level.max(1)).max(1)
    }

    pub fn barracks_capacity(&self, level: u32) -> u32 {
        self.barracks.capacity * level
    }

    pub fn trains(&self, kind: UnitType, level: u32) -> bool {
        match kind {
            UnitType::Peasant => true,
            UnitType::Archer => level >= self.barracks.archer_level,
            UnitType::Knight => level >= self.barracks.knight_level,
        }
    }

    pub fn tower_damage(&self, level: u32) -> u32 {
        self.tower.damage * level
    }

    /// Gold needed to restore `missing` hp, rounded up.
    pub fn repair_cost(&self, missing: u32) -> u32 {
        missing.div_ceil(self.repair_hp_per_gold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_is_valid() {
        BalanceTable::default().validate().unwrap();
    }

    #[test]
    fn text_round_trip() {
        let t = BalanceTable::default();
        let text = t.to_text();
        assert!(text.contains("starting-gold = 500"));
        assert_eq!(BalanceTable::parse(&text).unwrap(), t);
    }

    #[test]
    fn per_level_values() {
        let t = BalanceTable::default();
        assert_eq!(t.building_cost(BuildingType::Farm, 2), 200);
        assert_eq!(t.building_hp(BuildingType::Castle, 3), 1500);
        assert_eq!(t.settle_radius(1), 4);
        assert_eq!(t.train_period(1), 20);
        assert_eq!(t.train_period(2), 10);
        assert_eq!(t.train_period(3), 6);
        assert_eq!(t.barracks_capacity(2), 100);
        assert_eq!(t.repair_cost(1), 1);
        assert_eq!(t.repair_cost(25), 3);
        assert!(t.trains(UnitType::Archer, 2) && !t.trains(UnitType::Knight, 2));
    }

    #[test]
    fn rejects_zero_cost_and_melee_range() {
        let mut t = BalanceTable::default();
        t.knight.cost = 0;
        assert!(t.validate().is_err());
        let mut t = BalanceTable::default();
        t.peasant.range = 1;
        assert!(t.validate().is_err());
        assert!(BalanceTable::parse("starting-gold = 'x'").is_err());
    }
}
