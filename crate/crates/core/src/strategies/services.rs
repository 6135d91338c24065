use crate::hexsim::{Action, BuildingType, EntityId, HexCoord, Proportion, UnitInfo, UnitState, UnitType, WorldView};

use super::Situation;

/// Data preparation step in front of an action leaf. Basic services run
/// unconditionally; strategy services need their StrategyInfo trigger.
#[derive(Clone, Debug, PartialEq)]
pub enum Service {
    Upgrade { kind: BuildingType, max_level: u32 },
    SpawnUnit { min_units: u32, fraction: f64 },
    Repair,
    GoToFreeHex,
    Settle { kind: BuildingType },
    AttackUnit { max_enemy: u32 },
    AttackBuilding { min_group: u32, max_hp: f64 },
    Defence { radius: u32, min_group: u32 },
    UnitReturn { max_distance: u32 },
    Split { max_quantity: u32, proportion: Proportion, range: u32 },
    Merge { min_quantity: u32, range: u32, target_size: u32 },
}

/// Everything a service may look at.
pub struct ServiceInput<'a> {
    pub view: &'a WorldView,
    pub situation: &'a Situation,
    pub feasible: &'a dyn Fn(&Action) -> bool,
}

impl ServiceInput<'_> {
    fn first_feasible(&self, candidates: impl IntoIterator<Item = Action>) -> Option<Action> {
        candidates.into_iter().find(|a| (self.feasible)(a))
    }

    fn idle_units(&self, ids: &[EntityId]) -> Vec<&UnitInfo> {
        ids.iter().filter_map(|&id| self.view.unit(id)).filter(|u| is_idle(u)).collect()
    }

    fn all_idle(&self) -> Vec<&UnitInfo> {
        let mut units: Vec<&UnitInfo> = self.view.units.iter().filter(|u| is_idle(u)).collect();
        units.sort_by_key(|u| u.id);
        units
    }

    /// Enabled cells with nothing on them, nearest to `from` first.
    fn empty_cells_near(&self, from: HexCoord, max: u32) -> Vec<HexCoord> {
        let mut cells: Vec<HexCoord> = self
            .view
            .map
            .enabled_cells()
            .filter(|&c| {
                let d = c.distance(from);
                d >= 1 && d <= max && self.view.cell_is_empty(c)
            })
            .collect();
        cells.sort_by_key(|&c| (c.distance(from), c));
        cells
    }
}

fn is_idle(u: &UnitInfo) -> bool {
    u.state == UnitState::Idle && u.destination.is_none()
}

fn full_move(id: EntityId, to: HexCoord) -> Action {
    Action::Move { id, to, proportion: Proportion::Full }
}

impl Service {
    pub fn is_strategy_service(&self) -> bool {
        !matches!(self, Service::Upgrade { .. } | Service::SpawnUnit { .. } | Service::Repair | Service::GoToFreeHex)
    }

    fn triggered(&self, s: &Situation) -> bool {
        match self {
            Service::Settle { kind } => s.settle_triggered(*kind),
            Service::AttackUnit { .. } | Service::AttackBuilding { .. } => s.attack,
            Service::Defence { .. } => s.defence,
            Service::UnitReturn { .. } => s.unit_return,
            Service::Split { .. } => s.split,
            Service::Merge { .. } => s.merge,
            _ => true,
        }
    }

    /// A feasible action for the next action leaf, if the service finds one.
    pub fn prepare(&self, input: &ServiceInput) -> Option<Action> {
        if !self.triggered(input.situation) {
            return None;
        }
        let view = input.view;
        match *self {
            Service::Upgrade { kind, max_level } => {
                let mut candidates: Vec<_> =
                    view.buildings.iter().filter(|b| b.kind == kind && b.level < max_level).collect();
                candidates.sort_by_key(|b| (b.level, b.id));
                input.first_feasible(candidates.into_iter().map(|b| Action::Upgrade { id: b.id }))
            }
            Service::SpawnUnit { min_units, fraction } => {
                let need = input.situation.need_units;
                if need == 0 {
                    return None;
                }
                let order = [UnitType::Knight, UnitType::Archer, UnitType::Peasant];
                let mut pools = view.barracks_pools.clone();
                pools.sort_by_key(|p| p.0);
                let candidates = pools.into_iter().flat_map(|(id, pool)| {
                    order.into_iter().filter_map(move |kind| {
                        let available = pool[kind.index()];
                        if available < min_units.max(1) {
                            return None;
                        }
                        let cost = view.balance.unit(kind).cost as i64;
                        let share = ((fraction * available as f64).floor() as u32).max(1);
                        let affordable = (view.gold / cost).max(0) as u32;
                        let quantity = share.min(need).min(affordable);
                        (quantity >= 1).then_some(Action::SpawnUnit { id, kind, quantity })
                    })
                });
                input.first_feasible(candidates)
            }
            Service::Repair => {
                let mut damaged: Vec<_> = view.buildings.iter().filter(|b| b.hp < b.max_hp).collect();
                damaged.sort_by(|a, b| {
                    let ra = a.hp as f64 / a.max_hp as f64;
                    let rb = b.hp as f64 / b.max_hp as f64;
                    ra.total_cmp(&rb).then(a.id.cmp(&b.id))
                });
                input.first_feasible(damaged.into_iter().map(|b| Action::Repair { id: b.id }))
            }
            Service::GoToFreeHex => {
                let blocking = input.all_idle().into_iter().filter(|u| view.buildings.iter().any(|b| b.pos == u.pos));
                for u in blocking {
                    let target = input.empty_cells_near(u.pos, 3).into_iter().next();
                    if let Some(a) = input.first_feasible(target.map(|c| full_move(u.id, c))) {
                        return Some(a);
                    }
                }
                None
            }
            Service::Settle { kind } => settle(input, kind),
            Service::AttackUnit { max_enemy } => {
                let targets: Vec<&UnitInfo> = view.enemy_units.iter().filter(|e| e.quantity < max_enemy).collect();
                for u in input.idle_units(&input.situation.attackers) {
                    let target = targets.iter().min_by_key(|e| (e.pos.distance(u.pos), e.id));
                    if let Some(a) = input.first_feasible(target.map(|e| full_move(u.id, e.pos))) {
                        return Some(a);
                    }
                }
                None
            }
            Service::AttackBuilding { min_group, max_hp } => {
                let targets: Vec<_> = view.enemy_buildings.iter().filter(|b| b.hp as f64 <= max_hp).collect();
                let groups = input.idle_units(&input.situation.attackers);
                for u in groups.into_iter().filter(|u| u.quantity >= min_group) {
                    let target = targets.iter().min_by_key(|b| (b.pos.distance(u.pos), b.id));
                    if let Some(a) = input.first_feasible(target.map(|b| full_move(u.id, b.pos))) {
                        return Some(a);
                    }
                }
                None
            }
            Service::Defence { radius, min_group } => {
                let mut castles: Vec<_> = view.castles().collect();
                castles.sort_by_key(|c| c.id);
                let threat = castles.iter().find_map(|c| {
                    view.enemy_units
                        .iter()
                        .filter(|e| e.quantity >= min_group && e.pos.distance(c.pos) <= radius)
                        .min_by_key(|e| (e.pos.distance(c.pos), e.id))
                })?;
                let defenders = input.idle_units(&input.situation.defenders);
                input.first_feasible(defenders.into_iter().map(|u| full_move(u.id, threat.pos)))
            }
            Service::UnitReturn { max_distance } => {
                let castles: Vec<HexCoord> = view.castles().map(|c| c.pos).collect();
                for u in input.idle_units(&input.situation.defenders) {
                    let &home = castles.iter().min_by_key(|c| (c.distance(u.pos), **c))?;
                    if home.distance(u.pos) <= max_distance {
                        continue;
                    }
                    let mut spots: Vec<HexCoord> = view
                        .map
                        .enabled_cells()
                        .filter(|&c| c.distance(home) <= max_distance && view.cell_is_empty(c))
                        .collect();
                    spots.sort_by_key(|&c| (c.distance(u.pos), c));
                    if let Some(a) = input.first_feasible(spots.into_iter().take(3).map(|c| full_move(u.id, c))) {
                        return Some(a);
                    }
                }
                None
            }
            Service::Split { max_quantity, proportion, range } => {
                for u in input.all_idle().into_iter().filter(|u| u.quantity > max_quantity) {
                    let spots = input.empty_cells_near(u.pos, range);
                    let moves = spots.into_iter().take(3).map(|to| Action::Move { id: u.id, to, proportion });
                    if let Some(a) = input.first_feasible(moves) {
                        return Some(a);
                    }
                }
                None
            }
            Service::Merge { min_quantity, range, target_size } => {
                let idle = input.all_idle();
                for u in idle.iter().filter(|u| u.quantity < min_quantity) {
                    let partner = view
                        .units
                        .iter()
                        .filter(|p| {
                            p.id != u.id
                                && p.kind == u.kind
                                && p.pos != u.pos
                                && p.pos.distance(u.pos) <= range
                                && p.quantity + u.quantity <= target_size
                        })
                        .min_by_key(|p| (p.pos.distance(u.pos), p.id));
                    if let Some(a) = input.first_feasible(partner.map(|p| full_move(u.id, p.pos))) {
                        return Some(a);
                    }
                }
                None
            }
        }
    }
}

fn settle(input: &ServiceInput, kind: BuildingType) -> Option<Action> {
    let view = input.view;
    let own_castles: Vec<_> = view.castles().collect();
    let nearest_castle = |c: HexCoord| own_castles.iter().map(|k| k.pos.distance(c)).min().unwrap_or(u32::MAX);
    let mut cells = view.free_cells.clone();
    match kind {
        BuildingType::Farm | BuildingType::Barracks => {
            cells.sort_by_key(|&c| (nearest_castle(c), c));
        }
        BuildingType::Tower => {
            let toward = |c: HexCoord| view.enemy_buildings.iter().map(|b| b.pos.distance(c)).min().unwrap_or(u32::MAX);
            cells.sort_by_key(|&c| (toward(c), c));
        }
        BuildingType::Castle => {
            cells.sort_by_key(|&c| (std::cmp::Reverse(nearest_castle(c)), c));
        }
    }
    let radius = |level| view.balance.settle_radius(level);
    let candidates = cells.into_iter().take(4).filter_map(|at| {
        let mut covering: Vec<_> = own_castles.iter().filter(|k| k.pos.distance(at) <= radius(k.level)).collect();
        covering.sort_by_key(|k| (k.pos.distance(at), k.id));
        covering.first().map(|k| Action::SettleBuilding { id: k.id, kind, at })
    });
    input.first_feasible(candidates)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::hexsim::{BalanceTable, GameState, Map, Player};
    use crate::strategies::{assess, InfoParams};

    fn state() -> GameState {
        GameState::new(Arc::new(Map::default_map()), Arc::new(BalanceTable::default()), 0, 100).unwrap()
    }

    fn hx(q: i32, r: i32) -> HexCoord {
        HexCoord::new(q, r)
    }

    fn run(s: &GameState, situation: &Situation, service: Service) -> Option<Action> {
        let view = s.world_view(Player::Red);
        let check = |a: &Action| s.check_feasible(Player::Red, a);
        service.prepare(&ServiceInput { view: &view, situation, feasible: &check })
    }

    fn situation(s: &GameState, balance: f64, offensive: bool) -> Situation {
        let p = InfoParams { units: 100, buildings: [1, 3, 1, 1], offensive, balance };
        assess(&p, &s.world_view(Player::Red))
    }

    #[test]
    fn spawn_takes_fraction_of_pool() {
        let mut s = state();
        let b = s.place_building(Player::Red, BuildingType::Barracks, hx(3, 5));
        s.building_mut(b).unwrap().pool = [10, 0, 0];
        let sit = situation(&s, 0.5, false);
        let a = run(&s, &sit, Service::SpawnUnit { min_units: 5, fraction: 0.5 });
        assert_eq!(a, Some(Action::SpawnUnit { id: b, kind: UnitType::Peasant, quantity: 5 }));
        assert_eq!(run(&s, &sit, Service::SpawnUnit { min_units: 11, fraction: 0.5 }), None);
        let sated = Situation { need_units: 2, ..sit.clone() };
        let capped = run(&s, &sated, Service::SpawnUnit { min_units: 5, fraction: 0.5 });
        assert_eq!(capped, Some(Action::SpawnUnit { id: b, kind: UnitType::Peasant, quantity: 2 }));
    }

    #[test]
    fn repair_needs_damage_and_upgrade_needs_gold() {
        let mut s = state();
        let sit = situation(&s, 0.5, false);
        assert_eq!(run(&s, &sit, Service::Repair), None);
        s.building_mut(EntityId(0)).unwrap().hp = 400;
        assert_eq!(run(&s, &sit, Service::Repair), Some(Action::Repair { id: EntityId(0) }));
        let up = Service::Upgrade { kind: BuildingType::Castle, max_level: 3 };
        assert_eq!(run(&s, &sit, up.clone()), None, "600 gold needed, 500 owned");
        s.set_gold(Player::Red, 600);
        assert_eq!(run(&s, &sit, up), Some(Action::Upgrade { id: EntityId(0) }));
        let capped = Service::Upgrade { kind: BuildingType::Castle, max_level: 1 };
        assert_eq!(run(&s, &sit, capped), None);
    }

    #[test]
    fn attack_unit_respects_threshold() {
        let mut s = state();
        let u = s.place_unit(Player::Red, UnitType::Knight, 20, hx(6, 5));
        s.place_unit(Player::Green, UnitType::Peasant, 12, hx(11, 4));
        let sit = situation(&s, 0.0, true);
        assert!(sit.attack);
        assert_eq!(run(&s, &sit, Service::AttackUnit { max_enemy: 10 }), None);
        assert_eq!(run(&s, &sit, Service::AttackUnit { max_enemy: 13 }), Some(full_move(u, hx(11, 4))));
    }

    #[test]
    fn strategy_services_need_triggers() {
        let mut s = state();
        s.place_unit(Player::Red, UnitType::Knight, 20, hx(6, 5));
        s.place_unit(Player::Green, UnitType::Peasant, 1, hx(11, 4));
        let defensive = situation(&s, 0.0, false);
        assert!(!defensive.attack);
        assert_eq!(run(&s, &defensive, Service::AttackUnit { max_enemy: 50 }), None);
        let no_settle = Situation { settle: [false; 4], ..defensive };
        assert_eq!(run(&s, &no_settle, Service::Settle { kind: BuildingType::Farm }), None);
    }

    #[test]
    fn attack_building_honors_group_and_hp() {
        let mut s = state();
        let u = s.place_unit(Player::Red, UnitType::Knight, 4, hx(6, 5));
        let sit = situation(&s, 0.0, true);
        let go = |min_group, max_hp| run(&s, &sit, Service::AttackBuilding { min_group, max_hp });
        assert_eq!(go(5, 1000.0), None);
        assert_eq!(go(4, 400.0), None);
        assert_eq!(go(4, 500.0), Some(full_move(u, hx(13, 4))));
    }

    #[test]
    fn defence_moves_defender_to_threat() {
        let mut s = state();
        let d = s.place_unit(Player::Red, UnitType::Knight, 3, hx(2, 7));
        s.place_unit(Player::Green, UnitType::Peasant, 5, hx(4, 5));
        let sit = situation(&s, 1.0, false);
        assert_eq!(run(&s, &sit, Service::Defence { radius: 2, min_group: 3 }), Some(full_move(d, hx(4, 5))));
        assert_eq!(run(&s, &sit, Service::Defence { radius: 1, min_group: 3 }), None);
        assert_eq!(run(&s, &sit, Service::Defence { radius: 2, min_group: 6 }), None);
    }

    #[test]
    fn split_sends_part_to_free_cell() {
        let mut s = state();
        let u = s.place_unit(Player::Red, UnitType::Peasant, 30, hx(4, 5));
        let sit = situation(&s, 1.0, false);
        let a = run(&s, &sit, Service::Split { max_quantity: 20, proportion: Proportion::Half, range: 2 });
        let Some(Action::Move { id, to, proportion }) = a else { panic!("{a:?}") };
        assert_eq!((id, proportion), (u, Proportion::Half));
        assert_eq!(to.distance(hx(4, 5)), 1);
        let none = Service::Split { max_quantity: 30, proportion: Proportion::Half, range: 2 };
        assert_eq!(run(&s, &sit, none), None);
    }

    #[test]
    fn merge_joins_small_groups() {
        let mut s = state();
        let a = s.place_unit(Player::Red, UnitType::Peasant, 2, hx(4, 5));
        s.place_unit(Player::Red, UnitType::Peasant, 3, hx(5, 5));
        s.place_unit(Player::Red, UnitType::Knight, 3, hx(4, 6));
        let sit = situation(&s, 0.0, true);
        let merge = |min_quantity, target_size| run(&s, &sit, Service::Merge { min_quantity, range: 2, target_size });
        assert_eq!(merge(3, 10), Some(full_move(a, hx(5, 5))));
        assert_eq!(merge(3, 4), None);
        assert_eq!(merge(2, 10), None);
    }

    #[test]
    fn unit_return_brings_far_defenders_home() {
        let mut s = state();
        let u = s.place_unit(Player::Red, UnitType::Peasant, 2, hx(6, 2));
        let sit = situation(&s, 1.0, false);
        let a = run(&s, &sit, Service::UnitReturn { max_distance: 2 });
        let Some(Action::Move { id, to, .. }) = a else { panic!("{a:?}") };
        assert_eq!(id, u);
        assert!(to.distance(hx(2, 5)) <= 2);
        assert_eq!(run(&s, &sit, Service::UnitReturn { max_distance: 5 }), None);
    }

    #[test]
    fn settle_placement_rules() {
        let mut s = state();
        s.set_gold(Player::Red, 1000);
        let sit = Situation { settle: [true; 4], ..situation(&s, 1.0, false) };
        let at = |kind| match run(&s, &sit, Service::Settle { kind }) {
            Some(Action::SettleBuilding { at, .. }) => at,
            other => panic!("{other:?}"),
        };
        assert_eq!(at(BuildingType::Farm).distance(hx(2, 5)), 1);
        assert_eq!(at(BuildingType::Tower).distance(hx(2, 5)), 4);
        assert_eq!(at(BuildingType::Castle).distance(hx(2, 5)), 4);
    }

    #[test]
    fn units_on_buildings_step_aside() {
        let mut s = state();
        let u = s.place_unit(Player::Red, UnitType::Peasant, 1, hx(2, 5));
        let sit = situation(&s, 1.0, false);
        let Some(Action::Move { id, to, .. }) = run(&s, &sit, Service::GoToFreeHex) else { panic!() };
        assert_eq!((id, to.distance(hx(2, 5))), (u, 1));
    }
}
