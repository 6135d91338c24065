use std::sync::Arc;

use abtune::hexsim::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fresh(horizon: u32) -> GameState {
    GameState::new(Arc::new(Map::default_map()), Arc::new(BalanceTable::default()), 1, horizon).unwrap()
}

fn hx(q: i32, r: i32) -> HexCoord {
    HexCoord::new(q, r)
}

const RED_CASTLE: EntityId = EntityId(0);
const GREEN_CASTLE: EntityId = EntityId(1);

#[test]
fn settle_needs_exact_gold() {
    let mut s = fresh(100);
    let farm = Action::SettleBuilding { id: RED_CASTLE, kind: BuildingType::Farm, at: hx(3, 5) };
    s.set_gold(Player::Red, 100);
    assert!(s.check_feasible(Player::Red, &farm));
    s.set_gold(Player::Red, 99);
    assert!(!s.check_feasible(Player::Red, &farm));
}

#[test]
fn settle_respects_radius_and_occupancy() {
    let s = fresh(100);
    let near = |at| Action::SettleBuilding { id: RED_CASTLE, kind: BuildingType::Farm, at };
    assert!(s.check_feasible(Player::Red, &near(hx(6, 5))));
    assert!(!s.check_feasible(Player::Red, &near(hx(2, 5))), "castle cell");
    assert!(!s.check_feasible(Player::Red, &near(hx(7, 5))), "radius 4 at level 1");
    assert!(!s.check_feasible(Player::Green, &near(hx(3, 5))), "not green's castle");
}

#[test]
fn cannot_move_enemy_units() {
    let mut s = fresh(100);
    let id = s.place_unit(Player::Green, UnitType::Knight, 2, hx(12, 4));
    let mv = Action::Move { id, to: hx(11, 4), proportion: Proportion::Full };
    assert!(!s.check_feasible(Player::Red, &mv));
    assert!(s.check_feasible(Player::Green, &mv));
}

#[test]
fn max_level_cannot_upgrade() {
    let mut s = fresh(100);
    s.set_gold(Player::Red, 100_000);
    let up = Action::Upgrade { id: RED_CASTLE };
    assert!(s.check_feasible(Player::Red, &up));
    s.building_mut(RED_CASTLE).unwrap().level = 3;
    assert!(!s.check_feasible(Player::Red, &up));
}

#[test]
fn upgrade_charges_next_level_cost() {
    let mut s = fresh(100);
    s.set_gold(Player::Red, 1000);
    let farm = s.place_building(Player::Red, BuildingType::Farm, hx(3, 5));
    s.issue_action(Player::Red, Action::Upgrade { id: farm });
    s.step_round();
    // 200 for level 2, then one round of level-2 income
    assert_eq!(s.gold(Player::Red), 1000 - 200 + 2);
    assert_eq!(s.building(farm).unwrap().level, 2);
}

#[test]
fn farm_pays_each_round() {
    let mut s = fresh(100);
    s.place_building(Player::Red, BuildingType::Farm, hx(3, 5));
    let g0 = s.gold(Player::Red);
    for k in 1..=5 {
        s.step_round();
        assert_eq!(s.gold(Player::Red), g0 + k);
    }
    assert_eq!(s.gold(Player::Green), 500);
}

#[test]
fn colocated_peasant_and_archer_trade_blows() {
    let mut s = fresh(100);
    let p = s.place_unit(Player::Red, UnitType::Peasant, 1, hx(5, 5));
    let a = s.place_unit(Player::Green, UnitType::Archer, 1, hx(5, 5));
    s.step_round();
    assert_eq!(s.unit(p).unwrap().hp, 5 - 2);
    assert_eq!(s.unit(a).unwrap().hp, 8 - 1);
    assert_eq!(s.unit(p).unwrap().state, UnitState::Battling);
}

#[test]
fn archer_hits_adjacent_peasant_does_not() {
    let mut s = fresh(100);
    let p = s.place_unit(Player::Red, UnitType::Peasant, 1, hx(5, 5));
    let a = s.place_unit(Player::Green, UnitType::Archer, 1, hx(6, 5));
    s.step_round();
    assert_eq!(s.unit(p).unwrap().hp, 3);
    assert_eq!(s.unit(a).unwrap().hp, 8);
}

#[test]
fn battle_kills_whole_members() {
    let mut s = fresh(100);
    let k = s.place_unit(Player::Red, UnitType::Knight, 4, hx(5, 5));
    let p = s.place_unit(Player::Green, UnitType::Peasant, 5, hx(5, 5));
    s.step_round();
    // 12 damage against 5 hp members: two die, the pool drops to 13
    let peasants = s.unit(p).unwrap();
    assert_eq!((peasants.quantity, peasants.hp), (3, 13));
    let knights = s.unit(k).unwrap();
    assert_eq!((knights.quantity, knights.hp), (4, 55));
}

#[test]
fn units_damage_buildings_on_their_cell() {
    let mut s = fresh(100);
    s.place_unit(Player::Red, UnitType::Knight, 10, hx(13, 4));
    s.step_round();
    let castle = s.building(GREEN_CASTLE).unwrap();
    assert_eq!(castle.hp, 500 - 30);
    assert_eq!(castle.state, BuildingState::UnderAttack);
}

#[test]
fn destroying_last_castle_ends_the_game() {
    let mut s = fresh(1000);
    s.building_mut(GREEN_CASTLE).unwrap().hp = 3;
    s.place_unit(Player::Red, UnitType::Knight, 1, hx(13, 4));
    s.step_round();
    assert_eq!(s.status(), GameStatus::RedWon);
    assert!(!s.check_feasible(Player::Red, &Action::Query));
}

#[test]
fn horizon_compares_gold() {
    let mut s = fresh(3);
    s.place_building(Player::Green, BuildingType::Farm, hx(12, 4));
    for _ in 0..3 {
        s.step_round();
    }
    assert_eq!(s.status(), GameStatus::GreenWon);
    let mut even = fresh(2);
    even.step_round();
    even.step_round();
    assert_eq!(even.status(), GameStatus::Draw);
}

#[test]
fn tower_shoots_enemy_in_radius() {
    let mut s = fresh(100);
    s.place_building(Player::Red, BuildingType::Tower, hx(5, 5));
    let k = s.place_unit(Player::Green, UnitType::Knight, 2, hx(6, 4));
    s.step_round();
    assert_eq!(s.unit(k).unwrap().hp, 30 - 5);
}

#[test]
fn barracks_trains_and_spawns() {
    let mut s = fresh(100);
    let b = s.place_building(Player::Red, BuildingType::Barracks, hx(3, 5));
    for _ in 0..20 {
        s.step_round();
    }
    assert_eq!(s.building(b).unwrap().pool, [1, 0, 0]);
    let spawn = Action::SpawnUnit { id: b, kind: UnitType::Peasant, quantity: 1 };
    assert!(s.check_feasible(Player::Red, &spawn));
    assert!(!s.check_feasible(Player::Red, &Action::SpawnUnit { id: b, kind: UnitType::Peasant, quantity: 2 }));
    s.issue_action(Player::Red, spawn);
    let out = s.step_round();
    assert_eq!(out.executed[0].len(), 1);
    assert_eq!(s.features(Player::Red)[3], 1);
    assert_eq!(s.gold(Player::Red), 490);
}

#[test]
fn movement_takes_move_period_rounds_per_step() {
    let mut s = fresh(100);
    let u = s.place_unit(Player::Red, UnitType::Knight, 1, hx(3, 5));
    s.issue_action(Player::Red, Action::Move { id: u, to: hx(5, 5), proportion: Proportion::Full });
    for _ in 0..7 {
        s.step_round();
    }
    assert_eq!(s.unit(u).unwrap().pos, hx(3, 5));
    s.step_round();
    assert_eq!(s.unit(u).unwrap().pos, hx(4, 5));
    for _ in 0..8 {
        s.step_round();
    }
    let unit = s.unit(u).unwrap();
    assert_eq!((unit.pos, unit.state), (hx(5, 5), UnitState::Idle));
}

#[test]
fn split_preserves_quantity_and_hp() {
    let mut s = fresh(100);
    let u = s.place_unit(Player::Red, UnitType::Peasant, 8, hx(3, 5));
    s.unit_mut(u).unwrap().hp = 36;
    s.issue_action(Player::Red, Action::Move { id: u, to: hx(5, 5), proportion: Proportion::Quarter });
    s.step_round();
    let red: Vec<_> = s.units().filter(|x| x.owner == Player::Red).cloned().collect();
    assert_eq!(red.len(), 2);
    assert_eq!(red.iter().map(|x| x.quantity).sum::<u32>(), 8);
    assert_eq!(red.iter().map(|x| x.hp).sum::<i64>(), 36);
    assert_eq!(s.unit(u).unwrap().quantity, 6);
}

#[test]
fn split_of_single_member_is_infeasible() {
    let mut s = fresh(100);
    let u = s.place_unit(Player::Red, UnitType::Peasant, 1, hx(3, 5));
    let mv = |p| Action::Move { id: u, to: hx(5, 5), proportion: p };
    assert!(!s.check_feasible(Player::Red, &mv(Proportion::Half)));
    assert!(s.check_feasible(Player::Red, &mv(Proportion::Full)));
}

#[test]
fn same_type_units_merge_at_destination() {
    let mut s = fresh(100);
    let a = s.place_unit(Player::Red, UnitType::Peasant, 2, hx(3, 5));
    let b = s.place_unit(Player::Red, UnitType::Peasant, 3, hx(4, 5));
    s.issue_action(Player::Red, Action::Move { id: a, to: hx(4, 5), proportion: Proportion::Full });
    for _ in 0..10 {
        s.step_round();
    }
    assert!(s.unit(a).is_none());
    assert_eq!(s.unit(b).unwrap().quantity, 5);
}

#[test]
fn path_queries() {
    let s = fresh(100);
    assert_eq!(s.find_path(hx(3, 5), hx(3, 5), Player::Red), Some(vec![]));
    let p = s.find_path(hx(2, 5), hx(13, 4), Player::Red).unwrap();
    assert_eq!(p.last(), Some(&hx(13, 4)));
    let mut prev = hx(2, 5);
    for &c in &p {
        assert_eq!(prev.distance(c), 1);
        assert!(s.map().is_enabled(c));
        prev = c;
    }
    assert_eq!(s.find_path(hx(2, 5), hx(7, 0), Player::Red), None);
}

#[test]
fn enemy_units_block_paths_except_at_destination() {
    let mut s = fresh(100);
    // the ford cells at q = 7 and q = 8 are the only crossings
    let fords: Vec<HexCoord> = (0..10).flat_map(|r| [hx(7, r), hx(8, r)]).filter(|&c| s.map().is_enabled(c)).collect();
    for &c in &fords {
        s.place_unit(Player::Green, UnitType::Peasant, 1, c);
    }
    assert_eq!(s.find_path(hx(2, 5), hx(13, 4), Player::Red), None);
    assert!(s.find_path(hx(2, 5), hx(7, 2), Player::Red).is_some());
    assert!(s.find_path(hx(2, 5), hx(13, 4), Player::Green).is_some());
}

#[test]
fn world_view_partitions_entities() {
    let mut s = fresh(100);
    s.place_unit(Player::Red, UnitType::Peasant, 2, hx(3, 5));
    s.place_unit(Player::Green, UnitType::Knight, 1, hx(12, 4));
    let v = s.world_view(Player::Red);
    assert_eq!(v.player, Player::Red);
    assert_eq!(v.gold, 500);
    assert_eq!((v.units.len(), v.enemy_units.len()), (1, 1));
    assert_eq!((v.buildings.len(), v.enemy_buildings.len()), (1, 1));
    assert!(!v.free_cells.contains(&hx(3, 5)));
    assert!(!v.free_cells.contains(&hx(2, 5)));
    assert!(v.free_cells.iter().all(|c| c.distance(hx(2, 5)) <= 4));
    assert!(v.free_cells.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(v.castles().count(), 1);
}

#[test]
fn strict_player_fails_on_infeasible_action() {
    let mut s = fresh(100);
    s.set_strict(Player::Green, true);
    s.set_gold(Player::Red, 1000);
    s.issue_action(Player::Green, Action::SpawnUnit { id: EntityId(9), kind: UnitType::Peasant, quantity: 1 });
    s.issue_action(Player::Red, Action::Upgrade { id: RED_CASTLE });
    let out = s.step_round();
    assert_eq!(s.status(), GameStatus::Failure { player: Player::Green });
    assert_eq!(out.executed[0].len(), 1, "red already executed");
}

#[test]
fn lenient_player_drops_infeasible_action() {
    let mut s = fresh(100);
    s.issue_action(Player::Red, Action::Repair { id: RED_CASTLE });
    let out = s.step_round();
    assert!(out.executed[0].is_empty());
    assert_eq!(s.status(), GameStatus::Running);
}

#[test]
fn replayed_spawn_from_destroyed_barracks_fails() {
    let mut s = fresh(100);
    let b = s.place_building(Player::Red, BuildingType::Barracks, hx(3, 5));
    s.building_mut(b).unwrap().pool = [2, 0, 0];
    s.building_mut(b).unwrap().hp = 1;
    s.place_unit(Player::Green, UnitType::Peasant, 1, hx(3, 5));
    s.set_strict(Player::Red, true);
    s.step_round();
    assert!(s.building(b).is_none());
    s.issue_action(Player::Red, Action::SpawnUnit { id: b, kind: UnitType::Peasant, quantity: 1 });
    s.step_round();
    assert_eq!(s.status(), GameStatus::Failure { player: Player::Red });
}

/// Issues a handful of random, often infeasible, actions each round.
struct Chaos {
    rng: ChaCha8Rng,
}

impl PlayerDriver for Chaos {
    fn decide(&mut self, state: &GameState, player: Player) -> Vec<Action> {
        let v = state.world_view(player);
        let mut out = Vec::new();
        for _ in 0..self.rng.random_range(0..3) {
            let cell = hx(self.rng.random_range(0..16), self.rng.random_range(0..10));
            let building = v.buildings.get(self.rng.random_range(0..v.buildings.len().max(1)));
            let unit = v.units.get(self.rng.random_range(0..v.units.len().max(1)));
            let a = match self.rng.random_range(0..6) {
                0 => building.map(|b| Action::SettleBuilding {
                    id: b.id,
                    kind: BuildingType::ALL[self.rng.random_range(0..4)],
                    at: cell,
                }),
                1 => building.map(|b| Action::SpawnUnit {
                    id: b.id,
                    kind: UnitType::ALL[self.rng.random_range(0..3)],
                    quantity: self.rng.random_range(1..4),
                }),
                2 => unit.map(|u| Action::Move {
                    id: u.id,
                    to: cell,
                    proportion: Proportion::ALL[self.rng.random_range(0..4)],
                }),
                3 => building.map(|b| Action::Upgrade { id: b.id }),
                4 => building.map(|b| Action::Repair { id: b.id }),
                _ => Some(Action::Query),
            };
            out.extend(a);
        }
        out
    }

    fn is_strict(&self) -> bool {
        false
    }
}

fn chaos_match(seed: u64, horizon: u32) -> GameRecord {
    let config = MatchConfig::new(Map::default_map(), BalanceTable::default(), seed, horizon);
    let mut red = Chaos { rng: ChaCha8Rng::seed_from_u64(seed * 2) };
    let mut green = Chaos { rng: ChaCha8Rng::seed_from_u64(seed * 2 + 1) };
    run_match(&mut red, &mut green, &config).unwrap()
}

#[test]
fn chaotic_games_are_deterministic_and_replayable() {
    for seed in 0..6 {
        let a = chaos_match(seed, 1500);
        let b = chaos_match(seed, 1500);
        assert_eq!(a.to_bytes(), b.to_bytes());
        assert!(!a.status.is_failure());
        let config = MatchConfig::new(Map::default_map(), BalanceTable::default(), seed, 1500);
        let mut red = AtlPlayer::new(a.atl(Player::Red).clone());
        let mut green = AtlPlayer::new(a.atl(Player::Green).clone());
        let replay = run_match(&mut red, &mut green, &config).unwrap();
        assert_eq!(replay, a, "seed {seed}");
    }
}

#[test]
fn atl_text_round_trip_replays() {
    let rec = chaos_match(42, 800);
    let text = rec.atl(Player::Red).to_text();
    assert_eq!(&ActionTimeList::parse(&text).unwrap(), rec.atl(Player::Red));
    let back = GameRecord::from_json(&rec.to_json()).unwrap();
    assert_eq!(back, rec);
}

#[test]
fn terrain_noise_is_seeded() {
    let balance = BalanceTable { terrain_noise: 12, ..BalanceTable::default() };
    let make = |seed| GameState::new(Arc::new(Map::default_map()), Arc::new(balance.clone()), seed, 10).unwrap();
    let disabled = |s: &GameState| s.map().cells().filter(|&c| !s.map().is_enabled(c)).count();
    let base = disabled(&fresh(10));
    assert_eq!(disabled(&make(5)), base + 12);
    assert_eq!(make(5).map(), make(5).map());
    assert_ne!(make(5).map(), make(6).map());
}
