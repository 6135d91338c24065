use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::path::astar;
use super::{
    Action, Attacker, BalanceTable, Building, BuildingInfo, BuildingState, BuildingType, ConfigError, EntityId,
    HexCoord, Map, Player, Proportion, Unit, UnitInfo, UnitState, UnitType, WorldView, XorShift64,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameStatus {
    Running,
    RedWon,
    GreenWon,
    Draw,
    /// A strict (replaying) player issued an infeasible action.
    Failure {
        player: Player,
    },
}

impl GameStatus {
    pub fn is_failure(self) -> bool {
        matches!(self, GameStatus::Failure { .. })
    }

    pub fn name(self) -> &'static str {
        match self {
            GameStatus::Running => "running",
            GameStatus::RedWon => "red-won",
            GameStatus::GreenWon => "green-won",
            GameStatus::Draw => "draw",
            GameStatus::Failure { .. } => "failure",
        }
    }
}

/// Number of per-player features logged each round.
pub const FEATURE_COUNT: usize = 10;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] =
    ["gold", "units", "buildings", "peasant", "knight", "archer", "castle", "farm", "barracks", "tower"];

/// Per-player resource counts: gold, total unit quantity, total building
/// count, per-unit-type quantities and per-building-type counts.
pub type Features = [u32; FEATURE_COUNT];

/// Actions that passed execution in one round.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundOutcome {
    pub executed: [Vec<Action>; 2],
}

/// Full deterministic world state.
#[derive(Clone, Debug, PartialEq)]
pub struct GameState {
    map: Arc<Map>,
    balance: Arc<BalanceTable>,
    seed: u64,
    horizon: u32,
    round: u32,
    gold: [i64; 2],
    units: BTreeMap<EntityId, Unit>,
    buildings: BTreeMap<EntityId, Building>,
    next_seq: [u32; 2],
    queues: [Vec<Action>; 2],
    strict: [bool; 2],
    rng: XorShift64,
    status: GameStatus,
}

impl GameState {
    /// Sets up a fresh game: one level-1 castle per player on the map's start
    /// cells and the starting gold.
    pub fn new(map: Arc<Map>, balance: Arc<BalanceTable>, seed: u64, horizon: u32) -> Result<Self, ConfigError> {
        balance.validate()?;
        if horizon == 0 {
            return Err(ConfigError::Horizon);
        }
        for p in Player::BOTH {
            if !map.is_enabled(map.start(p)) {
                return Err(ConfigError::Map(format!("start cell of {p} is disabled")));
            }
        }
        let mut rng = XorShift64::new(seed);
        let map =
            if balance.terrain_noise > 0 { Arc::new(roughen(&map, balance.terrain_noise, &mut rng)) } else { map };
        let gold = balance.starting_gold as i64;
        let mut state = Self {
            map,
            balance,
            seed,
            horizon,
            round: 0,
            gold: [gold, gold],
            units: BTreeMap::new(),
            buildings: BTreeMap::new(),
            next_seq: [0, 0],
            queues: Default::default(),
            strict: [false, false],
            rng,
            status: GameStatus::Running,
        };
        for p in Player::BOTH {
            let at = state.map.start(p);
            state.add_building(p, BuildingType::Castle, at);
        }
        Ok(state)
    }

    pub fn map(&self) -> &Arc<Map> {
        &self.map
    }

    pub fn balance(&self) -> &Arc<BalanceTable> {
        &self.balance
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn status(&self) -> GameStatus {
        self.status
    }

    pub fn gold(&self, p: Player) -> i64 {
        self.gold[p.index()]
    }

    pub fn units(&self) -> impl Iterator<Item = &Unit> {
        self.units.values()
    }

    pub fn buildings(&self) -> impl Iterator<Item = &Building> {
        self.buildings.values()
    }

    pub fn unit(&self, id: EntityId) -> Option<&Unit> {
        self.units.get(&id)
    }

    pub fn building(&self, id: EntityId) -> Option<&Building> {
        self.buildings.get(&id)
    }

    /// Marks a player as replaying: its infeasible actions fail the game
    /// instead of being dropped.
    pub fn set_strict(&mut self, p: Player, strict: bool) {
        self.strict[p.index()] = strict;
    }

    pub fn queued(&self, p: Player) -> &[Action] {
        &self.queues[p.index()]
    }

    fn next_id(&mut self, owner: Player) -> EntityId {
        let seq = &mut self.next_seq[owner.index()];
        let id = EntityId::allocate(owner, *seq);
        *seq += 1;
        id
    }

    fn add_building(&mut self, owner: Player, kind: BuildingType, at: HexCoord) -> EntityId {
        let id = self.next_id(owner);
        let hp = self.balance.building_hp(kind, 1) as i64;
        self.buildings.insert(
            id,
            Building {
                id,
                owner,
                kind,
                level: 1,
                hp,
                pos: at,
                state: BuildingState::Idle,
                pool: [0; 3],
                train_timer: 0,
            },
        );
        id
    }

    // ---------------------------------------------------------------------
    // occupancy
    // ---------------------------------------------------------------------

    pub fn unit_at(&self, owner: Player, c: HexCoord) -> Option<&Unit> {
        self.units.values().find(|u| u.owner == owner && u.pos == c)
    }

    pub fn building_at(&self, c: HexCoord) -> Option<&Building> {
        self.buildings.values().find(|b| b.pos == c)
    }

    fn enemy_present(&self, owner: Player, c: HexCoord) -> bool {
        let enemy = owner.opponent();
        self.units.values().any(|u| u.owner == enemy && u.pos == c)
            || self.buildings.values().any(|b| b.owner == enemy && b.pos == c)
    }

    fn occupancy(&self, owner: Player, avoid_friendly_units: bool) -> Vec<bool> {
        let mut blocked = vec![false; self.map.cell_count()];
        let enemy = owner.opponent();
        for u in self.units.values() {
            if u.owner == enemy || avoid_friendly_units {
                if let Some(i) = self.map.index(u.pos) {
                    blocked[i] = true;
                }
            }
        }
        for b in self.buildings.values().filter(|b| b.owner == enemy) {
            if let Some(i) = self.map.index(b.pos) {
                blocked[i] = true;
            }
        }
        blocked
    }

    /// Shortest path for `player` from `from` to `to`, avoiding disabled cells
    /// and cells held by enemy entities (the destination itself may be held).
    /// Empty when `from == to`; `None` when unreachable.
    pub fn find_path(&self, from: HexCoord, to: HexCoord, player: Player) -> Option<Vec<HexCoord>> {
        if !self.map.is_enabled(from) {
            return None;
        }
        let blocked = self.occupancy(player, false);
        astar(&self.map, from, to, |i| blocked[i])
    }

    fn find_path_around_friends(&self, unit: &Unit, to: HexCoord) -> Option<Vec<HexCoord>> {
        let mut blocked = self.occupancy(unit.owner, true);
        if let Some(i) = self.map.index(unit.pos) {
            blocked[i] = false;
        }
        astar(&self.map, unit.pos, to, |i| blocked[i])
    }

    fn spawn_cell(&self, owner: Player, barracks: HexCoord, kind: UnitType) -> Option<HexCoord> {
        match self.unit_at(owner, barracks) {
            None => return Some(barracks),
            Some(u) if u.kind == kind => return Some(barracks),
            Some(_) => {}
        }
        let mut best: Option<(u32, HexCoord)> = None;
        for c in self.map.enabled_cells() {
            let d = c.distance(barracks);
            if d == 0 || d > 2 {
                continue;
            }
            if self.unit_at(owner, c).is_some() || self.enemy_present(owner, c) {
                continue;
            }
            if best.is_none_or(|b| (d, c) < b) {
                best = Some((d, c));
            }
        }
        best.map(|(_, c)| c)
    }

    // ---------------------------------------------------------------------
    // feasibility
    // ---------------------------------------------------------------------

    /// Whether `action` could execute for `player` right now.
    pub fn check_feasible(&self, player: Player, action: &Action) -> bool {
        if self.status != GameStatus::Running {
            return false;
        }
        let gold = self.gold[player.index()];
        let owned_building = |id: &EntityId| self.buildings.get(id).filter(|b| b.owner == player);
        match action {
            Action::Query => true,
            Action::Move { id, to, proportion } => {
                let Some(u) = self.units.get(id).filter(|u| u.owner == player) else {
                    return false;
                };
                if !self.map.is_enabled(*to) || *to == u.pos {
                    return false;
                }
                let Some(path) = self.find_path(u.pos, *to, player) else {
                    return false;
                };
                if *proportion == Proportion::Full {
                    return true;
                }
                let moving = proportion.moving_part(u.quantity);
                moving >= 1 && moving < u.quantity && self.unit_at(player, path[0]).is_none()
            }
            Action::SpawnUnit { id, kind, quantity } => {
                let Some(b) = owned_building(id).filter(|b| b.kind == BuildingType::Barracks) else {
                    return false;
                };
                let price = self.balance.unit(*kind).cost as i64 * *quantity as i64;
                *quantity >= 1
                    && b.pool[kind.index()] >= *quantity
                    && gold >= price
                    && self.spawn_cell(player, b.pos, *kind).is_some()
            }
            Action::SettleBuilding { id, kind, at } => {
                let Some(castle) = owned_building(id).filter(|b| b.kind == BuildingType::Castle) else {
                    return false;
                };
                self.map.is_enabled(*at)
                    && castle.pos.distance(*at) <= self.balance.settle_radius(castle.level)
                    && self.building_at(*at).is_none()
                    && !self.units.values().any(|u| u.pos == *at)
                    && gold >= self.balance.building_cost(*kind, 1) as i64
            }
            Action::Upgrade { id } => owned_building(id).is_some_and(|b| {
                b.level < self.balance.max_level && gold >= self.balance.building_cost(b.kind, b.level + 1) as i64
            }),
            Action::Repair { id } => owned_building(id).is_some_and(|b| {
                let max = self.balance.building_hp(b.kind, b.level) as i64;
                b.hp < max && gold >= self.balance.repair_cost((max - b.hp) as u32) as i64
            }),
        }
    }

    /// Queues an action for execution at the end of the current round.
    pub fn issue_action(&mut self, player: Player, action: Action) {
        if self.status == GameStatus::Running {
            self.queues[player.index()].push(action);
        }
    }

    fn execute(&mut self, player: Player, action: &Action) {
        let pi = player.index();
        match *action {
            Action::Query => {}
            Action::Move { id, to, proportion } => {
                let u = &self.units[&id];
                let mut path: VecDeque<HexCoord> = self.find_path(u.pos, to, player).expect("checked").into();
                if proportion == Proportion::Full {
                    let u = self.units.get_mut(&id).expect("checked");
                    u.path = path;
                    u.state = UnitState::Moving;
                    u.move_timer = 0;
                    return;
                }
                let moving = proportion.moving_part(u.quantity);
                let moving_hp = u.hp * moving as i64 / u.quantity as i64;
                let kind = u.kind;
                let first = path.pop_front().expect("non-empty path");
                let new_id = self.next_id(player);
                let u = self.units.get_mut(&id).expect("checked");
                u.quantity -= moving;
                u.hp -= moving_hp;
                let state = if path.is_empty() { UnitState::Idle } else { UnitState::Moving };
                self.units.insert(
                    new_id,
                    Unit {
                        id: new_id,
                        owner: player,
                        kind,
                        quantity: moving,
                        hp: moving_hp,
                        pos: first,
                        state,
                        path,
                        move_timer: 0,
                        last_attacker: None,
                    },
                );
            }
            Action::SpawnUnit { id, kind, quantity } => {
                let spec = *self.balance.unit(kind);
                let b = &self.buildings[&id];
                let at = self.spawn_cell(player, b.pos, kind).expect("checked");
                self.gold[pi] -= spec.cost as i64 * quantity as i64;
                self.buildings.get_mut(&id).expect("checked").pool[kind.index()] -= quantity;
                let hp = spec.hp as i64 * quantity as i64;
                if let Some(existing) = self.unit_at(player, at).map(|u| u.id) {
                    let u = self.units.get_mut(&existing).expect("present");
                    u.quantity += quantity;
                    u.hp += hp;
                } else {
                    let new_id = self.next_id(player);
                    self.units.insert(
                        new_id,
                        Unit {
                            id: new_id,
                            owner: player,
                            kind,
                            quantity,
                            hp,
                            pos: at,
                            state: UnitState::Idle,
                            path: VecDeque::new(),
                            move_timer: 0,
                            last_attacker: None,
                        },
                    );
                }
            }
            Action::SettleBuilding { kind, at, .. } => {
                self.gold[pi] -= self.balance.building_cost(kind, 1) as i64;
                self.add_building(player, kind, at);
            }
            Action::Upgrade { id } => {
                let b = self.buildings.get_mut(&id).expect("checked");
                let next = b.level + 1;
                self.gold[pi] -= self.balance.building_cost(b.kind, next) as i64;
                b.hp += (self.balance.building_hp(b.kind, next) - self.balance.building_hp(b.kind, b.level)) as i64;
                b.level = next;
            }
            Action::Repair { id } => {
                let b = self.buildings.get_mut(&id).expect("checked");
                let max = self.balance.building_hp(b.kind, b.level) as i64;
                self.gold[pi] -= self.balance.repair_cost((max - b.hp) as u32) as i64;
                b.hp = max;
            }
        }
    }

    // ---------------------------------------------------------------------
    // round
    // ---------------------------------------------------------------------

    /// Executes queued actions (red first), runs unit tasks, building
    /// production, removes the dead, advances the round and resolves the
    /// terminal status.
    pub fn step_round(&mut self) -> RoundOutcome {
        let mut outcome = RoundOutcome::default();
        if self.status != GameStatus::Running {
            return outcome;
        }
        for p in Player::BOTH {
            let queue = std::mem::take(&mut self.queues[p.index()]);
            for action in queue {
                if self.check_feasible(p, &action) {
                    self.execute(p, &action);
                    outcome.executed[p.index()].push(action);
                } else if self.strict[p.index()] {
                    self.status = GameStatus::Failure { player: p };
                    self.queues = Default::default();
                    return outcome;
                }
            }
        }
        let attacked = self.unit_phase();
        self.building_phase(&attacked);
        self.units.retain(|_, u| u.is_alive());
        self.buildings.retain(|_, b| b.hp > 0);
        self.round += 1;
        self.resolve_status();
        outcome
    }

    fn in_range(&self, attacker: &Unit, target: HexCoord) -> bool {
        attacker.pos.distance(target) <= self.balance.unit(attacker.kind).range
    }

    /// Unit tasks in id order. Attacks are decided on start-of-round
    /// positions and applied together after movement. Returns buildings hit.
    fn unit_phase(&mut self) -> BTreeSet<EntityId> {
        let ids: Vec<EntityId> = self.units.keys().copied().collect();
        let mut unit_damage: BTreeMap<EntityId, (i64, EntityId)> = BTreeMap::new();
        let mut building_damage: BTreeMap<EntityId, i64> = BTreeMap::new();
        let mut movers = Vec::new();

        for &id in &ids {
            let u = &self.units[&id];
            let dmg = u.quantity as i64 * self.balance.unit(u.kind).attack as i64;
            let target = self.units.values().find(|e| e.owner != u.owner && self.in_range(u, e.pos)).map(|e| e.id);
            if let Some(t) = target {
                let entry = unit_damage.entry(t).or_insert((0, id));
                entry.0 += dmg;
                self.units.get_mut(&id).expect("alive").state = UnitState::Battling;
                continue;
            }
            let building = self.buildings.values().find(|b| b.owner != u.owner && b.pos == u.pos).map(|b| b.id);
            if let Some(b) = building {
                *building_damage.entry(b).or_insert(0) += dmg;
                self.units.get_mut(&id).expect("alive").state = UnitState::Battling;
                continue;
            }
            if !u.path.is_empty() {
                movers.push(id);
                continue;
            }
            // answer an attack from out of reach by closing in on the attacker
            let attacker_pos = match u.last_attacker {
                Some(Attacker::Unit(a)) => self.units.get(&a).map(|a| a.pos),
                Some(Attacker::Building(b)) => self.buildings.get(&b).map(|b| b.pos),
                None => None,
            };
            let pursuit = attacker_pos.filter(|&p| p != u.pos).and_then(|p| self.find_path(u.pos, p, u.owner));
            let u = self.units.get_mut(&id).expect("alive");
            u.last_attacker = None;
            match pursuit {
                Some(path) if !path.is_empty() => {
                    u.path = path.into();
                    u.state = UnitState::Moving;
                    movers.push(id);
                }
                _ => u.state = UnitState::Idle,
            }
        }

        for id in movers {
            self.advance(id);
        }

        for (target, (dmg, from)) in unit_damage {
            if let Some(u) = self.units.get_mut(&target) {
                let per = self.balance.unit(u.kind).hp as i64;
                apply_unit_damage(u, dmg, per);
                u.last_attacker = Some(Attacker::Unit(from));
            }
        }
        for (&target, &dmg) in &building_damage {
            if let Some(b) = self.buildings.get_mut(&target) {
                b.hp -= dmg;
            }
        }
        building_damage.into_keys().collect()
    }

    /// One movement tick for a unit with a path.
    fn advance(&mut self, id: EntityId) {
        let Some(u) = self.units.get_mut(&id) else {
            return; // merged earlier this round
        };
        u.state = UnitState::Moving;
        u.move_timer += 1;
        if u.move_timer < self.balance.unit(u.kind).move_period {
            return;
        }
        u.move_timer = 0;
        let mut replanned = false;
        loop {
            let u = &self.units[&id];
            let (Some(&next), Some(dest)) = (u.path.front(), u.destination()) else {
                self.units.get_mut(&id).expect("alive").state = UnitState::Idle;
                return;
            };
            if let Some(friend) = self.unit_at(u.owner, next).map(|f| (f.id, f.kind)) {
                if next == dest {
                    if friend.1 == u.kind {
                        let arriving = self.units.remove(&id).expect("alive");
                        let f = self.units.get_mut(&friend.0).expect("present");
                        f.quantity += arriving.quantity;
                        f.hp += arriving.hp;
                    } else {
                        let u = self.units.get_mut(&id).expect("alive");
                        u.path.clear();
                        u.state = UnitState::Idle;
                    }
                    return;
                }
            } else if next == dest || !self.enemy_present(u.owner, next) {
                let u = self.units.get_mut(&id).expect("alive");
                u.pos = next;
                u.path.pop_front();
                if u.path.is_empty() {
                    u.state = UnitState::Idle;
                }
                return;
            }
            // next step is blocked
            let detour = if replanned { None } else { self.find_path_around_friends(u, dest) };
            let u = self.units.get_mut(&id).expect("alive");
            match detour {
                Some(p) if !p.is_empty() => {
                    u.path = p.into();
                    replanned = true;
                }
                _ => {
                    u.path.clear();
                    u.state = UnitState::Idle;
                    return;
                }
            }
        }
    }

    fn building_phase(&mut self, attacked: &BTreeSet<EntityId>) {
        let ids: Vec<EntityId> = self.buildings.keys().copied().collect();
        for id in ids {
            let b = &self.buildings[&id];
            if attacked.contains(&id) {
                self.buildings.get_mut(&id).expect("present").state = BuildingState::UnderAttack;
                continue;
            }
            let (owner, level, pos) = (b.owner, b.level, b.pos);
            match b.kind {
                BuildingType::Castle => {
                    self.buildings.get_mut(&id).expect("present").state = BuildingState::Idle;
                }
                BuildingType::Farm => {
                    self.gold[owner.index()] += self.balance.farm_income(level) as i64;
                    self.buildings.get_mut(&id).expect("present").state = BuildingState::Producing;
                }
                BuildingType::Barracks => {
                    let period = self.balance.train_period(level);
                    let cap = self.balance.barracks_capacity(level);
                    let trains: Vec<bool> = UnitType::ALL.iter().map(|&k| self.balance.trains(k, level)).collect();
                    let b = self.buildings.get_mut(&id).expect("present");
                    b.train_timer += 1;
                    if b.train_timer >= period {
                        b.train_timer = 0;
                        for k in UnitType::ALL {
                            if trains[k.index()] {
                                let slot = &mut b.pool[k.index()];
                                *slot = (*slot + 1).min(cap);
                            }
                        }
                    }
                    let full = UnitType::ALL.iter().all(|k| !trains[k.index()] || b.pool[k.index()] >= cap);
                    b.state = if full { BuildingState::Idle } else { BuildingState::Producing };
                }
                BuildingType::Tower => {
                    let radius = self.balance.tower.radius;
                    let target =
                        self.units.values().find(|u| u.owner != owner && u.pos.distance(pos) <= radius).map(|u| u.id);
                    let dmg = self.balance.tower_damage(level) as i64;
                    if let Some(t) = target {
                        let u = self.units.get_mut(&t).expect("present");
                        let per = self.balance.unit(u.kind).hp as i64;
                        apply_unit_damage(u, dmg, per);
                        u.last_attacker = Some(Attacker::Building(id));
                    }
                    self.buildings.get_mut(&id).expect("present").state =
                        if target.is_some() { BuildingState::Producing } else { BuildingState::Idle };
                }
            }
        }
    }

    fn resolve_status(&mut self) {
        let castles =
            |p: Player| self.buildings.values().filter(|b| b.owner == p && b.kind == BuildingType::Castle).count();
        let (red, green) = (castles(Player::Red), castles(Player::Green));
        self.status = match (red, green) {
            (0, 0) => GameStatus::Draw,
            (0, _) => GameStatus::GreenWon,
            (_, 0) => GameStatus::RedWon,
            _ if self.round >= self.horizon => match self.gold[0].cmp(&self.gold[1]) {
                std::cmp::Ordering::Greater => GameStatus::RedWon,
                std::cmp::Ordering::Less => GameStatus::GreenWon,
                std::cmp::Ordering::Equal => GameStatus::Draw,
            },
            _ => GameStatus::Running,
        };
    }

    // ---------------------------------------------------------------------
    // observation
    // ---------------------------------------------------------------------

    pub fn features(&self, p: Player) -> Features {
        let mut f = [0u32; FEATURE_COUNT];
        f[0] = self.gold[p.index()].max(0) as u32;
        for u in self.units.values().filter(|u| u.owner == p) {
            f[1] += u.quantity;
            f[3 + u.kind.index()] += u.quantity;
        }
        for b in self.buildings.values().filter(|b| b.owner == p) {
            f[2] += 1;
            f[6 + b.kind.index()] += 1;
        }
        f
    }

    pub fn world_view(&self, p: Player) -> WorldView {
        let info = |b: &Building| BuildingInfo::new(b, &self.balance);
        let (mut buildings, mut enemy_buildings) = (Vec::new(), Vec::new());
        for b in self.buildings.values() {
            if b.owner == p { &mut buildings } else { &mut enemy_buildings }.push(info(b));
        }
        let (mut units, mut enemy_units) = (Vec::new(), Vec::new());
        for u in self.units.values() {
            if u.owner == p { &mut units } else { &mut enemy_units }.push(UnitInfo::from(u));
        }
        let mut occupied = vec![false; self.map.cell_count()];
        for pos in self.units.values().map(|u| u.pos).chain(self.buildings.values().map(|b| b.pos)) {
            if let Some(i) = self.map.index(pos) {
                occupied[i] = true;
            }
        }
        let castles: Vec<(HexCoord, u32)> = self
            .buildings
            .values()
            .filter(|b| b.owner == p && b.kind == BuildingType::Castle)
            .map(|b| (b.pos, self.balance.settle_radius(b.level)))
            .collect();
        let mut free_cells: Vec<HexCoord> = self
            .map
            .enabled_cells()
            .filter(|&c| {
                !occupied[self.map.index(c).expect("in bounds")] && castles.iter().any(|&(pos, r)| pos.distance(c) <= r)
            })
            .collect();
        free_cells.sort_unstable();
        let barracks_pools = self
            .buildings
            .values()
            .filter(|b| b.owner == p && b.kind == BuildingType::Barracks)
            .map(|b| (b.id, b.pool))
            .collect();
        WorldView {
            player: p,
            round: self.round,
            gold: self.gold[p.index()],
            buildings,
            units,
            enemy_buildings,
            enemy_units,
            free_cells,
            barracks_pools,
            balance: Arc::clone(&self.balance),
            map: Arc::clone(&self.map),
        }
    }

    // ---------------------------------------------------------------------
    // scenario construction (tests and tools)
    // ---------------------------------------------------------------------

    /// Places a unit directly, bypassing purchase rules.
    pub fn place_unit(&mut self, owner: Player, kind: UnitType, quantity: u32, at: HexCoord) -> EntityId {
        let id = self.next_id(owner);
        let hp = self.balance.unit(kind).hp as i64 * quantity as i64;
        self.units.insert(
            id,
            Unit {
                id,
                owner,
                kind,
                quantity,
                hp,
                pos: at,
                state: UnitState::Idle,
                path: VecDeque::new(),
                move_timer: 0,
                last_attacker: None,
            },
        );
        id
    }

    /// Places a level-1 building directly, bypassing purchase rules.
    pub fn place_building(&mut self, owner: Player, kind: BuildingType, at: HexCoord) -> EntityId {
        self.add_building(owner, kind, at)
    }

    pub fn set_gold(&mut self, p: Player, gold: i64) {
        self.gold[p.index()] = gold;
    }

    pub fn building_mut(&mut self, id: EntityId) -> Option<&mut Building> {
        self.buildings.get_mut(&id)
    }

    pub fn unit_mut(&mut self, id: EntityId) -> Option<&mut Unit> {
        self.units.get_mut(&id)
    }

    /// Reserved generator for stochastic map variation.
    pub fn rng_mut(&mut self) -> &mut XorShift64 {
        &mut self.rng
    }
}

fn apply_unit_damage(u: &mut Unit, dmg: i64, per_member: i64) {
    let deaths = (dmg / per_member) as u32;
    u.quantity = u.quantity.saturating_sub(deaths);
    u.hp -= dmg;
    if u.hp > 0 {
        let supported = ((u.hp + per_member - 1) / per_member) as u32;
        u.quantity = u.quantity.min(supported);
    }
}

/// Disables `count` random cells that are at least three steps from both
/// castle start cells.
fn roughen(map: &Map, count: u32, rng: &mut XorShift64) -> Map {
    let mut out = map.clone();
    let starts = [map.start(Player::Red), map.start(Player::Green)];
    let mut left = count;
    let mut attempts = count * 20;
    while left > 0 && attempts > 0 {
        attempts -= 1;
        let c = out.coord(rng.below(out.cell_count() as u64) as usize);
        if out.is_enabled(c) && starts.iter().all(|s| s.distance(c) > 2) {
            out.set_enabled(c, false);
            left -= 1;
        }
    }
    out
}
