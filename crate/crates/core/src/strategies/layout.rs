use std::collections::BTreeMap;

use crate::btree::{AdaptiveTree, ParamExpr, ParameterDescriptor, ParameterVector, SlotDomain, TemplateNode};
use crate::hexsim::BuildingType;

use super::{Strategy, StrategyKind};

/// Collects slot domains and defaults while a template is assembled.
struct Builder {
    prefix: String,
    descriptors: Vec<ParameterDescriptor>,
    defaults: BTreeMap<String, f64>,
}

impl Builder {
    fn new(prefix: &str) -> Self {
        Self { prefix: prefix.into(), descriptors: Vec::new(), defaults: BTreeMap::new() }
    }

    fn slot(&mut self, name: &str, domain: SlotDomain, default: f64) -> ParamExpr {
        let full = format!("{}.{}", self.prefix, name);
        assert!(domain.contains(default), "default of {full} outside its domain");
        if !self.defaults.contains_key(&full) {
            self.descriptors.push(ParameterDescriptor::new(full.clone(), domain));
            self.defaults.insert(full.clone(), default);
        }
        ParamExpr::Slot(full)
    }

    fn finish(self, template: TemplateNode, kind: StrategyKind) -> Strategy {
        let tree = AdaptiveTree::from_descriptors(template, self.descriptors).expect("built-in strategy is consistent");
        let defaults = ParameterVector(tree.domain().slots().iter().map(|s| self.defaults[&s.name]).collect());
        Strategy { kind, tree, defaults }
    }
}

fn leaf(kind: &str, args: Vec<(&str, ParamExpr)>) -> TemplateNode {
    TemplateNode::Leaf { kind: kind.into(), args: args.into_iter().map(|(n, e)| (n.to_string(), e)).collect() }
}

fn konst(v: f64) -> ParamExpr {
    ParamExpr::Const(v)
}

fn type_arg(kind: BuildingType) -> ParamExpr {
    konst(kind.index() as f64)
}

/// Service followed by the action leaf that issues what it prepared.
fn pair(service: TemplateNode, action: &str) -> TemplateNode {
    TemplateNode::Sequence(vec![service, leaf(action, vec![])])
}

/// Default values of one sub-strategy.
struct Phase {
    units: f64,
    castles: f64,
    farms: f64,
    barracks: f64,
    towers: f64,
    offensive: bool,
    balance: f64,
}

fn ints(lo: i64, hi: i64) -> SlotDomain {
    SlotDomain::int_range(lo, hi)
}

/// Per-sub-strategy slot factory: every slot is named `<prefix>.s<k>.<name>`.
struct Sub<'a> {
    b: &'a mut Builder,
    k: usize,
}

impl Sub<'_> {
    fn slot(&mut self, name: &str, domain: SlotDomain, default: f64) -> ParamExpr {
        let name = format!("s{}.{}", self.k, name);
        self.b.slot(&name, domain, default)
    }

    fn info(&mut self, p: &Phase) -> TemplateNode {
        let args = vec![
            (
                "units",
                self.slot(
                    "info.units",
                    SlotDomain::Discrete { values: (0..=12).map(|v| v as f64 * 5.0).collect() },
                    p.units,
                ),
            ),
            ("castles", self.slot("info.castles", ints(1, 3), p.castles)),
            ("farms", self.slot("info.farms", ints(0, 5), p.farms)),
            ("barracks", self.slot("info.barracks", ints(0, 3), p.barracks)),
            ("towers", self.slot("info.towers", ints(0, 4), p.towers)),
            ("playstyle", self.slot("info.playstyle", ints(0, 1), p.offensive as u8 as f64)),
            ("balance", self.slot("info.balance", SlotDomain::continuous(0.0, 1.0), p.balance)),
        ];
        leaf("StrategyInfo", args)
    }

    fn settle(&mut self, kind: BuildingType) -> TemplateNode {
        pair(leaf("SettleBuildingService", vec![("type", type_arg(kind))]), "SettleBuilding")
    }

    fn upgrade(&mut self, kind: BuildingType, max_level: f64) -> TemplateNode {
        let name = format!("upgrade.{}.max_level", kind.name());
        let cap = self.slot(&name, ints(1, 3), max_level);
        pair(leaf("UpgradeService", vec![("type", type_arg(kind)), ("max_level", cap)]), "Upgrade")
    }

    fn spawn(&mut self, min_units: f64, fraction: f64) -> TemplateNode {
        let args = vec![
            ("min_units", self.slot("spawn.min_units", ints(1, 10), min_units)),
            ("fraction", self.slot("spawn.fraction", SlotDomain::continuous(0.1, 1.0), fraction)),
        ];
        pair(leaf("SpawnUnitService", args), "SpawnUnit")
    }

    fn repair(&mut self) -> TemplateNode {
        pair(leaf("RepairService", vec![]), "Repair")
    }

    fn free_hex(&mut self) -> TemplateNode {
        pair(leaf("GoToFreeHexMoveService", vec![]), "Move")
    }

    fn defence(&mut self, radius: f64, min_group: f64) -> TemplateNode {
        let args = vec![
            ("radius", self.slot("defence.radius", ints(1, 6), radius)),
            ("min_group", self.slot("defence.min_group", ints(1, 10), min_group)),
        ];
        pair(leaf("DefenceMoveService", args), "Move")
    }

    fn unit_return(&mut self, max_distance: f64) -> TemplateNode {
        let arg = self.slot("return.max_distance", ints(1, 6), max_distance);
        pair(leaf("UnitReturnMoveService", vec![("max_distance", arg)]), "Move")
    }

    fn split(&mut self, max_quantity: f64, proportion: f64, range: f64) -> TemplateNode {
        let args = vec![
            ("max_quantity", self.slot("split.max_quantity", ints(5, 30), max_quantity)),
            ("proportion", self.slot("split.proportion", SlotDomain::values(&[0.25, 0.5, 0.75]), proportion)),
            ("range", self.slot("split.range", ints(1, 4), range)),
        ];
        pair(leaf("SplitUnitMoveService", args), "Move")
    }

    fn merge(&mut self, min_quantity: f64, range: f64, target_size: f64) -> TemplateNode {
        let args = vec![
            ("min_quantity", self.slot("merge.min_quantity", ints(1, 15), min_quantity)),
            ("range", self.slot("merge.range", ints(1, 5), range)),
            ("target_size", self.slot("merge.target_size", ints(5, 40), target_size)),
        ];
        pair(leaf("MergeUnitMoveService", args), "Move")
    }

    fn attack_unit(&mut self, max_enemy: f64) -> TemplateNode {
        let arg = self.slot("attack_unit.max_enemy", ints(1, 30), max_enemy);
        pair(leaf("AttackUnitMoveService", vec![("max_enemy", arg)]), "Move")
    }

    fn attack_building(&mut self, min_group: f64, max_hp: f64) -> TemplateNode {
        let args = vec![
            ("min_group", self.slot("attack_building.min_group", ints(1, 15), min_group)),
            ("max_hp", self.slot("attack_building.max_hp", SlotDomain::continuous(100.0, 1500.0), max_hp)),
        ];
        pair(leaf("AttackBuildingMoveService", args), "Move")
    }
}

fn sub_strategy(info: TemplateNode, services: Vec<TemplateNode>) -> TemplateNode {
    TemplateNode::Sequence(vec![info, TemplateNode::Selector(services)])
}

fn root(b: &mut Builder, horizon: u32, subs: Vec<TemplateNode>) -> TemplateNode {
    let h = horizon as f64;
    let intervals =
        (1..subs.len()).map(|i| b.slot(&format!("phase.{i}"), SlotDomain::continuous(0.0, h / 2.0), h / 4.0)).collect();
    TemplateNode::Sequence(vec![
        leaf("DelayManager", vec![]),
        leaf("GameQuery", vec![]),
        TemplateNode::TimeSelector { intervals, children: subs },
    ])
}

/// Aggression grows phase by phase: development, expansion, raids, assault.
pub(super) fn strategy_a(horizon: u32) -> Strategy {
    use BuildingType::*;
    let mut b = Builder::new("a");
    let mut subs = Vec::new();

    let mut s = Sub { b: &mut b, k: 1 };
    let info = s.info(&Phase {
        units: 10.0,
        castles: 1.0,
        farms: 2.0,
        barracks: 1.0,
        towers: 1.0,
        offensive: false,
        balance: 0.8,
    });
    let services = vec![
        s.settle(Farm),
        s.settle(Barracks),
        s.spawn(2.0, 0.5),
        s.settle(Tower),
        s.repair(),
        s.defence(3.0, 1.0),
        s.unit_return(3.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let mut s = Sub { b: &mut b, k: 2 };
    let info = s.info(&Phase {
        units: 20.0,
        castles: 2.0,
        farms: 3.0,
        barracks: 1.0,
        towers: 2.0,
        offensive: false,
        balance: 0.6,
    });
    let economy = vec![
        s.settle(Farm),
        s.upgrade(Farm, 2.0),
        s.settle(Castle),
        s.spawn(3.0, 0.5),
        s.upgrade(Barracks, 2.0),
        s.settle(Tower),
        s.settle(Barracks),
        s.repair(),
        s.defence(3.0, 2.0),
        s.unit_return(3.0),
        s.split(12.0, 0.5, 2.0),
        s.free_hex(),
    ];
    let military = vec![
        s.spawn(3.0, 0.5),
        s.upgrade(Barracks, 2.0),
        s.defence(3.0, 2.0),
        s.settle(Tower),
        s.settle(Barracks),
        s.settle(Farm),
        s.upgrade(Farm, 2.0),
        s.settle(Castle),
        s.repair(),
        s.unit_return(3.0),
        s.split(12.0, 0.5, 2.0),
        s.free_hex(),
    ];
    let layout = s.slot("layout", ints(1, 2), 1.0);
    let switch = TemplateNode::Switch {
        selected: layout,
        children: vec![TemplateNode::Selector(economy), TemplateNode::Selector(military)],
    };
    subs.push(TemplateNode::Sequence(vec![info, switch]));

    let mut s = Sub { b: &mut b, k: 3 };
    let info = s.info(&Phase {
        units: 30.0,
        castles: 2.0,
        farms: 3.0,
        barracks: 2.0,
        towers: 2.0,
        offensive: true,
        balance: 0.5,
    });
    let services = vec![
        s.defence(3.0, 2.0),
        s.attack_unit(8.0),
        s.attack_building(4.0, 600.0),
        s.spawn(3.0, 0.75),
        s.upgrade(Barracks, 3.0),
        s.settle(Farm),
        s.upgrade(Farm, 3.0),
        s.settle(Barracks),
        s.settle(Tower),
        s.upgrade(Tower, 2.0),
        s.settle(Castle),
        s.repair(),
        s.unit_return(4.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let mut s = Sub { b: &mut b, k: 4 };
    let info = s.info(&Phase {
        units: 40.0,
        castles: 2.0,
        farms: 4.0,
        barracks: 2.0,
        towers: 2.0,
        offensive: true,
        balance: 0.1,
    });
    let services = vec![
        s.merge(6.0, 3.0, 20.0),
        s.attack_building(6.0, 1500.0),
        s.attack_unit(15.0),
        s.defence(5.0, 2.0),
        s.spawn(2.0, 1.0),
        s.upgrade(Barracks, 3.0),
        s.upgrade(Castle, 3.0),
        s.settle(Castle),
        s.settle(Farm),
        s.repair(),
        s.unit_return(5.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let template = root(&mut b, horizon, subs);
    b.finish(template, StrategyKind::A)
}

/// Defence and development first: towers, farms and repairs lead every
/// phase and most units stay home.
pub(super) fn strategy_b(horizon: u32) -> Strategy {
    use BuildingType::*;
    let mut b = Builder::new("b");
    let mut subs = Vec::new();

    let mut s = Sub { b: &mut b, k: 1 };
    let info = s.info(&Phase {
        units: 10.0,
        castles: 1.0,
        farms: 2.0,
        barracks: 1.0,
        towers: 1.0,
        offensive: false,
        balance: 0.9,
    });
    let services = vec![
        s.repair(),
        s.settle(Tower),
        s.settle(Farm),
        s.defence(2.0, 1.0),
        s.settle(Barracks),
        s.spawn(4.0, 0.5),
        s.unit_return(2.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let mut s = Sub { b: &mut b, k: 2 };
    let info = s.info(&Phase {
        units: 15.0,
        castles: 1.0,
        farms: 4.0,
        barracks: 1.0,
        towers: 3.0,
        offensive: false,
        balance: 0.9,
    });
    let services = vec![
        s.repair(),
        s.defence(3.0, 1.0),
        s.settle(Tower),
        s.upgrade(Tower, 2.0),
        s.settle(Farm),
        s.upgrade(Farm, 2.0),
        s.upgrade(Castle, 2.0),
        s.spawn(4.0, 0.5),
        s.unit_return(2.0),
        s.split(10.0, 0.5, 2.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let mut s = Sub { b: &mut b, k: 3 };
    let info = s.info(&Phase {
        units: 25.0,
        castles: 1.0,
        farms: 5.0,
        barracks: 2.0,
        towers: 4.0,
        offensive: false,
        balance: 0.8,
    });
    let services = vec![
        s.repair(),
        s.defence(3.0, 1.0),
        s.upgrade(Farm, 3.0),
        s.settle(Farm),
        s.settle(Tower),
        s.upgrade(Tower, 3.0),
        s.settle(Barracks),
        s.upgrade(Barracks, 2.0),
        s.spawn(3.0, 0.5),
        s.unit_return(3.0),
        s.split(10.0, 0.5, 2.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let mut s = Sub { b: &mut b, k: 4 };
    let info = s.info(&Phase {
        units: 35.0,
        castles: 2.0,
        farms: 5.0,
        barracks: 2.0,
        towers: 4.0,
        offensive: true,
        balance: 0.6,
    });
    let services = vec![
        s.repair(),
        s.defence(4.0, 1.0),
        s.attack_unit(6.0),
        s.settle(Castle),
        s.upgrade(Castle, 2.0),
        s.spawn(3.0, 0.75),
        s.upgrade(Barracks, 3.0),
        s.merge(4.0, 2.0, 15.0),
        s.attack_building(10.0, 400.0),
        s.unit_return(3.0),
        s.free_hex(),
    ];
    subs.push(sub_strategy(info, services));

    let template = root(&mut b, horizon, subs);
    b.finish(template, StrategyKind::B)
}
