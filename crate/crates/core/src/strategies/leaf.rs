use crate::btree::{DelayTable, GameTick, Leaf, LeafArgs, LeafFactory, Status};
use crate::hexsim::{Action, ActionKind, BuildingType, Proportion};

use super::{assess, InfoParams, Service, ServiceInput, Situation};

/// Blackboard key of the current [`Situation`].
pub const SITUATION: &str = "strategy.situation";
/// Blackboard key of the action a service prepared for the next action leaf.
pub const PREPARED: &str = "strategy.prepared";

#[derive(Clone, Debug, PartialEq)]
pub enum StrategyLeaf {
    DelayManager(DelayTable),
    GameQuery,
    StrategyInfo(InfoParams),
    Service(Service),
    /// Issues the prepared action if it has this kind.
    Act(ActionKind),
}

impl Leaf<GameTick<'_>> for StrategyLeaf {
    fn tick(&self, ctx: &mut GameTick<'_>) -> Status {
        match self {
            StrategyLeaf::DelayManager(table) => ctx.delay_manager(table),
            StrategyLeaf::GameQuery => ctx.game_query(),
            StrategyLeaf::StrategyInfo(params) => {
                let Some(view) = ctx.world() else {
                    return Status::Failure;
                };
                let situation = assess(params, view);
                ctx.bb.set(SITUATION, situation);
                Status::Success
            }
            StrategyLeaf::Service(service) => {
                ctx.bb.remove(PREPARED);
                let (Some(view), Some(situation)) = (ctx.world(), ctx.bb.get::<Situation>(SITUATION)) else {
                    return Status::Failure;
                };
                let check = |a: &Action| ctx.feasible(a);
                let prepared = service.prepare(&ServiceInput { view, situation, feasible: &check });
                match prepared {
                    Some(action) => {
                        ctx.bb.set(PREPARED, action);
                        Status::Success
                    }
                    None => Status::Failure,
                }
            }
            StrategyLeaf::Act(kind) => {
                let Some(action) = ctx.bb.take::<Action>(PREPARED) else {
                    return Status::Failure;
                };
                Status::from_bool(action.kind() == *kind && ctx.issue(action))
            }
        }
    }
}

/// Builds [`StrategyLeaf`]s from template leaf kinds.
#[derive(Clone, Debug, Default)]
pub struct StrategyLeafFactory {
    pub delays: DelayTable,
}

fn count(args: &LeafArgs, name: &str) -> Result<u32, String> {
    let v = args.require(name)?;
    if v < 0.0 || v.fract() != 0.0 {
        return Err(format!("`{name}` must be a non-negative integer, got {v}"));
    }
    Ok(v as u32)
}

fn building(args: &LeafArgs) -> Result<BuildingType, String> {
    let v = count(args, "type")?;
    BuildingType::from_index(v as usize).ok_or_else(|| format!("no building type {v}"))
}

fn action_kind(name: &str) -> Option<ActionKind> {
    ActionKind::ALL.into_iter().find(|k| match k {
        ActionKind::Move => name == "Move",
        ActionKind::SpawnUnit => name == "SpawnUnit",
        ActionKind::SettleBuilding => name == "SettleBuilding",
        ActionKind::Upgrade => name == "Upgrade",
        ActionKind::Repair => name == "Repair",
        ActionKind::Query => false,
    })
}

impl LeafFactory for StrategyLeafFactory {
    type Leaf = StrategyLeaf;

    fn build(&self, kind: &str, args: &LeafArgs) -> Result<StrategyLeaf, String> {
        let service = |s| Ok(StrategyLeaf::Service(s));
        match kind {
            "DelayManager" => Ok(StrategyLeaf::DelayManager(self.delays.clone())),
            "GameQuery" => Ok(StrategyLeaf::GameQuery),
            "StrategyInfo" => {
                let balance = args.require("balance")?;
                if !(0.0..=1.0).contains(&balance) {
                    return Err(format!("balance {balance} outside [0, 1]"));
                }
                Ok(StrategyLeaf::StrategyInfo(InfoParams {
                    units: count(args, "units")?,
                    buildings: [
                        count(args, "castles")?,
                        count(args, "farms")?,
                        count(args, "barracks")?,
                        count(args, "towers")?,
                    ],
                    offensive: count(args, "playstyle")? == 1,
                    balance,
                }))
            }
            "UpgradeService" => {
                service(Service::Upgrade { kind: building(args)?, max_level: count(args, "max_level")? })
            }
            "SpawnUnitService" => service(Service::SpawnUnit {
                min_units: count(args, "min_units")?,
                fraction: args.require("fraction")?,
            }),
            "RepairService" => service(Service::Repair),
            "GoToFreeHexMoveService" => service(Service::GoToFreeHex),
            "SettleBuildingService" => service(Service::Settle { kind: building(args)? }),
            "AttackUnitMoveService" => service(Service::AttackUnit { max_enemy: count(args, "max_enemy")? }),
            "AttackBuildingMoveService" => service(Service::AttackBuilding {
                min_group: count(args, "min_group")?,
                max_hp: args.require("max_hp")?,
            }),
            "DefenceMoveService" => {
                service(Service::Defence { radius: count(args, "radius")?, min_group: count(args, "min_group")? })
            }
            "UnitReturnMoveService" => service(Service::UnitReturn { max_distance: count(args, "max_distance")? }),
            "SplitUnitMoveService" => {
                let p = args.require("proportion")?;
                let proportion = Proportion::from_f64(p)
                    .filter(|p| *p != Proportion::Full)
                    .ok_or_else(|| format!("split proportion {p} not in {{0.25, 0.5, 0.75}}"))?;
                service(Service::Split {
                    max_quantity: count(args, "max_quantity")?,
                    proportion,
                    range: count(args, "range")?,
                })
            }
            "MergeUnitMoveService" => service(Service::Merge {
                min_quantity: count(args, "min_quantity")?,
                range: count(args, "range")?,
                target_size: count(args, "target_size")?,
            }),
            other => action_kind(other).map(StrategyLeaf::Act).ok_or_else(|| format!("unknown leaf kind `{other}`")),
        }
    }
}
