//! Behavior trees, parameterized templates and the game-facing tick context.
//!
//! A [`TemplateNode`] describes a tree whose numeric arguments may be named
//! slots. Pairing it with a [`ParameterDomain`] gives an [`AdaptiveTree`];
//! binding a [`ParameterVector`] through a [`LeafFactory`] yields a concrete
//! [`Node`] that can be ticked.

mod blackboard;
mod domain_file;
pub mod game;
mod node;
mod params;
mod template;

pub use blackboard::Blackboard;
pub use domain_file::DomainListing;
pub use game::{DelayTable, GameTick};
pub use node::{select_time_phase, Clock, Leaf, Node, Status};
pub use params::{DomainError, ParameterDescriptor, ParameterDomain, ParameterVector, SlotDomain};
pub use template::{AdaptiveTree, BindError, LeafArgs, LeafFactory, ParamExpr, TemplateError, TemplateNode};
