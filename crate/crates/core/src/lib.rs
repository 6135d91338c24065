//! Tuning parameterized behavior trees so that an agent reproduces a recorded
//! gameplay.
//!
//! * [`hexsim`] is the deterministic RTS simulator.
//! * [`btree`] runs behavior trees and binds parameter vectors into them.
//! * [`strategies`] holds the two expert trees and their services.
//! * [`similarity`] compares two gameplays through their snapshot time-lines.
//! * [`optimize`] searches the parameter domain with a memetic algorithm.
//! * [`harness`] wires everything into experiments and file outputs.

pub mod btree;
pub mod harness;
pub mod hexsim;
pub mod optimize;
pub mod similarity;
pub mod strategies;
