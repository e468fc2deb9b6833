//! Simulation and analysis of the extended Wigner's-friend / GHZ scenario.
//!
//! Three atoms share a GHZ state; Alice, Bob and Charlie each record the z-spin
//! of one atom inside an isolated lab, and Eugene, Johnny and Daniel then
//! measure lab-plus-atom observables that are incompatible with those records.
//! The crate derives the probability-one parity facts of the scenario from
//! dense linear algebra, shows they admit no global outcome assignment, and
//! quantifies why the scenario cannot be realized under decoherence.

pub mod contexts;
pub mod decoherence;
pub mod exec;
pub mod paradox;
pub mod qcore;
pub mod spacetime;
pub mod stabilizer;
pub mod wigner;

pub use qcore::{QError, Sign, Tolerance, C64};
