//! Random CSP instances under Models RB and RD.
//!
//! The crate generates instances (optionally forced to admit a planted
//! solution), evaluates threshold and expected-solution formulas, solves
//! instances with a MAC backtracking solver or a tabu local search, encodes
//! them into CNF, and runs the batch experiments that measure hardness
//! around the threshold.

pub mod analysis;
pub mod encode;
pub mod error;
pub mod experiments;
pub mod generator;
pub mod io;
pub mod mac;
pub mod model;
pub mod tabu;

pub use error::{Error, Result};
pub use generator::{derive_dims, generate, sample_batch, GeneratedInstance};
pub use model::{
    distance, satisfies, Assignment, Constraint, DerivedDims, Instance, InstanceParams, Model,
    SolveOutcome, Status,
};
