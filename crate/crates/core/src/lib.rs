//! Simulation of analog variational ansätze built from disordered Ising
//! quenches.

pub mod error;
pub mod expressivity;
pub mod landscape;
pub mod models;
pub mod phase;
pub mod quantum;
pub mod seed;
pub mod variational;

pub use error::{Error, Result};
