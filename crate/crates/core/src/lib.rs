//! Equilibria of a global game of regime change in which the regime spreads
//! propaganda, the opposition spreads counter-propaganda, and an unknown
//! mass of partisans always attacks.
//!
//! The analytic solvers live in [`benchmark`] (no communication) and
//! [`communication`] (costly two-sided communication). [`simulate`] replays
//! the game with finitely many citizens to check them.

pub mod benchmark;
pub mod communication;
pub mod error;
pub mod model;
pub mod numerics;
pub mod simulate;

pub use error::{Error, Result};
pub use model::{Communication, ModelParams};
