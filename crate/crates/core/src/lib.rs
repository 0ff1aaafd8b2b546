//! Drunk games: two-player symmetric games whose perceived payoffs are a
//! blend of a sober and an intoxicated game, with the blend weight evolving
//! alongside the strategy mix.

pub mod error;
pub mod par;
pub mod seed;

pub mod game;
pub mod meanfield;
pub mod preset;

pub mod abm;
pub mod basins;
pub mod config;
pub mod equilibria;
pub mod experiments;

pub use error::{Error, Result};
pub use game::{GameClass, PayoffMatrix};
pub use meanfield::{DrunkGame, QPoly, State};
pub use par::Execution;
pub use preset::Preset;
