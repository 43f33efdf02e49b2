//! Exact solver for stochastic mean-payoff games with perfect information (BWR-games).

pub mod bw;
pub mod chain;
pub mod cli;
pub mod closure;
pub mod decomposition;
pub mod error;
pub mod format;
pub mod game;
pub mod instances;
pub mod linalg;
pub mod mdp;
pub mod oracle;
pub mod potential;
pub mod pump;
pub mod rational;
pub mod restrict;

pub use game::{Arc, Game, GameError, GameParams, Owner, Situation};
pub use rational::Rational;
