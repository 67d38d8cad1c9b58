//! Monte Carlo harness and experiment runner.

pub mod config;
pub mod experiments;
pub mod montecarlo;
pub mod output;
