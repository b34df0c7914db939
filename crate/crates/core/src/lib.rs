//! Min-sum message passing for Laplacian systems and electrical flows.
//!
//! The voltage solver lives in [`minsum_voltage`], the flow solver in [`minsum_flow`],
//! exact baselines in [`exact`]. [`walks`] and [`characterization`] predict the
//! error the solvers make after `t` iterations; [`oracle`] holds brute-force
//! enumerations used to check them. [`cli`] backs the `minsum` binary.
//!
//! Runnable examples (`cargo run --example <name>`):
//!
//! - `solve_voltage`, `solve_flow_with_leaves`: solver error per step
//! - `fixed_point`: exact messages stay exact
//! - `computation_tree`: tree root values against min-sum estimates
//! - `cycle_characterization`, `regular_characterization`, `constants`
//! - `walk_distributions`, `killed_walks`: walk probabilities behind the predictions
//! - `tv_decay`: decay of the total-variation gap on a connected cycle

pub mod characterization;
pub mod cli;
pub mod exact;
pub mod graph;
pub mod messages;
pub mod minsum_flow;
pub mod minsum_voltage;
pub mod oracle;
pub mod walks;
