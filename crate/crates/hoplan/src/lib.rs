//! Customizable handover planning for LEO satellite constellations.
//!
//! User equipment talking directly to low-Earth-orbit satellites hands over
//! every few minutes, and each handover has both a *timing* and a *target*.
//! This crate plans the whole sequence at once instead of reacting link by
//! link:
//!
//! 1. Split a planning horizon `T` into `n = T / 2λ` equal slots, where the
//!    relaxation period λ is the slot half-width ([`hograph::TimeGrid`]).
//! 2. For each slot, enumerate the *satellite instances* — satellites whose
//!    elevation stays above the visibility floor for the entire slot — and
//!    score each one by a weighted sum of normalized criteria (propagation
//!    delay and data rate out of the box, anything pluggable via
//!    [`hograph::Criterion`]).
//! 3. Wire consecutive slots into a layered time-expanded graph bracketed by
//!    virtual begin/end nodes, each edge costing its destination's score.
//! 4. The shortest begin→end path ([`planner::shortest_path`]) is the
//!    handover sequence; handovers fire at slot boundaries.
//!
//! The crate also ships the legacy elevation-threshold policy
//! ([`baseline::threshold_plan`]) for comparison, a replay evaluator
//! ([`eval::simulate_rate`]) producing rate series/CDFs/percentiles, a
//! closed-form graph-size model, Walker-delta constellation generation, and
//! a scenario-file driven command layer ([`commands`]) emitting CSV and SVG
//! artifacts.
//!
//! ```
//! use hoplan::constellation::{generate_walker, OrbitalShell};
//! use hoplan::geometry::GroundUser;
//! use hoplan::channel::ChannelParams;
//! use hoplan::hograph::{build_graph, build_time_grid, enumerate_instances,
//!                       normalize_utilities, CriteriaConfig};
//! use hoplan::planner::plan_handovers;
//!
//! # fn main() -> hoplan::Result<()> {
//! let shell = OrbitalShell::new(22, 72, 550_000.0, 53f64.to_radians())?;
//! let eph = generate_walker(&shell, 1_800.0, 10.0)?;
//! let user = GroundUser::new(45.42f64.to_radians(), -75.70f64.to_radians(), 0.0, 0.0)?;
//! let grid = build_time_grid(1_800.0, 150.0)?;
//! let criteria = CriteriaConfig::balanced();
//!
//! let mut instances =
//!     enumerate_instances(&eph, &user, &grid, &ChannelParams::default(), 10.0)?;
//! normalize_utilities(&mut instances, &criteria)?;
//! let graph = build_graph(instances, &criteria)?;
//! let plan = plan_handovers(&graph, &grid)?;
//! assert!(plan.handover_count() <= grid.slot_count() - 1);
//! # Ok(())
//! # }
//! ```

pub mod artifact;
pub mod baseline;
pub mod channel;
pub mod commands;
pub mod constants;
pub mod constellation;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod hograph;
pub mod planner;
pub mod scenario;
pub mod svg;
pub mod vec3;

pub use error::{Error, Result};
