//! Trajectory planning for a shared delivery drone.
//!
//! A single drone leaves a depot carrying payloads for a set of waypoints,
//! each with an unload mass and a hard deadline, and must return to the
//! depot without draining its battery below a reserve. Propulsion power
//! depends on the current total mass and the commanded flight speed, so
//! both the visiting order and the per-leg speeds matter.
//!
//! The crate provides the problem/solution model and evaluator
//! ([`domain`], [`evaluate`]), the two-stage propulsion energy model
//! ([`energy`]), greedy / simulated-annealing / exhaustive planners
//! ([`planners`]), and a deterministic benchmark instance generator
//! ([`benchgen`]).
//!
//! Everything here is pure computation over immutable value types; the
//! crate is `no_std` (with `alloc`). File formats, the CLI, and the
//! benchmark harness live in the companion `droneplan` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod benchgen;
pub mod domain;
pub mod energy;
pub mod evaluate;
pub mod planners;

pub use domain::{DeliveryProblem, DroneParams, FlightReport, Point, Trajectory, Waypoint};
pub use energy::EnergyModel;
pub use evaluate::evaluate;
