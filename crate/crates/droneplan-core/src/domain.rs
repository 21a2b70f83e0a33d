//! Problem and solution types for deadline-constrained payload delivery.
//!
//! A [`DeliveryProblem`] is a depot, a set of waypoints (each with planar
//! coordinates, an unload mass, a deadline, and an issuing application),
//! the drone's physical parameters, and the energy available for the
//! flight. A [`Trajectory`] encodes a candidate solution as a visiting
//! order over a subset of the waypoints plus one commanded speed per leg,
//! including the first leg out of the depot and the return leg back to it.
//!
//! All types are immutable value data after construction; nothing here
//! holds interior state, so shared references can be used freely across
//! threads.

use alloc::vec::Vec;
use core::fmt;

/// Planar position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Straight-line distance to `other`, in meters.
    pub fn distance_to(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        libm::sqrt(dx * dx + dy * dy)
    }
}

/// A delivery target issued by one application.
#[derive(Debug, Clone, PartialEq)]
pub struct Waypoint {
    /// Identifier, unique within a problem. Conventionally `1..=n`.
    pub id: u32,
    /// Position in meters.
    pub coords: Point,
    /// Mass unloaded on arrival, in kilograms. Negative values model a
    /// pickup.
    pub unload_mass: f64,
    /// Latest acceptable arrival time, in seconds after depot departure.
    pub deadline: f64,
    /// Identifier of the application that issued this waypoint.
    pub app_id: u32,
}

/// Physical and energy parameters of the drone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneParams {
    /// Airframe mass with no payload, in kilograms.
    pub empty_mass: f64,
    /// Minimum commanded flight speed, in m/s.
    pub v_min: f64,
    /// Maximum commanded flight speed, in m/s.
    pub v_max: f64,
    /// Full battery capacity, in joules.
    pub battery_capacity: f64,
    /// Energy that must remain untouched for a dependable flight, in
    /// joules.
    pub energy_reserve: f64,
}

/// A full planning instance: depot, waypoints, drone, and the energy
/// on board at departure.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryProblem {
    /// Start and end position of every tour.
    pub depot: Point,
    pub waypoints: Vec<Waypoint>,
    pub drone: DroneParams,
    /// Energy on board when leaving the depot, in joules. At most
    /// `drone.battery_capacity` for a freshly charged drone.
    pub initial_energy: f64,
}

impl DeliveryProblem {
    /// Number of waypoints.
    pub fn waypoint_count(&self) -> usize {
        self.waypoints.len()
    }

    /// Looks a waypoint up by id.
    pub fn waypoint(&self, id: u32) -> Option<&Waypoint> {
        self.waypoints.iter().find(|w| w.id == id)
    }

    /// Propulsion energy available for the whole tour:
    /// `initial_energy - energy_reserve`.
    pub fn energy_budget(&self) -> f64 {
        self.initial_energy - self.drone.energy_reserve
    }

    /// Total mass when departing the depot: the empty airframe plus every
    /// payload loaded for the trip, delivered or not.
    pub fn initial_mass(&self) -> f64 {
        self.drone.empty_mass + self.waypoints.iter().map(|w| w.unload_mass).sum::<f64>()
    }

    /// Checks every type invariant and returns the violations found.
    ///
    /// An empty list means the problem is well formed. Violations are
    /// data, not failures: callers decide whether to abort or report.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        if self.waypoints.is_empty() {
            violations.push(Violation::NoWaypoints);
        }
        for (i, w) in self.waypoints.iter().enumerate() {
            if self.waypoints[..i].iter().any(|p| p.id == w.id) {
                violations.push(Violation::DuplicateWaypointId { id: w.id });
            }
            if !(w.deadline > 0.0) {
                violations.push(Violation::NonPositiveDeadline {
                    id: w.id,
                    deadline: w.deadline,
                });
            }
            if !w.coords.x.is_finite()
                || !w.coords.y.is_finite()
                || !w.unload_mass.is_finite()
                || !w.deadline.is_finite()
            {
                violations.push(Violation::NonFiniteWaypointField { id: w.id });
            }
        }
        let d = &self.drone;
        if !(d.v_min > 0.0 && d.v_min <= d.v_max) {
            violations.push(Violation::InvalidSpeedRange {
                v_min: d.v_min,
                v_max: d.v_max,
            });
        }
        if !(d.empty_mass > 0.0) {
            violations.push(Violation::NonPositiveEmptyMass {
                empty_mass: d.empty_mass,
            });
        }
        if !(d.energy_reserve < d.battery_capacity) {
            violations.push(Violation::ReserveNotBelowCapacity {
                energy_reserve: d.energy_reserve,
                battery_capacity: d.battery_capacity,
            });
        }
        if !(self.initial_energy.is_finite() && self.initial_energy > 0.0) {
            violations.push(Violation::InvalidInitialEnergy {
                initial_energy: self.initial_energy,
            });
        }
        violations
    }

    /// True when [`validate`](Self::validate) finds nothing.
    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

/// A named invariant breach found by [`DeliveryProblem::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoWaypoints,
    DuplicateWaypointId { id: u32 },
    NonPositiveDeadline { id: u32, deadline: f64 },
    NonFiniteWaypointField { id: u32 },
    InvalidSpeedRange { v_min: f64, v_max: f64 },
    NonPositiveEmptyMass { empty_mass: f64 },
    ReserveNotBelowCapacity { energy_reserve: f64, battery_capacity: f64 },
    InvalidInitialEnergy { initial_energy: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoWaypoints => write!(f, "waypoints: at least one waypoint is required"),
            Violation::DuplicateWaypointId { id } => {
                write!(f, "waypoints.id: id {id} appears more than once (each waypoint is visited at most once)")
            }
            Violation::NonPositiveDeadline { id, deadline } => {
                write!(f, "waypoint {id}.deadline: must be > 0 s, got {deadline}")
            }
            Violation::NonFiniteWaypointField { id } => {
                write!(f, "waypoint {id}: coordinates, unload mass and deadline must be finite")
            }
            Violation::InvalidSpeedRange { v_min, v_max } => {
                write!(f, "drone.v_min/v_max: need 0 < v_min <= v_max, got [{v_min}, {v_max}]")
            }
            Violation::NonPositiveEmptyMass { empty_mass } => {
                write!(f, "drone.empty_mass: must be > 0 kg, got {empty_mass}")
            }
            Violation::ReserveNotBelowCapacity { energy_reserve, battery_capacity } => {
                write!(
                    f,
                    "drone.energy_reserve: must be below battery_capacity, got {energy_reserve} J of {battery_capacity} J"
                )
            }
            Violation::InvalidInitialEnergy { initial_energy } => {
                write!(f, "initial_energy: must be finite and > 0 J, got {initial_energy}")
            }
        }
    }
}

/// Deadline miss indicator: 0 when `arrival <= deadline`, 1 otherwise.
///
/// Arriving exactly at the deadline counts as met.
pub fn miss(arrival: f64, deadline: f64) -> u32 {
    debug_assert!(arrival >= 0.0 && deadline > 0.0);
    if arrival <= deadline {
        0
    } else {
        1
    }
}

/// A candidate solution: which waypoints to visit, in what order, at what
/// speed per leg.
///
/// `order` is a duplicate-free sequence of waypoint ids; waypoints absent
/// from it are skipped (and each skipped waypoint counts as a missed
/// deadline on evaluation). `leg_speeds` has one entry per leg:
/// depot → `order[0]`, between consecutive entries, and the final return
/// to the depot — `order.len() + 1` speeds in total. The empty trajectory
/// (`order` empty, one speed for the zero-length depot → depot leg) is a
/// legal solution in which the drone never takes off.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub order: Vec<u32>,
    pub leg_speeds: Vec<f64>,
}

impl Trajectory {
    pub fn new(order: Vec<u32>, leg_speeds: Vec<f64>) -> Self {
        Self { order, leg_speeds }
    }

    /// The trajectory that visits nothing and stays at the depot.
    pub fn empty(speed: f64) -> Self {
        Self {
            order: Vec::new(),
            leg_speeds: alloc::vec![speed],
        }
    }

    /// A full-order trajectory flying every leg at the same speed.
    pub fn uniform(order: Vec<u32>, speed: f64) -> Self {
        let legs = order.len() + 1;
        Self {
            order,
            leg_speeds: alloc::vec![speed; legs],
        }
    }

    pub fn visit_count(&self) -> usize {
        self.order.len()
    }

    /// Checks the structural invariants of this trajectory against a
    /// problem: known ids, no repeated visits, one speed per leg, every
    /// speed within the drone's limits.
    pub fn validate_against(&self, problem: &DeliveryProblem) -> Result<(), TrajectoryError> {
        if self.leg_speeds.len() != self.order.len() + 1 {
            return Err(TrajectoryError::LegCountMismatch {
                expected: self.order.len() + 1,
                actual: self.leg_speeds.len(),
            });
        }
        for (i, &id) in self.order.iter().enumerate() {
            if problem.waypoint(id).is_none() {
                return Err(TrajectoryError::UnknownWaypoint { id });
            }
            if self.order[..i].contains(&id) {
                return Err(TrajectoryError::DuplicateVisit { id });
            }
        }
        let (v_min, v_max) = (problem.drone.v_min, problem.drone.v_max);
        for (leg, &v) in self.leg_speeds.iter().enumerate() {
            if !(v.is_finite() && v >= v_min && v <= v_max) {
                return Err(TrajectoryError::SpeedOutOfBounds { leg, speed: v, v_min, v_max });
            }
        }
        Ok(())
    }
}

/// Structural defect in a [`Trajectory`] relative to a problem.
#[derive(Debug, Clone, PartialEq)]
pub enum TrajectoryError {
    UnknownWaypoint { id: u32 },
    DuplicateVisit { id: u32 },
    LegCountMismatch { expected: usize, actual: usize },
    SpeedOutOfBounds { leg: usize, speed: f64, v_min: f64, v_max: f64 },
}

impl fmt::Display for TrajectoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrajectoryError::UnknownWaypoint { id } => {
                write!(f, "order: waypoint id {id} does not exist in the problem")
            }
            TrajectoryError::DuplicateVisit { id } => {
                write!(f, "order: waypoint id {id} is visited more than once")
            }
            TrajectoryError::LegCountMismatch { expected, actual } => {
                write!(f, "leg_speeds: expected {expected} legs (visits + 1), got {actual}")
            }
            TrajectoryError::SpeedOutOfBounds { leg, speed, v_min, v_max } => {
                write!(f, "leg_speeds[{leg}]: {speed} m/s outside [{v_min}, {v_max}] m/s")
            }
        }
    }
}

impl core::error::Error for TrajectoryError {}

/// Everything the evaluator derives from one (problem, trajectory, model)
/// triple.
///
/// `arrival_times` holds one entry per visited waypoint followed by the
/// arrival time back at the depot; `departing_masses` holds the total
/// drone mass when leaving each visited waypoint; `leg_energies` holds
/// one entry per leg including the return leg.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightReport {
    pub arrival_times: Vec<f64>,
    pub departing_masses: Vec<f64>,
    pub leg_energies: Vec<f64>,
    /// Sum of `leg_energies`, in joules.
    pub total_energy: f64,
    /// Late arrivals plus waypoints never visited.
    pub missed_deadlines: u32,
    /// Whether `total_energy` fits within the problem's energy budget.
    pub energy_feasible: bool,
    /// Set when any energy-model query fell marginally outside the model
    /// grid and was clamped to its boundary.
    pub boundary_clamped: bool,
}

impl FlightReport {
    /// Arrival time back at the depot (the tour makespan), in seconds.
    pub fn return_time(&self) -> f64 {
        *self.arrival_times.last().expect("report always includes the return leg")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sample_drone() -> DroneParams {
        DroneParams {
            empty_mass: 1.0,
            v_min: 3.0,
            v_max: 8.0,
            battery_capacity: 159_840.0,
            energy_reserve: 15_984.0,
        }
    }

    fn sample_problem() -> DeliveryProblem {
        DeliveryProblem {
            depot: Point::new(0.0, 0.0),
            waypoints: vec![
                Waypoint {
                    id: 1,
                    coords: Point::new(300.0, 400.0),
                    unload_mass: 0.5,
                    deadline: 200.0,
                    app_id: 1,
                },
                Waypoint {
                    id: 2,
                    coords: Point::new(-100.0, 0.0),
                    unload_mass: 0.2,
                    deadline: 400.0,
                    app_id: 2,
                },
            ],
            drone: sample_drone(),
            initial_energy: 159_840.0,
        }
    }

    #[test]
    fn miss_boundary_is_met() {
        assert_eq!(miss(5.0, 10.0), 0);
        assert_eq!(miss(10.0, 10.0), 0);
        assert_eq!(miss(10.001, 10.0), 1);
    }

    #[test]
    fn distance_is_euclidean() {
        let d = Point::new(0.0, 0.0).distance_to(Point::new(300.0, 400.0));
        assert_eq!(d, 500.0);
    }

    #[test]
    fn valid_problem_passes() {
        assert!(sample_problem().is_valid());
    }

    #[test]
    fn duplicate_waypoint_id_is_reported() {
        let mut p = sample_problem();
        p.waypoints[1].id = 1;
        let v = p.validate();
        assert!(v.contains(&Violation::DuplicateWaypointId { id: 1 }), "{v:?}");
    }

    #[test]
    fn zero_deadline_is_reported() {
        let mut p = sample_problem();
        p.waypoints[0].deadline = 0.0;
        let v = p.validate();
        assert!(
            v.iter()
                .any(|x| matches!(x, Violation::NonPositiveDeadline { id: 1, .. })),
            "{v:?}"
        );
    }

    #[test]
    fn inverted_speed_range_is_reported() {
        let mut p = sample_problem();
        p.drone.v_min = 9.0;
        assert!(p
            .validate()
            .iter()
            .any(|x| matches!(x, Violation::InvalidSpeedRange { .. })));
    }

    #[test]
    fn initial_mass_includes_all_payloads() {
        let p = sample_problem();
        assert_eq!(p.initial_mass(), 1.0 + 0.5 + 0.2);
    }

    #[test]
    fn trajectory_leg_count_must_match() {
        let p = sample_problem();
        let t = Trajectory::new(vec![1, 2], vec![5.0, 5.0]);
        assert!(matches!(
            t.validate_against(&p),
            Err(TrajectoryError::LegCountMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn trajectory_rejects_unknown_and_duplicate_ids() {
        let p = sample_problem();
        let t = Trajectory::uniform(vec![7], 5.0);
        assert!(matches!(
            t.validate_against(&p),
            Err(TrajectoryError::UnknownWaypoint { id: 7 })
        ));
        let t = Trajectory::uniform(vec![1, 1], 5.0);
        assert!(matches!(
            t.validate_against(&p),
            Err(TrajectoryError::DuplicateVisit { id: 1 })
        ));
    }

    #[test]
    fn trajectory_rejects_out_of_bounds_speed() {
        let p = sample_problem();
        let t = Trajectory::new(vec![1], vec![5.0, 8.5]);
        assert!(matches!(
            t.validate_against(&p),
            Err(TrajectoryError::SpeedOutOfBounds { leg: 1, .. })
        ));
    }

    #[test]
    fn empty_trajectory_is_structurally_valid() {
        let p = sample_problem();
        assert!(Trajectory::empty(3.0).validate_against(&p).is_ok());
    }
}
