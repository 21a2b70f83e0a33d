//! Planners: greedy construction, simulated-annealing refinement, and an
//! exhaustive oracle for small instances.
//!
//! All planners minimize the same lexicographic [`Cost`]: missed deadlines
//! first, then total energy, then makespan. Every planner returns an
//! energy-feasible trajectory (waypoints are dropped before the budget is
//! broken) with all speeds inside the drone's limits. Greedy and the
//! exact oracle are deterministic; simulated annealing is deterministic
//! for a fixed seed.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::domain::{DeliveryProblem, FlightReport, Trajectory};
use crate::energy::EnergyModel;
use crate::evaluate::evaluate;

mod exact;
mod greedy;
mod sa;

pub use exact::{plan_exact, ExactError, ExactLimits, ExactRun};
pub use greedy::{plan_greedy, GreedyRun};
pub use sa::{neighbor, plan_sa, SaParams, SaRun};

/// Quantized flight speed levels shared by the planners.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedGrid {
    levels: Vec<f64>,
}

/// Defect in a requested speed grid.
#[derive(Debug, Clone, PartialEq)]
pub enum GridError {
    Empty,
    NotIncreasing { index: usize },
    OutsideDroneLimits { level: f64, v_min: f64, v_max: f64 },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::Empty => write!(f, "speed grid: at least one level is required"),
            GridError::NotIncreasing { index } => {
                write!(f, "speed grid level {index}: levels must be finite and strictly increasing")
            }
            GridError::OutsideDroneLimits { level, v_min, v_max } => {
                write!(f, "speed grid level {level} m/s outside drone limits [{v_min}, {v_max}]")
            }
        }
    }
}

impl core::error::Error for GridError {}

impl SpeedGrid {
    /// Builds a grid, checking ordering and containment in the drone's
    /// speed limits.
    pub fn new(levels: Vec<f64>, v_min: f64, v_max: f64) -> Result<Self, GridError> {
        if levels.is_empty() {
            return Err(GridError::Empty);
        }
        for (i, &v) in levels.iter().enumerate() {
            if !v.is_finite() || (i > 0 && v <= levels[i - 1]) {
                return Err(GridError::NotIncreasing { index: i });
            }
            if v < v_min || v > v_max {
                return Err(GridError::OutsideDroneLimits { level: v, v_min, v_max });
            }
        }
        Ok(Self { levels })
    }

    /// Integer speeds at 1 m/s spacing inside `[v_min, v_max]` — the
    /// default quantization.
    pub fn integer_steps(v_min: f64, v_max: f64) -> Result<Self, GridError> {
        let lo = libm::ceil(v_min) as i64;
        let hi = libm::floor(v_max) as i64;
        let levels: Vec<f64> = (lo..=hi).map(|v| v as f64).collect();
        Self::new(levels, v_min, v_max)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn lowest(&self) -> f64 {
        self.levels[0]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Lexicographic solution cost: misses dominate, energy breaks ties,
/// makespan breaks remaining ties.
#[derive(Debug, Clone, Copy)]
pub struct Cost {
    pub misses: u32,
    pub energy: f64,
    pub makespan: f64,
}

impl Cost {
    pub fn of(report: &FlightReport) -> Self {
        Self {
            misses: report.missed_deadlines,
            energy: report.total_energy,
            makespan: report.return_time(),
        }
    }
}

impl PartialEq for Cost {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Cost {}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        self.misses
            .cmp(&other.misses)
            .then_with(|| self.energy.total_cmp(&other.energy))
            .then_with(|| self.makespan.total_cmp(&other.makespan))
    }
}

/// Drops waypoints from `trajectory` until it fits the energy budget.
///
/// Each round removes the visit whose removal reduces total energy the
/// most (ties to the lowest waypoint id), re-evaluating from scratch, and
/// stops at the first feasible shape. The empty trajectory is always
/// feasible, so this terminates. Waypoints removed here surface as missed
/// deadlines, not as errors.
pub(crate) fn repair_to_budget(
    problem: &DeliveryProblem,
    model: &EnergyModel,
    mut trajectory: Trajectory,
    evaluations: &mut u64,
) -> (Trajectory, FlightReport) {
    loop {
        *evaluations += 1;
        match evaluate(problem, &trajectory, model) {
            Ok(report) if report.energy_feasible => return (trajectory, report),
            Ok(_) if trajectory.order.is_empty() => {
                unreachable!("empty trajectory consumes no energy")
            }
            Ok(_) => {
                let mut best: Option<(f64, usize, u32)> = None;
                for position in 0..trajectory.order.len() {
                    let mut candidate = trajectory.clone();
                    candidate.order.remove(position);
                    candidate.leg_speeds.remove(position);
                    *evaluations += 1;
                    if let Ok(r) = evaluate(problem, &candidate, model) {
                        let id = trajectory.order[position];
                        let better = match best {
                            None => true,
                            Some((energy, _, best_id)) => {
                                r.total_energy < energy
                                    || (r.total_energy == energy && id < best_id)
                            }
                        };
                        if better {
                            best = Some((r.total_energy, position, id));
                        }
                    }
                }
                let position = match best {
                    Some((_, position, _)) => position,
                    // No removal evaluates cleanly; drop the lowest id to
                    // keep making progress.
                    None => {
                        let (position, _) = trajectory
                            .order
                            .iter()
                            .enumerate()
                            .min_by_key(|&(_, &id)| id)
                            .expect("non-empty order");
                        position
                    }
                };
                trajectory.order.remove(position);
                trajectory.leg_speeds.remove(position);
            }
            Err(_) => {
                if trajectory.order.is_empty() {
                    // An empty trajectory can only fail evaluation through
                    // a structurally broken speed entry; normalize it.
                    trajectory = Trajectory::empty(problem.drone.v_min);
                    continue;
                }
                let (position, _) = trajectory
                    .order
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, &id)| id)
                    .expect("non-empty order");
                trajectory.order.remove(position);
                trajectory.leg_speeds.remove(position);
            }
        }
    }
}
