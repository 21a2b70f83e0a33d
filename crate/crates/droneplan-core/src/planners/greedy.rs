//! Nearest-waypoint greedy construction over quantized uniform speeds.

use alloc::vec::Vec;

use crate::domain::{DeliveryProblem, FlightReport, Trajectory};
use crate::energy::EnergyModel;
use crate::evaluate::evaluate;

use super::{repair_to_budget, Cost, SpeedGrid};

/// Result of a greedy construction.
#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub trajectory: Trajectory,
    pub report: FlightReport,
    /// Trajectory evaluations performed.
    pub evaluations: u64,
}

/// Visits waypoints nearest-first from the current position, ties to the
/// lowest id.
fn nearest_neighbor_order(problem: &DeliveryProblem) -> Vec<u32> {
    let mut remaining: Vec<usize> = (0..problem.waypoints.len()).collect();
    let mut order = Vec::with_capacity(remaining.len());
    let mut position = problem.depot;
    while !remaining.is_empty() {
        let mut best = 0;
        let mut best_key = (f64::INFINITY, u32::MAX);
        for (slot, &index) in remaining.iter().enumerate() {
            let w = &problem.waypoints[index];
            let key = (position.distance_to(w.coords), w.id);
            if key.0 < best_key.0 || (key.0 == best_key.0 && key.1 < best_key.1) {
                best = slot;
                best_key = key;
            }
        }
        let index = remaining.swap_remove(best);
        position = problem.waypoints[index].coords;
        order.push(problem.waypoints[index].id);
    }
    order
}

/// Builds one nearest-neighbor tour and evaluates it at every uniform
/// grid speed, dropping waypoints where the energy budget forces it, and
/// returns the cheapest candidate.
///
/// Never fails: the empty trajectory (stay at the depot, miss everything)
/// is always a feasible fallback, so a model that cannot cover the
/// problem's mass range degrades to that instead of erroring.
pub fn plan_greedy(
    problem: &DeliveryProblem,
    model: &EnergyModel,
    grid: &SpeedGrid,
) -> GreedyRun {
    let order = nearest_neighbor_order(problem);
    let mut evaluations = 0_u64;

    let empty = Trajectory::empty(grid.lowest());
    let empty_report =
        evaluate(problem, &empty, model).expect("empty trajectory always evaluates");
    evaluations += 1;
    let mut best_cost = Cost::of(&empty_report);
    let mut best = (empty, empty_report);

    for &speed in grid.levels() {
        let candidate = Trajectory::uniform(order.clone(), speed);
        let (candidate, report) = repair_to_budget(problem, model, candidate, &mut evaluations);
        let cost = Cost::of(&report);
        if cost < best_cost {
            best_cost = cost;
            best = (candidate, report);
        }
    }

    GreedyRun { trajectory: best.0, report: best.1, evaluations }
}
