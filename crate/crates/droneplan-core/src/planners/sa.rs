//! Simulated-annealing refinement of a seed trajectory.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{DeliveryProblem, FlightReport, Trajectory};
use crate::energy::EnergyModel;
use crate::evaluate::evaluate;

use super::{repair_to_budget, Cost, SpeedGrid};

/// Search-control parameters.
///
/// The walk minimizes a scalarized cost (misses weighted far above the
/// normalized energy and makespan terms, plus a penalty per joule of
/// budget overshoot), while the returned incumbent is always the best
/// strictly feasible solution under the lexicographic [`Cost`].
#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    /// Maximum number of move evaluations. Must be at least 1.
    pub max_iterations: u64,
    /// Starting temperature in scalar-cost units; `None` derives it as
    /// 10% of the repaired seed's scalar cost.
    pub initial_temperature: Option<f64>,
    /// Geometric cooling multiplier in (0, 1).
    pub cooling_factor: f64,
    /// Moves between successive cooling steps.
    pub moves_per_temperature: u64,
    pub rng_seed: u64,
    /// Scalar-cost penalty per joule of energy beyond the budget.
    pub infeasibility_penalty_rate: f64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            initial_temperature: None,
            cooling_factor: 0.97,
            moves_per_temperature: 50,
            rng_seed: 1,
            infeasibility_penalty_rate: 1.0,
        }
    }
}

/// Result of a simulated-annealing run.
#[derive(Debug, Clone)]
pub struct SaRun {
    pub trajectory: Trajectory,
    pub report: FlightReport,
    /// Move evaluations performed.
    pub evaluations: u64,
}

/// Scalar weight of one missed deadline.
const MISS_WEIGHT: f64 = 1e6;

struct Scalarizer {
    energy_scale: f64,
    makespan_scale: f64,
    budget: f64,
    penalty_rate: f64,
}

impl Scalarizer {
    fn new(problem: &DeliveryProblem, penalty_rate: f64) -> Self {
        let deadline_sum: f64 = problem.waypoints.iter().map(|w| w.deadline).sum();
        Self {
            energy_scale: problem.initial_energy.max(1.0),
            makespan_scale: deadline_sum.max(1.0),
            budget: problem.energy_budget(),
            penalty_rate,
        }
    }

    fn scalar(&self, report: &FlightReport) -> f64 {
        let overshoot = (report.total_energy - self.budget).max(0.0);
        report.missed_deadlines as f64 * MISS_WEIGHT
            + report.total_energy / self.energy_scale
            + report.return_time() / self.makespan_scale
            + self.penalty_rate * overshoot
    }
}

/// Refines `seed_solution` for at most `params.max_iterations` move
/// evaluations and returns the best feasible trajectory seen — never
/// worse in [`Cost`] than the feasibility-repaired seed. Deterministic
/// for a fixed `params.rng_seed`.
pub fn plan_sa(
    problem: &DeliveryProblem,
    model: &EnergyModel,
    seed_solution: &Trajectory,
    grid: &SpeedGrid,
    params: &SaParams,
) -> SaRun {
    assert!(params.max_iterations >= 1, "max_iterations must be >= 1");
    assert!(
        params.cooling_factor > 0.0 && params.cooling_factor < 1.0,
        "cooling_factor must be in (0, 1)"
    );
    assert!(params.moves_per_temperature >= 1, "moves_per_temperature must be >= 1");

    let scalarizer = Scalarizer::new(problem, params.infeasibility_penalty_rate);
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    // Seed repair is setup work; the iteration budget covers moves only.
    let mut setup_evaluations = 0_u64;

    // Repair the seed into a feasible incumbent; fall back to the empty
    // trajectory when the seed cannot be evaluated at all.
    let (mut incumbent, mut incumbent_report) = match evaluate(problem, seed_solution, model) {
        Ok(report) if report.energy_feasible => (seed_solution.clone(), report),
        Ok(_) => repair_to_budget(
            problem,
            model,
            seed_solution.clone(),
            &mut setup_evaluations,
        ),
        Err(_) => repair_to_budget(
            problem,
            model,
            Trajectory::empty(grid.lowest()),
            &mut setup_evaluations,
        ),
    };
    let mut incumbent_cost = Cost::of(&incumbent_report);

    let mut current = incumbent.clone();
    let mut current_scalar = scalarizer.scalar(&incumbent_report);

    let mut temperature = params
        .initial_temperature
        .unwrap_or(0.1 * current_scalar)
        .max(1e-9);

    let mut evaluations = 0_u64;
    for iteration in 1..=params.max_iterations {
        let candidate = neighbor(&current, problem, grid, &mut rng);
        evaluations += 1;
        let report = match evaluate(problem, &candidate, model) {
            Ok(report) => report,
            Err(_) => continue,
        };
        let candidate_scalar = scalarizer.scalar(&report);

        if report.energy_feasible {
            let cost = Cost::of(&report);
            if cost < incumbent_cost {
                incumbent = candidate.clone();
                incumbent_report = report;
                incumbent_cost = cost;
            }
        }

        let delta = candidate_scalar - current_scalar;
        if delta <= 0.0 || rng.gen::<f64>() < libm::exp(-delta / temperature) {
            current = candidate;
            current_scalar = candidate_scalar;
        }

        if iteration % params.moves_per_temperature == 0 {
            temperature *= params.cooling_factor;
        }
    }

    SaRun { trajectory: incumbent, report: incumbent_report, evaluations }
}

/// Draws one random structure- or speed-preserving move.
///
/// Move kinds: swap two visit positions, relocate one visit, reverse a
/// segment (2-opt), re-sample one leg speed from the grid, or toggle one
/// waypoint between visited and skipped. Kinds that need more visits than
/// the solution has are re-drawn. The result is always structurally valid
/// for `problem` when `solution` was.
pub fn neighbor(
    solution: &Trajectory,
    problem: &DeliveryProblem,
    grid: &SpeedGrid,
    rng: &mut impl Rng,
) -> Trajectory {
    let mut next = solution.clone();
    loop {
        match rng.gen_range(0..5u8) {
            // Swap the waypoints at two positions; leg speeds stay put.
            0 => {
                let len = next.order.len();
                if len < 2 {
                    continue;
                }
                let i = rng.gen_range(0..len);
                let j = rng.gen_range(0..len);
                if i == j {
                    continue;
                }
                next.order.swap(i, j);
                return next;
            }
            // Relocate one visit (with its incoming leg speed).
            1 => {
                let len = next.order.len();
                if len < 2 {
                    continue;
                }
                let from = rng.gen_range(0..len);
                let to = rng.gen_range(0..len);
                if to == from {
                    continue;
                }
                let id = next.order.remove(from);
                let speed = next.leg_speeds.remove(from);
                next.order.insert(to.min(len - 1), id);
                next.leg_speeds.insert(to.min(len - 1), speed);
                return next;
            }
            // Reverse a segment of at least two visits, reversing the leg
            // speeds interior to the segment.
            2 => {
                let len = next.order.len();
                if len < 2 {
                    continue;
                }
                let a = rng.gen_range(0..len - 1);
                let b = rng.gen_range(a + 1..len);
                next.order[a..=b].reverse();
                next.leg_speeds[a + 1..=b].reverse();
                return next;
            }
            // Re-sample one leg speed from the grid.
            3 => {
                let leg = rng.gen_range(0..next.leg_speeds.len());
                let level = grid.levels()[rng.gen_range(0..grid.len())];
                next.leg_speeds[leg] = level;
                return next;
            }
            // Toggle one waypoint between visited and skipped.
            _ => {
                let pick = rng.gen_range(0..problem.waypoints.len());
                let id = problem.waypoints[pick].id;
                if let Some(position) = next.order.iter().position(|&o| o == id) {
                    next.order.remove(position);
                    next.leg_speeds.remove(position);
                } else {
                    let position = rng.gen_range(0..=next.order.len());
                    let level = grid.levels()[rng.gen_range(0..grid.len())];
                    next.order.insert(position, id);
                    next.leg_speeds.insert(position, level);
                }
                return next;
            }
        }
    }
}
