//! Trajectory evaluation: arrival times, masses, energies, misses.

use alloc::vec::Vec;
use core::fmt;

use crate::domain::{miss, DeliveryProblem, FlightReport, Trajectory, TrajectoryError};
use crate::energy::{EnergyError, EnergyModel};

/// Why a trajectory could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum EvaluateError {
    Trajectory(TrajectoryError),
    Energy(EnergyError),
}

impl fmt::Display for EvaluateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvaluateError::Trajectory(e) => e.fmt(f),
            EvaluateError::Energy(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for EvaluateError {}

impl From<TrajectoryError> for EvaluateError {
    fn from(e: TrajectoryError) -> Self {
        EvaluateError::Trajectory(e)
    }
}

impl From<EnergyError> for EvaluateError {
    fn from(e: EnergyError) -> Self {
        EvaluateError::Energy(e)
    }
}

/// Total drone mass given which payloads are still on board.
///
/// Summed in problem order every time so that the mass after the final
/// delivery of a full tour is the empty mass, exactly.
fn mass_on_board(problem: &DeliveryProblem, delivered: &[bool]) -> f64 {
    let mut mass = problem.drone.empty_mass;
    for (w, &done) in problem.waypoints.iter().zip(delivered) {
        if !done {
            mass += w.unload_mass;
        }
    }
    mass
}

/// Simulates one tour and reports arrival times, departing masses,
/// per-leg energies, deadline misses, and energy feasibility.
///
/// The clock starts at zero when the drone leaves the depot; there is no
/// service time at stops, so arrival and departure coincide. The drone
/// loads every payload in the problem at the depot — skipping a waypoint
/// skips its leg, not its mass — and each skipped waypoint counts as a
/// missed deadline. The return leg to the depot closes the tour and is
/// charged against the energy budget like any other leg.
pub fn evaluate(
    problem: &DeliveryProblem,
    trajectory: &Trajectory,
    model: &EnergyModel,
) -> Result<FlightReport, EvaluateError> {
    trajectory.validate_against(problem)?;

    let visits = trajectory.order.len();
    let mut delivered = alloc::vec![false; problem.waypoint_count()];
    let mut arrival_times = Vec::with_capacity(visits + 1);
    let mut departing_masses = Vec::with_capacity(visits);
    let mut leg_energies = Vec::with_capacity(visits + 1);

    let mut time = 0.0_f64;
    let mut position = problem.depot;
    let mut mass = mass_on_board(problem, &delivered);
    let mut missed = 0_u32;
    let mut clamped = false;

    for (leg, &id) in trajectory.order.iter().enumerate() {
        let index = problem
            .waypoints
            .iter()
            .position(|w| w.id == id)
            .expect("validated above");
        let waypoint = &problem.waypoints[index];
        let distance = position.distance_to(waypoint.coords);
        let speed = trajectory.leg_speeds[leg];
        let energy = model.leg_energy(mass, speed, distance)?;
        clamped |= energy.clamped;
        leg_energies.push(energy.value);
        time += distance / speed;
        arrival_times.push(time);
        missed += miss(time, waypoint.deadline);
        delivered[index] = true;
        mass = mass_on_board(problem, &delivered);
        departing_masses.push(mass);
        position = waypoint.coords;
    }

    let distance = position.distance_to(problem.depot);
    let speed = trajectory.leg_speeds[visits];
    let energy = model.leg_energy(mass, speed, distance)?;
    clamped |= energy.clamped;
    leg_energies.push(energy.value);
    time += distance / speed;
    arrival_times.push(time);

    missed += (problem.waypoint_count() - visits) as u32;
    let total_energy: f64 = leg_energies.iter().sum();

    Ok(FlightReport {
        arrival_times,
        departing_masses,
        leg_energies,
        total_energy,
        missed_deadlines: missed,
        energy_feasible: total_energy <= problem.energy_budget(),
        boundary_clamped: clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DroneParams, Point, Waypoint};
    use crate::energy::test_support::constant_power_model;
    use crate::energy::reference_model;
    use alloc::vec;

    fn drone(v_min: f64, v_max: f64) -> DroneParams {
        DroneParams {
            empty_mass: 1.0,
            v_min,
            v_max,
            battery_capacity: 159_840.0,
            energy_reserve: 15_984.0,
        }
    }

    fn single_waypoint_problem(deadline: f64) -> DeliveryProblem {
        DeliveryProblem {
            depot: Point::new(0.0, 0.0),
            waypoints: vec![Waypoint {
                id: 1,
                coords: Point::new(300.0, 400.0),
                unload_mass: 0.5,
                deadline,
                app_id: 1,
            }],
            drone: drone(3.0, 8.0),
            initial_energy: 159_840.0,
        }
    }

    #[test]
    fn single_waypoint_constant_power_arithmetic() {
        // 500 m out and back at 5 m/s with a 100 W constant-power stub:
        // arrival after 100 s, 1.0 kg after unloading, 200 s of flight at
        // 100 W = 20 000 J in total.
        let problem = single_waypoint_problem(200.0);
        let model = constant_power_model(10.0, 10.0);
        let trajectory = Trajectory::uniform(vec![1], 5.0);
        let report = evaluate(&problem, &trajectory, &model).unwrap();
        assert_eq!(report.arrival_times, vec![100.0, 200.0]);
        assert_eq!(report.departing_masses, vec![1.0]);
        assert_eq!(report.total_energy, 20_000.0);
        assert_eq!(report.missed_deadlines, 0);
        assert!(report.energy_feasible);
        assert!(!report.boundary_clamped);
    }

    #[test]
    fn deadline_just_before_arrival_is_missed() {
        let problem = single_waypoint_problem(90.0);
        let model = constant_power_model(10.0, 10.0);
        let trajectory = Trajectory::uniform(vec![1], 5.0);
        let report = evaluate(&problem, &trajectory, &model).unwrap();
        assert_eq!(report.missed_deadlines, 1);
    }

    fn three_waypoint_problem() -> DeliveryProblem {
        DeliveryProblem {
            depot: Point::new(0.0, 0.0),
            waypoints: vec![
                Waypoint { id: 1, coords: Point::new(420.0, -310.0), unload_mass: 0.35, deadline: 400.0, app_id: 1 },
                Waypoint { id: 2, coords: Point::new(-180.0, 240.0), unload_mass: 0.20, deadline: 600.0, app_id: 2 },
                Waypoint { id: 3, coords: Point::new(90.0, 510.0), unload_mass: 0.45, deadline: 300.0, app_id: 1 },
            ],
            drone: drone(3.0, 8.0),
            initial_energy: 159_840.0,
        }
    }

    // Independent leg-by-leg recomputation, written against the formulas
    // rather than the evaluator: queries the model's two stages directly
    // and accumulates time, mass, and energy by hand.
    fn recompute_by_hand(
        problem: &DeliveryProblem,
        trajectory: &Trajectory,
        model: &EnergyModel,
    ) -> (Vec<f64>, Vec<f64>, Vec<f64>, u32, bool) {
        let voltage = model.curve().battery_voltage();
        let mut stops = vec![problem.depot];
        for &id in &trajectory.order {
            stops.push(problem.waypoint(id).unwrap().coords);
        }
        stops.push(problem.depot);

        let all_payload: f64 = problem.waypoints.iter().map(|w| w.unload_mass).sum();
        let mut mass = problem.drone.empty_mass + all_payload;
        let mut time = 0.0;
        let (mut times, mut masses, mut energies) = (vec![], vec![], vec![]);
        let mut missed = 0;
        for leg in 0..stops.len() - 1 {
            let l = stops[leg].distance_to(stops[leg + 1]);
            let v = trajectory.leg_speeds[leg];
            let e = if l == 0.0 {
                0.0
            } else {
                let fraction = model.thrust_fraction(mass, v).unwrap().value;
                let amps = model.current_draw(fraction).unwrap().value;
                amps * voltage * (l / v)
            };
            energies.push(e);
            time += l / v;
            times.push(time);
            if leg < trajectory.order.len() {
                let w = problem.waypoint(trajectory.order[leg]).unwrap();
                if time > w.deadline {
                    missed += 1;
                }
                // Recompute the on-board mass from scratch.
                mass = problem.drone.empty_mass;
                for other in &problem.waypoints {
                    if !trajectory.order[..=leg].contains(&other.id) {
                        mass += other.unload_mass;
                    }
                }
                masses.push(mass);
            }
        }
        missed += (problem.waypoint_count() - trajectory.order.len()) as u32;
        let total: f64 = energies.iter().sum();
        let feasible = total <= problem.initial_energy - problem.drone.energy_reserve;
        (times, masses, energies, missed, feasible)
    }

    #[test]
    fn matches_independent_recomputation_on_three_waypoints() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        let trajectory = Trajectory::new(vec![3, 1, 2], vec![8.0, 5.0, 6.0, 4.0]);
        let report = evaluate(&problem, &trajectory, &model).unwrap();
        let (times, masses, energies, missed, feasible) =
            recompute_by_hand(&problem, &trajectory, &model);
        for (a, b) in report.arrival_times.iter().zip(&times) {
            assert!((a - b).abs() <= 1e-9 * b.abs());
        }
        for (a, b) in report.departing_masses.iter().zip(&masses) {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
        for (a, b) in report.leg_energies.iter().zip(&energies) {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
        assert_eq!(report.missed_deadlines, missed);
        assert_eq!(report.energy_feasible, feasible);
    }

    #[test]
    fn full_tour_mass_telescopes_to_empty_mass_exactly() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        for order in [vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2], vec![3, 2, 1]] {
            let report = evaluate(&problem, &Trajectory::uniform(order, 6.0), &model).unwrap();
            assert_eq!(*report.departing_masses.last().unwrap(), problem.drone.empty_mass);
        }
    }

    #[test]
    fn per_stop_mass_drop_equals_unloaded_mass() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        let trajectory = Trajectory::uniform(vec![2, 1, 3], 5.0);
        let report = evaluate(&problem, &trajectory, &model).unwrap();
        let mut previous = problem.initial_mass();
        for (k, &id) in trajectory.order.iter().enumerate() {
            let unloaded = problem.waypoint(id).unwrap().unload_mass;
            let drop = previous - report.departing_masses[k];
            assert!(
                (drop - unloaded).abs() <= 1e-9 * unloaded.abs().max(1.0),
                "stop {id}: mass drop {drop} != unload {unloaded}"
            );
            previous = report.departing_masses[k];
        }
    }

    #[test]
    fn doubling_every_speed_halves_every_arrival_time() {
        let mut problem = three_waypoint_problem();
        problem.drone.v_min = 1.0;
        problem.drone.v_max = 20.0;
        let model = constant_power_model(5.0, 11.1);
        let slow = Trajectory::new(vec![1, 2, 3], vec![3.0, 4.0, 5.0, 3.5]);
        let fast = Trajectory::new(vec![1, 2, 3], vec![6.0, 8.0, 10.0, 7.0]);
        let slow_report = evaluate(&problem, &slow, &model).unwrap();
        let fast_report = evaluate(&problem, &fast, &model).unwrap();
        for (s, f) in slow_report.arrival_times.iter().zip(&fast_report.arrival_times) {
            assert_eq!(*f, s / 2.0);
        }
    }

    #[test]
    fn evaluation_is_pure() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        let trajectory = Trajectory::new(vec![3, 2], vec![7.0, 4.0, 6.0]);
        let a = evaluate(&problem, &trajectory, &model).unwrap();
        let b = evaluate(&problem, &trajectory, &model).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn skipped_waypoints_count_as_misses() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        let report = evaluate(&problem, &Trajectory::uniform(vec![1], 8.0), &model).unwrap();
        // Waypoint 1 is reachable well before its deadline at 8 m/s, so
        // the only misses are the two skipped waypoints.
        assert_eq!(report.missed_deadlines, 2);
        let report = evaluate(&problem, &Trajectory::empty(3.0), &model).unwrap();
        assert_eq!(report.missed_deadlines, 3);
        assert_eq!(report.total_energy, 0.0);
        assert!(report.energy_feasible);
    }

    #[test]
    fn arrival_times_strictly_increase_over_positive_legs() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        let report =
            evaluate(&problem, &Trajectory::uniform(vec![2, 3, 1], 4.0), &model).unwrap();
        for pair in report.arrival_times.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn structural_and_energy_errors_surface() {
        let problem = three_waypoint_problem();
        let model = reference_model();
        let unknown = Trajectory::uniform(vec![9], 5.0);
        assert!(matches!(
            evaluate(&problem, &unknown, &model),
            Err(EvaluateError::Trajectory(TrajectoryError::UnknownWaypoint { id: 9 }))
        ));
        let too_fast = Trajectory::new(vec![1], vec![5.0, 9.0]);
        assert!(matches!(
            evaluate(&problem, &too_fast, &model),
            Err(EvaluateError::Trajectory(TrajectoryError::SpeedOutOfBounds { .. }))
        ));
        // A drone allowed to fly slower than the model grid covers.
        let mut slow_problem = three_waypoint_problem();
        slow_problem.drone.v_min = 1.0;
        let crawling = Trajectory::uniform(vec![1, 2, 3], 1.0);
        assert!(matches!(
            evaluate(&slow_problem, &crawling, &model),
            Err(EvaluateError::Energy(EnergyError::Range(_)))
        ));
    }
}
