//! Exhaustive baseline: permutations of waypoint subsets at uniform
//! tour speeds.

use alloc::vec::Vec;
use core::fmt;

use crate::domain::{DeliveryProblem, FlightReport, Trajectory};
use crate::energy::EnergyModel;
use crate::evaluate::evaluate;

use super::{Cost, SpeedGrid};

/// Hard limits for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactLimits {
    /// Largest instance the oracle will accept; factorial growth makes
    /// anything bigger pointless to attempt.
    pub max_waypoints: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self { max_waypoints: 10 }
    }
}

/// The instance exceeds the oracle's size limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactError {
    pub waypoint_count: usize,
    pub max_waypoints: usize,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exhaustive search refused: {} waypoints exceed the limit of {}",
            self.waypoint_count, self.max_waypoints
        )
    }
}

impl core::error::Error for ExactError {}

/// Result of an exhaustive search.
#[derive(Debug, Clone)]
pub struct ExactRun {
    pub trajectory: Trajectory,
    pub report: FlightReport,
    /// False when `should_stop` interrupted the search; the trajectory is
    /// then only the best found so far.
    pub complete: bool,
    /// Trajectory evaluations performed.
    pub evaluations: u64,
}

/// Exhaustively searches all visiting orders over all waypoint subsets,
/// flying each candidate at one uniform grid speed, and returns the
/// feasible candidate with the least [`Cost`].
///
/// Subset sizes are enumerated in decreasing order; once the incumbent
/// misses fewer deadlines than any smaller subset could (`n - k` skips
/// are misses by themselves), the remaining sizes are pruned, which makes
/// the result optimal over the searched space: waypoint permutations ×
/// uniform quantized speeds. The empty trajectory is always feasible, so
/// a result always exists. Ties break to the lexicographically smallest
/// visiting order, then the lowest speed.
///
/// `should_stop` is polled between permutations; returning true ends the
/// search early with `complete = false`.
pub fn plan_exact(
    problem: &DeliveryProblem,
    model: &EnergyModel,
    grid: &SpeedGrid,
    limits: ExactLimits,
    mut should_stop: impl FnMut() -> bool,
) -> Result<ExactRun, ExactError> {
    let n = problem.waypoint_count();
    if n > limits.max_waypoints {
        return Err(ExactError { waypoint_count: n, max_waypoints: limits.max_waypoints });
    }

    let mut ids: Vec<u32> = problem.waypoints.iter().map(|w| w.id).collect();
    ids.sort_unstable();

    let mut evaluations = 0_u64;
    let empty = Trajectory::empty(grid.lowest());
    let empty_report =
        evaluate(problem, &empty, model).expect("empty trajectory always evaluates");
    evaluations += 1;
    let mut best_cost = Cost::of(&empty_report);
    let mut best = (empty, empty_report);
    let mut complete = true;

    'sizes: for size in (1..=n).rev() {
        // Any size-k candidate misses at least n - k deadlines.
        if (n - size) as u32 > best_cost.misses {
            break;
        }
        let mut subset = Combinations::new(n, size);
        while let Some(chosen) = subset.next() {
            let mut perm: Vec<u32> = chosen.iter().map(|&i| ids[i]).collect();
            loop {
                if should_stop() {
                    complete = false;
                    break 'sizes;
                }
                for &speed in grid.levels() {
                    let candidate = Trajectory::uniform(perm.clone(), speed);
                    evaluations += 1;
                    if let Ok(report) = evaluate(problem, &candidate, model) {
                        if report.energy_feasible {
                            let cost = Cost::of(&report);
                            if cost < best_cost {
                                best_cost = cost;
                                best = (candidate, report);
                            }
                        }
                    }
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
    }

    Ok(ExactRun { trajectory: best.0, report: best.1, complete, evaluations })
}

/// Lexicographic k-combinations of `0..n`.
struct Combinations {
    n: usize,
    indices: Vec<usize>,
    started: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Self { n, indices: (0..k).collect(), started: false }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            return Some(&self.indices);
        }
        let k = self.indices.len();
        if k == 0 {
            return None;
        }
        // Advance the rightmost index that still has room.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.indices[i] + 1 <= self.n - (k - i) {
                break;
            }
        }
        self.indices[i] += 1;
        for j in i + 1..k {
            self.indices[j] = self.indices[j - 1] + 1;
        }
        Some(&self.indices)
    }
}

/// Advances `items` to its next lexicographic permutation, returning
/// false once the sequence is fully descending.
fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}
