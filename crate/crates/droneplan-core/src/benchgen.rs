//! Deterministic benchmark instance generation.
//!
//! Instances follow a parametric recipe: waypoints uniform over a square
//! around the depot, unload masses uniform within a payload class, and
//! deadlines uniform between "a little above the direct flight time at
//! top speed" and "a slackened nearest-neighbor tour time at minimum
//! speed". Both endpoints scale with the geometry, so instances stay
//! challenging without being hopeless, and some are infeasible even for
//! the exhaustive oracle by design.
//!
//! Instances are named `<class>_<depot><index>` (for example `M_C3` for
//! the third medium-payload instance around depot C); the waypoint count
//! is carried alongside the name since every combination is generated at
//! several counts.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::{DeliveryProblem, DroneParams, Point, Waypoint};

/// Default battery energy: a 4000 mAh pack at 11.1 V nominal.
pub const DEFAULT_BATTERY_JOULES: f64 = 4.0 * 3600.0 * 11.1;

/// Default reserve kept out of the planning budget, as a fraction of the
/// battery.
pub const DEFAULT_RESERVE_FRACTION: f64 = 0.1;

/// Default drone for generated benchmarks.
pub fn default_drone() -> DroneParams {
    DroneParams {
        empty_mass: 1.0,
        v_min: 3.0,
        v_max: 8.0,
        battery_capacity: DEFAULT_BATTERY_JOULES,
        energy_reserve: DEFAULT_RESERVE_FRACTION * DEFAULT_BATTERY_JOULES,
    }
}

/// Per-waypoint payload mass class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PayloadClass {
    Light,
    Medium,
    Heavy,
}

impl PayloadClass {
    pub const ALL: [PayloadClass; 3] =
        [PayloadClass::Light, PayloadClass::Medium, PayloadClass::Heavy];

    pub fn label(self) -> char {
        match self {
            PayloadClass::Light => 'L',
            PayloadClass::Medium => 'M',
            PayloadClass::Heavy => 'H',
        }
    }

    pub fn from_label(label: char) -> Option<Self> {
        match label {
            'L' => Some(PayloadClass::Light),
            'M' => Some(PayloadClass::Medium),
            'H' => Some(PayloadClass::Heavy),
            _ => None,
        }
    }

    /// Unload mass range per waypoint, in kilograms.
    pub fn mass_range(self) -> (f64, f64) {
        match self {
            PayloadClass::Light => (0.05, 0.15),
            PayloadClass::Medium => (0.15, 0.30),
            PayloadClass::Heavy => (0.30, 0.50),
        }
    }
}

/// Depot location label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepotLabel {
    A,
    C,
}

impl DepotLabel {
    pub const ALL: [DepotLabel; 2] = [DepotLabel::A, DepotLabel::C];

    pub fn label(self) -> char {
        match self {
            DepotLabel::A => 'A',
            DepotLabel::C => 'C',
        }
    }

    pub fn from_label(label: char) -> Option<Self> {
        match label {
            'A' => Some(DepotLabel::A),
            'C' => Some(DepotLabel::C),
            _ => None,
        }
    }

    /// Fixed depot coordinates per label, in meters.
    pub fn coords(self) -> Point {
        match self {
            DepotLabel::A => Point::new(0.0, 0.0),
            DepotLabel::C => Point::new(2500.0, 1200.0),
        }
    }
}

/// Everything needed to generate one benchmark instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub payload_class: PayloadClass,
    pub depot: DepotLabel,
    pub waypoint_count: usize,
    /// 1-based index distinguishing repeats of the same parameter cell.
    pub instance_index: u32,
    /// Half-width of the sampled square around the depot, in meters.
    pub area_half_width: f64,
    /// Multiplier on the direct flight time at top speed forming the
    /// lower deadline bound; must be >= 1 for reachable deadlines.
    pub deadline_min_factor: f64,
    /// Multiplier on the nearest-neighbor tour time at minimum speed
    /// forming the upper deadline bound.
    pub deadline_slack: f64,
    pub rng_seed: u64,
}

impl BenchmarkSpec {
    /// A spec with the default area and deadline parameters.
    pub fn new(
        payload_class: PayloadClass,
        depot: DepotLabel,
        waypoint_count: usize,
        instance_index: u32,
        rng_seed: u64,
    ) -> Self {
        Self {
            payload_class,
            depot,
            waypoint_count,
            instance_index,
            area_half_width: 1000.0,
            deadline_min_factor: 1.2,
            deadline_slack: 0.8,
            rng_seed,
        }
    }

    /// `<class>_<depot><index>`, e.g. `M_C3`.
    pub fn canonical_name(&self) -> String {
        let mut name = String::new();
        name.push(self.payload_class.label());
        name.push('_');
        name.push(self.depot.label());
        push_u32(&mut name, self.instance_index);
        name
    }
}

fn push_u32(out: &mut String, value: u32) {
    use core::fmt::Write;
    let _ = write!(out, "{value}");
}

/// Length of the nearest-neighbor tour over `points` starting and ending
/// at `depot`.
fn nearest_neighbor_tour_length(depot: Point, points: &[Point]) -> f64 {
    let mut remaining: Vec<Point> = points.to_vec();
    let mut position = depot;
    let mut total = 0.0;
    while !remaining.is_empty() {
        let (slot, _) = remaining
            .iter()
            .enumerate()
            .map(|(i, p)| (i, position.distance_to(*p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        let next = remaining.swap_remove(slot);
        total += position.distance_to(next);
        position = next;
    }
    total + position.distance_to(depot)
}

/// Generates the instance a spec describes. Deterministic: the same spec
/// always yields the same problem.
pub fn generate(spec: &BenchmarkSpec) -> DeliveryProblem {
    assert!(spec.waypoint_count >= 1, "waypoint_count must be >= 1");
    assert!(spec.area_half_width > 0.0, "area_half_width must be > 0");

    let drone = default_drone();
    let depot = spec.depot.coords();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let (mass_lo, mass_hi) = spec.payload_class.mass_range();

    let mut coords = Vec::with_capacity(spec.waypoint_count);
    let mut masses = Vec::with_capacity(spec.waypoint_count);
    for _ in 0..spec.waypoint_count {
        let x = depot.x + rng.gen_range(-spec.area_half_width..spec.area_half_width);
        let y = depot.y + rng.gen_range(-spec.area_half_width..spec.area_half_width);
        coords.push(Point::new(x, y));
        masses.push(rng.gen_range(mass_lo..mass_hi));
    }

    let tour_upper_bound =
        nearest_neighbor_tour_length(depot, &coords) / drone.v_min * spec.deadline_slack;

    let waypoints = coords
        .iter()
        .zip(&masses)
        .enumerate()
        .map(|(i, (&c, &mass))| {
            let direct_time = depot.distance_to(c) / drone.v_max;
            let lower = direct_time * spec.deadline_min_factor;
            let deadline = if tour_upper_bound > lower {
                rng.gen_range(lower..tour_upper_bound)
            } else {
                lower
            };
            Waypoint {
                id: i as u32 + 1,
                coords: c,
                unload_mass: mass,
                deadline,
                app_id: 1 + (i as u32) % 3,
            }
        })
        .collect();

    DeliveryProblem {
        depot,
        waypoints,
        drone,
        initial_energy: drone.battery_capacity,
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the per-instance seed for one suite cell from the suite's base
/// seed and the cell's labels. Stable across runs by construction.
pub fn derive_seed(
    base_seed: u64,
    waypoint_count: usize,
    class: PayloadClass,
    depot: DepotLabel,
    instance_index: u32,
) -> u64 {
    // FNV-1a over the cell label, mixed with the base seed.
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    let mut feed = |byte: u8| {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    };
    feed(waypoint_count as u8);
    feed(class.label() as u8);
    feed(depot.label() as u8);
    for shift in [0, 8, 16, 24] {
        feed((instance_index >> shift) as u8);
    }
    splitmix64(base_seed ^ hash)
}

/// Generates the full Cartesian product of the given parameter lists,
/// `instances_per_cell` instances per cell, with per-instance seeds
/// derived from `base_seed`.
pub fn generate_suite(
    counts: &[usize],
    classes: &[PayloadClass],
    depots: &[DepotLabel],
    instances_per_cell: u32,
    base_seed: u64,
) -> Vec<(BenchmarkSpec, DeliveryProblem)> {
    assert!(!counts.is_empty() && !classes.is_empty() && !depots.is_empty());
    let mut out = Vec::new();
    for &count in counts {
        for &class in classes {
            for &depot in depots {
                for index in 1..=instances_per_cell {
                    let seed = derive_seed(base_seed, count, class, depot, index);
                    let spec = BenchmarkSpec::new(class, depot, count, index, seed);
                    let problem = generate(&spec);
                    out.push((spec, problem));
                }
            }
        }
    }
    out
}

/// Default waypoint counts of the standard suite.
pub const DEFAULT_SUITE_COUNTS: [usize; 6] = [5, 6, 7, 8, 9, 10];

/// The standard 108-instance suite: counts 5–10 × three payload classes ×
/// two depots × three instances.
pub fn default_suite(base_seed: u64) -> Vec<(BenchmarkSpec, DeliveryProblem)> {
    generate_suite(
        &DEFAULT_SUITE_COUNTS,
        &PayloadClass::ALL,
        &DepotLabel::ALL,
        3,
        base_seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn canonical_name_matches_the_labeling_scheme() {
        let spec = BenchmarkSpec::new(PayloadClass::Medium, DepotLabel::C, 3, 3, 42);
        assert_eq!(spec.canonical_name(), "M_C3");
        let spec = BenchmarkSpec::new(PayloadClass::Light, DepotLabel::A, 7, 12, 1);
        assert_eq!(spec.canonical_name(), "L_A12");
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = BenchmarkSpec::new(PayloadClass::Heavy, DepotLabel::A, 8, 1, 99);
        assert_eq!(generate(&spec), generate(&spec));
    }

    #[test]
    fn deadlines_admit_the_direct_flight_at_top_speed() {
        let spec = BenchmarkSpec::new(PayloadClass::Medium, DepotLabel::C, 10, 2, 7);
        let problem = generate(&spec);
        for w in &problem.waypoints {
            let direct = problem.depot.distance_to(w.coords) / problem.drone.v_max;
            assert!(
                w.deadline >= direct,
                "deadline {} below direct flight time {direct}",
                w.deadline
            );
        }
    }

    #[test]
    fn samples_stay_inside_the_declared_ranges() {
        for seed in 0..20 {
            let spec = BenchmarkSpec::new(PayloadClass::Heavy, DepotLabel::A, 9, 1, seed);
            let problem = generate(&spec);
            let (lo, hi) = spec.payload_class.mass_range();
            for w in &problem.waypoints {
                assert!(w.unload_mass >= lo && w.unload_mass < hi);
                assert!((w.coords.x - problem.depot.x).abs() <= spec.area_half_width);
                assert!((w.coords.y - problem.depot.y).abs() <= spec.area_half_width);
            }
        }
    }

    #[test]
    fn default_suite_has_the_full_grid() {
        let suite = default_suite(42);
        assert_eq!(suite.len(), 6 * 3 * 2 * 3);
        for (_, problem) in &suite {
            assert!(problem.is_valid());
        }
        // (name, waypoint count) identifies an instance uniquely.
        let keys: BTreeSet<(String, usize)> = suite
            .iter()
            .map(|(spec, _)| (spec.canonical_name(), spec.waypoint_count))
            .collect();
        assert_eq!(keys.len(), suite.len());
    }

    #[test]
    fn derived_seeds_differ_across_cells() {
        let mut seeds = BTreeSet::new();
        for &count in &DEFAULT_SUITE_COUNTS {
            for class in PayloadClass::ALL {
                for depot in DepotLabel::ALL {
                    for index in 1..=3 {
                        seeds.insert(derive_seed(42, count, class, depot, index));
                    }
                }
            }
        }
        assert_eq!(seeds.len(), 108);
    }

    #[test]
    fn suite_regeneration_is_identical() {
        let a = default_suite(7);
        let b = default_suite(7);
        assert_eq!(a.len(), b.len());
        for ((sa, pa), (sb, pb)) in a.iter().zip(&b) {
            assert_eq!(sa, sb);
            assert_eq!(pa, pb);
        }
    }
}
