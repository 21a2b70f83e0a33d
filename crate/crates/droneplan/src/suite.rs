//! Benchmark suites on disk: problem files plus a manifest.
//!
//! A suite directory holds one subdirectory per waypoint count (`n05` …
//! `n10`) with one problem file per instance, and a `manifest.csv` at the
//! top listing every instance with its generation parameters. Instance
//! names repeat across waypoint counts (the count is not part of the
//! name), so the per-count subdirectories keep paths unique.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use droneplan_core::benchgen::{BenchmarkSpec, DepotLabel, PayloadClass};
use droneplan_core::domain::DeliveryProblem;
use droneplan_core::energy::EnergyModel;
use droneplan_core::planners::{plan_exact, ExactLimits, SpeedGrid};
use thiserror::Error;

use crate::format::{self, ParseError};

pub const MANIFEST_NAME: &str = "manifest.csv";
pub const MANIFEST_HEADER: &str = "name,n,class,depot,index,seed,path";

/// One benchmark instance, in memory.
#[derive(Debug)]
pub struct SuiteEntry {
    pub name: String,
    pub waypoint_count: usize,
    pub class: PayloadClass,
    pub depot: DepotLabel,
    pub instance_index: u32,
    pub seed: u64,
    /// Path relative to the suite directory; empty for in-memory suites.
    pub path: PathBuf,
    pub problem: DeliveryProblem,
    oracle_zero_miss: OnceLock<Option<bool>>,
}

impl SuiteEntry {
    pub fn from_generated(spec: &BenchmarkSpec, problem: DeliveryProblem) -> Self {
        Self {
            name: spec.canonical_name(),
            waypoint_count: spec.waypoint_count,
            class: spec.payload_class,
            depot: spec.depot,
            instance_index: spec.instance_index,
            seed: spec.rng_seed,
            path: PathBuf::new(),
            problem,
            oracle_zero_miss: OnceLock::new(),
        }
    }

    /// Whether the exhaustive oracle finds a zero-miss plan for this
    /// instance. Computed on first call and cached; `None` when the
    /// instance exceeds the oracle's size limit.
    pub fn oracle_zero_miss(
        &self,
        model: &EnergyModel,
        grid: &SpeedGrid,
        limits: ExactLimits,
    ) -> Option<bool> {
        *self.oracle_zero_miss.get_or_init(|| {
            plan_exact(&self.problem, model, grid, limits, || false)
                .ok()
                .map(|run| run.report.missed_deadlines == 0)
        })
    }
}

/// Relative path of one instance inside a suite directory.
pub fn instance_path(waypoint_count: usize, name: &str) -> PathBuf {
    PathBuf::from(format!("n{waypoint_count:02}")).join(format!("{name}.problem"))
}

/// Errors from reading or writing suite directories.
#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path} line {line}: malformed manifest row")]
    Manifest { path: PathBuf, line: usize },
}

fn read(path: &Path) -> Result<String, SuiteError> {
    fs::read_to_string(path).map_err(|source| SuiteError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, content: &str) -> Result<(), SuiteError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|source| SuiteError::Io { path: parent.to_path_buf(), source })?;
    }
    fs::write(path, content).map_err(|source| SuiteError::Io { path: path.to_path_buf(), source })
}

/// Writes problem files and the manifest for a generated suite, returning
/// the entries in suite order.
pub fn write_suite(
    dir: &Path,
    suite: &[(BenchmarkSpec, DeliveryProblem)],
) -> Result<Vec<SuiteEntry>, SuiteError> {
    let mut manifest = String::from(MANIFEST_HEADER);
    manifest.push('\n');
    let mut entries = Vec::with_capacity(suite.len());
    for (spec, problem) in suite {
        let mut entry = SuiteEntry::from_generated(spec, problem.clone());
        entry.path = instance_path(spec.waypoint_count, &entry.name);
        write(&dir.join(&entry.path), &format::write_problem(problem))?;
        manifest.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            entry.name,
            entry.waypoint_count,
            entry.class.label(),
            entry.depot.label(),
            entry.instance_index,
            entry.seed,
            entry.path.display(),
        ));
        entries.push(entry);
    }
    write(&dir.join(MANIFEST_NAME), &manifest)?;
    Ok(entries)
}

/// Loads a suite directory via its manifest.
pub fn load_suite(dir: &Path) -> Result<Vec<SuiteEntry>, SuiteError> {
    let manifest_path = dir.join(MANIFEST_NAME);
    let manifest = read(&manifest_path)?;
    let mut entries = Vec::new();
    for (index, row) in manifest.lines().enumerate() {
        if index == 0 {
            if row != MANIFEST_HEADER {
                return Err(SuiteError::Manifest { path: manifest_path, line: 1 });
            }
            continue;
        }
        if row.trim().is_empty() {
            continue;
        }
        let bad_row = || SuiteError::Manifest { path: manifest_path.clone(), line: index + 1 };
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 7 {
            return Err(bad_row());
        }
        let name = fields[0].to_string();
        let waypoint_count: usize = fields[1].parse().map_err(|_| bad_row())?;
        let class = fields[2]
            .chars()
            .next()
            .and_then(PayloadClass::from_label)
            .ok_or_else(bad_row)?;
        let depot = fields[3]
            .chars()
            .next()
            .and_then(DepotLabel::from_label)
            .ok_or_else(bad_row)?;
        let instance_index: u32 = fields[4].parse().map_err(|_| bad_row())?;
        let seed: u64 = fields[5].parse().map_err(|_| bad_row())?;
        let path = PathBuf::from(fields[6]);
        let problem_path = dir.join(&path);
        let problem = format::parse_problem(&read(&problem_path)?)
            .map_err(|source| SuiteError::Parse { path: problem_path, source })?;
        entries.push(SuiteEntry {
            name,
            waypoint_count,
            class,
            depot,
            instance_index,
            seed,
            path,
            problem,
        });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use droneplan_core::benchgen;
    use droneplan_core::energy::reference_model;

    fn small_suite() -> Vec<(BenchmarkSpec, DeliveryProblem)> {
        benchgen::generate_suite(&[5], &[PayloadClass::Medium], &DepotLabel::ALL, 2, 42)
    }

    #[test]
    fn write_then_load_round_trips() {
        let dir = std::env::temp_dir().join(format!("droneplan-suite-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let suite = small_suite();
        let written = write_suite(&dir, &suite).unwrap();
        let loaded = load_suite(&dir).unwrap();
        assert_eq!(written.len(), loaded.len());
        for (w, l) in written.iter().zip(&loaded) {
            assert_eq!(w.name, l.name);
            assert_eq!(w.seed, l.seed);
            assert_eq!(w.problem, l.problem);
        }
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn entry_paths_are_unique_within_a_suite() {
        let suite = benchgen::default_suite(42);
        let paths: std::collections::BTreeSet<PathBuf> = suite
            .iter()
            .map(|(spec, _)| instance_path(spec.waypoint_count, &spec.canonical_name()))
            .collect();
        assert_eq!(paths.len(), suite.len());
    }

    #[test]
    fn oracle_zero_miss_is_computed_lazily_and_cached() {
        let suite = small_suite();
        let entry = SuiteEntry::from_generated(&suite[0].0, suite[0].1.clone());
        let model = reference_model();
        let grid = SpeedGrid::integer_steps(3.0, 8.0).unwrap();
        assert!(entry.oracle_zero_miss.get().is_none());
        let first = entry.oracle_zero_miss(&model, &grid, ExactLimits::default());
        assert!(entry.oracle_zero_miss.get().is_some());
        let second = entry.oracle_zero_miss(&model, &grid, ExactLimits::default());
        assert_eq!(first, second);
        // Above the size cap the metadata is unavailable rather than wrong.
        let refused = entry.oracle_zero_miss(&model, &grid, ExactLimits { max_waypoints: 3 });
        // Cached from the first call, so the limit change is ignored.
        assert_eq!(refused, first);
    }
}
