//! Line-oriented text formats for problems, trajectories, energy models,
//! and flight reports.
//!
//! Every document is a sequence of `key value...` lines in a fixed order,
//! opened by a mandatory `format <name> <version>` header. Units are part
//! of the key names and are fixed: meters, seconds, kilograms, joules,
//! m/s, volts, amps. Blank lines and `#` comments are ignored on input;
//! the serializers never emit them, so serialize → parse → serialize is
//! byte-identical. Numbers are written in Rust's shortest round-trip
//! form, which parses back to the identical bit pattern.

use std::fmt::Write as _;

use droneplan_core::domain::{DeliveryProblem, DroneParams, FlightReport, Point, Waypoint};
use droneplan_core::energy::{CurrentCurve, EnergyModel, ThrustSurface};
use droneplan_core::Trajectory;
use thiserror::Error;

pub const PROBLEM_FORMAT: &str = "droneplan-problem";
pub const TRAJECTORY_FORMAT: &str = "droneplan-trajectory";
pub const MODEL_FORMAT: &str = "droneplan-energy-model";
pub const REPORT_FORMAT: &str = "droneplan-report";
pub const PARAMS_FORMAT: &str = "droneplan-params";
pub const FORMAT_VERSION: u32 = 1;

/// Why a document failed to parse.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("missing `format <name> <version>` header line")]
    MissingHeader,
    #[error("line {line}: expected `format {expected} {version}`, got `{got}`")]
    WrongFormat { line: usize, expected: &'static str, version: u32, got: String },
    #[error("line {line}: expected `{expected}` record")]
    Expected { line: usize, expected: &'static str },
    #[error("unexpected end of document: expected `{expected}` record")]
    UnexpectedEnd { expected: &'static str },
    #[error("line {line}: {field}: {message}")]
    Malformed { line: usize, field: String, message: String },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("line {line}: unexpected trailing content")]
    Trailing { line: usize },
}

/// Non-blank, non-comment lines of a document, consumed in order.
struct Doc<'a> {
    lines: std::vec::IntoIter<(usize, &'a str)>,
}

impl<'a> Doc<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Self { lines: lines.into_iter() }
    }

    fn expect_header(&mut self, format: &'static str) -> Result<(), ParseError> {
        let (line, content) = self.lines.next().ok_or(ParseError::MissingHeader)?;
        let mut tokens = content.split_whitespace();
        let ok = tokens.next() == Some("format")
            && tokens.next() == Some(format)
            && tokens.next().and_then(|v| v.parse::<u32>().ok()) == Some(FORMAT_VERSION)
            && tokens.next().is_none();
        if !ok {
            return Err(ParseError::WrongFormat {
                line,
                expected: format,
                version: FORMAT_VERSION,
                got: content.to_string(),
            });
        }
        Ok(())
    }

    /// Takes the next line, requiring its first token to be `key`;
    /// returns the line number and the remainder after the key.
    fn expect_record(&mut self, key: &'static str) -> Result<(usize, &'a str), ParseError> {
        let (line, content) =
            self.lines.next().ok_or(ParseError::UnexpectedEnd { expected: key })?;
        match content.split_once(char::is_whitespace) {
            Some((first, rest)) if first == key => Ok((line, rest.trim_start())),
            None if content == key => Ok((line, "")),
            _ => Err(ParseError::Expected { line, expected: key }),
        }
    }

    fn finish(mut self) -> Result<(), ParseError> {
        match self.lines.next() {
            None => Ok(()),
            Some((line, _)) => Err(ParseError::Trailing { line }),
        }
    }
}

fn parse_number<T: std::str::FromStr>(
    line: usize,
    field: &str,
    token: &str,
) -> Result<T, ParseError> {
    token.parse().map_err(|_| ParseError::Malformed {
        line,
        field: field.to_string(),
        message: format!("cannot parse `{token}`"),
    })
}

fn parse_one<T: std::str::FromStr>(
    line: usize,
    field: &str,
    rest: &str,
) -> Result<T, ParseError> {
    let mut tokens = rest.split_whitespace();
    let value = tokens.next().ok_or_else(|| ParseError::Malformed {
        line,
        field: field.to_string(),
        message: "missing value".to_string(),
    })?;
    if tokens.next().is_some() {
        return Err(ParseError::Malformed {
            line,
            field: field.to_string(),
            message: "extra values on line".to_string(),
        });
    }
    parse_number(line, field, value)
}

fn parse_list<T: std::str::FromStr>(
    line: usize,
    field: &str,
    rest: &str,
) -> Result<Vec<T>, ParseError> {
    rest.split_whitespace()
        .map(|token| parse_number(line, field, token))
        .collect()
}

fn write_list(out: &mut String, key: &str, values: &[f64]) {
    out.push_str(key);
    for v in values {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

// ---------------------------------------------------------------------
// Problem documents

pub fn write_problem(problem: &DeliveryProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format {PROBLEM_FORMAT} {FORMAT_VERSION}");
    let _ = writeln!(out, "depot_m {} {}", problem.depot.x, problem.depot.y);
    let d = &problem.drone;
    let _ = writeln!(out, "empty_mass_kg {}", d.empty_mass);
    let _ = writeln!(out, "v_min_mps {}", d.v_min);
    let _ = writeln!(out, "v_max_mps {}", d.v_max);
    let _ = writeln!(out, "battery_capacity_j {}", d.battery_capacity);
    let _ = writeln!(out, "energy_reserve_j {}", d.energy_reserve);
    let _ = writeln!(out, "initial_energy_j {}", problem.initial_energy);
    let _ = writeln!(out, "waypoints {}", problem.waypoints.len());
    for w in &problem.waypoints {
        let _ = writeln!(
            out,
            "waypoint {} {} {} {} {} {}",
            w.id, w.coords.x, w.coords.y, w.unload_mass, w.deadline, w.app_id
        );
    }
    out
}

pub fn parse_problem(text: &str) -> Result<DeliveryProblem, ParseError> {
    let mut doc = Doc::new(text);
    doc.expect_header(PROBLEM_FORMAT)?;

    let (line, rest) = doc.expect_record("depot_m")?;
    let coords: Vec<f64> = parse_list(line, "depot_m", rest)?;
    if coords.len() != 2 {
        return Err(ParseError::Malformed {
            line,
            field: "depot_m".to_string(),
            message: format!("expected 2 coordinates, got {}", coords.len()),
        });
    }
    let depot = Point::new(coords[0], coords[1]);

    let (line, rest) = doc.expect_record("empty_mass_kg")?;
    let empty_mass = parse_one(line, "empty_mass_kg", rest)?;
    let (line, rest) = doc.expect_record("v_min_mps")?;
    let v_min = parse_one(line, "v_min_mps", rest)?;
    let (line, rest) = doc.expect_record("v_max_mps")?;
    let v_max = parse_one(line, "v_max_mps", rest)?;
    let (line, rest) = doc.expect_record("battery_capacity_j")?;
    let battery_capacity = parse_one(line, "battery_capacity_j", rest)?;
    let (line, rest) = doc.expect_record("energy_reserve_j")?;
    let energy_reserve = parse_one(line, "energy_reserve_j", rest)?;
    let (line, rest) = doc.expect_record("initial_energy_j")?;
    let initial_energy = parse_one(line, "initial_energy_j", rest)?;

    let (line, rest) = doc.expect_record("waypoints")?;
    let count: usize = parse_one(line, "waypoints", rest)?;
    let mut waypoints = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, rest) = doc.expect_record("waypoint")?;
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens.len() != 6 {
            return Err(ParseError::Malformed {
                line,
                field: "waypoint".to_string(),
                message: format!("expected 6 fields, got {}", tokens.len()),
            });
        }
        waypoints.push(Waypoint {
            id: parse_number(line, "waypoint.id", tokens[0])?,
            coords: Point::new(
                parse_number(line, "waypoint.x_m", tokens[1])?,
                parse_number(line, "waypoint.y_m", tokens[2])?,
            ),
            unload_mass: parse_number(line, "waypoint.unload_kg", tokens[3])?,
            deadline: parse_number(line, "waypoint.deadline_s", tokens[4])?,
            app_id: parse_number(line, "waypoint.app_id", tokens[5])?,
        });
    }
    doc.finish()?;

    Ok(DeliveryProblem {
        depot,
        waypoints,
        drone: DroneParams { empty_mass, v_min, v_max, battery_capacity, energy_reserve },
        initial_energy,
    })
}

// ---------------------------------------------------------------------
// Trajectory documents

pub fn write_trajectory(trajectory: &Trajectory) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format {TRAJECTORY_FORMAT} {FORMAT_VERSION}");
    let _ = writeln!(out, "visits {}", trajectory.order.len());
    out.push_str("order");
    for id in &trajectory.order {
        let _ = write!(out, " {id}");
    }
    out.push('\n');
    write_list(&mut out, "leg_speeds_mps", &trajectory.leg_speeds);
    out
}

pub fn parse_trajectory(text: &str) -> Result<Trajectory, ParseError> {
    let mut doc = Doc::new(text);
    doc.expect_header(TRAJECTORY_FORMAT)?;
    let (line, rest) = doc.expect_record("visits")?;
    let visits: usize = parse_one(line, "visits", rest)?;
    let (line, rest) = doc.expect_record("order")?;
    let order: Vec<u32> = parse_list(line, "order", rest)?;
    if order.len() != visits {
        return Err(ParseError::Malformed {
            line,
            field: "order".to_string(),
            message: format!("expected {visits} ids, got {}", order.len()),
        });
    }
    let (line, rest) = doc.expect_record("leg_speeds_mps")?;
    let leg_speeds: Vec<f64> = parse_list(line, "leg_speeds_mps", rest)?;
    if leg_speeds.len() != visits + 1 {
        return Err(ParseError::Malformed {
            line,
            field: "leg_speeds_mps".to_string(),
            message: format!("expected {} speeds (visits + 1), got {}", visits + 1, leg_speeds.len()),
        });
    }
    doc.finish()?;
    Ok(Trajectory::new(order, leg_speeds))
}

// ---------------------------------------------------------------------
// Energy model documents

pub fn write_model(model: &EnergyModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format {MODEL_FORMAT} {FORMAT_VERSION}");
    let _ = writeln!(out, "source {}", model.source());
    let _ = writeln!(out, "motor_count {}", model.motor_count());
    let _ = writeln!(out, "battery_voltage_v {}", model.curve().battery_voltage());
    let surface = model.surface();
    write_list(&mut out, "mass_axis_kg", surface.mass_axis());
    write_list(&mut out, "speed_axis_mps", surface.speed_axis());
    let cols = surface.speed_axis().len();
    for row in 0..surface.mass_axis().len() {
        let start = row * cols;
        write_list(&mut out, "thrust_row", &surface.values()[start..start + cols]);
    }
    let _ = writeln!(out, "current_points {}", model.curve().points().len());
    for (fraction, amps) in model.curve().points() {
        let _ = writeln!(out, "current_point {fraction} {amps}");
    }
    out
}

/// Parses and fully validates an energy model document; every surface and
/// curve invariant is enforced here, with the offending field named.
pub fn parse_model(text: &str) -> Result<EnergyModel, ParseError> {
    let mut doc = Doc::new(text);
    doc.expect_header(MODEL_FORMAT)?;
    let (_, source) = doc.expect_record("source")?;
    let source = source.to_string();
    let (line, rest) = doc.expect_record("motor_count")?;
    let motor_count: u32 = parse_one(line, "motor_count", rest)?;
    let (line, rest) = doc.expect_record("battery_voltage_v")?;
    let battery_voltage: f64 = parse_one(line, "battery_voltage_v", rest)?;

    let (line, rest) = doc.expect_record("mass_axis_kg")?;
    let mass_axis: Vec<f64> = parse_list(line, "mass_axis_kg", rest)?;
    let (line, rest) = doc.expect_record("speed_axis_mps")?;
    let speed_axis: Vec<f64> = parse_list(line, "speed_axis_mps", rest)?;

    let mut values = Vec::with_capacity(mass_axis.len() * speed_axis.len());
    for row in 0..mass_axis.len() {
        let (line, rest) = doc.expect_record("thrust_row")?;
        let row_values: Vec<f64> = parse_list(line, "thrust_row", rest)?;
        if row_values.len() != speed_axis.len() {
            return Err(ParseError::Malformed {
                line,
                field: format!("thrust_row[{row}]"),
                message: format!(
                    "expected {} values (one per speed), got {}",
                    speed_axis.len(),
                    row_values.len()
                ),
            });
        }
        values.extend(row_values);
    }
    let surface = ThrustSurface::new(mass_axis, speed_axis, values).map_err(|e| {
        ParseError::Invalid { field: "thrust surface".to_string(), message: e.to_string() }
    })?;

    let (line, rest) = doc.expect_record("current_points")?;
    let point_count: usize = parse_one(line, "current_points", rest)?;
    let mut points = Vec::with_capacity(point_count);
    for i in 0..point_count {
        let (line, rest) = doc.expect_record("current_point")?;
        let pair: Vec<f64> = parse_list(line, "current_point", rest)?;
        if pair.len() != 2 {
            return Err(ParseError::Malformed {
                line,
                field: format!("current_point[{i}]"),
                message: format!("expected `fraction amps`, got {} values", pair.len()),
            });
        }
        points.push((pair[0], pair[1]));
    }
    let curve = CurrentCurve::new(points, battery_voltage).map_err(|e| {
        ParseError::Invalid { field: "current curve".to_string(), message: e.to_string() }
    })?;
    doc.finish()?;

    Ok(EnergyModel::new(surface, curve, motor_count, source))
}

// ---------------------------------------------------------------------
// Flight report documents

pub fn write_report(report: &FlightReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format {REPORT_FORMAT} {FORMAT_VERSION}");
    let _ = writeln!(out, "visits {}", report.departing_masses.len());
    write_list(&mut out, "arrival_times_s", &report.arrival_times);
    write_list(&mut out, "departing_masses_kg", &report.departing_masses);
    write_list(&mut out, "leg_energies_j", &report.leg_energies);
    let _ = writeln!(out, "total_energy_j {}", report.total_energy);
    let _ = writeln!(out, "missed_deadlines {}", report.missed_deadlines);
    let _ = writeln!(out, "energy_feasible {}", report.energy_feasible);
    let _ = writeln!(out, "boundary_clamped {}", report.boundary_clamped);
    out
}

// ---------------------------------------------------------------------
// Planner parameter documents

/// Planner settings read from a params file; unset fields fall back to
/// CLI flags or defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamsFile {
    pub planner: Option<String>,
    pub speed_grid_mps: Option<Vec<f64>>,
    pub sa_iterations: Option<u64>,
    pub sa_seed: Option<u64>,
    pub sa_initial_temperature: Option<f64>,
    pub sa_cooling_factor: Option<f64>,
    pub sa_moves_per_temperature: Option<u64>,
    pub sa_penalty_rate: Option<f64>,
    pub oracle_max_waypoints: Option<usize>,
    pub time_budget_ms: Option<u64>,
}

pub fn parse_params(text: &str) -> Result<ParamsFile, ParseError> {
    let mut doc = Doc::new(text);
    doc.expect_header(PARAMS_FORMAT)?;
    let mut params = ParamsFile::default();
    while let Some((line, content)) = doc.lines.next() {
        let (key, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim_start()))
            .unwrap_or((content, ""));
        match key {
            "planner" => params.planner = Some(rest.to_string()),
            "speed_grid_mps" => params.speed_grid_mps = Some(parse_list(line, key, rest)?),
            "sa_iterations" => params.sa_iterations = Some(parse_one(line, key, rest)?),
            "sa_seed" => params.sa_seed = Some(parse_one(line, key, rest)?),
            "sa_initial_temperature" => {
                params.sa_initial_temperature = Some(parse_one(line, key, rest)?)
            }
            "sa_cooling_factor" => params.sa_cooling_factor = Some(parse_one(line, key, rest)?),
            "sa_moves_per_temperature" => {
                params.sa_moves_per_temperature = Some(parse_one(line, key, rest)?)
            }
            "sa_penalty_rate" => params.sa_penalty_rate = Some(parse_one(line, key, rest)?),
            "oracle_max_waypoints" => {
                params.oracle_max_waypoints = Some(parse_one(line, key, rest)?)
            }
            "time_budget_ms" => params.time_budget_ms = Some(parse_one(line, key, rest)?),
            _ => {
                return Err(ParseError::Malformed {
                    line,
                    field: key.to_string(),
                    message: "unknown parameter".to_string(),
                })
            }
        }
    }
    Ok(params)
}
