//! Two-stage propulsion energy model.
//!
//! Leg energy is computed by composing two measured (or synthesized)
//! curves: a piecewise-bilinear surface giving the per-motor thrust
//! fraction demanded at a (total mass, flight speed) operating point, and
//! a piecewise-linear curve mapping that thrust fraction to battery
//! current. Multiplying current by pack voltage gives power; integrating
//! over the leg duration `distance / speed` gives joules:
//!
//! ```text
//! E(mass, speed, distance) = current(thrust(mass, speed)) · voltage · distance / speed
//! ```
//!
//! Both stages are immutable after construction and all queries are pure,
//! so a single model can serve many concurrent planner runs.

use core::fmt;

mod curve;
mod fit;
mod reference;
mod surface;

pub use curve::{CurrentCurve, CurveError};
pub use fit::{fit_piecewise, FitError, SurfaceFit, ThrustSample};
pub use reference::{reference_model, ReferenceModelConfig, STANDARD_GRAVITY};
pub use surface::{SurfaceError, ThrustSurface};

use alloc::string::String;

/// Fraction of an axis span that a query may overshoot a grid bound by
/// and still be clamped to the boundary instead of rejected.
pub const CLAMP_SPAN_FRACTION: f64 = 0.02;

/// Result of a model query. `clamped` is set when the query point was
/// marginally outside the model's domain and snapped to its boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelQuery {
    pub value: f64,
    pub clamped: bool,
}

/// Axis of a model domain, used in range errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeAxis {
    Mass,
    Speed,
    ThrustFraction,
}

impl fmt::Display for RangeAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeAxis::Mass => write!(f, "mass"),
            RangeAxis::Speed => write!(f, "speed"),
            RangeAxis::ThrustFraction => write!(f, "thrust fraction"),
        }
    }
}

/// A query fell outside the model's declared domain, beyond the clamping
/// tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeError {
    pub axis: RangeAxis,
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} outside the model domain [{}, {}]",
            self.axis, self.value, self.min, self.max
        )
    }
}

impl core::error::Error for RangeError {}

/// Error from an energy query.
#[derive(Debug, Clone, PartialEq)]
pub enum EnergyError {
    Range(RangeError),
    NonPositiveSpeed { speed: f64 },
    NegativeDistance { distance: f64 },
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyError::Range(e) => e.fmt(f),
            EnergyError::NonPositiveSpeed { speed } => {
                write!(f, "speed must be > 0 m/s, got {speed}")
            }
            EnergyError::NegativeDistance { distance } => {
                write!(f, "distance must be >= 0 m, got {distance}")
            }
        }
    }
}

impl core::error::Error for EnergyError {}

impl From<RangeError> for EnergyError {
    fn from(e: RangeError) -> Self {
        EnergyError::Range(e)
    }
}

/// The complete propulsion model: thrust surface, current curve, motor
/// count, and a free-form note recording where the data came from.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyModel {
    surface: ThrustSurface,
    curve: CurrentCurve,
    motor_count: u32,
    source: String,
}

impl EnergyModel {
    pub fn new(
        surface: ThrustSurface,
        curve: CurrentCurve,
        motor_count: u32,
        source: String,
    ) -> Self {
        Self { surface, curve, motor_count, source }
    }

    pub fn surface(&self) -> &ThrustSurface {
        &self.surface
    }

    pub fn curve(&self) -> &CurrentCurve {
        &self.curve
    }

    pub fn motor_count(&self) -> u32 {
        self.motor_count
    }

    /// Provenance note for the model data (e.g. measured vs synthetic).
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Per-motor thrust fraction demanded at a (total mass, speed)
    /// operating point.
    pub fn thrust_fraction(&self, total_mass: f64, speed: f64) -> Result<ModelQuery, EnergyError> {
        Ok(self.surface.interpolate(total_mass, speed)?)
    }

    /// Battery current drawn by the whole motor set at a per-motor thrust
    /// fraction, in amps.
    pub fn current_draw(&self, fraction: f64) -> Result<ModelQuery, EnergyError> {
        Ok(self.curve.current_at(fraction)?)
    }

    /// Propulsion energy for one leg, in joules.
    ///
    /// `departing_mass` is the total drone mass over the whole leg (the
    /// payload changes only at stops). Zero distance costs zero energy and
    /// never touches the model grids.
    pub fn leg_energy(
        &self,
        departing_mass: f64,
        speed: f64,
        distance: f64,
    ) -> Result<ModelQuery, EnergyError> {
        if !(speed > 0.0) {
            return Err(EnergyError::NonPositiveSpeed { speed });
        }
        if !(distance >= 0.0) {
            return Err(EnergyError::NegativeDistance { distance });
        }
        if distance == 0.0 {
            return Ok(ModelQuery { value: 0.0, clamped: false });
        }
        let fraction = self.thrust_fraction(departing_mass, speed)?;
        let current = self.current_draw(fraction.value)?;
        let duration = distance / speed;
        Ok(ModelQuery {
            value: current.value * self.curve.battery_voltage() * duration,
            clamped: fraction.clamped || current.clamped,
        })
    }

    /// True when the model can evaluate every (mass, speed) point in
    /// `[mass_lo, mass_hi] × [speed_lo, speed_hi]` without clamping.
    pub fn covers(&self, mass_lo: f64, mass_hi: f64, speed_lo: f64, speed_hi: f64) -> bool {
        self.surface.covers(mass_lo, mass_hi, speed_lo, speed_hi)
    }
}
