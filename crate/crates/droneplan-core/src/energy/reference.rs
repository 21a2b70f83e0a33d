//! Synthetic reference energy model.
//!
//! Real thrust traces and current measurements are hardware-specific, so
//! the repository ships a reproducible analytic stand-in with the same
//! two-stage structure. Thrust demand is hover thrust per motor
//! (`mass · g / motor_count`) expressed as a fraction of a configurable
//! maximum motor thrust, scaled by a speed term `1 + k · (v / v_ref)²`;
//! the current curve is a monotone affine-plus-quadratic polynomial
//! sampled at regular thrust fractions. Every number below is synthetic,
//! and models built here carry `source = "synthetic-analytic"`.
//!
//! The quadratic current term makes heavily loaded flight cheaper per
//! meter at moderate speeds than at top speed, while lightly loaded
//! flight stays cheapest at top speed — the regime the planners are
//! exercised in.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use super::curve::{CurrentCurve, CurveError};
use super::surface::{SurfaceError, ThrustSurface};
use super::EnergyModel;

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.806_65;

/// Parameters of the synthetic reference model.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceModelConfig {
    pub motor_count: u32,
    /// Maximum thrust of one motor, in newtons.
    pub max_motor_thrust: f64,
    /// Gain `k` of the speed term `1 + k (v / v_ref)²`.
    pub speed_thrust_gain: f64,
    /// Mass axis range of the surface grid, in kilograms.
    pub mass_range: (f64, f64),
    /// Speed axis range of the surface grid, in m/s. The upper bound is
    /// also the reference speed `v_ref`.
    pub speed_range: (f64, f64),
    pub mass_nodes: usize,
    pub speed_nodes: usize,
    /// Current curve `I(f) = base + linear f + quadratic f²`, in amps.
    pub curve_base: f64,
    pub curve_linear: f64,
    pub curve_quadratic: f64,
    /// Number of curve points, evenly spaced over (0, 1].
    pub curve_points: usize,
    pub battery_voltage: f64,
}

impl Default for ReferenceModelConfig {
    fn default() -> Self {
        Self {
            motor_count: 4,
            max_motor_thrust: 30.0,
            speed_thrust_gain: 0.8,
            mass_range: (1.0, 6.5),
            speed_range: (3.0, 8.0),
            mass_nodes: 12,
            speed_nodes: 6,
            curve_base: 1.5,
            curve_linear: 10.0,
            curve_quadratic: 25.0,
            curve_points: 20,
            battery_voltage: 11.1,
        }
    }
}

impl ReferenceModelConfig {
    /// The analytic thrust fraction the surface grid is sampled from.
    pub fn thrust_fraction(&self, total_mass: f64, speed: f64) -> f64 {
        let hover = total_mass * STANDARD_GRAVITY
            / (self.motor_count as f64 * self.max_motor_thrust);
        let s = speed / self.speed_range.1;
        hover * (1.0 + self.speed_thrust_gain * s * s)
    }

    /// The analytic current polynomial the curve points are sampled from.
    pub fn current(&self, fraction: f64) -> f64 {
        self.curve_base + self.curve_linear * fraction + self.curve_quadratic * fraction * fraction
    }

    /// Builds the model, checking that the sampled grids satisfy every
    /// surface and curve invariant.
    pub fn build(&self) -> Result<EnergyModel, ReferenceModelError> {
        let mass_axis = linspace(self.mass_range.0, self.mass_range.1, self.mass_nodes);
        let speed_axis = linspace(self.speed_range.0, self.speed_range.1, self.speed_nodes);
        let mut values = Vec::with_capacity(mass_axis.len() * speed_axis.len());
        for &m in &mass_axis {
            for &v in &speed_axis {
                values.push(self.thrust_fraction(m, v));
            }
        }
        let surface = ThrustSurface::new(mass_axis, speed_axis, values)?;

        let mut points = Vec::with_capacity(self.curve_points);
        for i in 1..=self.curve_points {
            let fraction = i as f64 / self.curve_points as f64;
            points.push((fraction, self.current(fraction)));
        }
        let curve = CurrentCurve::new(points, self.battery_voltage)?;

        Ok(EnergyModel::new(
            surface,
            curve,
            self.motor_count,
            "synthetic-analytic".to_string(),
        ))
    }
}

fn linspace(lo: f64, hi: f64, nodes: usize) -> Vec<f64> {
    (0..nodes)
        .map(|i| lo + (hi - lo) * i as f64 / (nodes - 1) as f64)
        .collect()
}

/// The synthetic configuration produced an invalid surface or curve.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceModelError {
    Surface(SurfaceError),
    Curve(CurveError),
}

impl fmt::Display for ReferenceModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReferenceModelError::Surface(e) => e.fmt(f),
            ReferenceModelError::Curve(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for ReferenceModelError {}

impl From<SurfaceError> for ReferenceModelError {
    fn from(e: SurfaceError) -> Self {
        ReferenceModelError::Surface(e)
    }
}

impl From<CurveError> for ReferenceModelError {
    fn from(e: CurveError) -> Self {
        ReferenceModelError::Curve(e)
    }
}

/// The default synthetic reference model.
pub fn reference_model() -> EnergyModel {
    ReferenceModelConfig::default()
        .build()
        .expect("default reference configuration is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_reference_model_builds() {
        let m = reference_model();
        assert_eq!(m.motor_count(), 4);
        assert_eq!(m.source(), "synthetic-analytic");
    }

    #[test]
    fn grid_covers_the_benchmark_operating_region() {
        let m = reference_model();
        assert!(m.covers(1.0, 2.5, 3.0, 8.0));
        // Heavy suites push total mass up to 6 kg; the grid must keep
        // covering them.
        assert!(m.covers(1.0, 6.0, 3.0, 8.0));
    }

    #[test]
    fn surface_matches_the_analytic_function_at_nodes() {
        let cfg = ReferenceModelConfig::default();
        let m = cfg.build().unwrap();
        for &mass in m.surface().mass_axis() {
            for &speed in m.surface().speed_axis() {
                let got = m.thrust_fraction(mass, speed).unwrap().value;
                let want = cfg.thrust_fraction(mass, speed);
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fraction_stays_within_unit_range_over_the_grid() {
        let cfg = ReferenceModelConfig::default();
        let f_max = cfg.thrust_fraction(cfg.mass_range.1, cfg.speed_range.1);
        assert!(f_max <= 1.0, "corner fraction {f_max} exceeds 1");
        let f_min = cfg.thrust_fraction(cfg.mass_range.0, cfg.speed_range.0);
        assert!(f_min > 0.0);
    }

    #[test]
    fn heavy_flight_prefers_moderate_speed_light_flight_prefers_top_speed() {
        let m = reference_model();
        let per_meter = |mass: f64, v: f64| m.leg_energy(mass, v, 1000.0).unwrap().value;
        // 5 kg: flying at 6 m/s must beat 8 m/s per meter.
        assert!(per_meter(5.0, 6.0) < per_meter(5.0, 8.0));
        // 1.5 kg: top speed is the cheapest grid speed per meter.
        let light_min = [3.0_f64, 4.0, 5.0, 6.0, 7.0]
            .iter()
            .map(|&v| per_meter(1.5, v))
            .fold(f64::INFINITY, f64::min);
        assert!(per_meter(1.5, 8.0) < light_min);
    }
}
