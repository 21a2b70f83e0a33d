//! Thrust-fraction to battery-current curve.

use alloc::vec::Vec;
use core::fmt;

use super::surface::clamp_to_range;
use super::{ModelQuery, RangeAxis, RangeError};

/// Measured battery current versus commanded per-motor thrust fraction,
/// with the nominal pack voltage the currents were taken at.
///
/// The current is the draw of the whole motor set, not a single motor.
/// Interpolation between points is linear.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentCurve {
    points: Vec<(f64, f64)>,
    battery_voltage: f64,
}

/// Defect found while constructing a [`CurrentCurve`].
#[derive(Debug, Clone, PartialEq)]
pub enum CurveError {
    /// At least two points are required.
    TooFewPoints { actual: usize },
    /// Thrust fractions must be finite and strictly increasing.
    FractionsNotIncreasing { index: usize },
    /// Currents must be finite, positive, and strictly increasing.
    CurrentsNotIncreasing { index: usize },
    NonPositiveVoltage { voltage: f64 },
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::TooFewPoints { actual } => {
                write!(f, "current curve: need at least 2 points, got {actual}")
            }
            CurveError::FractionsNotIncreasing { index } => {
                write!(f, "current curve point {index}: thrust fractions must be finite and strictly increasing")
            }
            CurveError::CurrentsNotIncreasing { index } => {
                write!(f, "current curve point {index}: currents must be finite, positive, and strictly increasing")
            }
            CurveError::NonPositiveVoltage { voltage } => {
                write!(f, "battery_voltage: must be > 0 V, got {voltage}")
            }
        }
    }
}

impl core::error::Error for CurveError {}

impl CurrentCurve {
    /// Builds a curve from `(thrust fraction, amps)` points, checking that
    /// both coordinates are strictly increasing and currents are positive.
    pub fn new(points: Vec<(f64, f64)>, battery_voltage: f64) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::TooFewPoints { actual: points.len() });
        }
        for (i, &(frac, amps)) in points.iter().enumerate() {
            if !frac.is_finite() || (i > 0 && frac <= points[i - 1].0) {
                return Err(CurveError::FractionsNotIncreasing { index: i });
            }
            if !amps.is_finite() || amps <= 0.0 || (i > 0 && amps <= points[i - 1].1) {
                return Err(CurveError::CurrentsNotIncreasing { index: i });
            }
        }
        if !(battery_voltage.is_finite() && battery_voltage > 0.0) {
            return Err(CurveError::NonPositiveVoltage { voltage: battery_voltage });
        }
        Ok(Self { points, battery_voltage })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Nominal pack voltage, in volts.
    pub fn battery_voltage(&self) -> f64 {
        self.battery_voltage
    }

    /// Lowest and highest thrust fraction the curve covers.
    pub fn domain(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Piecewise-linear current at `fraction`, in amps.
    ///
    /// Marginal overshoot beyond the curve domain clamps to the nearest
    /// endpoint (flagged); anything further is a [`RangeError`].
    pub fn current_at(&self, fraction: f64) -> Result<ModelQuery, RangeError> {
        let (lo, hi) = self.domain();
        let (x, clamped) = clamp_to_range(fraction, lo, hi, RangeAxis::ThrustFraction)?;
        // First point with fraction > x bounds the segment from above.
        let hi_idx = self
            .points
            .partition_point(|&(f, _)| f <= x)
            .min(self.points.len() - 1)
            .max(1);
        let (x0, y0) = self.points[hi_idx - 1];
        let (x1, y1) = self.points[hi_idx];
        let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        Ok(ModelQuery { value: y0 + (y1 - y0) * t, clamped })
    }
}
