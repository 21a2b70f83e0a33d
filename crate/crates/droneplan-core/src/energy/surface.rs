//! Piecewise-bilinear thrust-fraction surface over (total mass, speed).

use alloc::vec::Vec;
use core::fmt;

use super::{ModelQuery, RangeError, RangeAxis, CLAMP_SPAN_FRACTION};

/// Per-motor thrust fraction sampled on a rectilinear (mass, speed) grid.
///
/// Values are stored row-major with the mass axis as rows: the sample for
/// `mass_axis[i]` and `speed_axis[j]` sits at `values[i * speed_axis.len() + j]`.
/// Queries between breakpoints interpolate bilinearly; queries marginally
/// outside the grid clamp to the boundary (see [`ThrustSurface::interpolate`]).
#[derive(Debug, Clone, PartialEq)]
pub struct ThrustSurface {
    mass_axis: Vec<f64>,
    speed_axis: Vec<f64>,
    values: Vec<f64>,
}

/// Defect found while constructing a [`ThrustSurface`].
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceError {
    /// An axis needs at least two strictly increasing finite breakpoints.
    BadAxis { axis: RangeAxis },
    /// `values` must hold exactly one sample per grid node.
    ValueCount { expected: usize, actual: usize },
    /// Thrust fractions must be finite and in (0, 1].
    ValueOutOfRange { row: usize, col: usize, value: f64 },
    /// Thrust must not decrease when mass grows at a fixed speed.
    NotMassMonotone { row: usize, col: usize },
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::BadAxis { axis } => {
                write!(f, "{axis} axis: need at least 2 strictly increasing finite breakpoints")
            }
            SurfaceError::ValueCount { expected, actual } => {
                write!(f, "thrust values: expected {expected} grid samples, got {actual}")
            }
            SurfaceError::ValueOutOfRange { row, col, value } => {
                write!(f, "thrust value at mass row {row}, speed col {col}: {value} outside (0, 1]")
            }
            SurfaceError::NotMassMonotone { row, col } => {
                write!(
                    f,
                    "thrust value at mass row {row}, speed col {col}: decreases versus the previous mass row"
                )
            }
        }
    }
}

impl core::error::Error for SurfaceError {}

fn axis_ok(axis: &[f64]) -> bool {
    axis.len() >= 2
        && axis.iter().all(|v| v.is_finite())
        && axis.windows(2).all(|w| w[0] < w[1])
}

/// Locates the segment of `axis` containing `x` (already clamped into the
/// axis range) and returns `(lower index, interpolation weight)`.
fn segment(axis: &[f64], x: f64) -> (usize, f64) {
    // partition_point gives the first breakpoint > x; the segment starts
    // one before it.
    let hi = axis.partition_point(|&b| b <= x).min(axis.len() - 1).max(1);
    let lo = hi - 1;
    let span = axis[hi] - axis[lo];
    let t = ((x - axis[lo]) / span).clamp(0.0, 1.0);
    (lo, t)
}

/// Clamps `x` into `[min, max]` when it lies within the tolerance band
/// outside the range; reports whether clamping happened.
pub(super) fn clamp_to_range(
    x: f64,
    min: f64,
    max: f64,
    axis: RangeAxis,
) -> Result<(f64, bool), RangeError> {
    let tol = CLAMP_SPAN_FRACTION * (max - min);
    if !x.is_finite() || x < min - tol || x > max + tol {
        return Err(RangeError { axis, value: x, min, max });
    }
    if x < min {
        Ok((min, true))
    } else if x > max {
        Ok((max, true))
    } else {
        Ok((x, false))
    }
}

impl ThrustSurface {
    /// Builds a surface, checking the grid structure, the (0, 1] value
    /// range, and monotonicity of thrust in mass at every speed column.
    pub fn new(
        mass_axis: Vec<f64>,
        speed_axis: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self, SurfaceError> {
        if !axis_ok(&mass_axis) {
            return Err(SurfaceError::BadAxis { axis: RangeAxis::Mass });
        }
        if !axis_ok(&speed_axis) {
            return Err(SurfaceError::BadAxis { axis: RangeAxis::Speed });
        }
        let expected = mass_axis.len() * speed_axis.len();
        if values.len() != expected {
            return Err(SurfaceError::ValueCount { expected, actual: values.len() });
        }
        let cols = speed_axis.len();
        for (idx, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0 && v <= 1.0) {
                return Err(SurfaceError::ValueOutOfRange {
                    row: idx / cols,
                    col: idx % cols,
                    value: v,
                });
            }
        }
        for row in 1..mass_axis.len() {
            for col in 0..cols {
                if values[row * cols + col] < values[(row - 1) * cols + col] {
                    return Err(SurfaceError::NotMassMonotone { row, col });
                }
            }
        }
        Ok(Self { mass_axis, speed_axis, values })
    }

    pub fn mass_axis(&self) -> &[f64] {
        &self.mass_axis
    }

    pub fn speed_axis(&self) -> &[f64] {
        &self.speed_axis
    }

    /// Row-major samples, mass rows by speed columns.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, mass_idx: usize, speed_idx: usize) -> f64 {
        self.values[mass_idx * self.speed_axis.len() + speed_idx]
    }

    /// True when the grid spans at least `[mass_lo, mass_hi] × [speed_lo, speed_hi]`.
    pub fn covers(&self, mass_lo: f64, mass_hi: f64, speed_lo: f64, speed_hi: f64) -> bool {
        *self.mass_axis.first().unwrap() <= mass_lo
            && *self.mass_axis.last().unwrap() >= mass_hi
            && *self.speed_axis.first().unwrap() <= speed_lo
            && *self.speed_axis.last().unwrap() >= speed_hi
    }

    /// Bilinear interpolation of the thrust fraction at (`mass`, `speed`).
    ///
    /// Exact at breakpoints. Queries up to a small tolerance beyond a grid
    /// bound clamp to that bound and set the `clamped` flag; anything
    /// further out is a [`RangeError`] naming the violated bound.
    pub fn interpolate(&self, mass: f64, speed: f64) -> Result<ModelQuery, RangeError> {
        let (m, m_clamped) = clamp_to_range(
            mass,
            *self.mass_axis.first().unwrap(),
            *self.mass_axis.last().unwrap(),
            RangeAxis::Mass,
        )?;
        let (v, v_clamped) = clamp_to_range(
            speed,
            *self.speed_axis.first().unwrap(),
            *self.speed_axis.last().unwrap(),
            RangeAxis::Speed,
        )?;
        let (i, tm) = segment(&self.mass_axis, m);
        let (j, tv) = segment(&self.speed_axis, v);
        let f00 = self.value_at(i, j);
        let f01 = self.value_at(i, j + 1);
        let f10 = self.value_at(i + 1, j);
        let f11 = self.value_at(i + 1, j + 1);
        let low = f00 + (f01 - f00) * tv;
        let high = f10 + (f11 - f10) * tv;
        Ok(ModelQuery {
            value: low + (high - low) * tm,
            clamped: m_clamped || v_clamped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn unit_cell(values: [f64; 4]) -> ThrustSurface {
        ThrustSurface::new(vec![1.0, 2.0], vec![3.0, 5.0], values.to_vec()).unwrap()
    }

    #[test]
    fn exact_at_breakpoints() {
        let s = unit_cell([0.2, 0.3, 0.4, 0.6]);
        assert_eq!(s.interpolate(1.0, 3.0).unwrap().value, 0.2);
        assert_eq!(s.interpolate(1.0, 5.0).unwrap().value, 0.3);
        assert_eq!(s.interpolate(2.0, 3.0).unwrap().value, 0.4);
        assert_eq!(s.interpolate(2.0, 5.0).unwrap().value, 0.6);
    }

    #[test]
    fn midpoint_of_four_nodes() {
        let s = unit_cell([0.4, 0.4, 0.6, 0.6]);
        let q = s.interpolate(1.5, 4.0).unwrap();
        assert_eq!(q.value, 0.5);
        assert!(!q.clamped);
    }

    #[test]
    fn marginal_overshoot_clamps_with_flag() {
        let s = unit_cell([0.4, 0.4, 0.6, 0.6]);
        // Mass span is 1.0 kg, so 2% tolerance is 0.02 kg.
        let q = s.interpolate(2.015, 4.0).unwrap();
        assert!(q.clamped);
        assert_eq!(q.value, 0.6);
        let q = s.interpolate(0.985, 4.0).unwrap();
        assert!(q.clamped);
        assert_eq!(q.value, 0.4);
    }

    #[test]
    fn far_out_of_grid_is_an_error() {
        let s = unit_cell([0.4, 0.4, 0.6, 0.6]);
        let err = s.interpolate(2.5, 4.0).unwrap_err();
        assert_eq!(err.axis, RangeAxis::Mass);
        assert_eq!(err.max, 2.0);
        let err = s.interpolate(1.5, 5.2).unwrap_err();
        assert_eq!(err.axis, RangeAxis::Speed);
    }

    #[test]
    fn construction_rejects_bad_grids() {
        assert!(matches!(
            ThrustSurface::new(vec![1.0], vec![3.0, 5.0], vec![0.5, 0.5]),
            Err(SurfaceError::BadAxis { axis: RangeAxis::Mass })
        ));
        assert!(matches!(
            ThrustSurface::new(vec![1.0, 2.0], vec![3.0, 3.0], vec![0.5; 4]),
            Err(SurfaceError::BadAxis { axis: RangeAxis::Speed })
        ));
        assert!(matches!(
            ThrustSurface::new(vec![1.0, 2.0], vec![3.0, 5.0], vec![0.5; 3]),
            Err(SurfaceError::ValueCount { expected: 4, actual: 3 })
        ));
        assert!(matches!(
            ThrustSurface::new(vec![1.0, 2.0], vec![3.0, 5.0], vec![0.5, 0.5, 0.5, 1.5]),
            Err(SurfaceError::ValueOutOfRange { row: 1, col: 1, .. })
        ));
        // Mass row 1 dips below mass row 0 at the second speed column.
        assert!(matches!(
            ThrustSurface::new(vec![1.0, 2.0], vec![3.0, 5.0], vec![0.5, 0.5, 0.6, 0.4]),
            Err(SurfaceError::NotMassMonotone { row: 1, col: 1 })
        ));
    }

    proptest! {
        // An in-grid query always lies within the value range of the four
        // surrounding nodes, on randomized monotone grids.
        #[test]
        fn interpolation_bounded_by_surrounding_nodes(
            rows in 2usize..5,
            cols in 2usize..5,
            base in 0.05f64..0.5,
            mass_t in 0.0f64..1.0,
            speed_t in 0.0f64..1.0,
            bumps in proptest::collection::vec(0.0f64..0.02, 16),
        ) {
            let mass_axis: Vec<f64> = (0..rows).map(|i| 1.0 + i as f64 * 0.7).collect();
            let speed_axis: Vec<f64> = (0..cols).map(|j| 3.0 + j as f64 * 1.3).collect();
            // Mass-monotone values built from non-negative increments.
            let mut values = vec![0.0; rows * cols];
            for r in 0..rows {
                for c in 0..cols {
                    let below = if r == 0 { base } else { values[(r - 1) * cols + c] };
                    values[r * cols + c] = below + bumps[(r * cols + c) % bumps.len()];
                }
            }
            let surface = ThrustSurface::new(mass_axis.clone(), speed_axis.clone(), values.clone()).unwrap();

            let mass = mass_axis[0] + mass_t * (mass_axis[rows - 1] - mass_axis[0]);
            let speed = speed_axis[0] + speed_t * (speed_axis[cols - 1] - speed_axis[0]);
            let q = surface.interpolate(mass, speed).unwrap();
            prop_assert!(!q.clamped);

            let (i, _) = super::segment(&mass_axis, mass);
            let (j, _) = super::segment(&speed_axis, speed);
            let cell = [
                surface.value_at(i, j),
                surface.value_at(i, j + 1),
                surface.value_at(i + 1, j),
                surface.value_at(i + 1, j + 1),
            ];
            let lo = cell.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = cell.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(q.value >= lo - 1e-12 && q.value <= hi + 1e-12,
                "query {} outside cell range [{lo}, {hi}]", q.value);
        }
    }
}
