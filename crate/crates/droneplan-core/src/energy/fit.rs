//! Least-squares fitting of a piecewise-bilinear thrust surface.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::surface::{SurfaceError, ThrustSurface};

/// One profiling observation: the thrust fraction demanded at a
/// (total mass, speed) operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrustSample {
    pub total_mass: f64,
    pub speed: f64,
    pub thrust_fraction: f64,
}

/// A fitted surface together with its residuals against the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFit {
    pub surface: ThrustSurface,
    /// Largest absolute residual over the samples.
    pub max_residual: f64,
    /// Root-mean-square residual over the samples.
    pub rms_residual: f64,
}

/// Why a fit could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    /// A bilinear cell has four free coefficients; fewer samples can
    /// never pin one down.
    TooFewSamples { actual: usize },
    /// Samples must span a nondegenerate mass × speed rectangle.
    DegenerateSpan,
    NonFiniteSample { index: usize },
    ZeroCells,
    /// The sample placement leaves some grid nodes unconstrained; refine
    /// the sampling or coarsen the grid.
    Underdetermined,
    /// The least-squares solution violates a surface invariant.
    InvalidSurface(SurfaceError),
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::TooFewSamples { actual } => {
                write!(f, "need at least 4 samples, got {actual}")
            }
            FitError::DegenerateSpan => {
                write!(f, "samples must span a nondegenerate mass x speed rectangle")
            }
            FitError::NonFiniteSample { index } => {
                write!(f, "sample {index} contains a non-finite value")
            }
            FitError::ZeroCells => write!(f, "grid resolution must be at least 1 x 1 cells"),
            FitError::Underdetermined => {
                write!(f, "sample placement leaves grid nodes unconstrained; refine sampling or coarsen the grid")
            }
            FitError::InvalidSurface(e) => write!(f, "fitted surface is invalid: {e}"),
        }
    }
}

impl core::error::Error for FitError {}

impl From<SurfaceError> for FitError {
    fn from(e: SurfaceError) -> Self {
        FitError::InvalidSurface(e)
    }
}

/// Maps `x` into a regular grid over `[lo, hi]` with `cells` cells,
/// returning the lower node index and the in-cell coordinate in [0, 1].
fn locate(lo: f64, hi: f64, cells: usize, x: f64) -> (usize, f64) {
    let t = (x - lo) / (hi - lo) * cells as f64;
    let idx = (t as usize).min(cells - 1);
    (idx, (t - idx as f64).clamp(0.0, 1.0))
}

/// Fits a continuous piecewise-bilinear surface to thrust samples on a
/// regular `mass_cells` × `speed_cells` grid spanning the sample extents.
///
/// Grid node values are solved jointly by linear least squares, so the
/// result interpolates the data as well as a continuous bilinear patchwork
/// can; residuals are reported against the fitted surface.
pub fn fit_piecewise(
    samples: &[ThrustSample],
    mass_cells: usize,
    speed_cells: usize,
) -> Result<SurfaceFit, FitError> {
    if samples.len() < 4 {
        return Err(FitError::TooFewSamples { actual: samples.len() });
    }
    if mass_cells == 0 || speed_cells == 0 {
        return Err(FitError::ZeroCells);
    }
    for (i, s) in samples.iter().enumerate() {
        if !(s.total_mass.is_finite() && s.speed.is_finite() && s.thrust_fraction.is_finite()) {
            return Err(FitError::NonFiniteSample { index: i });
        }
    }
    let mass_lo = samples.iter().map(|s| s.total_mass).fold(f64::INFINITY, f64::min);
    let mass_hi = samples.iter().map(|s| s.total_mass).fold(f64::NEG_INFINITY, f64::max);
    let speed_lo = samples.iter().map(|s| s.speed).fold(f64::INFINITY, f64::min);
    let speed_hi = samples.iter().map(|s| s.speed).fold(f64::NEG_INFINITY, f64::max);
    if !(mass_hi > mass_lo && speed_hi > speed_lo) {
        return Err(FitError::DegenerateSpan);
    }

    let rows = mass_cells + 1;
    let cols = speed_cells + 1;
    let n = rows * cols;

    // Normal equations for the sparse design matrix: each sample touches
    // the four nodes of its cell with bilinear weights.
    let mut normal = vec![0.0_f64; n * n];
    let mut rhs = vec![0.0_f64; n];
    for s in samples {
        let (mi, tm) = locate(mass_lo, mass_hi, mass_cells, s.total_mass);
        let (vi, tv) = locate(speed_lo, speed_hi, speed_cells, s.speed);
        let entries = [
            (mi * cols + vi, (1.0 - tm) * (1.0 - tv)),
            (mi * cols + vi + 1, (1.0 - tm) * tv),
            ((mi + 1) * cols + vi, tm * (1.0 - tv)),
            ((mi + 1) * cols + vi + 1, tm * tv),
        ];
        for &(a, wa) in &entries {
            rhs[a] += wa * s.thrust_fraction;
            for &(b, wb) in &entries {
                normal[a * n + b] += wa * wb;
            }
        }
    }

    let node_values = solve_dense(&mut normal, &mut rhs, n).ok_or(FitError::Underdetermined)?;

    let mass_axis: Vec<f64> = (0..rows)
        .map(|i| mass_lo + (mass_hi - mass_lo) * i as f64 / mass_cells as f64)
        .collect();
    let speed_axis: Vec<f64> = (0..cols)
        .map(|j| speed_lo + (speed_hi - speed_lo) * j as f64 / speed_cells as f64)
        .collect();
    let surface = ThrustSurface::new(mass_axis, speed_axis, node_values)?;

    let mut max_residual = 0.0_f64;
    let mut sq_sum = 0.0_f64;
    for s in samples {
        let predicted = surface
            .interpolate(s.total_mass, s.speed)
            .expect("samples lie within the fitted grid")
            .value;
        let r = predicted - s.thrust_fraction;
        max_residual = max_residual.max(r.abs());
        sq_sum += r * r;
    }
    let rms_residual = libm::sqrt(sq_sum / samples.len() as f64);

    Ok(SurfaceFit { surface, max_residual, rms_residual })
}

/// Gaussian elimination with partial pivoting on a dense `n` × `n` system
/// stored row-major. Returns `None` when the matrix is singular.
fn solve_dense(matrix: &mut [f64], rhs: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let scale = matrix.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let tiny = 1e-12 * scale;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&a, &b| matrix[a * n + col].abs().total_cmp(&matrix[b * n + col].abs()))
            .unwrap();
        if matrix[pivot_row * n + col].abs() < tiny {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                matrix.swap(col * n + k, pivot_row * n + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = matrix[col * n + col];
        for row in (col + 1)..n {
            let factor = matrix[row * n + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                matrix[row * n + k] -= factor * matrix[col * n + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0_f64; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..n {
            acc -= matrix[row * n + k] * x[k];
        }
        x[row] = acc / matrix[row * n + row];
    }
    Some(x)
}
