//! Fourier-domain filters: the 2D map filter and the 1D low-pass used by the step fit.

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::signal::trace::{grid_step, FieldMap2D};

/// Default 2D filter bandwidth, THz.
pub const DEFAULT_FILTER_THZ: f64 = 4.0;

/// Pass region of the 2D filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterShape {
    /// Keep √(ν_t² + ν_τ²) ≤ bandwidth.
    #[default]
    Radial,
    /// Keep |ν_t| ≤ bandwidth and |ν_τ| ≤ bandwidth.
    Rectangular,
}

impl FromStr for FilterShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial" => Ok(FilterShape::Radial),
            "rectangular" => Ok(FilterShape::Rectangular),
            other => Err(Error::domain(format!("unknown filter shape `{other}` (radial|rectangular)"))),
        }
    }
}

/// Signed frequency of DFT bin `k` for `n` samples spaced `d` apart.
pub(crate) fn bin_frequency(k: usize, n: usize, d: f64) -> f64 {
    let k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    k / (n as f64 * d)
}

/// In-place 2D DFT of a row-major `rows x cols` array.
fn fft2(data: &mut [Complex64], rows: usize, cols: usize, row_fft: &dyn Fft<f64>, col_fft: &dyn Fft<f64>) {
    for row in data.chunks_exact_mut(cols) {
        row_fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for j in 0..cols {
        for i in 0..rows {
            column[i] = data[i * cols + j];
        }
        col_fft.process(&mut column);
        for i in 0..rows {
            data[i * cols + j] = column[i];
        }
    }
}

/// Zero every 2D Fourier component outside the bandwidth (radial by default)
/// and return the real part of the inverse transform.
pub fn fourier_filter_2d(map: &FieldMap2D, bandwidth_thz: f64) -> Result<FieldMap2D> {
    fourier_filter_2d_with(map, bandwidth_thz, FilterShape::Radial)
}

pub fn fourier_filter_2d_with(map: &FieldMap2D, bandwidth_thz: f64, shape: FilterShape) -> Result<FieldMap2D> {
    if !(bandwidth_thz > 0.0) {
        return Err(Error::domain(format!("filter bandwidth must be positive, got {bandwidth_thz} THz")));
    }
    let dt = grid_step(map.t_grid(), "t")?;
    let dtau = grid_step(map.tau_grid(), "tau")?;
    let (rows, cols) = map.dims();
    let mut planner = FftPlanner::<f64>::new();
    let mut data: Vec<Complex64> = map.values().iter().map(|v| Complex64::new(*v, 0.0)).collect();
    fft2(&mut data, rows, cols, &*planner.plan_fft_forward(cols), &*planner.plan_fft_forward(rows));
    for i in 0..rows {
        let f_tau = bin_frequency(i, rows, dtau);
        for j in 0..cols {
            let f_t = bin_frequency(j, cols, dt);
            let keep = match shape {
                FilterShape::Radial => f_t.hypot(f_tau) <= bandwidth_thz,
                FilterShape::Rectangular => f_t.abs() <= bandwidth_thz && f_tau.abs() <= bandwidth_thz,
            };
            if !keep {
                data[i * cols + j] = Complex64::new(0.0, 0.0);
            }
        }
    }
    fft2(&mut data, rows, cols, &*planner.plan_fft_inverse(cols), &*planner.plan_fft_inverse(rows));
    let scale = 1.0 / (rows * cols) as f64;
    map.with_values(data.iter().map(|z| z.re * scale).collect())
}

/// Gaussian low-pass H(f) = 2^{−(f/f_c)²} (half amplitude at f_c) on a fixed grid.
pub(crate) struct LowPass {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    gains: Vec<f64>,
}

impl LowPass {
    pub(crate) fn new(n: usize, step: f64, cutoff: f64) -> Self {
        let mut planner = FftPlanner::<f64>::new();
        let gains = (0..n)
            .map(|k| {
                let f = bin_frequency(k, n, step) / cutoff;
                (-std::f64::consts::LN_2 * f * f).exp() / n as f64
            })
            .collect();
        LowPass { forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n), gains }
    }

    pub(crate) fn apply(&self, values: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = values.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        self.forward.process(&mut buf);
        for (z, g) in buf.iter_mut().zip(&self.gains) {
            *z *= g;
        }
        self.inverse.process(&mut buf);
        buf.iter().map(|z| z.re).collect()
    }
}
