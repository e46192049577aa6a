//! Cut of the field map at its maximum and the full extraction chain.

use crate::error::{Error, Result};
use crate::polaron::Spectrum;
use crate::signal::filter::{fourier_filter_2d_with, FilterShape, DEFAULT_FILTER_THZ};
use crate::signal::peak::{peak_report_in, PeakReport};
use crate::signal::spectrum::{spectrum_of, Window};
use crate::signal::step::remove_step;
use crate::signal::synth::{StepModel, DEFAULT_BAND_THZ};
use crate::signal::trace::{FieldMap2D, TimeTrace};

/// Column index t* maximizing max_τ |E(t, τ)|; ties go to the smaller t.
pub fn argmax_t(map: &FieldMap2D) -> Result<usize> {
    let (rows, cols) = map.dims();
    let mut column_max = vec![0.0f64; cols];
    for i in 0..rows {
        for (m, v) in column_max.iter_mut().zip(map.row(i)) {
            *m = m.max(v.abs());
        }
    }
    let best = column_max
        .iter()
        .enumerate()
        .fold(0, |best, (j, m)| if *m > column_max[best] { j } else { best });
    if column_max[best] == 0.0 {
        return Err(Error::NoSignal);
    }
    Ok(best)
}

/// The delay trace E(t*, ·) through the map maximum.
pub fn cut_at_max(map: &FieldMap2D) -> Result<TimeTrace> {
    let j = argmax_t(map)?;
    TimeTrace::new(map.tau_grid().to_vec(), map.column(j))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractOptions {
    pub filter_thz: f64,
    pub filter_shape: FilterShape,
    /// Expected polaron band: sets the step-fit cutoff and the peak search range.
    pub band_thz: (f64, f64),
    /// Unwindowed by default: the oscillation sits at the start of the
    /// segment, where a symmetric window would suppress it relative to noise.
    pub window: Window,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            filter_thz: DEFAULT_FILTER_THZ,
            filter_shape: FilterShape::Radial,
            band_thz: DEFAULT_BAND_THZ,
            window: Window::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub t_cut_ps: f64,
    pub cut: TimeTrace,
    pub step: StepModel,
    pub oscillation: TimeTrace,
    /// Spectrum of the oscillation from the fitted onset on.
    pub spectrum: Spectrum,
    pub peak: PeakReport,
}

/// Filter, cut at the maximum, remove the step, transform and locate the peak.
pub fn extract(map: &FieldMap2D, opts: &ExtractOptions) -> Result<Extraction> {
    let filtered = fourier_filter_2d_with(map, opts.filter_thz, opts.filter_shape)?;
    let j = argmax_t(&filtered)?;
    let cut = TimeTrace::new(filtered.tau_grid().to_vec(), filtered.column(j))?;
    let (oscillation, step) = remove_step(&cut, opts.band_thz)?;
    let spectrum = spectrum_of(&oscillation, opts.window, step.onset_ps())?;
    let peak = peak_report_in(&spectrum, opts.band_thz)?;
    Ok(Extraction { t_cut_ps: filtered.t_grid()[j], cut, step, oscillation, spectrum, peak })
}
