//! Synthetic pump-probe observables and the extraction chain that recovers
//! the polaron oscillation from a 2D field map.
//!
//! Times are in ps and frequencies in THz throughout, so 2π·ν·τ is
//! dimensionless without conversion.

pub mod filter;
pub mod peak;
pub mod pipeline;
pub mod spectrum;
pub mod step;
pub mod synth;
pub mod trace;

pub use filter::{fourier_filter_2d, fourier_filter_2d_with, FilterShape, DEFAULT_FILTER_THZ};
pub use peak::{peak_report, peak_report_in, PeakReport};
pub use pipeline::{argmax_t, cut_at_max, extract, ExtractOptions, Extraction};
pub use spectrum::{cosine_spectrum, spectral_energy, spectrum_of, trace_energy, Window};
pub use step::remove_step;
pub use synth::{
    add_noise, add_trace_noise, decay_time, oscillation_envelope, probe_pulse, synth_map, synth_oscillation, MapOptions, StepModel,
    DEFAULT_BAND_THZ,
};
pub use trace::{grid_step, uniform_grid, FieldMap2D, TimeTrace};
