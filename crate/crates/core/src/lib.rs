//! Electron-doped polar liquids: Clausius–Mossotti mixing of solvated
//! electrons into a neat dielectric model, the resulting polaron resonance,
//! cross-liquid concentration matching, and a synthetic 2D THz pipeline that
//! recovers the resonance from a pump-probe field map.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csvio;
pub mod dielectric;
pub mod error;
pub mod impostoron;
pub mod liquid_file;
pub mod mixing;
pub mod polaron;
pub mod roots;
pub mod signal;
pub mod units;

pub use dielectric::{ComplexPermittivity, DebyeModel, DebyeTerm, LiquidModel, TabulatedModel};
pub use error::{Error, Result};
pub use impostoron::{
    ce_for_nu0, concentration_difference, match_frequency, match_profiles, ImpostoronSolution, MatchOptions,
};
pub use liquid_file::{format_liquid, parse_liquid, read_liquid_file};
pub use mixing::{alpha_el, cm_invert_concentration, cm_mix, ComplexConcentration, DopedLiquid};
pub use polaron::{
    eps_imag_at_nu0, find_nu0, lineshape, lorentz_lineshape, PolaronResonance, SolverOptions, Spectrum,
};
pub use signal::{FieldMap2D, PeakReport, StepModel, TimeTrace};
pub use units::{Concentration, Frequency, PhysicalConstants, CODATA_2018};
