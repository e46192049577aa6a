//! Polaron resonance of a doped liquid: the frequency ν₀ where ε′(ν₀, cₑ)
//! crosses zero, the loss ε″(ν₀) fixed by the neat liquid alone, and the
//! resonance line shape −Im[1/ε] = ε″ / (ε′² + ε″²) with its Lorentz
//! approximation around ν₀.

use crate::dielectric::{default_derivative_step, ComplexPermittivity};
use crate::error::{Error, Result};
use crate::mixing::{local_field_factor, DopedLiquid};
use crate::roots::{bisect, scan_sign_changes};
use crate::units::{Concentration, Frequency};

/// |ε| below this makes −Im[1/ε] singular.
pub const LINESHAPE_SINGULAR_TOL: f64 = 1e-12;

/// A sampled spectrum on an increasing frequency grid (THz).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    frequencies_thz: Vec<f64>,
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(frequencies_thz: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if frequencies_thz.len() != values.len() {
            return Err(Error::grid(format!(
                "spectrum has {} frequencies but {} values",
                frequencies_thz.len(),
                values.len()
            )));
        }
        if frequencies_thz.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::grid("spectrum frequencies must be strictly increasing"));
        }
        if values.iter().chain(&frequencies_thz).any(|v| !v.is_finite()) {
            return Err(Error::grid("spectrum contains non-finite entries"));
        }
        Ok(Spectrum { frequencies_thz, values })
    }

    pub fn frequencies_thz(&self) -> &[f64] {
        &self.frequencies_thz
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Scaled so the largest value is 1; an all-zero spectrum is returned as is.
    pub fn normalized(&self) -> Spectrum {
        let max = self.values.iter().cloned().fold(0.0, f64::max);
        if max <= 0.0 {
            return self.clone();
        }
        Spectrum {
            frequencies_thz: self.frequencies_thz.clone(),
            values: self.values.iter().map(|v| v / max).collect(),
        }
    }

    /// Samples with lo ≤ ν ≤ hi.
    pub fn restrict(&self, lo_thz: f64, hi_thz: f64) -> Spectrum {
        let (frequencies_thz, values) = self
            .frequencies_thz
            .iter()
            .zip(&self.values)
            .filter(|(f, _)| **f >= lo_thz && **f <= hi_thz)
            .map(|(f, v)| (*f, *v))
            .unzip();
        Spectrum { frequencies_thz, values }
    }
}

/// Evenly spaced frequency grid lo, lo+step, ... ≤ hi (THz).
pub fn frequency_grid(lo_thz: f64, hi_thz: f64, step_thz: f64) -> Result<Vec<f64>> {
    if !(step_thz > 0.0 && lo_thz > 0.0 && hi_thz >= lo_thz) || !hi_thz.is_finite() {
        return Err(Error::grid(format!(
            "invalid frequency grid lo={lo_thz} hi={hi_thz} step={step_thz} THz"
        )));
    }
    let n = ((hi_thz - lo_thz) / step_thz + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| lo_thz + step_thz * k as f64).collect())
}

/// Search settings for [`find_nu0`].
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Search interval in THz.
    pub bracket_thz: (f64, f64),
    /// Uniform pre-scan points.
    pub scan_points: usize,
    /// Bisection tolerance in THz.
    pub tol_thz: f64,
    /// Central-difference step for the slope, THz.
    pub derivative_step_thz: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            bracket_thz: (0.1, 3.0),
            scan_points: 400,
            tol_thz: 1e-6,
            derivative_step_thz: default_derivative_step().thz(),
        }
    }
}

impl SolverOptions {
    pub fn with_bracket(mut self, lo_thz: f64, hi_thz: f64) -> Self {
        self.bracket_thz = (lo_thz, hi_thz);
        self
    }

    pub fn with_tol(mut self, tol_thz: f64) -> Self {
        self.tol_thz = tol_thz;
        self
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bracket_thz;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::domain(format!("invalid bracket [{lo}, {hi}] THz")));
        }
        if !(self.tol_thz > 0.0 && self.derivative_step_thz > 0.0) {
            return Err(Error::domain("tolerance and derivative step must be positive"));
        }
        if self.scan_points < 2 {
            return Err(Error::domain("scan needs at least 2 points"));
        }
        Ok(())
    }
}

/// The polaron resonance of one doped liquid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolaronResonance {
    pub nu0: Frequency,
    /// ε″(ν₀), determined by ε_neat(ν₀).
    pub eps_imag_at_nu0: f64,
    /// B = ∂ε′/∂ν at ν₀, in 1/THz.
    pub slope_per_thz: f64,
    pub ce: Concentration,
    /// Further rising zero crossings in the bracket, ascending.
    pub other_crossings: Vec<Frequency>,
}

impl PolaronResonance {
    /// Full width at half maximum of the Lorentz approximation, 2ε″(ν₀)/B.
    pub fn lorentz_fwhm_thz(&self) -> f64 {
        2.0 * self.eps_imag_at_nu0 / self.slope_per_thz
    }
}

/// Lowest rising zero crossing of ε′(ν, cₑ) within the bracket.
pub fn find_nu0(doped: &DopedLiquid, opts: &SolverOptions) -> Result<PolaronResonance> {
    opts.validate()?;
    let (lo, hi) = opts.bracket_thz;
    let real_part = |x: f64| -> Result<Option<f64>> {
        match doped.eval(Frequency::from_thz(x)) {
            Ok(eps) => Ok(Some(eps.re)),
            Err(Error::ClausiusMossottiDivergence { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let scan = scan_sign_changes(real_part, lo, hi, opts.scan_points)?;
    let mut roots = scan
        .brackets
        .iter()
        .filter(|b| b.rising())
        .map(|b| bisect(|x| Ok(doped.eval(Frequency::from_thz(x))?.re), *b, opts.tol_thz))
        .collect::<Result<Vec<f64>>>()?;
    if roots.is_empty() {
        return Err(Error::NoResonance { lo_thz: lo, hi_thz: hi });
    }
    let nu0_thz = roots.remove(0);
    let nu0 = Frequency::from_thz(nu0_thz);
    let slope = real_slope(doped, nu0_thz, opts.derivative_step_thz)?;
    let neat = doped.liquid.eval(nu0)?;
    Ok(PolaronResonance {
        nu0,
        eps_imag_at_nu0: eps_imag_at_nu0(neat)?,
        slope_per_thz: slope,
        ce: doped.ce,
        other_crossings: roots.into_iter().map(Frequency::from_thz).collect(),
    })
}

/// ∂ε′/∂ν of the doped liquid by central difference, 1/THz.
pub fn real_slope(doped: &DopedLiquid, nu_thz: f64, h_thz: f64) -> Result<f64> {
    let up = doped.eval(Frequency::from_thz(nu_thz + h_thz))?.re;
    let down = doped.eval(Frequency::from_thz(nu_thz - h_thz))?.re;
    Ok((up - down) / (2.0 * h_thz))
}

/// R = ε″_neat / (Σ_neat + 4ε′_neat + 4), the right-hand side of the
/// Im(cₑ) = 0 condition ε″/(ε″² + 4) = R.
pub fn loss_ratio(neat: ComplexPermittivity) -> Result<f64> {
    // Σ + 4ε′ + 4 = |ε_neat + 2|²
    local_field_factor(neat)?;
    Ok(neat.im / (neat + 2.0).norm_sqr())
}

/// ε″(ν₀) of the doped liquid from ε_neat(ν₀), small root of ε″/(ε″² + 4) = R.
pub fn eps_imag_at_nu0(neat_at_nu0: ComplexPermittivity) -> Result<f64> {
    let r = loss_ratio(neat_at_nu0)?;
    if r < 0.0 {
        return Err(Error::domain(format!("negative loss ratio R = {r} (eps''_neat < 0)")));
    }
    if r > 0.25 {
        return Err(Error::NoConsistentLoss(r));
    }
    // (1 − √(1 − 16R²)) / 2R without the cancellation at small R
    Ok(8.0 * r / (1.0 + (1.0 - 16.0 * r * r).sqrt()))
}

/// −Im[1/ε(ν)] of the doped liquid on the given grid.
pub fn lineshape(doped: &DopedLiquid, frequencies_thz: &[f64]) -> Result<Spectrum> {
    let values = frequencies_thz
        .iter()
        .map(|&nu| {
            let eps = doped.eval(Frequency::from_thz(nu))?;
            let mag2 = eps.norm_sqr();
            if mag2.sqrt() < LINESHAPE_SINGULAR_TOL {
                return Err(Error::SingularLineshape { nu_thz: nu });
            }
            Ok(eps.im / mag2)
        })
        .collect::<Result<Vec<f64>>>()?;
    Spectrum::new(frequencies_thz.to_vec(), values)
}

/// (1/ε″(ν₀)) · [1 + (B(ν − ν₀)/ε″(ν₀))²]⁻¹ on the given grid.
pub fn lorentz_lineshape(res: &PolaronResonance, frequencies_thz: &[f64]) -> Result<Spectrum> {
    let x = res.eps_imag_at_nu0;
    if !(x > 0.0) {
        return Err(Error::DegenerateLineshape(format!(
            "eps''(nu0) = {x}: the Lorentz line collapses to a delta at {} THz",
            res.nu0.thz()
        )));
    }
    let nu0 = res.nu0.thz();
    let b = res.slope_per_thz;
    let values = frequencies_thz
        .iter()
        .map(|&nu| {
            let u = b * (nu - nu0) / x;
            1.0 / (x * (1.0 + u * u))
        })
        .collect();
    Spectrum::new(frequencies_thz.to_vec(), values)
}
