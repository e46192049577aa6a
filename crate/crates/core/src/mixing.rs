//! Clausius–Mossotti mixing of solvated electrons into a polar liquid.
//!
//! The local-field relation
//!
//! ```text
//! 3 (ε − 1)/(ε + 2) = 3 (ε_neat − 1)/(ε_neat + 2) + cₑ N_A α_el(ν)
//! ```
//!
//! is solved for ε algebraically (ε = (1 + 2L)/(1 − L)) and for cₑ directly.
//! The electron polarizability is α_el = −e² / (ε₀ m [(2πν)² + iγ2πν]); every
//! caller except [`alpha_el`] itself works with γ = 0.

use num_complex::Complex64;

use crate::dielectric::{ComplexPermittivity, LiquidModel};
use crate::error::{Error, Result};
use crate::units::{mol_per_m3_to_micromolar, Concentration, Frequency, CODATA_2018};

/// |1 − L| below this is reported as a Clausius–Mossotti divergence.
pub const CM_SINGULARITY_TOL: f64 = 1e-12;
/// |ε + 2| below this makes the local-field factor undefined.
const LOCAL_FIELD_TOL: f64 = 1e-12;

/// A complex concentration from inverting the mixing rule. Its imaginary
/// part is a consistency residual and is never a physical concentration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexConcentration {
    /// Real part in mol/m³.
    pub re: f64,
    /// Imaginary part in mol/m³.
    pub im: f64,
}

impl ComplexConcentration {
    pub fn re_micromolar(&self) -> f64 {
        mol_per_m3_to_micromolar(self.re)
    }

    pub fn im_micromolar(&self) -> f64 {
        mol_per_m3_to_micromolar(self.im)
    }

    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// A neat liquid with a given solvated-electron concentration.
#[derive(Debug, Clone, PartialEq)]
pub struct DopedLiquid {
    pub liquid: LiquidModel,
    pub ce: Concentration,
}

impl DopedLiquid {
    pub fn new(liquid: LiquidModel, ce: Concentration) -> Self {
        DopedLiquid { liquid, ce }
    }

    pub fn name(&self) -> &str {
        self.liquid.name()
    }

    /// ε(ν, cₑ).
    pub fn eval(&self, nu: Frequency) -> Result<ComplexPermittivity> {
        let neat = self.liquid.eval(nu)?;
        cm_mix(neat, self.ce, nu)
    }
}

/// Electron polarizability α_el(ν) in m³ for damping rate γ in 1/s.
pub fn alpha_el(nu: Frequency, gamma: f64) -> Result<Complex64> {
    nu.require_positive()?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::domain(format!("damping rate must be >= 0, got {gamma} 1/s")));
    }
    let c = CODATA_2018;
    let omega = nu.angular();
    let e2 = c.elementary_charge * c.elementary_charge;
    Ok(-e2 / (c.vacuum_permittivity * c.electron_mass * Complex64::new(omega * omega, gamma * omega)))
}

/// N_A α_el(ν) / 3 at γ = 0, in m³/mol: the shift of the local-field factor per unit concentration.
fn electron_term_per_concentration(nu: Frequency) -> Result<f64> {
    Ok(CODATA_2018.avogadro * alpha_el(nu, 0.0)?.re / 3.0)
}

/// (ε − 1)/(ε + 2).
pub fn local_field_factor(eps: ComplexPermittivity) -> Result<Complex64> {
    let den = eps + 2.0;
    if !(eps.re.is_finite() && eps.im.is_finite()) {
        return Err(Error::domain(format!("non-finite permittivity {eps}")));
    }
    if den.norm() < LOCAL_FIELD_TOL {
        return Err(Error::Singular(format!("eps + 2 vanishes for eps = {eps}")));
    }
    Ok((eps - 1.0) / den)
}

/// Doped permittivity ε(ν, cₑ) from the neat value at the same frequency.
pub fn cm_mix(neat: ComplexPermittivity, ce: Concentration, nu: Frequency) -> Result<ComplexPermittivity> {
    if ce.mol_per_m3() == 0.0 {
        // exact identity; the round trip through L would cost a few ulps
        nu.require_positive()?;
        local_field_factor(neat)?;
        return Ok(neat);
    }
    let l = local_field_factor(neat)? + ce.mol_per_m3() * electron_term_per_concentration(nu)?;
    let one_minus = 1.0 - l;
    if one_minus.norm() < CM_SINGULARITY_TOL {
        return Err(Error::ClausiusMossottiDivergence { nu_thz: nu.thz(), ce_um: ce.micromolar() });
    }
    Ok((1.0 + 2.0 * l) / one_minus)
}

/// Concentration that turns `neat` into `eps` at frequency ν (complex; see [`ComplexConcentration`]).
pub fn cm_invert_concentration(
    eps: ComplexPermittivity,
    neat: ComplexPermittivity,
    nu: Frequency,
) -> Result<ComplexConcentration> {
    let diff = local_field_factor(eps)? - local_field_factor(neat)?;
    let c = diff / electron_term_per_concentration(nu)?;
    Ok(ComplexConcentration { re: c.re, im: c.im })
}

fn prefactor(nu0: Frequency) -> Result<f64> {
    Ok(3.0 / (CODATA_2018.avogadro * alpha_el(nu0.require_positive()?, 0.0)?.re))
}

/// Re(cₑ) in mol/m³ from the expanded real part at ε′(ν₀) = 0, with
/// Σ_neat = |ε_neat(ν₀)|².
pub fn ce_real_part(eps_imag_at_nu0: f64, neat: ComplexPermittivity, nu0: Frequency) -> Result<f64> {
    let x = eps_imag_at_nu0;
    let sigma = neat.norm_sqr();
    let doped = (x * x - 2.0) / (x * x + 4.0);
    let neat_term = (sigma + neat.re - 2.0) / (sigma + 4.0 * neat.re + 4.0);
    Ok(prefactor(nu0)? * (doped - neat_term))
}

/// Im(cₑ) in mol/m³ from the expanded imaginary part at ε′(ν₀) = 0.
pub fn ce_imag_part(eps_imag_at_nu0: f64, neat: ComplexPermittivity, nu0: Frequency) -> Result<f64> {
    let x = eps_imag_at_nu0;
    let sigma = neat.norm_sqr();
    let doped = 3.0 * x / (x * x + 4.0);
    let neat_term = 3.0 * neat.im / (sigma + 4.0 * neat.re + 4.0);
    Ok(prefactor(nu0)? * (doped - neat_term))
}
