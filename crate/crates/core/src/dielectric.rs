//! Dielectric function ε_neat(ν) of a neat polar liquid.
//!
//! Sign convention: ε = ε′ + iε″ with ε″ ≥ 0 for a lossy (passive) medium.
//! A Debye relaxation term is therefore written Δε / (1 − i·2πντ).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::Frequency;

/// Complex relative permittivity ε′ + iε″ at a single frequency.
pub type ComplexPermittivity = Complex64;

/// Relative tolerance used when checking a declared static permittivity.
const STATIC_MATCH_RTOL: f64 = 1e-9;

/// One Debye relaxation: strength Δε and relaxation time τ in ps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DebyeTerm {
    pub strength: f64,
    pub tau_ps: f64,
}

/// Multi-Debye dielectric function ε(ν) = ε∞ + Σ Δε_k / (1 − i·2πντ_k).
#[derive(Debug, Clone, PartialEq)]
pub struct DebyeModel {
    name: String,
    eps_inf: f64,
    terms: Vec<DebyeTerm>,
}

impl DebyeModel {
    pub fn new(name: impl Into<String>, eps_inf: f64, terms: Vec<DebyeTerm>) -> Result<Self> {
        let name = name.into();
        if !(eps_inf.is_finite() && eps_inf >= 1.0) {
            return Err(Error::InvalidModel(format!(
                "{name}: eps_inf must be >= 1, got {eps_inf}"
            )));
        }
        for (k, t) in terms.iter().enumerate() {
            if !(t.strength.is_finite() && t.strength > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "{name}: term {k} has non-positive strength {}",
                    t.strength
                )));
            }
            if !(t.tau_ps.is_finite() && t.tau_ps > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "{name}: term {k} has non-positive relaxation time {} ps",
                    t.tau_ps
                )));
            }
        }
        Ok(DebyeModel { name, eps_inf, terms })
    }

    /// Like [`DebyeModel::new`], additionally requiring ε∞ + ΣΔε to equal `eps_static`.
    pub fn with_static(
        name: impl Into<String>,
        eps_inf: f64,
        terms: Vec<DebyeTerm>,
        eps_static: f64,
    ) -> Result<Self> {
        let model = Self::new(name, eps_inf, terms)?;
        let got = model.static_permittivity();
        if (got - eps_static).abs() > STATIC_MATCH_RTOL * eps_static.abs().max(1.0) {
            return Err(Error::InvalidModel(format!(
                "{}: eps_inf + sum of strengths = {got} but eps_static = {eps_static}",
                model.name
            )));
        }
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eps_inf(&self) -> f64 {
        self.eps_inf
    }

    pub fn terms(&self) -> &[DebyeTerm] {
        &self.terms
    }

    /// ε(0) = ε∞ + ΣΔε.
    pub fn static_permittivity(&self) -> f64 {
        self.eps_inf + self.terms.iter().map(|t| t.strength).sum::<f64>()
    }

    fn eval(&self, nu: Frequency) -> ComplexPermittivity {
        let omega = nu.angular();
        self.terms.iter().fold(Complex64::new(self.eps_inf, 0.0), |acc, t| {
            let x = omega * t.tau_ps * 1e-12;
            acc + t.strength / Complex64::new(1.0, -x)
        })
    }
}

/// Tabulated ε(ν) on a strictly increasing frequency grid, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedModel {
    name: String,
    frequencies_thz: Vec<f64>,
    values: Vec<ComplexPermittivity>,
}

impl TabulatedModel {
    pub fn new(
        name: impl Into<String>,
        frequencies_thz: Vec<f64>,
        values: Vec<ComplexPermittivity>,
    ) -> Result<Self> {
        let name = name.into();
        if frequencies_thz.len() != values.len() {
            return Err(Error::InvalidModel(format!(
                "{name}: {} frequencies but {} values",
                frequencies_thz.len(),
                values.len()
            )));
        }
        if frequencies_thz.len() < 2 {
            return Err(Error::InvalidModel(format!("{name}: need at least 2 samples")));
        }
        if frequencies_thz.iter().any(|f| !f.is_finite() || *f <= 0.0) {
            return Err(Error::InvalidModel(format!(
                "{name}: grid frequencies must be positive and finite"
            )));
        }
        if frequencies_thz.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModel(format!(
                "{name}: frequency grid is not strictly increasing"
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidModel(format!("{name}: non-finite permittivity")));
        }
        Ok(TabulatedModel { name, frequencies_thz, values })
    }

    /// Sample any model on the given grid.
    pub fn sample(name: impl Into<String>, model: &LiquidModel, frequencies_thz: Vec<f64>) -> Result<Self> {
        let values = frequencies_thz
            .iter()
            .map(|&f| model.eval(Frequency::from_thz(f)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, frequencies_thz, values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frequencies_thz(&self) -> &[f64] {
        &self.frequencies_thz
    }

    pub fn values(&self) -> &[ComplexPermittivity] {
        &self.values
    }

    pub fn range_thz(&self) -> (f64, f64) {
        (self.frequencies_thz[0], *self.frequencies_thz.last().unwrap())
    }

    fn eval(&self, nu: Frequency) -> Result<ComplexPermittivity> {
        let x = nu.thz();
        let (lo, hi) = self.range_thz();
        if !(x >= lo && x <= hi) {
            return Err(Error::OutOfRange { nu_thz: x, lo_thz: lo, hi_thz: hi });
        }
        let grid = &self.frequencies_thz;
        // index of the first grid point strictly greater than x
        let upper = grid.partition_point(|&g| g <= x);
        if upper == 0 {
            return Ok(self.values[0]);
        }
        let i = upper - 1;
        if i == grid.len() - 1 || grid[i] == x {
            return Ok(self.values[i]);
        }
        let w = (x - grid[i]) / (grid[i + 1] - grid[i]);
        let (a, b) = (self.values[i], self.values[i + 1]);
        Ok(Complex64::new(a.re + w * (b.re - a.re), a.im + w * (b.im - a.im)))
    }
}

/// The neat-liquid dielectric function, from either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum LiquidModel {
    Debye(DebyeModel),
    Tabulated(TabulatedModel),
}

impl LiquidModel {
    pub fn name(&self) -> &str {
        match self {
            LiquidModel::Debye(m) => m.name(),
            LiquidModel::Tabulated(m) => m.name(),
        }
    }

    /// Closed validity interval in THz, `None` when unbounded.
    pub fn range_thz(&self) -> Option<(f64, f64)> {
        match self {
            LiquidModel::Debye(_) => None,
            LiquidModel::Tabulated(m) => Some(m.range_thz()),
        }
    }

    /// ε_neat(ν).
    pub fn eval(&self, nu: Frequency) -> Result<ComplexPermittivity> {
        nu.require_positive()?;
        match self {
            LiquidModel::Debye(m) => Ok(m.eval(nu)),
            LiquidModel::Tabulated(m) => m.eval(nu),
        }
    }

    /// Central-difference dε_neat/dν in 1/THz.
    pub fn derivative(&self, nu: Frequency, step: Frequency) -> Result<Complex64> {
        let h = step.thz();
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::domain(format!("derivative step must be positive, got {h} THz")));
        }
        let up = self.eval(Frequency::from_thz(nu.thz() + h))?;
        let down = self.eval(Frequency::from_thz(nu.thz() - h))?;
        Ok((up - down) / (2.0 * h))
    }
}

impl From<DebyeModel> for LiquidModel {
    fn from(m: DebyeModel) -> Self {
        LiquidModel::Debye(m)
    }
}

impl From<TabulatedModel> for LiquidModel {
    fn from(m: TabulatedModel) -> Self {
        LiquidModel::Tabulated(m)
    }
}

/// Default derivative step, 1e-3 THz.
pub fn default_derivative_step() -> Frequency {
    Frequency::from_thz(1e-3)
}

/// Evaluate ε_neat(ν) for a frequency given in THz.
pub fn eval_neat(model: &LiquidModel, nu_thz: f64) -> Result<ComplexPermittivity> {
    model.eval(Frequency::from_thz(nu_thz))
}

/// Central difference (ε(ν+h) − ε(ν−h)) / 2h with ν and h in THz.
pub fn eval_neat_derivative(model: &LiquidModel, nu_thz: f64, h_thz: f64) -> Result<Complex64> {
    model.derivative(Frequency::from_thz(nu_thz), Frequency::from_thz(h_thz))
}
