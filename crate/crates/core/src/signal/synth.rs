//! Synthetic pump-probe data.
//!
//! The oscillation is a causal cosine sum whose amplitudes follow the exact
//! line shape −Im[1/ε] over the analysis band. The field map is a separable
//! phenomenological model, E(t, τ) = E_probe(t)·[step(τ) + oscillation(τ)];
//! it does not propagate the probe through the sample.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::mixing::DopedLiquid;
use crate::polaron::lineshape;
use crate::signal::trace::{grid_step, FieldMap2D, TimeTrace};

/// Default oscillation band, THz.
pub const DEFAULT_BAND_THZ: (f64, f64) = (0.2, 2.0);

/// Step-like background a·Θ(τ−τ₀)·(1 − e^{−(τ−τ₀)/r}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepModel {
    amplitude: f64,
    rise_time_ps: f64,
    onset_ps: f64,
}

impl StepModel {
    pub fn new(amplitude: f64, rise_time_ps: f64, onset_ps: f64) -> Result<Self> {
        if !(rise_time_ps > 0.0 && rise_time_ps.is_finite()) {
            return Err(Error::domain(format!("step rise time must be positive, got {rise_time_ps} ps")));
        }
        if !(amplitude.is_finite() && onset_ps.is_finite()) {
            return Err(Error::domain("step amplitude and onset must be finite"));
        }
        Ok(StepModel { amplitude, rise_time_ps, onset_ps })
    }

    pub fn zero() -> Self {
        StepModel { amplitude: 0.0, rise_time_ps: 1.0, onset_ps: 0.0 }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn rise_time_ps(&self) -> f64 {
        self.rise_time_ps
    }

    pub fn onset_ps(&self) -> f64 {
        self.onset_ps
    }

    pub fn eval(&self, tau_ps: f64) -> f64 {
        self.amplitude * unit_step(tau_ps, self.onset_ps, self.rise_time_ps)
    }
}

pub(crate) fn unit_step(tau: f64, onset: f64, rise: f64) -> f64 {
    if tau < onset {
        0.0
    } else {
        -(-(tau - onset) / rise).exp_m1()
    }
}

/// Frequency comb and normalized amplitudes used for the oscillation.
struct Comb {
    nus: Vec<f64>,
    amps: Vec<f64>,
    dnu: f64,
}

fn comb(doped: &DopedLiquid, tau_grid: &[f64], band_thz: (f64, f64)) -> Result<Comb> {
    let dtau = grid_step(tau_grid, "tau")?;
    let (lo, hi) = band_thz;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::grid(format!("invalid band [{lo}, {hi}] THz")));
    }
    let nyquist = 0.5 / dtau;
    if !(nyquist > hi) {
        return Err(Error::grid(format!(
            "delay step {dtau} ps cannot resolve {hi} THz (Nyquist {nyquist} THz)"
        )));
    }
    let span = tau_grid[tau_grid.len() - 1] - tau_grid[0];
    // four times finer than the grid's own resolution keeps the comb's
    // recurrence time outside the trace
    let dnu = 1.0 / (4.0 * span);
    let n = ((hi - lo) / dnu).floor() as usize + 1;
    let nus: Vec<f64> = (0..n).map(|k| lo + dnu * k as f64).collect();
    let shape = lineshape(doped, &nus).map_err(|e| match e {
        Error::SingularLineshape { nu_thz } => {
            Error::DegenerateLineshape(format!("lossless resonance: -Im[1/eps] diverges at {nu_thz} THz"))
        }
        other => other,
    })?;
    let peak = shape.values().iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::DegenerateLineshape(format!(
            "-Im[1/eps] vanishes over [{lo}, {hi}] THz (lossless medium)"
        )));
    }
    let amps = shape.values().iter().map(|v| v / peak).collect();
    Ok(Comb { nus, amps, dnu })
}

/// Causal oscillation s(τ) = Θ(τ)·Σ_k A(ν_k)·cos(2πν_kτ)·Δν with A the
/// peak-normalized line shape over the band.
pub fn synth_oscillation(doped: &DopedLiquid, tau_grid: &[f64], band_thz: (f64, f64)) -> Result<TimeTrace> {
    let c = comb(doped, tau_grid, band_thz)?;
    let values = tau_grid
        .iter()
        .map(|&tau| {
            if tau < 0.0 {
                return 0.0;
            }
            c.nus.iter().zip(&c.amps).map(|(nu, a)| a * (TAU * nu * tau).cos()).sum::<f64>() * c.dnu
        })
        .collect();
    TimeTrace::new(tau_grid.to_vec(), values)
}

/// Analytic envelope |Σ_k A(ν_k)·e^{2πiν_kτ}|·Δν of [`synth_oscillation`].
pub fn oscillation_envelope(doped: &DopedLiquid, tau_grid: &[f64], band_thz: (f64, f64)) -> Result<TimeTrace> {
    let c = comb(doped, tau_grid, band_thz)?;
    let values = tau_grid
        .iter()
        .map(|&tau| {
            if tau < 0.0 {
                return 0.0;
            }
            let z: Complex64 = c
                .nus
                .iter()
                .zip(&c.amps)
                .map(|(nu, a)| Complex64::from_polar(*a, TAU * nu * tau))
                .sum();
            z.norm() * c.dnu
        })
        .collect();
    TimeTrace::new(tau_grid.to_vec(), values)
}

/// First delay after τ = 0 at which the envelope drops below 1/e of its value at τ = 0.
pub fn decay_time(envelope: &TimeTrace) -> Option<f64> {
    let i0 = envelope.times().iter().position(|&t| t >= 0.0)?;
    let start = envelope.values()[i0];
    envelope.times()[i0..]
        .iter()
        .zip(&envelope.values()[i0..])
        .find(|(_, v)| **v < start / std::f64::consts::E)
        .map(|(t, _)| *t)
}

/// Probe field cos(2πν_c t)·exp(−t²/2σ²).
pub fn probe_pulse(t_grid: &[f64], center_thz: f64, sigma_ps: f64) -> Result<TimeTrace> {
    if !(sigma_ps > 0.0 && center_thz >= 0.0) {
        return Err(Error::domain("probe needs sigma > 0 and a non-negative center frequency"));
    }
    let values = t_grid
        .iter()
        .map(|&t| (TAU * center_thz * t).cos() * (-0.5 * (t / sigma_ps).powi(2)).exp())
        .collect();
    TimeTrace::new(t_grid.to_vec(), values)
}

/// Settings for [`synth_map`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapOptions {
    pub band_thz: (f64, f64),
    /// Multiplies the oscillation before it is added to the step.
    pub oscillation_scale: f64,
}

impl Default for MapOptions {
    fn default() -> Self {
        MapOptions { band_thz: DEFAULT_BAND_THZ, oscillation_scale: 1.0 }
    }
}

/// E(t, τ) = E_probe(t)·[step(τ) + scale·oscillation(τ)].
pub fn synth_map(
    doped: &DopedLiquid,
    probe: &TimeTrace,
    step: &StepModel,
    tau_grid: &[f64],
    opts: &MapOptions,
) -> Result<FieldMap2D> {
    let delay: Vec<f64> = if opts.oscillation_scale == 0.0 {
        grid_step(tau_grid, "tau")?;
        tau_grid.iter().map(|&tau| step.eval(tau)).collect()
    } else {
        let osc = synth_oscillation(doped, tau_grid, opts.band_thz)?;
        tau_grid
            .iter()
            .zip(osc.values())
            .map(|(&tau, s)| step.eval(tau) + opts.oscillation_scale * s)
            .collect()
    };
    let values = delay
        .iter()
        .flat_map(|d| probe.values().iter().map(move |p| p * d))
        .collect();
    FieldMap2D::new(probe.times().to_vec(), tau_grid.to_vec(), values)
}

fn noisy(values: &[f64], snr_db: f64, seed: u64) -> Result<Vec<f64>> {
    if !snr_db.is_finite() {
        return Err(Error::domain(format!("SNR must be finite, got {snr_db} dB")));
    }
    let mean_square = values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64;
    let sigma = (mean_square / 10f64.powf(snr_db / 10.0)).sqrt();
    if sigma == 0.0 {
        return Ok(values.to_vec());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(values.iter().map(|v| v + rng.sample(normal)).collect())
}

/// Adds white Gaussian noise at `snr_db` relative to the map's mean square.
pub fn add_noise(map: &FieldMap2D, snr_db: f64, seed: u64) -> Result<FieldMap2D> {
    map.with_values(noisy(map.values(), snr_db, seed)?)
}

/// Trace counterpart of [`add_noise`].
pub fn add_trace_noise(trace: &TimeTrace, snr_db: f64, seed: u64) -> Result<TimeTrace> {
    trace.with_values(noisy(trace.values(), snr_db, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::{DebyeModel, DebyeTerm, LiquidModel, TabulatedModel};
    use crate::signal::trace::uniform_grid;
    use crate::units::Concentration;

    fn lossy_flat(re: f64, im: f64) -> LiquidModel {
        let v = Complex64::new(re, im);
        TabulatedModel::new("lossy-flat", vec![0.01, 10.0], vec![v, v]).unwrap().into()
    }

    fn doped(liquid: LiquidModel, um: f64) -> DopedLiquid {
        DopedLiquid::new(liquid, Concentration::from_micromolar(um).unwrap())
    }

    fn water_like() -> LiquidModel {
        DebyeModel::new("water-like", 4.5, vec![
            DebyeTerm { strength: 75.0, tau_ps: 8.3 },
            DebyeTerm { strength: 1.5, tau_ps: 0.12 },
        ])
        .unwrap()
        .into()
    }

    #[test]
    fn step_model_shape() {
        let s = StepModel::new(2.0, 0.5, 1.0).unwrap();
        assert_eq!(s.eval(0.99), 0.0);
        assert_eq!(s.eval(1.0), 0.0);
        assert!((s.eval(1.5) - 2.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!(StepModel::new(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn oscillation_is_causal_and_deterministic() {
        let tau = uniform_grid(-5.0, 0.1, 256);
        let d = doped(lossy_flat(2.449, 0.1), 25.0);
        let a = synth_oscillation(&d, &tau, DEFAULT_BAND_THZ).unwrap();
        let b = synth_oscillation(&d, &tau, DEFAULT_BAND_THZ).unwrap();
        assert_eq!(a, b);
        assert!(a.values()[..50].iter().all(|v| *v == 0.0));
        assert!(a.values()[50] > 0.0);
        let env = oscillation_envelope(&d, &tau, DEFAULT_BAND_THZ).unwrap();
        assert!(a.values().iter().zip(env.values()).all(|(s, e)| s.abs() <= e + 1e-15));
    }

    #[test]
    fn nyquist_violation_is_a_grid_error() {
        let tau = uniform_grid(-5.0, 0.3, 128);
        let d = doped(lossy_flat(2.449, 0.1), 25.0);
        assert!(matches!(synth_oscillation(&d, &tau, DEFAULT_BAND_THZ), Err(Error::Grid(_))));
    }

    #[test]
    fn lossless_medium_is_degenerate() {
        let tau = uniform_grid(-5.0, 0.1, 256);
        let d = doped(lossy_flat(2.449, 0.0), 25.0);
        assert!(matches!(synth_oscillation(&d, &tau, DEFAULT_BAND_THZ), Err(Error::DegenerateLineshape(_))));
    }

    #[test]
    fn water_oscillation_subsides_within_a_few_ps() {
        let tau = uniform_grid(-10.0, 0.1, 1024);
        let env = oscillation_envelope(&doped(water_like(), 40.0), &tau, DEFAULT_BAND_THZ).unwrap();
        let t = decay_time(&env).unwrap();
        assert!((3.0..=7.0).contains(&t), "{t}");
    }

    #[test]
    fn zero_map() {
        let t = uniform_grid(-1.0, 0.1, 20);
        let tau = uniform_grid(-1.0, 0.1, 32);
        let probe = probe_pulse(&t, 0.7, 0.5).unwrap();
        let opts = MapOptions { oscillation_scale: 0.0, ..MapOptions::default() };
        let m = synth_map(&doped(lossy_flat(2.449, 0.1), 25.0), &probe, &StepModel::zero(), &tau, &opts).unwrap();
        assert!(m.values().iter().all(|v| *v == 0.0));
        assert_eq!(add_noise(&m, 20.0, 1).unwrap(), m);
    }

    #[test]
    fn map_is_separable() {
        let t = uniform_grid(-1.0, 0.1, 21);
        let tau = uniform_grid(-2.0, 0.1, 64);
        let probe = probe_pulse(&t, 0.7, 0.5).unwrap();
        let step = StepModel::new(0.05, 0.5, 0.0).unwrap();
        let d = doped(lossy_flat(2.449, 0.1), 25.0);
        let m = synth_map(&d, &probe, &step, &tau, &MapOptions::default()).unwrap();
        let osc = synth_oscillation(&d, &tau, DEFAULT_BAND_THZ).unwrap();
        for i in [0, 25, 63] {
            for j in [0, 10, 20] {
                let want = probe.values()[j] * (step.eval(tau[i]) + osc.values()[i]);
                assert_eq!(m.get(i, j), want);
            }
        }
    }

    #[test]
    fn noise_level_and_seeding() {
        let t = uniform_grid(-1.0, 0.05, 40);
        let tau = uniform_grid(-2.0, 0.1, 200);
        let probe = probe_pulse(&t, 0.7, 0.5).unwrap();
        let step = StepModel::new(1.0, 0.5, 0.0).unwrap();
        let opts = MapOptions { oscillation_scale: 0.0, ..MapOptions::default() };
        let m = synth_map(&doped(lossy_flat(2.449, 0.1), 25.0), &probe, &step, &tau, &opts).unwrap();
        let a = add_noise(&m, 20.0, 42).unwrap();
        assert_eq!(a, add_noise(&m, 20.0, 42).unwrap());
        assert_ne!(a, add_noise(&m, 20.0, 43).unwrap());
        let noise_power =
            a.values().iter().zip(m.values()).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / m.values().len() as f64;
        let snr = 10.0 * (m.mean_square() / noise_power).log10();
        assert!((snr - 20.0).abs() < 0.2, "{snr}");
    }
}
