//! Fourier spectra of delay traces.

use std::f64::consts::TAU;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::polaron::Spectrum;
use crate::signal::trace::{TimeTrace, MIN_TRACE_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    None,
    /// 0.5 − 0.5·cos(2πk/(n−1))
    #[default]
    Hann,
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Window::None),
            "hann" => Ok(Window::Hann),
            other => Err(Error::domain(format!("unknown window `{other}` (none|hann)"))),
        }
    }
}

impl Window {
    fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Window::None => vec![1.0; n],
            Window::Hann => (0..n).map(|k| 0.5 - 0.5 * (TAU * k as f64 / (n - 1) as f64).cos()).collect(),
        }
    }
}

/// Windowed samples with τ ≥ onset, and the sample spacing.
fn segment(trace: &TimeTrace, window: Window, onset_ps: f64) -> Result<(Vec<f64>, f64)> {
    let dtau = trace.step();
    let start = trace.times().partition_point(|&t| t < onset_ps - 1e-9 * dtau);
    let x = &trace.values()[start..];
    if x.len() < MIN_TRACE_SAMPLES {
        return Err(Error::grid(format!(
            "only {} samples at or after the onset {onset_ps} ps, need {MIN_TRACE_SAMPLES}",
            x.len()
        )));
    }
    let w = window.weights(x.len());
    Ok((x.iter().zip(&w).map(|(a, b)| a * b).collect(), dtau))
}

fn one_sided_dft(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    FftPlanner::<f64>::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf.truncate(x.len() / 2 + 1);
    buf
}

fn bins(n: usize, dtau: f64) -> Vec<f64> {
    (0..=n / 2).map(|k| k as f64 / (n as f64 * dtau)).collect()
}

/// |DFT|·Δτ of the windowed samples with τ ≥ onset, on bins k/(nΔτ), k = 0..=n/2.
pub fn spectrum_of(trace: &TimeTrace, window: Window, onset_ps: f64) -> Result<Spectrum> {
    let (x, dtau) = segment(trace, window, onset_ps)?;
    let values = one_sided_dft(&x).iter().map(|z| z.norm() * dtau).collect();
    Spectrum::new(bins(x.len(), dtau), values)
}

/// Cosine transform Δτ·[x₀/2 + Σ_{k≥1} x_k·cos(2πνkΔτ)] of the samples with
/// τ ≥ onset (trapezoid weight on the first one), unwindowed. For a causal
/// cosine sum this recovers the amplitude distribution itself, while the
/// magnitude spectrum also carries its Hilbert partner.
pub fn cosine_spectrum(trace: &TimeTrace, onset_ps: f64) -> Result<Spectrum> {
    let (mut x, dtau) = segment(trace, Window::None, onset_ps)?;
    x[0] *= 0.5;
    let values = one_sided_dft(&x).iter().map(|z| z.re * dtau).collect();
    Spectrum::new(bins(x.len(), dtau), values)
}

/// Σ (w·x)²·Δτ over the samples [`spectrum_of`] transforms.
pub fn trace_energy(trace: &TimeTrace, window: Window, onset_ps: f64) -> Result<f64> {
    let (x, dtau) = segment(trace, window, onset_ps)?;
    Ok(x.iter().map(|v| v * v).sum::<f64>() * dtau)
}

/// Energy of a one-sided spectrum of `samples` points: Δν·(|X₀|² + 2Σ|X_k|²),
/// with the Nyquist bin of an even-length transform counted once.
pub fn spectral_energy(spectrum: &Spectrum, samples: usize) -> Result<f64> {
    if spectrum.len() != samples / 2 + 1 || spectrum.len() < 2 {
        return Err(Error::grid(format!(
            "a one-sided spectrum of {samples} samples has {} bins, got {}",
            samples / 2 + 1,
            spectrum.len()
        )));
    }
    let f = spectrum.frequencies_thz();
    let dnu = f[1] - f[0];
    let v = spectrum.values();
    let last = v.len() - 1;
    let total: f64 = v
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let weight = if k == 0 || (k == last && samples.is_multiple_of(2)) { 1.0 } else { 2.0 };
            weight * x * x
        })
        .sum();
    Ok(total * dnu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::trace::uniform_grid;
    use proptest::prelude::*;

    fn trace(n: usize, f: impl Fn(f64) -> f64) -> TimeTrace {
        let t = uniform_grid(-2.0, 0.1, n);
        let v = t.iter().map(|&x| f(x)).collect();
        TimeTrace::new(t, v).unwrap()
    }

    #[test]
    fn cosine_at_bin_frequency_fills_one_bin() {
        // after the onset: 200 samples, bins of 0.05 THz; 0.7 THz is bin 14
        let tr = trace(220, |t| (TAU * 0.7 * t).cos());
        let s = spectrum_of(&tr, Window::None, 0.0).unwrap();
        assert_eq!(s.len(), 101);
        let v = s.values();
        let k = (0..v.len()).max_by(|a, b| v[*a].total_cmp(&v[*b])).unwrap();
        assert_eq!(k, 14);
        assert!((s.frequencies_thz()[14] - 0.7).abs() < 1e-12);
        assert!((v[14] - 100.0 * 0.1).abs() < 1e-9);
        assert!(v.iter().enumerate().filter(|(i, _)| *i != 14).all(|(_, x)| x.abs() < 1e-9));
    }

    #[test]
    fn zero_trace_zero_spectrum() {
        let s = spectrum_of(&trace(64, |_| 0.0), Window::Hann, 0.0).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn onset_needs_enough_samples() {
        assert!(matches!(spectrum_of(&trace(32, |_| 1.0), Window::None, 0.0), Err(Error::Grid(_))));
    }

    #[test]
    fn cosine_spectrum_of_a_decaying_cosine_is_lorentzian() {
        let g = 0.1;
        let tr = trace(4000, |t| if t < 0.0 { 0.0 } else { (TAU * 0.7 * t).cos() * (-TAU * g * t).exp() });
        let s = cosine_spectrum(&tr, 0.0).unwrap();
        for (f, v) in s.frequencies_thz().iter().zip(s.values()) {
            // ∫₀^∞ e^{−2πγτ} cos(2πν₀τ) cos(2πντ) dτ, both signs of ν ± ν₀
            let l = |d: f64| g / (TAU * (g * g + d * d)) / 2.0;
            let want = l(f - 0.7) + l(f + 0.7);
            assert!((v - want).abs() < 2e-3 * 0.8, "{f}: {v} vs {want}");
        }
    }

    #[test]
    fn window_parsing() {
        assert_eq!("hann".parse::<Window>().unwrap(), Window::Hann);
        assert_eq!("none".parse::<Window>().unwrap(), Window::None);
        assert!("kaiser".parse::<Window>().is_err());
    }

    proptest! {
        #[test]
        fn parseval(values in proptest::collection::vec(-1.0f64..1.0, 16..300), hann in any::<bool>()) {
            let n = values.len();
            let tr = TimeTrace::new(uniform_grid(0.0, 0.1, n), values).unwrap();
            let window = if hann { Window::Hann } else { Window::None };
            let s = spectrum_of(&tr, window, 0.0).unwrap();
            let e = trace_energy(&tr, window, 0.0).unwrap();
            let es = spectral_energy(&s, n).unwrap();
            prop_assert!((es - e).abs() <= 1e-9 * e.max(1e-300), "{es} vs {e}");
        }
    }
}
