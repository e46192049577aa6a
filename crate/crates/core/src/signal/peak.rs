//! Peak position and width of a sampled spectrum.

use crate::error::{Error, Result};
use crate::polaron::Spectrum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    pub peak_frequency_thz: f64,
    pub fwhm_thz: f64,
    pub amplitude: f64,
}

/// Parabolic vertex through the maximum and its two neighbours; FWHM from
/// linearly interpolated half-maximum crossings.
pub fn peak_report(spectrum: &Spectrum) -> Result<PeakReport> {
    let f = spectrum.frequencies_thz();
    let v = spectrum.values();
    if v.len() < 3 {
        return Err(Error::grid(format!("peak search needs at least 3 bins, got {}", v.len())));
    }
    let k = v
        .iter()
        .enumerate()
        .fold(0, |best, (i, x)| if *x > v[best] { i } else { best });
    if k == 0 || k == v.len() - 1 {
        return Err(Error::EdgePeak { nu_thz: f[k] });
    }
    let (a, b, c) = (v[k - 1], v[k], v[k + 1]);
    let curvature = a - 2.0 * b + c;
    let d = if curvature < 0.0 { 0.5 * (a - c) / curvature } else { 0.0 };
    let peak = if d >= 0.0 { f[k] + d * (f[k + 1] - f[k]) } else { f[k] + d * (f[k] - f[k - 1]) };
    let amplitude = b - 0.25 * (a - c) * d;

    let half = 0.5 * amplitude;
    let mut i = k;
    while v[i] > half {
        if i == 0 {
            return Err(Error::UnboundedWidth { nu_thz: peak, side: "low" });
        }
        i -= 1;
    }
    let lo = f[i] + (half - v[i]) / (v[i + 1] - v[i]) * (f[i + 1] - f[i]);
    let mut j = k;
    while v[j] > half {
        if j == v.len() - 1 {
            return Err(Error::UnboundedWidth { nu_thz: peak, side: "high" });
        }
        j += 1;
    }
    let hi = f[j - 1] + (v[j - 1] - half) / (v[j - 1] - v[j]) * (f[j] - f[j - 1]);
    Ok(PeakReport { peak_frequency_thz: peak, fwhm_thz: hi - lo, amplitude })
}

/// [`peak_report`] on the part of the spectrum inside [lo, hi] THz.
pub fn peak_report_in(spectrum: &Spectrum, band_thz: (f64, f64)) -> Result<PeakReport> {
    peak_report(&spectrum.restrict(band_thz.0, band_thz.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(f: Vec<f64>, v: Vec<f64>) -> Spectrum {
        Spectrum::new(f, v).unwrap()
    }

    #[test]
    fn fine_lorentzian() {
        let (nu0, hw) = (0.7137, 0.04);
        let step = 0.005;
        let f: Vec<f64> = (0..300).map(|k| 0.2 + step * k as f64).collect();
        let v = f.iter().map(|x| 1.0 / (1.0 + ((x - nu0) / hw).powi(2))).collect();
        let r = peak_report(&spectrum(f, v)).unwrap();
        assert!((r.peak_frequency_thz - nu0).abs() < 0.1 * step, "{r:?}");
        assert!((r.fwhm_thz / (2.0 * hw) - 1.0).abs() < 0.02, "{r:?}");
        assert!((r.amplitude - 1.0).abs() < 0.01);
    }

    #[test]
    fn plateau_vertex_is_midpoint() {
        let r = peak_report(&spectrum(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0, 0.0])).unwrap();
        assert!((r.peak_frequency_thz - 1.5).abs() < 1e-15);
    }

    #[test]
    fn monotone_is_edge_peak() {
        let f: Vec<f64> = (0..10).map(f64::from).collect();
        let up = f.clone();
        assert!(matches!(peak_report(&spectrum(f.clone(), up)), Err(Error::EdgePeak { nu_thz }) if nu_thz == 9.0));
        let down = f.iter().map(|x| -x).collect();
        assert!(matches!(peak_report(&spectrum(f, down)), Err(Error::EdgePeak { nu_thz }) if nu_thz == 0.0));
    }

    #[test]
    fn half_maximum_must_be_crossed() {
        let f: Vec<f64> = (0..5).map(f64::from).collect();
        let r = peak_report(&spectrum(f, vec![0.9, 0.95, 1.0, 0.4, 0.1]));
        assert!(matches!(r, Err(Error::UnboundedWidth { side: "low", .. })));
    }

    #[test]
    fn band_restriction() {
        let f: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let v = f.iter().map(|x| (-(x - 1.0) * (x - 1.0) / 0.02).exp() + if *x > 4.0 { *x } else { 0.0 }).collect();
        let s = spectrum(f, v);
        assert!(matches!(peak_report(&s), Err(Error::EdgePeak { .. })));
        let r = peak_report_in(&s, (0.2, 2.0)).unwrap();
        assert!((r.peak_frequency_thz - 1.0).abs() < 1e-9);
    }
}
