use impostoron::polaron::lineshape;
use impostoron::signal::{
    add_noise, argmax_t, cosine_spectrum, cut_at_max, extract, peak_report_in, probe_pulse, remove_step, spectrum_of,
    synth_map, synth_oscillation, uniform_grid, ExtractOptions, MapOptions, StepModel, TimeTrace, Window,
    DEFAULT_BAND_THZ,
};
use impostoron::{find_nu0, Concentration, DopedLiquid, LiquidModel, SolverOptions, TabulatedModel};
use num_complex::Complex64;

fn lossy_flat(re: f64, im: f64) -> LiquidModel {
    let v = Complex64::new(re, im);
    TabulatedModel::new("lossy-flat", vec![0.01, 10.0], vec![v, v]).unwrap().into()
}

fn doped(l: LiquidModel, um: f64) -> DopedLiquid {
    DopedLiquid::new(l, Concentration::from_micromolar(um).unwrap())
}

#[test]
fn synthesized_oscillation_peaks_at_resonance() {
    let d = doped(lossy_flat(2.449, 0.5), 25.0);
    let nu0 = find_nu0(&d, &SolverOptions::default()).unwrap().nu0.thz();
    assert!((nu0 - 0.7).abs() < 0.01);
    let tau = uniform_grid(-20.0, 0.1, 2048);
    let osc = synth_oscillation(&d, &tau, DEFAULT_BAND_THZ).unwrap();
    let s = spectrum_of(&osc, Window::None, 0.0).unwrap();
    let bin = s.frequencies_thz()[1];
    let peak = peak_report_in(&s, DEFAULT_BAND_THZ).unwrap();
    assert!((peak.peak_frequency_thz - nu0).abs() <= bin, "{} vs {nu0}", peak.peak_frequency_thz);
}

#[test]
fn cosine_spectrum_reproduces_the_line_shape() {
    let d = doped(lossy_flat(2.449, 0.5), 25.0);
    let res = find_nu0(&d, &SolverOptions::default()).unwrap();
    let (nu0, fwhm) = (res.nu0.thz(), res.lorentz_fwhm_thz());
    let tau = uniform_grid(-20.0, 0.1, 2048);
    let osc = synth_oscillation(&d, &tau, DEFAULT_BAND_THZ).unwrap();
    let s = cosine_spectrum(&osc, 0.0).unwrap().restrict(DEFAULT_BAND_THZ.0, DEFAULT_BAND_THZ.1);
    let exact = lineshape(&d, s.frequencies_thz()).unwrap();
    let (sn, en) = (s.normalized(), exact.normalized());
    let mut compared = 0;
    for ((f, a), b) in sn.frequencies_thz().iter().zip(sn.values()).zip(en.values()) {
        if (f - nu0).abs() <= fwhm {
            compared += 1;
            assert!((a - b).abs() < 0.1, "{f}: {a} vs {b}");
        }
    }
    assert!(compared >= 5, "only {compared} bins inside one FWHM");
}

struct Setup {
    d: DopedLiquid,
    tau: Vec<f64>,
    t: Vec<f64>,
}

impl Setup {
    fn new() -> Self {
        Setup { d: doped(lossy_flat(2.449, 0.5), 25.0), tau: uniform_grid(-10.0, 0.1, 1024), t: uniform_grid(-1.6, 0.05, 64) }
    }

    fn map(&self, step_amplitude: f64) -> impostoron::FieldMap2D {
        let probe = probe_pulse(&self.t, 1.0, 0.3).unwrap();
        let step = StepModel::new(step_amplitude, 0.5, 0.0).unwrap();
        synth_map(&self.d, &probe, &step, &self.tau, &MapOptions::default()).unwrap()
    }
}

#[test]
fn map_maximum_is_at_probe_maximum() {
    let s = Setup::new();
    let map = s.map(0.1);
    let j = argmax_t(&map).unwrap();
    assert_eq!(map.t_grid()[j], 0.0);
    let cut = cut_at_max(&map).unwrap();
    assert_eq!(cut.times(), map.tau_grid());
}

#[test]
fn noisy_cut_stays_within_one_t_bin() {
    let s = Setup::new();
    let map = s.map(0.1);
    let j0 = argmax_t(&map).unwrap();
    let hits = (0..100u64)
        .filter(|seed| {
            let j = argmax_t(&add_noise(&map, 20.0, *seed).unwrap()).unwrap();
            j.abs_diff(j0) <= 1
        })
        .count();
    assert!(hits >= 95, "{hits}/100");
}

#[test]
fn pipeline_recovers_injected_frequency() {
    let s = Setup::new();
    let nu0 = find_nu0(&s.d, &SolverOptions::default()).unwrap().nu0.thz();
    let x = extract(&s.map(0.1), &ExtractOptions::default()).unwrap();
    let bin = x.spectrum.frequencies_thz()[1];
    assert!((x.peak.peak_frequency_thz - nu0).abs() <= bin);
    assert_eq!(x.t_cut_ps, 0.0);
    assert!(x.step.amplitude() > 0.0);
}

fn low_frequency_power(trace: &TimeTrace, onset: f64) -> f64 {
    let s = spectrum_of(trace, Window::None, onset).unwrap();
    s.frequencies_thz().iter().zip(s.values()).filter(|(f, _)| **f < 0.2).map(|(_, v)| v * v).sum()
}

#[test]
fn step_leakage_below_band_is_small() {
    let tau = uniform_grid(-10.0, 0.1, 1024);
    let truth = StepModel::new(1.0, 0.5, 0.0).unwrap();
    let osc = synth_oscillation(&doped(lossy_flat(2.449, 0.5), 25.0), &tau, DEFAULT_BAND_THZ).unwrap();
    let values = tau.iter().zip(osc.values()).map(|(t, o)| truth.eval(*t) + o).collect();
    let trace = TimeTrace::new(tau, values).unwrap();
    let (residual, fit) = remove_step(&trace, DEFAULT_BAND_THZ).unwrap();
    let before = low_frequency_power(&trace, fit.onset_ps());
    let after = low_frequency_power(&residual, fit.onset_ps());
    assert!(after < 0.01 * before, "{after} vs {before}");
}
