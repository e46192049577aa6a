//! Removal of the step-like background from a delay trace.
//!
//! The fit compares low-pass filtered copies of the data and of the model
//! a·Θ(τ−τ₀)·(1 − e^{−(τ−τ₀)/r}), so the polaron oscillation above the cutoff
//! does not pull the step parameters. The amplitude is solved in closed form;
//! (τ₀, ln r) are refined by Nelder–Mead from a scan over τ₀ at r = 1 ps.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;

use crate::error::{Error, Result};
use crate::signal::filter::LowPass;
use crate::signal::synth::{unit_step, StepModel};
use crate::signal::trace::TimeTrace;

const INITIAL_RISE_PS: f64 = 1.0;
const ONSET_SCAN_POINTS: usize = 81;
const MAX_ITERS: u64 = 2000;

struct StepFit<'a> {
    times: &'a [f64],
    data: Vec<f64>,
    energy: f64,
    lowpass: LowPass,
    onset_range: (f64, f64),
    rise_range: (f64, f64),
}

impl StepFit<'_> {
    fn filtered_model(&self, onset: f64, rise: f64) -> Vec<f64> {
        let m: Vec<f64> = self.times.iter().map(|&t| unit_step(t, onset, rise)).collect();
        self.lowpass.apply(&m)
    }

    /// Best amplitude and normalized residual for fixed (τ₀, r).
    fn solve(&self, onset: f64, rise: f64) -> (f64, f64) {
        let m = self.filtered_model(onset, rise);
        let mm: f64 = m.iter().map(|v| v * v).sum();
        if mm <= 0.0 {
            return (0.0, 1.0);
        }
        let a = m.iter().zip(&self.data).map(|(x, d)| x * d).sum::<f64>() / mm;
        let res: f64 = m.iter().zip(&self.data).map(|(x, d)| (d - a * x).powi(2)).sum();
        (a, res / self.energy)
    }

    fn in_bounds(&self, onset: f64, rise: f64) -> bool {
        onset >= self.onset_range.0 && onset <= self.onset_range.1 && rise >= self.rise_range.0 && rise <= self.rise_range.1
    }
}

struct Cost<'a, 'b>(&'a StepFit<'b>);

impl CostFunction for Cost<'_, '_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let (onset, rise) = (p[0], p[1].exp());
        if !self.0.in_bounds(onset, rise) {
            // worse than any admissible point, which never exceeds 1
            return Ok(2.0);
        }
        Ok(self.0.solve(onset, rise).1)
    }
}

/// Fit and subtract the step. `band_thz` is the expected polaron band; the
/// fit's low-pass cutoff is half its lower edge.
pub fn remove_step(trace: &TimeTrace, band_thz: (f64, f64)) -> Result<(TimeTrace, StepModel)> {
    let times = trace.times();
    let (first, last) = (times[0], times[times.len() - 1]);
    if !(first < 0.0 && last > 0.0) {
        return Err(Error::Precondition(format!(
            "step removal needs delays on both sides of zero, trace covers [{first}, {last}] ps"
        )));
    }
    let cutoff = 0.5 * band_thz.0;
    if !(cutoff > 0.0) {
        return Err(Error::domain(format!("band lower edge must be positive, got {} THz", band_thz.0)));
    }
    if trace.values().iter().all(|v| *v == 0.0) {
        return Ok((trace.clone(), StepModel::zero()));
    }

    let dtau = trace.step();
    let lowpass = LowPass::new(trace.len(), dtau, cutoff);
    let data = lowpass.apply(trace.values());
    let energy: f64 = data.iter().map(|v| v * v).sum();
    if !(energy > 0.0) {
        // nothing below the cutoff: no step to remove
        return Ok((trace.clone(), StepModel::zero()));
    }
    let fit = StepFit {
        times,
        data,
        energy,
        lowpass,
        onset_range: (first, last - dtau),
        rise_range: (0.1 * dtau, last - first),
    };

    let (scan_lo, scan_hi) = (first.max(-5.0), (last - dtau).min(5.0));
    let onset0 = (0..ONSET_SCAN_POINTS)
        .map(|k| scan_lo + (scan_hi - scan_lo) * k as f64 / (ONSET_SCAN_POINTS - 1) as f64)
        .map(|t0| (t0, fit.solve(t0, INITIAL_RISE_PS).1))
        .fold((scan_lo, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0;

    let lr0 = INITIAL_RISE_PS.ln();
    let simplex = vec![vec![onset0, lr0], vec![onset0 + 5.0 * dtau, lr0], vec![onset0, lr0 + 0.5]];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-15)
        .map_err(|e| Error::StepFit(e.to_string()))?;
    let result = Executor::new(Cost(&fit), solver)
        .configure(|s| s.max_iters(MAX_ITERS))
        .run()
        .map_err(|e| Error::StepFit(e.to_string()))?;
    let state = result.state();
    let best = state
        .get_best_param()
        .ok_or_else(|| Error::StepFit("optimizer returned no parameters".into()))?;
    let (onset, rise) = (best[0], best[1].exp());
    let (amplitude, cost) = fit.solve(onset, rise);
    if !(amplitude.is_finite() && cost.is_finite() && fit.in_bounds(onset, rise)) {
        return Err(Error::StepFit(format!(
            "fit diverged: amplitude {amplitude}, onset {onset} ps, rise {rise} ps, relative residual {cost}, {} iterations",
            state.get_iter()
        )));
    }
    let step = StepModel::new(amplitude, rise, onset)?;
    let residual = times.iter().zip(trace.values()).map(|(&t, v)| v - step.eval(t)).collect();
    Ok((trace.with_values(residual)?, step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::trace::uniform_grid;
    use std::f64::consts::TAU;

    const BAND: (f64, f64) = (0.2, 2.0);

    fn trace(f: impl Fn(f64) -> f64) -> TimeTrace {
        let t = uniform_grid(-10.0, 0.1, 1024);
        let v = t.iter().map(|&x| f(x)).collect();
        TimeTrace::new(t, v).unwrap()
    }

    #[test]
    fn pure_step_is_removed() {
        let truth = StepModel::new(0.8, 0.6, 0.3).unwrap();
        let (res, fit) = remove_step(&trace(|t| truth.eval(t)), BAND).unwrap();
        let worst = res.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 0.01 * truth.amplitude(), "{worst} {fit:?}");
        assert!((fit.rise_time_ps() - 0.6).abs() < 1e-3);
        assert!((fit.onset_ps() - 0.3).abs() < 1e-3);
    }

    #[test]
    fn oscillation_survives_step_removal() {
        let truth = StepModel::new(1.0, 0.5, 0.0).unwrap();
        let osc = |t: f64| if t < 0.0 { 0.0 } else { 0.3 * (TAU * 0.7 * t).cos() * (-t / 20.0).exp() };
        let (res, _) = remove_step(&trace(|t| truth.eval(t) + osc(t)), BAND).unwrap();
        let pairs: Vec<(f64, f64)> = res
            .times()
            .iter()
            .zip(res.values())
            .filter(|(t, _)| **t > 3.0 * truth.rise_time_ps())
            .map(|(t, v)| (*v, osc(*t)))
            .collect();
        let dot: f64 = pairs.iter().map(|(a, b)| a * b).sum();
        let na: f64 = pairs.iter().map(|(a, _)| a * a).sum::<f64>().sqrt();
        let nb: f64 = pairs.iter().map(|(_, b)| b * b).sum::<f64>().sqrt();
        assert!(dot / (na * nb) > 0.99, "{}", dot / (na * nb));
    }

    #[test]
    fn zero_trace() {
        let (res, step) = remove_step(&trace(|_| 0.0), BAND).unwrap();
        assert!(res.values().iter().all(|v| *v == 0.0));
        assert_eq!(step.amplitude(), 0.0);
    }

    #[test]
    fn needs_negative_delays() {
        let t = uniform_grid(0.0, 0.1, 64);
        let tr = TimeTrace::new(t, vec![1.0; 64]).unwrap();
        assert!(matches!(remove_step(&tr, BAND), Err(Error::Precondition(_))));
    }
}
