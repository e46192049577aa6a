//! Shared fixtures for the benchmarks.

use std::path::PathBuf;

use impostoron::signal::{probe_pulse, synth_map, synth_oscillation, uniform_grid, MapOptions, StepModel, DEFAULT_BAND_THZ};
use impostoron::{read_liquid_file, Concentration, DopedLiquid, FieldMap2D, LiquidModel};

pub fn liquid(name: &str) -> LiquidModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/liquids/{name}.liq"));
    read_liquid_file(path).expect("shipped liquid file parses")
}

pub fn doped(name: &str, um: f64) -> DopedLiquid {
    DopedLiquid::new(liquid(name), Concentration::from_micromolar(um).expect("positive concentration"))
}

/// 1024 delays × 64 probe times, the layout used by the acceptance runs.
pub fn reference_map(d: &DopedLiquid) -> FieldMap2D {
    let tau = uniform_grid(-10.0, 0.1, 1024);
    let t = uniform_grid(-1.6, 0.05, 64);
    let osc = synth_oscillation(d, &tau, DEFAULT_BAND_THZ).expect("oscillation");
    let amplitude = osc.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let step = StepModel::new(amplitude, 0.5, 0.0).expect("step");
    let probe = probe_pulse(&t, 1.0, 0.3).expect("probe");
    synth_map(d, &probe, &step, &tau, &MapOptions::default()).expect("map")
}
