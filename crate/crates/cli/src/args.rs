//! Command-line surface. Frequencies are in THz, times in ps and
//! concentrations in µM; every numeric flag is checked here, before any
//! computation starts.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use impostoron::signal::{FilterShape, Window, DEFAULT_FILTER_THZ};

#[derive(Debug, Parser)]
#[command(name = "impostoron", version, about = "Polaron resonances of electron-doped polar liquids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the CSV output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Doped permittivity table nu_THz, eps_real, eps_imag.
    Eps(EpsArgs),
    /// Polaron resonance of one doped liquid.
    Nu0(Nu0Args),
    /// Concentration that places the resonance at a given frequency.
    CeForNu0(CeForNu0Args),
    /// Tune two liquids to a common resonance.
    Match(MatchArgs),
    /// Exact or Lorentz line shape -Im[1/eps].
    Lineshape(LineshapeArgs),
    /// Synthetic delay trace or 2D field map.
    Synth(SynthArgs),
    /// Recover the oscillation spectrum and its peak from a field map.
    Extract(ExtractArgs),
}

#[derive(Debug, Args)]
pub struct LiquidArg {
    /// Liquid model file; relative names are also looked up in $IMPOSTORON_DATA_DIR.
    #[arg(long, value_name = "FILE")]
    pub liquid: PathBuf,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 3.0, value_parser = positive)]
    pub nu_max: f64,
    #[arg(long, default_value_t = 0.01, value_parser = positive)]
    pub nu_step: f64,
}

#[derive(Debug, Args)]
pub struct EpsArgs {
    #[command(flatten)]
    pub liquid: LiquidArg,
    /// Electron concentration, µM.
    #[arg(long, value_parser = non_negative)]
    pub ce: f64,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct Nu0Args {
    #[command(flatten)]
    pub liquid: LiquidArg,
    #[arg(long, value_parser = non_negative)]
    pub ce: f64,
    /// Search interval lo,hi in THz.
    #[arg(long, value_parser = interval)]
    pub bracket: Option<(f64, f64)>,
    /// Bisection tolerance, THz.
    #[arg(long, value_parser = positive)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CeForNu0Args {
    #[command(flatten)]
    pub liquid: LiquidArg,
    #[arg(long, value_parser = positive)]
    pub nu0: f64,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["nu0", "profile"]))]
pub struct MatchArgs {
    #[arg(long, value_name = "FILE")]
    pub liquid_a: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub liquid_b: PathBuf,
    /// Common resonance frequency, THz.
    #[arg(long, value_parser = positive)]
    pub nu0: Option<f64>,
    /// Also match the line profiles, searching the bracket for the frequency.
    #[arg(long)]
    pub profile: bool,
    /// Profile search interval lo,hi in THz.
    #[arg(long, value_parser = interval, requires = "profile")]
    pub bracket: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct LineshapeArgs {
    #[command(flatten)]
    pub liquid: LiquidArg,
    #[arg(long, value_parser = non_negative)]
    pub ce: f64,
    /// Lorentz approximation around the resonance instead of the exact shape.
    #[arg(long)]
    pub lorentz: bool,
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub nu_min: f64,
    #[arg(long, default_value_t = 3.0, value_parser = positive)]
    pub nu_max: f64,
    #[arg(long, default_value_t = 0.001, value_parser = positive)]
    pub nu_step: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub liquid: LiquidArg,
    #[arg(long, value_parser = non_negative)]
    pub ce: f64,
    /// Emit the 2D field map instead of the delay trace.
    #[arg(long)]
    pub map: bool,
    /// Probe time step, ps.
    #[arg(long, default_value_t = 0.05, value_parser = positive)]
    pub dt: f64,
    /// Probe time samples (map only).
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(16..))]
    pub nt: u32,
    /// Delay step, ps.
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub dtau: f64,
    /// Delay samples.
    #[arg(long, default_value_t = 1024, value_parser = clap::value_parser!(u32).range(16..))]
    pub n: u32,
    /// First delay, ps.
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true, value_parser = finite)]
    pub tau_start: f64,
    /// Oscillation band lo,hi in THz.
    #[arg(long, value_parser = interval, default_value = "0.2,2")]
    pub band: (f64, f64),
    /// Step amplitude; defaults to the oscillation maximum.
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub step_amplitude: Option<f64>,
    #[arg(long, default_value_t = 0.5, value_parser = positive)]
    pub rise_ps: f64,
    #[arg(long, default_value_t = 1.0, value_parser = non_negative)]
    pub probe_thz: f64,
    #[arg(long, default_value_t = 0.3, value_parser = positive)]
    pub probe_sigma_ps: f64,
    /// Add white Gaussian noise at this signal-to-noise ratio.
    #[arg(long, allow_negative_numbers = true, value_parser = finite)]
    pub noise_snr_db: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Field map CSV as written by `synth --map`.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Low-pass cutoff of the 2D filter, THz.
    #[arg(long, default_value_t = DEFAULT_FILTER_THZ, value_parser = positive)]
    pub filter_thz: f64,
    #[arg(long, default_value = "radial", value_parser = parse_from_str::<FilterShape>)]
    pub filter_shape: FilterShape,
    #[arg(long, default_value = "none", value_parser = parse_from_str::<Window>)]
    pub window: Window,
    /// Expected resonance band lo,hi in THz.
    #[arg(long, value_parser = interval, default_value = "0.2,2")]
    pub band: (f64, f64),
    /// Also write the oscillation trace to its own file.
    #[arg(long, value_name = "FILE")]
    pub oscillation_out: Option<PathBuf>,
    /// Also write the spectrum to its own file.
    #[arg(long, value_name = "FILE")]
    pub spectrum_out: Option<PathBuf>,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be >= 0, got {v}"))
    }
}

fn interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got `{s}`"))?;
    let (lo, hi) = (positive(lo)?, positive(hi)?);
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(format!("interval must satisfy lo < hi, got {lo},{hi}"))
    }
}

fn parse_from_str<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}
