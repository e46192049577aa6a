//! Subcommand bodies. Each returns the text it wants written; `main` decides
//! where it goes and maps errors to exit codes.

use std::path::{Path, PathBuf};

use impostoron::csvio::{map_to_csv, record_to_csv, spectrum_to_csv, table_to_csv, trace_to_csv, Table};
use impostoron::polaron::frequency_grid;
use impostoron::signal::{
    add_noise, add_trace_noise, extract, probe_pulse, synth_map, synth_oscillation, uniform_grid, ExtractOptions,
    MapOptions, StepModel, TimeTrace,
};
use impostoron::{
    ce_for_nu0, find_nu0, lineshape, lorentz_lineshape, match_frequency, match_profiles, parse_liquid, Concentration,
    DopedLiquid, Frequency, ImpostoronSolution, LiquidModel, MatchOptions, SolverOptions,
};
use sha2::{Digest, Sha256};

use crate::args::{
    CeForNu0Args, Command, EpsArgs, ExtractArgs, LineshapeArgs, MatchArgs, Nu0Args, SynthArgs,
};

pub const DATA_DIR_ENV: &str = "IMPOSTORON_DATA_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or missing inputs; exit 2.
    Usage(String),
    /// Raised by the library; exit 3.
    Model(impostoron::Error),
}

impl From<impostoron::Error> for CliError {
    fn from(e: impostoron::Error) -> Self {
        CliError::Model(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Everything a subcommand produces.
pub struct Output {
    pub main: String,
    /// Extra files requested by the subcommand itself.
    pub side_files: Vec<(PathBuf, String)>,
}

impl Output {
    fn text(main: String) -> Self {
        Output { main, side_files: vec![] }
    }
}

/// A file read from disk with its digest for the metadata header.
struct Input {
    path: PathBuf,
    text: String,
}

impl Input {
    fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read `{}`: {e}", path.display())))?;
        Ok(Input { path: path.to_path_buf(), text })
    }

    fn metadata(&self) -> String {
        format!("input: {} sha256={}", self.path.display(), hex::encode(Sha256::digest(self.text.as_bytes())))
    }
}

/// `name` as given, then with `.liq` appended, then both under $IMPOSTORON_DATA_DIR.
pub fn resolve_liquid(name: &Path, data_dir: Option<&Path>) -> CliResult<PathBuf> {
    let with_ext = name.with_extension("liq");
    let mut candidates = vec![name.to_path_buf(), with_ext.clone()];
    if let Some(dir) = data_dir.filter(|_| name.is_relative()) {
        candidates.push(dir.join(name));
        candidates.push(dir.join(&with_ext));
    }
    candidates.into_iter().find(|p| p.is_file()).ok_or_else(|| {
        let searched = match data_dir {
            Some(d) => format!("current directory and {}", d.display()),
            None => format!("current directory; set {DATA_DIR_ENV} to add a search path"),
        };
        CliError::Usage(format!("liquid file `{}` not found ({searched})", name.display()))
    })
}

fn load_liquid(name: &Path) -> CliResult<(LiquidModel, Input)> {
    let dir = std::env::var_os(DATA_DIR_ENV).map(PathBuf::from);
    let path = resolve_liquid(name, dir.as_deref())?;
    let input = Input::read(&path)?;
    let model = parse_liquid(&input.text, &path.display().to_string())?;
    Ok((model, input))
}

fn header(command: &str, inputs: &[&Input], params: &[String]) -> Vec<String> {
    let mut meta = vec![format!("tool: impostoron {}", env!("CARGO_PKG_VERSION")), format!("command: {command}")];
    meta.extend(inputs.iter().map(|i| i.metadata()));
    meta.extend(params.iter().cloned());
    meta
}

fn ordered(lo: f64, hi: f64, what: &str) -> CliResult<()> {
    if lo < hi {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what}: minimum {lo} must be below maximum {hi}")))
    }
}

fn concentration(um: f64) -> CliResult<Concentration> {
    Ok(Concentration::from_micromolar(um)?)
}

pub fn run(command: &Command) -> CliResult<Output> {
    match command {
        Command::Eps(a) => eps(a),
        Command::Nu0(a) => nu0(a),
        Command::CeForNu0(a) => ce_for(a),
        Command::Match(a) => pair(a),
        Command::Lineshape(a) => shape(a),
        Command::Synth(a) => synth(a),
        Command::Extract(a) => extract_map(a),
    }
}

fn eps(a: &EpsArgs) -> CliResult<Output> {
    ordered(a.grid.nu_min, a.grid.nu_max, "frequency grid")?;
    let (model, input) = load_liquid(&a.liquid.liquid)?;
    let doped = DopedLiquid::new(model, concentration(a.ce)?);
    let grid = frequency_grid(a.grid.nu_min, a.grid.nu_max, a.grid.nu_step)?;
    let rows = grid
        .iter()
        .map(|&nu| {
            let e = doped.eval(Frequency::from_thz(nu))?;
            Ok(vec![nu, e.re, e.im])
        })
        .collect::<impostoron::Result<Vec<_>>>()?;
    let table = Table { header: vec!["nu_THz".into(), "eps_real".into(), "eps_imag".into()], rows };
    let meta = header("eps", &[&input], &[format!("ce_uM: {}", a.ce)]);
    Ok(Output::text(table_to_csv(&table, &meta)?))
}

fn nu0(a: &Nu0Args) -> CliResult<Output> {
    let (model, input) = load_liquid(&a.liquid.liquid)?;
    let mut opts = SolverOptions::default();
    if let Some((lo, hi)) = a.bracket {
        opts = opts.with_bracket(lo, hi);
    }
    if let Some(tol) = a.tol {
        opts = opts.with_tol(tol);
    }
    let res = find_nu0(&DopedLiquid::new(model, concentration(a.ce)?), &opts)?;
    let mut fields = vec![
        ("nu0_THz".to_string(), res.nu0.thz()),
        ("eps_imag_at_nu0".to_string(), res.eps_imag_at_nu0),
        ("slope_per_THz".to_string(), res.slope_per_thz),
        ("lorentz_fwhm_THz".to_string(), res.lorentz_fwhm_thz()),
        ("ce_uM".to_string(), res.ce.micromolar()),
    ];
    fields.extend(res.other_crossings.iter().map(|f| ("other_crossing_THz".to_string(), f.thz())));
    let (lo, hi) = opts.bracket_thz;
    let meta = header("nu0", &[&input], &[format!("bracket_THz: {lo},{hi}"), format!("tol_THz: {}", opts.tol_thz)]);
    Ok(Output::text(record_to_csv(&fields, &meta)?))
}

fn ce_for(a: &CeForNu0Args) -> CliResult<Output> {
    let (model, input) = load_liquid(&a.liquid.liquid)?;
    let ce = ce_for_nu0(&model, Frequency::from_thz(a.nu0))?;
    let fields = vec![("nu0_THz".to_string(), a.nu0), ("ce_uM".to_string(), ce.micromolar())];
    Ok(Output::text(record_to_csv(&fields, &header("ce-for-nu0", &[&input], &[]))?))
}

fn solution_fields(s: &ImpostoronSolution) -> Vec<(String, f64)> {
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let mut fields = vec![
        ("nu0_THz".to_string(), s.nu0.thz()),
        ("ce_a_uM".to_string(), s.ce_1.micromolar()),
        ("ce_b_uM".to_string(), s.ce_2.micromolar()),
        ("freq_residual_THz".to_string(), s.freq_residual_thz),
    ];
    if let Some((t1, t2)) = s.profile_terms {
        fields.push(("profile_term_a_per_THz".to_string(), t1));
        fields.push(("profile_term_b_per_THz".to_string(), t2));
        fields.push(("profile_residual_per_THz".to_string(), t1 - t2));
    }
    if let Some(g) = s.normalized_profile_residual() {
        fields.push(("normalized_profile_residual".to_string(), g));
    }
    fields.push(("profile_matched".to_string(), flag(s.profile_matched)));
    fields.push(("degenerate".to_string(), flag(s.degenerate)));
    fields.extend(s.other_roots.iter().map(|f| ("other_root_THz".to_string(), f.thz())));
    fields
}

fn pair(a: &MatchArgs) -> CliResult<Output> {
    let (la, ia) = load_liquid(&a.liquid_a)?;
    let (lb, ib) = load_liquid(&a.liquid_b)?;
    let mut opts = MatchOptions::default();
    let solution = match a.nu0 {
        Some(nu0) => match_frequency(&la, &lb, Frequency::from_thz(nu0), &opts)?,
        None => {
            if let Some((lo, hi)) = a.bracket {
                opts.solver = opts.solver.with_bracket(lo, hi);
            }
            match_profiles(&la, &lb, &opts)?
        }
    };
    let mode = if a.profile { "profile" } else { "frequency" };
    let (lo, hi) = opts.solver.bracket_thz;
    let params = [
        format!("liquid_a: {}", solution.liquid_1),
        format!("liquid_b: {}", solution.liquid_2),
        format!("mode: {mode}"),
        format!("bracket_THz: {lo},{hi}"),
    ];
    let meta = header("match", &[&ia, &ib], &params);
    Ok(Output::text(record_to_csv(&solution_fields(&solution), &meta)?))
}

fn shape(a: &LineshapeArgs) -> CliResult<Output> {
    ordered(a.nu_min, a.nu_max, "frequency grid")?;
    let (model, input) = load_liquid(&a.liquid.liquid)?;
    let doped = DopedLiquid::new(model, concentration(a.ce)?);
    let grid = frequency_grid(a.nu_min, a.nu_max, a.nu_step)?;
    let (spectrum, label) = if a.lorentz {
        let res = find_nu0(&doped, &SolverOptions::default())?;
        (lorentz_lineshape(&res, &grid)?, "lorentz")
    } else {
        (lineshape(&doped, &grid)?, "lineshape")
    };
    let meta = header("lineshape", &[&input], &[format!("ce_uM: {}", a.ce)]);
    Ok(Output::text(spectrum_to_csv(&spectrum, label, &meta)?))
}

fn synth(a: &SynthArgs) -> CliResult<Output> {
    let (model, input) = load_liquid(&a.liquid.liquid)?;
    let doped = DopedLiquid::new(model, concentration(a.ce)?);
    let tau = uniform_grid(a.tau_start, a.dtau, a.n as usize);
    let osc = synth_oscillation(&doped, &tau, a.band)?;
    let amplitude = match a.step_amplitude {
        Some(v) => v,
        None => osc.values().iter().fold(0.0f64, |m, v| m.max(v.abs())),
    };
    let step = StepModel::new(amplitude, a.rise_ps, 0.0)?;
    let mut params = vec![
        format!("ce_uM: {}", a.ce),
        format!("band_THz: {},{}", a.band.0, a.band.1),
        format!("step: amplitude={} rise_ps={} onset_ps=0", step.amplitude(), step.rise_time_ps()),
    ];
    if let Some(snr) = a.noise_snr_db {
        params.push(format!("noise: snr_db={snr} seed={}", a.seed));
    }
    let main = if a.map {
        let nt = a.nt as usize;
        let t = uniform_grid(-(nt as f64 / 2.0) * a.dt, a.dt, nt);
        let probe = probe_pulse(&t, a.probe_thz, a.probe_sigma_ps)?;
        let opts = MapOptions { band_thz: a.band, ..MapOptions::default() };
        let mut map = synth_map(&doped, &probe, &step, &tau, &opts)?;
        if let Some(snr) = a.noise_snr_db {
            map = add_noise(&map, snr, a.seed)?;
        }
        params.push(format!("probe: center_THz={} sigma_ps={}", a.probe_thz, a.probe_sigma_ps));
        map_to_csv(&map, &header("synth", &[&input], &params))?
    } else {
        let values = tau.iter().zip(osc.values()).map(|(t, o)| step.eval(*t) + o).collect();
        let mut trace = TimeTrace::new(tau.clone(), values)?;
        if let Some(snr) = a.noise_snr_db {
            trace = add_trace_noise(&trace, snr, a.seed)?;
        }
        trace_to_csv(&trace, "signal", &header("synth", &[&input], &params))?
    };
    Ok(Output::text(main))
}

fn extract_map(a: &ExtractArgs) -> CliResult<Output> {
    let input = Input::read(&a.input)?;
    let map = impostoron::csvio::map_from_csv(&input.text, &a.input.display().to_string())?;
    let opts = ExtractOptions { filter_thz: a.filter_thz, filter_shape: a.filter_shape, band_thz: a.band, window: a.window };
    let x = extract(&map, &opts)?;
    let params = [
        format!("filter_THz: {}", a.filter_thz),
        format!("t_cut_ps: {}", x.t_cut_ps),
        format!(
            "step: amplitude={} rise_ps={} onset_ps={}",
            x.step.amplitude(),
            x.step.rise_time_ps(),
            x.step.onset_ps()
        ),
    ];
    let meta = header("extract", &[&input], &params);
    let oscillation = trace_to_csv(&x.oscillation, "oscillation", &meta)?;
    let spectrum = spectrum_to_csv(&x.spectrum, "amplitude", &meta)?;
    let peak = format!(
        "peak_report: peak_frequency_THz={} fwhm_THz={} amplitude={}\n",
        x.peak.peak_frequency_thz, x.peak.fwhm_thz, x.peak.amplitude
    );
    let mut side_files = vec![];
    if let Some(p) = &a.oscillation_out {
        side_files.push((p.clone(), oscillation.clone()));
    }
    if let Some(p) = &a.spectrum_out {
        side_files.push((p.clone(), spectrum.clone()));
    }
    Ok(Output { main: format!("{oscillation}\n{spectrum}\n{peak}"), side_files })
}
