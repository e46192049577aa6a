//! Cross-liquid matching: electron concentrations that give two liquids the
//! same polaron frequency, and the frequency at which their resonance
//! profiles B/ε″(ν₀) also coincide.

use num_complex::Complex64;

use crate::dielectric::LiquidModel;
use crate::error::{Error, Result};
use crate::mixing::{alpha_el, cm_invert_concentration, DopedLiquid};
use crate::polaron::{eps_imag_at_nu0, find_nu0, real_slope, SolverOptions};
use crate::roots::{bisect, scan_sign_changes};
use crate::units::{Concentration, Frequency, CODATA_2018};

/// Default bound on the mean-normalized profile residual.
pub const DEFAULT_PROFILE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct MatchOptions {
    /// Resonance search used for the frequency round trips; its bracket is
    /// also the default range of the profile scan.
    pub solver: SolverOptions,
    /// Bound on |t₁ − t₂| / mean(t₁, t₂) for a profile match.
    pub profile_tol: f64,
    /// Bisection width for the profile root, THz.
    pub profile_root_tol_thz: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            solver: SolverOptions::default(),
            profile_tol: DEFAULT_PROFILE_TOL,
            profile_root_tol_thz: 1e-13,
        }
    }
}

/// Two liquids tuned to a common polaron frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpostoronSolution {
    pub liquid_1: String,
    pub liquid_2: String,
    pub ce_1: Concentration,
    pub ce_2: Concentration,
    pub nu0: Frequency,
    /// |ν₀⁽¹⁾ − ν₀⁽²⁾| from solving each doped liquid independently, THz.
    pub freq_residual_thz: f64,
    /// (B₁/ε″₁, B₂/ε″₂) at ν₀ in 1/THz; `None` when either liquid is lossless there.
    pub profile_terms: Option<(f64, f64)>,
    pub profile_matched: bool,
    /// Every frequency in the scanned range matches (identical liquids).
    pub degenerate: bool,
    /// Further profile roots in the bracket, ascending.
    pub other_roots: Vec<Frequency>,
}

impl ImpostoronSolution {
    /// g = B₁/ε″₁ − B₂/ε″₂ in 1/THz.
    pub fn profile_residual(&self) -> Option<f64> {
        self.profile_terms.map(|(a, b)| a - b)
    }

    /// g divided by the mean of the two terms.
    pub fn normalized_profile_residual(&self) -> Option<f64> {
        self.profile_terms.map(|(a, b)| normalized_difference(a, b))
    }
}

fn normalized_difference(a: f64, b: f64) -> f64 {
    let mean = 0.5 * (a + b);
    if mean == 0.0 {
        0.0
    } else {
        (a - b) / mean
    }
}

/// Concentration that puts the polaron frequency of `liquid` at ν₀.
pub fn ce_for_nu0(liquid: &LiquidModel, nu0: Frequency) -> Result<Concentration> {
    nu0.require_positive()?;
    let neat = liquid.eval(nu0)?;
    let loss = eps_imag_at_nu0(neat)?;
    let c = cm_invert_concentration(Complex64::new(0.0, loss), neat, nu0)?;
    if c.re < 0.0 {
        return Err(Error::Unreachable {
            liquid: liquid.name().to_string(),
            nu_thz: nu0.thz(),
            ce_um: c.re_micromolar(),
        });
    }
    Concentration::from_mol_per_m3(c.re)
}

/// c⁽¹⁾ − c⁽²⁾ in mol/m³ for a common polaron frequency ν₀, written out term by term.
pub fn concentration_difference(liquid_1: &LiquidModel, liquid_2: &LiquidModel, nu0: Frequency) -> Result<f64> {
    nu0.require_positive()?;
    let n1 = liquid_1.eval(nu0)?;
    let n2 = liquid_2.eval(nu0)?;
    let x1 = eps_imag_at_nu0(n1)?;
    let x2 = eps_imag_at_nu0(n2)?;
    let s1 = n1.norm_sqr();
    let s2 = n2.norm_sqr();
    let prefactor = 3.0 / (CODATA_2018.avogadro * alpha_el(nu0, 0.0)?.re);
    let bracket = (x1 * x1 - 2.0) / (x1 * x1 + 4.0) - (s1 + n1.re - 2.0) / (s1 + 4.0 * n1.re + 4.0)
        - (x2 * x2 - 2.0) / (x2 * x2 + 4.0)
        + (s2 + n2.re - 2.0) / (s2 + 4.0 * n2.re + 4.0);
    Ok(prefactor * bracket)
}

/// B/ε″(ν₀) for `liquid` tuned to ν₀, or `None` for a lossless resonance.
fn profile_term(liquid: &LiquidModel, ce: Concentration, nu0: Frequency, h_thz: f64) -> Result<Option<f64>> {
    let loss = eps_imag_at_nu0(liquid.eval(nu0)?)?;
    if loss <= 0.0 {
        return Ok(None);
    }
    let doped = DopedLiquid::new(liquid.clone(), ce);
    Ok(Some(real_slope(&doped, nu0.thz(), h_thz)? / loss))
}

fn resonance_bracket(solver: &SolverOptions, nu0: Frequency) -> SolverOptions {
    let (lo, hi) = solver.bracket_thz;
    let x = nu0.thz();
    solver.with_bracket(lo.min(0.5 * x), hi.max(1.5 * x))
}

/// (cₑ₁, cₑ₂, frequency residual, profile terms).
type PairSolution = (Concentration, Concentration, f64, Option<(f64, f64)>);

fn solve_pair(
    liquid_1: &LiquidModel,
    liquid_2: &LiquidModel,
    nu0: Frequency,
    opts: &MatchOptions,
) -> Result<PairSolution> {
    let ce_1 = ce_for_nu0(liquid_1, nu0)?;
    let ce_2 = ce_for_nu0(liquid_2, nu0)?;
    let solver = resonance_bracket(&opts.solver, nu0);
    let r1 = find_nu0(&DopedLiquid::new(liquid_1.clone(), ce_1), &solver)?;
    let r2 = find_nu0(&DopedLiquid::new(liquid_2.clone(), ce_2), &solver)?;
    let h = opts.solver.derivative_step_thz;
    let terms = match (profile_term(liquid_1, ce_1, nu0, h)?, profile_term(liquid_2, ce_2, nu0, h)?) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    Ok((ce_1, ce_2, (r1.nu0.thz() - r2.nu0.thz()).abs(), terms))
}

/// Concentrations giving both liquids the polaron frequency ν₀; the profile
/// residual is reported but not constrained.
pub fn match_frequency(
    liquid_1: &LiquidModel,
    liquid_2: &LiquidModel,
    nu0: Frequency,
    opts: &MatchOptions,
) -> Result<ImpostoronSolution> {
    let (ce_1, ce_2, freq_residual_thz, profile_terms) = solve_pair(liquid_1, liquid_2, nu0, opts)?;
    Ok(ImpostoronSolution {
        liquid_1: liquid_1.name().to_string(),
        liquid_2: liquid_2.name().to_string(),
        ce_1,
        ce_2,
        nu0,
        freq_residual_thz,
        profile_terms,
        profile_matched: false,
        degenerate: false,
        other_roots: vec![],
    })
}

/// Normalized profile mismatch at ν, `None` where either liquid cannot be tuned there.
fn profile_mismatch(liquid_1: &LiquidModel, liquid_2: &LiquidModel, nu_thz: f64, h_thz: f64) -> Result<Option<f64>> {
    let nu = Frequency::from_thz(nu_thz);
    let term = |liquid: &LiquidModel| -> Result<Option<f64>> {
        match ce_for_nu0(liquid, nu) {
            Ok(ce) => profile_term(liquid, ce, nu, h_thz),
            Err(Error::Unreachable { .. } | Error::NoConsistentLoss(_) | Error::ClausiusMossottiDivergence { .. }) => {
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    Ok(match (term(liquid_1)?, term(liquid_2)?) {
        (Some(a), Some(b)) => Some(normalized_difference(a, b)),
        _ => None,
    })
}

/// Frequency in the bracket where both the polaron frequency and the profile
/// B/ε″(ν₀) of the two liquids coincide.
pub fn match_profiles(liquid_1: &LiquidModel, liquid_2: &LiquidModel, opts: &MatchOptions) -> Result<ImpostoronSolution> {
    let (lo, hi) = opts.solver.bracket_thz;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}] THz")));
    }
    let h = opts.solver.derivative_step_thz;
    let g = |x: f64| profile_mismatch(liquid_1, liquid_2, x, h);
    let scan = scan_sign_changes(g, lo, hi, opts.solver.scan_points)?;

    if scan.defined > 0 && scan.max_abs <= opts.profile_tol {
        let nu0 = Frequency::from_thz(lo);
        let (ce_1, ce_2, freq_residual_thz, profile_terms) = solve_pair(liquid_1, liquid_2, nu0, opts)?;
        return Ok(ImpostoronSolution {
            liquid_1: liquid_1.name().to_string(),
            liquid_2: liquid_2.name().to_string(),
            ce_1,
            ce_2,
            nu0,
            freq_residual_thz,
            profile_terms,
            profile_matched: true,
            degenerate: true,
            other_roots: vec![],
        });
    }

    let g_strict = |x: f64| -> Result<f64> {
        profile_mismatch(liquid_1, liquid_2, x, h)?
            .ok_or_else(|| Error::domain(format!("profile undefined at {x} THz inside a bracket")))
    };
    let mut roots = scan
        .brackets
        .iter()
        .map(|b| bisect(g_strict, *b, opts.profile_root_tol_thz))
        .collect::<Result<Vec<f64>>>()?;
    if roots.is_empty() {
        return Err(Error::NoProfileMatch { lo_thz: lo, hi_thz: hi });
    }
    let nu0 = Frequency::from_thz(roots.remove(0));
    let (ce_1, ce_2, freq_residual_thz, profile_terms) = solve_pair(liquid_1, liquid_2, nu0, opts)?;
    let matched = profile_terms
        .map(|(a, b)| normalized_difference(a, b).abs() <= opts.profile_tol)
        .unwrap_or(false);
    Ok(ImpostoronSolution {
        liquid_1: liquid_1.name().to_string(),
        liquid_2: liquid_2.name().to_string(),
        ce_1,
        ce_2,
        nu0,
        freq_residual_thz,
        profile_terms,
        profile_matched: matched,
        degenerate: false,
        other_roots: roots.into_iter().map(Frequency::from_thz).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dielectric::{DebyeModel, DebyeTerm, TabulatedModel};
    use crate::mixing::{ce_real_part, cm_mix};
    use proptest::prelude::*;

    fn flat(eps: f64) -> LiquidModel {
        DebyeModel::new(format!("flat-{eps}"), eps, vec![]).unwrap().into()
    }

    fn thz(x: f64) -> Frequency {
        Frequency::from_thz(x)
    }

    fn alcohol(strength: f64) -> LiquidModel {
        DebyeModel::new(format!("alcohol-{strength}"), 4.0, vec![DebyeTerm { strength, tau_ps: 0.3 }])
            .unwrap()
            .into()
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
    fn dispersionless_target_needs_25_um() {
        let c = ce_for_nu0(&flat(2.449), thz(0.7)).unwrap();
        // (1/2 + 1.449/4.449) / |N_A alpha/3|, 50-digit evaluation
        assert!((c.micromolar() - 25.001_193_739_210).abs() < 1e-9, "{c}");
        let res = find_nu0(&DopedLiquid::new(flat(2.449), c), &SolverOptions::default()).unwrap();
        assert!((res.nu0.thz() - 0.7).abs() < 1e-6);
    }

    #[test]
    fn doubling_frequency_quadruples_concentration() {
        let a = ce_for_nu0(&flat(2.449), thz(0.7)).unwrap();
        let b = ce_for_nu0(&flat(2.449), thz(1.4)).unwrap();
        assert!((b.mol_per_m3() / a.mol_per_m3() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn vacuum_like_neat_gives_local_field_shifted_plasma_frequency() {
        let c = ce_for_nu0(&flat(1.0), thz(0.7)).unwrap();
        let k = CODATA_2018;
        let alpha = alpha_el(thz(0.7), 0.0).unwrap().re;
        let expected = 3.0 / (k.avogadro * alpha) * (-0.5);
        assert!((c.mol_per_m3() - expected).abs() < 1e-15 * expected);
        // ω_p² = n e²/(ε₀ m); with the Lorentz local field ε′ = 0 at ω² = (2/3) ω_p²
        let n = c.mol_per_m3() * k.avogadro;
        let omega_p2 = n * k.elementary_charge.powi(2) / (k.vacuum_permittivity * k.electron_mass);
        let nu_p = omega_p2.sqrt() / std::f64::consts::TAU / 1e12;
        assert!((0.7 / nu_p - (2.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unreachable_target() {
        // neat ε with L_neat below −1/2 needs negative electron density
        let neat = Complex64::new(-0.5, 0.0);
        let liquid: LiquidModel = TabulatedModel::new("odd", vec![0.1, 3.0], vec![neat, neat]).unwrap().into();
        match ce_for_nu0(&liquid, thz(0.7)) {
            Err(Error::Unreachable { liquid, ce_um, .. }) => {
                assert_eq!(liquid, "odd");
                assert!(ce_um < 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn concentration_difference_examples() {
        let w = water_like();
        assert_eq!(concentration_difference(&w, &w, thz(0.7)).unwrap(), 0.0);
        let d = concentration_difference(&flat(2.449), &flat(3.0), thz(0.7)).unwrap();
        // c(2.449) − c(3.0) = −2.2500053... uM: the higher-ε liquid needs more electrons
        assert!((d * 1e3 + 2.250_005_349_172).abs() < 1e-9, "{}", d * 1e3);
        let a = alcohol(5.0);
        let direct = ce_for_nu0(&w, thz(0.7)).unwrap().mol_per_m3() - ce_for_nu0(&a, thz(0.7)).unwrap().mol_per_m3();
        let literal = concentration_difference(&w, &a, thz(0.7)).unwrap();
        assert!((direct - literal).abs() < 1e-10 * direct.abs());
    }

    #[test]
    fn closed_form_matches_expanded_real_part() {
        let w = water_like();
        let nu = thz(0.7);
        let neat = w.eval(nu).unwrap();
        let x = eps_imag_at_nu0(neat).unwrap();
        let c = ce_for_nu0(&w, nu).unwrap().mol_per_m3();
        assert!((c - ce_real_part(x, neat, nu).unwrap()).abs() < 1e-12 * c);
        let eps = cm_mix(neat, Concentration::from_mol_per_m3(c).unwrap(), nu).unwrap();
        assert!(eps.re.abs() < 1e-12);
        assert!((eps.im - x).abs() < 1e-12);
    }

    #[test]
    fn identical_liquids_match_trivially() {
        let w = water_like();
        let s = match_frequency(&w, &w, thz(0.7), &MatchOptions::default()).unwrap();
        assert_eq!(s.ce_1, s.ce_2);
        assert!(s.freq_residual_thz < 1e-6);
        assert_eq!(s.profile_residual(), Some(0.0));
        assert!(!s.profile_matched);

        let p = match_profiles(&w, &w, &MatchOptions::default()).unwrap();
        assert!(p.degenerate && p.profile_matched);
        assert_eq!(p.nu0, thz(0.1));
    }

    #[test]
    fn dispersionless_pair_frequency_match() {
        let opts = MatchOptions::default();
        let s = match_frequency(&flat(2.449), &flat(3.0), thz(0.7), &opts).unwrap();
        assert!(s.freq_residual_thz < 2.0 * opts.solver.tol_thz);
        assert!(s.ce_2 > s.ce_1);
        assert_eq!(s.profile_terms, None);
    }

    #[test]
    fn swapping_liquids_mirrors_solution() {
        let (a, w) = (alcohol(5.0), water_like());
        let opts = MatchOptions::default();
        let s = match_frequency(&a, &w, thz(0.7), &opts).unwrap();
        let t = match_frequency(&w, &a, thz(0.7), &opts).unwrap();
        assert_eq!((s.ce_1, s.ce_2), (t.ce_2, t.ce_1));
        assert_eq!(s.nu0, t.nu0);
        assert_eq!(s.profile_residual().unwrap(), -t.profile_residual().unwrap());
    }

    #[test]
    fn unreachable_liquid_is_named() {
        let neat = Complex64::new(-0.5, 0.0);
        let odd: LiquidModel = TabulatedModel::new("odd", vec![0.1, 3.0], vec![neat, neat]).unwrap().into();
        let err = match_frequency(&water_like(), &odd, thz(0.7), &MatchOptions::default()).unwrap_err();
        assert!(err.to_string().contains("odd"));
    }

    #[test]
    fn alcohol_pair_has_single_profile_root() {
        let (a, b) = (alcohol(5.0), alcohol(10.0));
        let s = match_profiles(&a, &b, &MatchOptions::default()).unwrap();
        assert!(s.profile_matched && !s.degenerate);
        assert!(s.other_roots.is_empty());
        assert!(s.profile_residual().unwrap().abs() < 1e-8);
        assert!((s.nu0.thz() - 0.5624).abs() < 1e-3, "{}", s.nu0);
    }

    #[test]
    fn water_and_slow_alcohol_cannot_share_a_profile() {
        let slow: LiquidModel = DebyeModel::new("slow-alcohol", 2.0, vec![
            DebyeTerm { strength: 15.0, tau_ps: 290.0 },
            DebyeTerm { strength: 0.5, tau_ps: 10.0 },
            DebyeTerm { strength: 0.4, tau_ps: 0.35 },
        ])
        .unwrap()
        .into();
        let err = match_profiles(&water_like(), &slow, &MatchOptions::default()).unwrap_err();
        assert!(err.to_string().contains("no profile-matched impostoron in range"));
    }

    proptest! {
        #[test]
        fn target_frequency_round_trip(nu in 0.2f64..2.5) {
            let w = water_like();
            let c = ce_for_nu0(&w, thz(nu)).unwrap();
            let opts = SolverOptions::default().with_bracket(0.05, 5.0);
            let res = find_nu0(&DopedLiquid::new(w, c), &opts).unwrap();
            prop_assert!((res.nu0.thz() - nu).abs() < 10.0 * opts.tol_thz);
        }
    }
}
