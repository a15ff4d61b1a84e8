//! Fidelity bookkeeping for the three measurement scenarios.
//!
//! Every fidelity is obtained twice: once by building the relevant states
//! and taking `tr(σρ)` directly (`values`), and once from its closed form in
//! the measurement record (`closed_form`). The two must agree; a gap signals
//! a transcription error in one of the routes.
//!
//! | scenario | fidelities |
//! |----------|-----------|
//! | complete | `f_msmt` (mixture), `f_a` (probability-preserving purification, averaged over four phases), `f_b` (closest pure state) |
//! | partial  | `f1` (mixture), `f2a`/`f2b` (the two probability-preserving candidates), `f2av`, `f3` (closest pure state) |
//! | single   | `f4` (mixture), `f5av` (probability-preserving, phase-averaged), `f6` (closest pure state) |

use crate::error::{Error, Result};
use crate::measurement::{
    msmt_state_complete, msmt_state_partial, msmt_state_single, probabilities_complete,
    protocol_a_candidates_partial, sx_magnitude, CompleteRecord, Mode, PartialRecord, SingleRecord,
};
use crate::purify_a::{purify_a_in_basis, purify_a_z};
use crate::purify_b::purify_b;
use crate::qubit::{fidelity, PureState};
use crate::random::{derive_seed, haar_random_pure_seeded};
use crate::scalar::{half, two, Real};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FidelityName {
    #[serde(rename = "f_msmt")]
    FMsmt,
    #[serde(rename = "f_a")]
    FA,
    #[serde(rename = "f_b")]
    FB,
    #[serde(rename = "f1")]
    F1,
    #[serde(rename = "f2a")]
    F2a,
    #[serde(rename = "f2b")]
    F2b,
    #[serde(rename = "f2av")]
    F2av,
    #[serde(rename = "f3")]
    F3,
    #[serde(rename = "f4")]
    F4,
    #[serde(rename = "f5av")]
    F5av,
    #[serde(rename = "f6")]
    F6,
}

impl FidelityName {
    pub fn as_str(self) -> &'static str {
        match self {
            FidelityName::FMsmt => "f_msmt",
            FidelityName::FA => "f_a",
            FidelityName::FB => "f_b",
            FidelityName::F1 => "f1",
            FidelityName::F2a => "f2a",
            FidelityName::F2b => "f2b",
            FidelityName::F2av => "f2av",
            FidelityName::F3 => "f3",
            FidelityName::F4 => "f4",
            FidelityName::F5av => "f5av",
            FidelityName::F6 => "f6",
        }
    }

    pub fn for_mode(mode: Mode) -> &'static [FidelityName] {
        use FidelityName::*;
        match mode {
            Mode::Complete => &[FMsmt, FA, FB],
            Mode::Partial => &[F1, F2a, F2b, F2av, F3],
            Mode::Single => &[F4, F5av, F6],
        }
    }
}

/// Relations checked on a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `f_msmt = 2/3`
    MsmtTwoThirds,
    /// `f_a = 2/3` at every sampled phase
    ATwoThirds,
    /// `f_b = 1`
    BUnity,
    /// `f_b ≥ f_a`
    BGeA,
    /// `f3 ≥ f1`
    F3GeF1,
    /// `f3 ≥ f2av`
    F3GeF2av,
    /// `2·f3 − 1 = √(2·f2av − 1)`
    F3F2avIdentity,
    /// `f6 ≥ f4`
    F6GeF4,
    /// `f6 ≥ f5av`
    F6GeF5av,
    /// `f5av = f4`
    F5avEqF4,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::MsmtTwoThirds => "msmt_two_thirds",
            Check::ATwoThirds => "a_two_thirds",
            Check::BUnity => "b_unity",
            Check::BGeA => "b_ge_a",
            Check::F3GeF1 => "f3_ge_f1",
            Check::F3GeF2av => "f3_ge_f2av",
            Check::F3F2avIdentity => "f3_f2av_identity",
            Check::F6GeF4 => "f6_ge_f4",
            Check::F6GeF5av => "f6_ge_f5av",
            Check::F5avEqF4 => "f5av_eq_f4",
        }
    }

    pub fn for_mode(mode: Mode) -> &'static [Check] {
        use Check::*;
        match mode {
            Mode::Complete => &[MsmtTwoThirds, ATwoThirds, BUnity, BGeA],
            Mode::Partial => &[F3GeF1, F3GeF2av, F3F2avIdentity],
            Mode::Single => &[F6GeF4, F6GeF5av, F5avEqF4],
        }
    }

    /// Identities are reported with slack `−|residual|`.
    pub fn is_identity(self) -> bool {
        matches!(
            self,
            Check::MsmtTwoThirds
                | Check::ATwoThirds
                | Check::BUnity
                | Check::F3F2avIdentity
                | Check::F5avEqF4
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict<T> {
    pub check: Check,
    /// `lhs − rhs` for inequalities, `−|residual|` for identities.
    pub slack: T,
    pub holds: bool,
}

/// Named fidelities for one initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport<T: Real> {
    pub scenario: Mode,
    /// `tr(σρ)` evaluated on the constructed states.
    pub values: BTreeMap<FidelityName, T>,
    /// The same quantities from their closed forms in the record.
    pub closed_form: BTreeMap<FidelityName, T>,
    /// `|⟨S_x⟩|` of the initial state (partial scenario).
    pub sx_abs: Option<T>,
    /// max − min of `f_a` over the sampled phases (complete scenario).
    pub phase_spread: Option<T>,
    /// Single-axis record with `p₁ = 1/2`: no unique closest pure state.
    pub degenerate: bool,
}

impl<T: Real> FidelityReport<T> {
    fn new(scenario: Mode) -> Self {
        FidelityReport {
            scenario,
            values: BTreeMap::new(),
            closed_form: BTreeMap::new(),
            sx_abs: None,
            phase_spread: None,
            degenerate: false,
        }
    }

    fn put(&mut self, name: FidelityName, direct: T, closed: T) {
        self.values.insert(name, direct);
        self.closed_form.insert(name, closed);
    }

    pub fn get(&self, name: FidelityName) -> Option<T> {
        self.values.get(&name).copied()
    }

    fn req(&self, name: FidelityName) -> T {
        self.get(name).unwrap_or_else(|| {
            panic!(
                "{} missing from {} report",
                name.as_str(),
                self.scenario.as_str()
            )
        })
    }

    /// Largest disagreement between the direct and closed-form routes.
    pub fn route_gap(&self) -> T {
        self.values
            .iter()
            .filter_map(|(k, v)| self.closed_form.get(k).map(|c| (*v - *c).abs()))
            .fold(T::zero(), T::max)
    }

    pub fn verdicts(&self) -> Vec<Verdict<T>> {
        verify_inequalities(self)
    }
}

impl<T: Real + Serialize> Serialize for FidelityReport<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a, T> {
            scenario: Mode,
            values: &'a BTreeMap<FidelityName, T>,
            closed_form: &'a BTreeMap<FidelityName, T>,
            #[serde(skip_serializing_if = "Option::is_none")]
            sx_abs: Option<T>,
            #[serde(skip_serializing_if = "Option::is_none")]
            phase_spread: Option<T>,
            degenerate: bool,
            route_gap: T,
            verdicts: BTreeMap<Check, Verdict<T>>,
        }
        View {
            scenario: self.scenario,
            values: &self.values,
            closed_form: &self.closed_form,
            sx_abs: self.sx_abs,
            phase_spread: self.phase_spread,
            degenerate: self.degenerate,
            route_gap: self.route_gap(),
            verdicts: self.verdicts().into_iter().map(|v| (v.check, v)).collect(),
        }
        .serialize(s)
    }
}

fn two_thirds<T: Real>() -> T {
    two::<T>() / T::lit(3.0)
}

/// Complete three-axis measurement of `ψ`.
pub fn chain_complete<T: Real>(psi: &PureState<T>) -> Result<FidelityReport<T>> {
    let rho_ini = psi.to_density();
    let rho_msmt = msmt_state_complete(psi);
    let mut report = FidelityReport::new(Mode::Complete);

    report.put(
        FidelityName::FMsmt,
        fidelity(&rho_msmt, &rho_ini),
        two_thirds(),
    );

    let spectrum = rho_msmt.eigen();
    let mut f_a = Vec::with_capacity(4);
    for k in 0..4 {
        let phi = T::FRAC_PI_2() * T::lit(k as f64);
        let purified = purify_a_in_basis(
            spectrum.lambda_large,
            phi,
            &spectrum.vec_large,
            &spectrum.vec_small,
        )?;
        f_a.push(fidelity(&purified, &rho_ini));
    }
    let lo = f_a.iter().copied().fold(T::infinity(), T::min);
    let hi = f_a.iter().copied().fold(T::neg_infinity(), T::max);
    let mean = f_a.iter().copied().fold(T::zero(), |a, b| a + b) / T::lit(f_a.len() as f64);
    report.put(FidelityName::FA, mean, two_thirds());
    report.phase_spread = Some(hi - lo);

    let b = purify_b(&rho_msmt)?;
    report.put(FidelityName::FB, fidelity(&b.state, &rho_ini), T::one());
    Ok(report)
}

/// Two-axis (z, y) measurement of `ψ`.
///
/// Fails with [`Error::DegenerateState`] for `ψ = |±⟩_x`, whose partial
/// mixture is `I/2`.
pub fn chain_partial<T: Real>(psi: &PureState<T>) -> Result<FidelityReport<T>> {
    let full = probabilities_complete(psi);
    let rec = PartialRecord::new(full.p1, full.p2)?;
    let rho_ini = psi.to_density();
    let phi_msmt = msmt_state_partial(&rec);
    let (a1, a2) = (rec.a1(), rec.a2());
    let s_sq = a1 * a1 + a2 * a2;
    let s = s_sq.sqrt();
    let quarter = T::lit(0.25);
    let mut report = FidelityReport::new(Mode::Partial);

    report.put(
        FidelityName::F1,
        fidelity(&phi_msmt, &rho_ini),
        quarter * (s_sq + two::<T>()),
    );

    // The candidate whose ⟨S_x⟩ sign matches ψ reproduces ψ.
    let (plus, minus) = protocol_a_candidates_partial(&rec)?;
    let (right, wrong) = if psi.bloch().x >= T::zero() {
        (plus, minus)
    } else {
        (minus, plus)
    };
    let sx = sx_magnitude(&rec);
    let sx_sq = sx * sx;
    let f2a = fidelity(&right.to_density(), &rho_ini);
    let f2b = fidelity(&wrong.to_density(), &rho_ini);
    report.put(FidelityName::F2a, f2a, T::one());
    report.put(FidelityName::F2b, f2b, T::one() - T::lit(4.0) * sx_sq);
    report.put(
        FidelityName::F2av,
        half::<T>() * (f2a + f2b),
        T::one() - two::<T>() * sx_sq,
    );
    report.sx_abs = Some(sx);

    let b = purify_b(&phi_msmt)?;
    report.put(
        FidelityName::F3,
        fidelity(&b.state, &rho_ini),
        half::<T>() * (T::one() + s),
    );
    Ok(report)
}

/// Single-axis (z) measurement of `ψ`.
///
/// At `p₁ = 1/2` the closest pure state is not unique; the report is then
/// flagged `degenerate` and `f6` is the common value `1/2`.
pub fn chain_single<T: Real>(psi: &PureState<T>) -> Result<FidelityReport<T>> {
    let p1 = probabilities_complete(psi).p1;
    let rec = SingleRecord::new(p1)?;
    let rho_ini = psi.to_density();
    let chi = msmt_state_single(&rec);
    let p2 = T::one() - p1;
    let f4_closed = p1 * p1 + p2 * p2;
    let mut report = FidelityReport::new(Mode::Single);

    report.put(FidelityName::F4, fidelity(&chi, &rho_ini), f4_closed);

    // cos(θ + φ) averages to zero over any antipodal pair of phases, so the
    // uniform phase average is exactly the mean over {0, π}.
    let f5 = [T::zero(), T::PI()]
        .iter()
        .map(|&phi| purify_a_z(p1, phi).map(|r| fidelity(&r, &rho_ini)))
        .collect::<Result<Vec<_>>>()?;
    report.put(FidelityName::F5av, half::<T>() * (f5[0] + f5[1]), f4_closed);

    match purify_b(&chi) {
        Ok(b) => report.put(FidelityName::F6, fidelity(&b.state, &rho_ini), p1.max(p2)),
        Err(Error::DegenerateState) => {
            report.degenerate = true;
            report.put(FidelityName::F6, half(), half());
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

pub fn chain<T: Real>(mode: Mode, psi: &PureState<T>) -> Result<FidelityReport<T>> {
    match mode {
        Mode::Complete => chain_complete(psi),
        Mode::Partial => chain_partial(psi),
        Mode::Single => chain_single(psi),
    }
}

/// Verdicts with the default tolerances: [`Real::invariant_tol`] for
/// inequalities and the complete-scenario identities, ten times that for the
/// square-root identity between `f3` and `f2av`.
pub fn verify_inequalities<T: Real>(report: &FidelityReport<T>) -> Vec<Verdict<T>> {
    verify_inequalities_with_tol(report, T::invariant_tol())
}

pub fn verify_inequalities_with_tol<T: Real>(
    report: &FidelityReport<T>,
    tol: T,
) -> Vec<Verdict<T>> {
    use FidelityName::*;
    Check::for_mode(report.scenario)
        .iter()
        .map(|&check| {
            let f = |n| report.req(n);
            let slack = match check {
                Check::MsmtTwoThirds => -(f(FMsmt) - two_thirds()).abs(),
                Check::ATwoThirds => {
                    let spread = report.phase_spread.unwrap_or(T::zero());
                    -((f(FA) - two_thirds()).abs() + spread)
                }
                Check::BUnity => -(f(FB) - T::one()).abs(),
                Check::BGeA => f(FB) - f(FA),
                Check::F3GeF1 => f(F3) - f(F1),
                Check::F3GeF2av => f(F3) - f(F2av),
                Check::F3F2avIdentity => {
                    let rhs = (two::<T>() * f(F2av) - T::one()).max(T::zero()).sqrt();
                    -((two::<T>() * f(F3) - T::one()) - rhs).abs()
                }
                Check::F6GeF4 => f(F6) - f(F4),
                Check::F6GeF5av => f(F6) - f(F5av),
                Check::F5avEqF4 => -(f(F5av) - f(F4)).abs(),
            };
            let allowed = if check == Check::F3F2avIdentity {
                tol * T::lit(10.0)
            } else {
                tol
            };
            Verdict {
                check,
                slack,
                holds: slack >= -allowed,
            }
        })
        .collect()
}

/// One Haar-random trial of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial<T: Real> {
    pub index: u64,
    pub seed: u64,
    pub record: CompleteRecord<T>,
    /// `None` when the state is degenerate for the scenario.
    pub report: Option<FidelityReport<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats<T> {
    pub min: T,
    pub mean: T,
    pub max: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackStats<T> {
    /// Worst (smallest) slack seen.
    pub min: T,
    pub violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloSummary<T> {
    pub scenario: Mode,
    pub trials: u64,
    pub seed: u64,
    /// Threshold the verdicts were taken at.
    pub tolerance: T,
    pub evaluated: u64,
    pub degenerate_skips: u64,
    pub fidelities: BTreeMap<FidelityName, Stats<T>>,
    pub slack: BTreeMap<Check, SlackStats<T>>,
    pub max_route_gap: T,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloRun<T: Real> {
    pub trials: Vec<Trial<T>>,
    pub summary: MonteCarloSummary<T>,
}

/// Runs `trials` Haar-random states through the scenario's chain. Trial
/// `i` uses seed `seed + i`; trials run in parallel and are reduced in index
/// order, so the output is bit-identical for a given seed.
pub fn montecarlo<T: Real>(mode: Mode, trials: u64, seed: u64) -> Result<MonteCarloRun<T>> {
    montecarlo_with_tol(mode, trials, seed, T::invariant_tol())
}

pub fn montecarlo_with_tol<T: Real>(
    mode: Mode,
    trials: u64,
    seed: u64,
    tol: T,
) -> Result<MonteCarloRun<T>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let trials_vec = (0..trials)
        .into_par_iter()
        .map(|index| {
            let trial_seed = derive_seed(seed, index);
            let psi: PureState<T> = haar_random_pure_seeded(trial_seed);
            let record = probabilities_complete(&psi);
            let report = match chain(mode, &psi) {
                Ok(r) if r.degenerate => None,
                Ok(r) => Some(r),
                Err(Error::DegenerateState) => None,
                Err(e) => return Err(e),
            };
            Ok(Trial {
                index,
                seed: trial_seed,
                record,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = summarize(mode, trials, seed, &trials_vec, tol);
    Ok(MonteCarloRun {
        trials: trials_vec,
        summary,
    })
}

fn summarize<T: Real>(
    mode: Mode,
    trials: u64,
    seed: u64,
    runs: &[Trial<T>],
    tol: T,
) -> MonteCarloSummary<T> {
    let mut sums: BTreeMap<FidelityName, (T, T, T)> = BTreeMap::new();
    let mut slack: BTreeMap<Check, SlackStats<T>> = BTreeMap::new();
    let mut evaluated = 0u64;
    let mut max_route_gap = T::zero();

    for report in runs.iter().filter_map(|t| t.report.as_ref()) {
        evaluated += 1;
        max_route_gap = max_route_gap.max(report.route_gap());
        for (&name, &v) in &report.values {
            let e = sums
                .entry(name)
                .or_insert((T::infinity(), T::zero(), T::neg_infinity()));
            e.0 = e.0.min(v);
            e.1 += v;
            e.2 = e.2.max(v);
        }
        for v in verify_inequalities_with_tol(report, tol) {
            let e = slack.entry(v.check).or_insert(SlackStats {
                min: T::infinity(),
                violations: 0,
            });
            e.min = e.min.min(v.slack);
            if !v.holds {
                e.violations += 1;
            }
        }
    }

    let n = T::lit(evaluated.max(1) as f64);
    let fidelities = sums
        .into_iter()
        .map(|(k, (lo, sum, hi))| {
            (
                k,
                Stats {
                    min: lo,
                    mean: sum / n,
                    max: hi,
                },
            )
        })
        .collect();
    let all_hold = slack.values().all(|s| s.violations == 0) && max_route_gap <= tol;
    MonteCarloSummary {
        scenario: mode,
        trials,
        seed,
        tolerance: tol,
        evaluated,
        degenerate_skips: trials - evaluated,
        fidelities,
        slack,
        max_route_gap,
        all_hold,
    }
}
