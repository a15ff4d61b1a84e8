//! Projective spin measurements on sub-ensembles and the post-measurement
//! mixtures they leave behind.
//!
//! An ensemble is split evenly across the measured axes (z, y, x for a
//! complete measurement; z, y for a partial one; z alone for a single-axis
//! one). Each sub-ensemble is dephased in its measurement basis and the
//! resulting states are averaged with equal weights.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::purify_b::purify_b;
use crate::qubit::{Axis, BlochVector, DensityMatrix, PureState};
use crate::random::rng_from_seed;
use crate::scalar::{c, c_re, half, two, Real};
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

/// Which axes are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Complete,
    Partial,
    Single,
}

impl Mode {
    /// Measured axes, in record order.
    pub fn axes(self) -> &'static [Axis] {
        match self {
            Mode::Complete => &[Axis::Z, Axis::Y, Axis::X],
            Mode::Partial => &[Axis::Z, Axis::Y],
            Mode::Single => &[Axis::Z],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Complete => "complete",
            Mode::Partial => "partial",
            Mode::Single => "single",
        }
    }
}

fn check_probability<T: Real>(what: &'static str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidProbability {
            what,
            value: p.as_f64(),
        });
    }
    Ok(())
}

/// Probabilities of `|+⟩_z`, `|+⟩_y`, `|+⟩_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompleteRecord<T> {
    pub p1: T,
    pub p2: T,
    pub p3: T,
}

impl<T: Real> CompleteRecord<T> {
    pub fn new(p1: T, p2: T, p3: T) -> Result<Self> {
        check_probability("p1", p1)?;
        check_probability("p2", p2)?;
        check_probability("p3", p3)?;
        Ok(CompleteRecord { p1, p2, p3 })
    }

    /// `(2p₁−1)² + (2p₂−1)² + (2p₃−1)² − 1`; zero for records of pure states.
    pub fn sphere_residual(&self) -> T {
        let s = |p: T| two::<T>() * p - T::one();
        s(self.p1).powi(2) + s(self.p2).powi(2) + s(self.p3).powi(2) - T::one()
    }
}

/// Probabilities of `|+⟩_z` and `|+⟩_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialRecord<T> {
    pub p1: T,
    pub p2: T,
}

impl<T: Real> PartialRecord<T> {
    pub fn new(p1: T, p2: T) -> Result<Self> {
        check_probability("p1", p1)?;
        check_probability("p2", p2)?;
        Ok(PartialRecord { p1, p2 })
    }

    /// `A₁ = 2p₁ − 1 = 2⟨S_z⟩`.
    pub fn a1(&self) -> T {
        two::<T>() * self.p1 - T::one()
    }

    /// `A₂ = 2p₂ − 1 = 2⟨S_y⟩`.
    pub fn a2(&self) -> T {
        two::<T>() * self.p2 - T::one()
    }

    /// `1 − A₁² − A₂²`, i.e. `4⟨S_x⟩²` for a pure state.
    pub fn radicand(&self) -> T {
        T::one() - self.a1().powi(2) - self.a2().powi(2)
    }
}

/// Probability of `|+⟩_z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleRecord<T> {
    pub p1: T,
}

impl<T: Real> SingleRecord<T> {
    pub fn new(p1: T) -> Result<Self> {
        check_probability("p1", p1)?;
        Ok(SingleRecord { p1 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Record<T> {
    Complete(CompleteRecord<T>),
    Partial(PartialRecord<T>),
    Single(SingleRecord<T>),
}

impl<T: Real> Record<T> {
    pub fn mode(&self) -> Mode {
        match self {
            Record::Complete(_) => Mode::Complete,
            Record::Partial(_) => Mode::Partial,
            Record::Single(_) => Mode::Single,
        }
    }

    /// The equal-weight post-measurement mixture for this record.
    pub fn mixture(&self) -> DensityMatrix<T> {
        match self {
            Record::Complete(r) => msmt_state_from_record(r),
            Record::Partial(r) => msmt_state_partial(r),
            Record::Single(r) => msmt_state_single(r),
        }
    }

    pub fn from_state(psi: &PureState<T>, mode: Mode) -> Self {
        let full = probabilities_complete(psi);
        match mode {
            Mode::Complete => Record::Complete(full),
            Mode::Partial => Record::Partial(PartialRecord {
                p1: full.p1,
                p2: full.p2,
            }),
            Mode::Single => Record::Single(SingleRecord { p1: full.p1 }),
        }
    }

    fn from_axis_probabilities(mode: Mode, p: &[T]) -> Result<Self> {
        Ok(match mode {
            Mode::Complete => Record::Complete(CompleteRecord::new(p[0], p[1], p[2])?),
            Mode::Partial => Record::Partial(PartialRecord::new(p[0], p[1])?),
            Mode::Single => Record::Single(SingleRecord::new(p[0])?),
        })
    }
}

/// Ensemble size and sampling seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n_copies: u64,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(n_copies: u64, seed: u64) -> Result<Self> {
        if n_copies == 0 {
            return Err(Error::InvalidEnsemble("n_copies must be at least 1".into()));
        }
        Ok(EnsembleConfig { n_copies, seed })
    }

    /// Sub-ensemble size for `mode`; the ensemble must split evenly.
    pub fn sub_ensemble(&self, mode: Mode) -> Result<u64> {
        let k = mode.axes().len() as u64;
        if !self.n_copies.is_multiple_of(k) {
            return Err(Error::InvalidEnsemble(format!(
                "n_copies = {} does not split into {k} equal sub-ensembles",
                self.n_copies
            )));
        }
        Ok(self.n_copies / k)
    }
}

/// `|⟨+_axis|ψ⟩|²`.
pub fn probability_plus<T: Real>(psi: &PureState<T>, axis: Axis) -> T {
    PureState::axis_state(axis, true).overlap(psi)
}

pub fn probabilities_complete<T: Real>(psi: &PureState<T>) -> CompleteRecord<T> {
    let clamp = |p: T| p.max(T::zero()).min(T::one());
    CompleteRecord {
        p1: clamp(probability_plus(psi, Axis::Z)),
        p2: clamp(probability_plus(psi, Axis::Y)),
        p3: clamp(probability_plus(psi, Axis::X)),
    }
}

/// Non-selective measurement along `axis`: `p|+⟩⟨+| + (1 − p)|−⟩⟨−|`.
pub fn dephase<T: Real>(psi: &PureState<T>, axis: Axis) -> DensityMatrix<T> {
    let p = probability_plus(psi, axis);
    let plus = PureState::axis_state(axis, true).to_density().matrix();
    let minus = PureState::axis_state(axis, false).to_density().matrix();
    let m = plus.scale(c_re(p)) + minus.scale(c_re(T::one() - p));
    DensityMatrix::from_matrix_with_tol(&m, T::invariant_tol()).expect("mixture of states")
}

fn equal_mix<T: Real>(states: &[DensityMatrix<T>]) -> DensityMatrix<T> {
    let w = c_re(T::one() / T::lit(states.len() as f64));
    let m = states
        .iter()
        .fold(Mat2::zero(), |acc, s| acc + s.matrix().scale(w));
    DensityMatrix::from_matrix_with_tol(&m, T::invariant_tol()).expect("mixture of states")
}

/// `(ρ_z + ρ_y + ρ_x)/3` built from the three dephasings of `ψ`.
pub fn msmt_state_complete<T: Real>(psi: &PureState<T>) -> DensityMatrix<T> {
    let parts: Vec<_> = Mode::Complete
        .axes()
        .iter()
        .map(|&a| dephase(psi, a))
        .collect();
    equal_mix(&parts)
}

/// The complete-measurement mixture written in terms of the record:
///
/// ```text
/// (1/6) [[2p₁ + 2, (2p₃ − 1) + i(1 − 2p₂)], [c.c., 4 − 2p₁]]
/// ```
///
/// Valid for every record, including sampled ones that are off the sphere.
pub fn msmt_state_from_record<T: Real>(rec: &CompleteRecord<T>) -> DensityMatrix<T> {
    let sixth = T::one() / T::lit(6.0);
    let m00 = (two::<T>() * rec.p1 + two::<T>()) * sixth;
    let m01 = c(
        (two::<T>() * rec.p3 - T::one()) * sixth,
        (T::one() - two::<T>() * rec.p2) * sixth,
    );
    DensityMatrix::new_with_tol(m00, m01, T::invariant_tol()).expect("record mixture is a state")
}

/// Both recoveries of the initial state from a complete-measurement mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct Reconstruction<T: Real> {
    /// Eigenvector of the mixture for eigenvalue 2/3.
    pub eigenvector: PureState<T>,
    /// Top eigenvector of `3ρ − I`.
    pub inversion: PureState<T>,
    /// `1 − |⟨eigenvector|inversion⟩|²`.
    pub path_gap: T,
}

/// Eigenvalue gate for [`reconstruct_complete`].
pub const MIXTURE_EIGENVALUE_TOL: f64 = 1e-8;

/// Recovers `ψ` from `(I + |ψ⟩⟨ψ|)/3` by two routes.
pub fn reconstruct_complete_both<T: Real>(
    rho_msmt: &DensityMatrix<T>,
) -> Result<Reconstruction<T>> {
    let spectrum = rho_msmt.eigen();
    let gate = T::lit(MIXTURE_EIGENVALUE_TOL).max(T::invariant_tol());
    let third = T::one() / T::lit(3.0);
    if (spectrum.lambda_large - two::<T>() * third).abs() > gate
        || (spectrum.lambda_small - third).abs() > gate
    {
        return Err(Error::NotAMeasurementMixture {
            large: spectrum.lambda_large.as_f64(),
            small: spectrum.lambda_small.as_f64(),
        });
    }
    let three = T::lit(3.0);
    let inverted = rho_msmt.matrix().scale(c_re(three)) - Mat2::identity();
    // The gate bounds the eigenvalues of 3ρ − I to within 3·gate of (1, 0).
    let rho_ini = DensityMatrix::from_matrix_with_tol(&inverted, three * three * gate)?;
    let inversion = rho_ini.eigen().vec_large;
    let eigenvector = spectrum.vec_large;
    let path_gap = T::one() - eigenvector.overlap(&inversion);
    Ok(Reconstruction {
        eigenvector,
        inversion,
        path_gap,
    })
}

/// Initial state from a complete-measurement mixture: the eigenvector for
/// the eigenvalue 2/3.
pub fn reconstruct_complete<T: Real>(rho_msmt: &DensityMatrix<T>) -> Result<PureState<T>> {
    reconstruct_complete_both(rho_msmt).map(|r| r.eigenvector)
}

/// Best pure-state estimate from a (possibly sampled) complete record: the
/// closest pure state to the record's mixture.
pub fn reconstruct_estimate<T: Real>(rec: &CompleteRecord<T>) -> Result<PureState<T>> {
    purify_b(&msmt_state_from_record(rec)).map(|r| r.pure_state())
}

/// Two-axis mixture
///
/// ```text
/// [[(2p₁ + 1)/4, i(1 − 2p₂)/4], [−i(1 − 2p₂)/4, (3 − 2p₁)/4]]
/// ```
pub fn msmt_state_partial<T: Real>(rec: &PartialRecord<T>) -> DensityMatrix<T> {
    let quarter = T::lit(0.25);
    let m00 = (two::<T>() * rec.p1 + T::one()) * quarter;
    let m01 = c(T::zero(), (T::one() - two::<T>() * rec.p2) * quarter);
    DensityMatrix::new_with_tol(m00, m01, T::invariant_tol()).expect("record mixture is a state")
}

/// `(ρ_z + ρ_y)/2` from the dephasings of `ψ`.
pub fn msmt_state_partial_from_state<T: Real>(psi: &PureState<T>) -> DensityMatrix<T> {
    equal_mix(&[dephase(psi, Axis::Z), dephase(psi, Axis::Y)])
}

/// `diag(p₁, 1 − p₁)`.
pub fn msmt_state_single<T: Real>(rec: &SingleRecord<T>) -> DensityMatrix<T> {
    DensityMatrix::diag(rec.p1).expect("p1 validated on construction")
}

/// The two pure states compatible with a two-axis record: Bloch vectors
/// `(±√(1 − A₁² − A₂²), A₂, A₁)`, the `+` root first.
pub fn protocol_a_candidates_partial<T: Real>(
    rec: &PartialRecord<T>,
) -> Result<(PureState<T>, PureState<T>)> {
    let radicand = rec.radicand();
    if radicand < -T::invariant_tol() {
        return Err(Error::InfeasibleRecord {
            radicand: radicand.as_f64(),
        });
    }
    let x = radicand.max(T::zero()).sqrt();
    let make = |x: T| {
        PureState::from_bloch_direction(&BlochVector::new(x, rec.a2(), rec.a1()))
            .expect("feasible record has a unit Bloch vector")
    };
    Ok((make(x), make(-x)))
}

/// `⟨S_x⟩₊ = ½√(1 − A₁² − A₂²)`, the magnitude of the unmeasured spin component.
pub fn sx_magnitude<T: Real>(rec: &PartialRecord<T>) -> T {
    half::<T>() * rec.radicand().max(T::zero()).sqrt()
}

/// Finite-ensemble measurement of `ψ`: each axis gets `n_copies / k`
/// copies and its `|+⟩` count is Binomial(`n_copies / k`, `p_axis`), drawn
/// in record order from one stream seeded with `cfg.seed`.
pub fn sample_ensemble<T: Real>(
    psi: &PureState<T>,
    cfg: &EnsembleConfig,
    mode: Mode,
) -> Result<Record<T>> {
    let m = cfg.sub_ensemble(mode)?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut estimates = Vec::with_capacity(3);
    for &axis in mode.axes() {
        let p = probability_plus(psi, axis).as_f64().clamp(0.0, 1.0);
        let dist = Binomial::new(m, p).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let count = dist.sample(&mut rng);
        estimates.push(T::lit(count as f64 / m as f64));
    }
    Record::from_axis_probabilities(mode, &estimates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::fidelity;
    use crate::random::{haar_random_pure, rng_from_seed};

    const EXACT: f64 = 1e-12;

    fn s08() -> PureState<f64> {
        PureState::new(c(0.8f64.sqrt(), 0.0), c(0.2f64.sqrt(), 0.0)).unwrap()
    }

    fn dm(m00: f64, re: f64, im: f64) -> DensityMatrix<f64> {
        DensityMatrix::new(m00, c(re, im)).unwrap()
    }

    #[test]
    fn complete_probabilities() {
        let r = probabilities_complete(&PureState::<f64>::zero());
        assert!(
            (r.p1 - 1.0).abs() < EXACT && (r.p2 - 0.5).abs() < EXACT && (r.p3 - 0.5).abs() < EXACT
        );

        // p3 = |(√0.8 + √0.2)/√2|² = (1 + 2·0.4)/2
        let r = probabilities_complete(&s08());
        assert!((r.p1 - 0.8).abs() < EXACT);
        assert!((r.p2 - 0.5).abs() < EXACT);
        assert!((r.p3 - 0.9).abs() < EXACT);
        assert!(r.sphere_residual().abs() < EXACT);

        let r = probabilities_complete(&PureState::<f64>::axis_state(Axis::Y, true));
        assert!(
            (r.p1 - 0.5).abs() < EXACT && (r.p2 - 1.0).abs() < EXACT && (r.p3 - 0.5).abs() < EXACT
        );
    }

    #[test]
    fn dephasing_examples() {
        let zero = PureState::<f64>::zero();
        assert!(dephase(&zero, Axis::Z).max_abs_diff(&DensityMatrix::diag(1.0).unwrap()) < EXACT);
        assert!(dephase(&zero, Axis::X).max_abs_diff(&DensityMatrix::maximally_mixed()) < EXACT);
        // 0.9|+⟩_x⟨+| + 0.1|−⟩_x⟨−| = [[0.5, 0.4], [0.4, 0.5]]
        assert!(dephase(&s08(), Axis::X).max_abs_diff(&dm(0.5, 0.4, 0.0)) < EXACT);
    }

    #[test]
    fn dephased_state_is_diagonal_in_axis_basis() {
        let mut rng = rng_from_seed(6);
        for _ in 0..100 {
            let psi: PureState<f64> = haar_random_pure(&mut rng);
            for axis in Axis::ALL {
                let rho = dephase(&psi, axis);
                let plus = PureState::<f64>::axis_state(axis, true);
                let minus = PureState::<f64>::axis_state(axis, false);
                let m = rho.matrix();
                let v = [minus.a0(), minus.a1()];
                let mv = [
                    m.0[0][0] * v[0] + m.0[0][1] * v[1],
                    m.0[1][0] * v[0] + m.0[1][1] * v[1],
                ];
                let off = plus.a0().conj() * mv[0] + plus.a1().conj() * mv[1];
                assert!(off.norm() < EXACT);
            }
        }
    }

    #[test]
    fn complete_mixture_examples() {
        let r = msmt_state_complete(&PureState::<f64>::zero());
        assert!(r.max_abs_diff(&DensityMatrix::diag(2.0 / 3.0).unwrap()) < EXACT);
        let r = msmt_state_complete(&s08());
        assert!(r.max_abs_diff(&dm(0.6, 2.0 / 15.0, 0.0)) < EXACT);
    }

    #[test]
    fn record_matrix_matches_dephasing_route() {
        let mut rng = rng_from_seed(7);
        for _ in 0..1000 {
            let psi: PureState<f64> = haar_random_pure(&mut rng);
            let via_record = msmt_state_from_record(&probabilities_complete(&psi));
            let via_dephase = msmt_state_complete(&psi);
            assert!(via_record.max_abs_diff(&via_dephase) < EXACT);
            let rho = psi.to_density();
            let identity_form = dm(
                (1.0 + rho.m00()) / 3.0,
                rho.m01().re / 3.0,
                rho.m01().im / 3.0,
            );
            assert!(via_dephase.max_abs_diff(&identity_form) < EXACT);
            assert!((fidelity(&via_dephase, &rho) - 2.0 / 3.0).abs() < EXACT);
        }
    }

    #[test]
    fn reconstruction_examples() {
        let psi = reconstruct_complete(&DensityMatrix::<f64>::diag(2.0 / 3.0).unwrap()).unwrap();
        assert!(psi.max_abs_diff(&PureState::zero()) < 1e-12);

        let r = reconstruct_complete_both(&msmt_state_complete(&s08())).unwrap();
        assert!(r.eigenvector.max_abs_diff(&s08()) < 1e-10);
        assert!(r.inversion.max_abs_diff(&s08()) < 1e-10);
        assert!(r.path_gap.abs() < 1e-10);

        assert!(matches!(
            reconstruct_complete(&DensityMatrix::<f64>::diag(0.9).unwrap()),
            Err(Error::NotAMeasurementMixture { .. })
        ));
    }

    #[test]
    fn reconstruction_tolerates_gate_slack() {
        let r =
            reconstruct_complete(&DensityMatrix::<f64>::diag(2.0 / 3.0 + 5e-9).unwrap()).unwrap();
        assert!(r.max_abs_diff(&PureState::zero()) < 1e-12);
        assert!(
            reconstruct_complete(&DensityMatrix::<f64>::diag(2.0 / 3.0 + 5e-8).unwrap()).is_err()
        );
    }

    #[test]
    fn partial_mixture_examples() {
        let r = msmt_state_partial(&PartialRecord::new(1.0, 0.5).unwrap());
        assert!(r.max_abs_diff(&DensityMatrix::diag(0.75).unwrap()) < EXACT);
        let r = msmt_state_partial(&PartialRecord::new(0.5, 0.5).unwrap());
        assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed()) < EXACT);
        // Upper-right entry i(1 − 2·0.7)/4 = −0.1i.
        let r = msmt_state_partial(&PartialRecord::new(0.9, 0.7).unwrap());
        assert!(r.max_abs_diff(&dm(0.7, 0.0, -0.1)) < EXACT);
        assert!((r.m10() - c(0.0, 0.1)).norm() < EXACT);
    }

    #[test]
    fn partial_mixture_matches_dephasing_route() {
        let mut rng = rng_from_seed(12);
        for _ in 0..1000 {
            let psi: PureState<f64> = haar_random_pure(&mut rng);
            let rec = match Record::from_state(&psi, Mode::Partial) {
                Record::Partial(r) => r,
                _ => unreachable!(),
            };
            let a = msmt_state_partial(&rec);
            let b = msmt_state_partial_from_state(&psi);
            assert!(a.max_abs_diff(&b) < EXACT);
            assert!(a.m01().re.abs() < EXACT);
        }
    }

    #[test]
    fn single_mixture_examples() {
        for (p, expected) in [(1.0, 1.0), (0.5, 0.5), (0.8, 0.8)] {
            let r = msmt_state_single(&SingleRecord::new(p).unwrap());
            assert_eq!(r, DensityMatrix::diag(expected).unwrap());
        }
        assert!(SingleRecord::new(1.1).is_err());
    }

    #[test]
    fn candidates_examples() {
        let (a, b) = protocol_a_candidates_partial(&PartialRecord::new(1.0, 0.5).unwrap()).unwrap();
        assert!(a.max_abs_diff(&PureState::zero()) < EXACT);
        assert_eq!(a, b);

        let (a, b) = protocol_a_candidates_partial(&PartialRecord::new(0.9, 0.7).unwrap()).unwrap();
        let x = 2.0 * 0.05f64.sqrt();
        for (s, sign) in [(a, 1.0), (b, -1.0)] {
            let v = s.bloch();
            assert!(
                (v.x - sign * x).abs() < EXACT
                    && (v.y - 0.4).abs() < EXACT
                    && (v.z - 0.8).abs() < EXACT
            );
        }

        assert!(matches!(
            protocol_a_candidates_partial(&PartialRecord::new(1.0, 1.0).unwrap()),
            Err(Error::InfeasibleRecord { .. })
        ));
    }

    #[test]
    fn one_candidate_is_the_initial_state() {
        let mut rng = rng_from_seed(13);
        for _ in 0..1000 {
            let psi: PureState<f64> = haar_random_pure(&mut rng);
            let rec = PartialRecord::new(
                probability_plus(&psi, Axis::Z),
                probability_plus(&psi, Axis::Y),
            )
            .unwrap();
            let (a, b) = protocol_a_candidates_partial(&rec).unwrap();
            let best = a.overlap(&psi).max(b.overlap(&psi));
            assert!((best - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn ensemble_config_validation() {
        assert!(EnsembleConfig::new(0, 1).is_err());
        let cfg = EnsembleConfig::new(10, 1).unwrap();
        assert!(cfg.sub_ensemble(Mode::Complete).is_err());
        assert_eq!(cfg.sub_ensemble(Mode::Partial).unwrap(), 5);
        assert_eq!(cfg.sub_ensemble(Mode::Single).unwrap(), 10);
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = EnsembleConfig::new(3000, 42).unwrap();
        let a = sample_ensemble(&s08(), &cfg, Mode::Complete).unwrap();
        let b = sample_ensemble(&s08(), &cfg, Mode::Complete).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_concentrates() {
        let cfg = EnsembleConfig::new(3_000_000, 1).unwrap();
        match sample_ensemble(&PureState::<f64>::zero(), &cfg, Mode::Complete).unwrap() {
            Record::Complete(r) => assert!(r.p1 >= 0.999 && r.p1 <= 1.0),
            _ => unreachable!(),
        }
        // Binomial std-dev of p̂₁ at n/3 = 10⁶ copies is √(0.16/10⁶).
        let sigma = (0.16f64 / 1e6).sqrt();
        let hits = (0..100)
            .filter(|&seed| {
                let cfg = EnsembleConfig::new(3_000_000, seed).unwrap();
                match sample_ensemble(&s08(), &cfg, Mode::Complete).unwrap() {
                    Record::Complete(r) => (r.p1 - 0.8).abs() <= 3.0 * sigma,
                    _ => unreachable!(),
                }
            })
            .count();
        assert!(hits >= 99, "{hits}/100 within 3σ");
    }

    #[test]
    fn estimate_from_exact_record_is_exact() {
        let rec = probabilities_complete(&s08());
        let est = reconstruct_estimate(&rec).unwrap();
        assert!(est.overlap(&s08()) > 1.0 - 1e-12);
    }
}
