//! Fidelity-maximizing purification: the pure state with the largest
//! overlap `tr(ρσ)` with the input, which is also the pure state closest to
//! it in Hilbert–Schmidt distance.
//!
//! Writing the input as `[[a, p], [p*, 1 − a]]` with `p = |p|e^{iφ}` and the
//! candidate as `[[p̃, √(p̃(1−p̃))e^{−iθ}], [·, 1 − p̃]]`, the overlap is
//!
//! ```text
//! F(p̃, θ) = a p̃ + (1 − a)(1 − p̃) + 2|p| √(p̃(1 − p̃)) cos(θ + φ)
//! ```
//!
//! maximized at `θ = −φ` and `p̃ = ½(1 − (1 − 2a)/√(4|p|² + (1 − 2a)²))`.
//! When `p = 0` the optimum sits on a pole, and for `I/2` there is no
//! unique maximizer.

use crate::error::{Error, Result};
use crate::qubit::{fidelity, DensityMatrix, PureState};
use crate::scalar::{c_re, half, two, ComplexScalar, Real};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct ClosestPureResult<T: Real> {
    pub state: DensityMatrix<T>,
    pub p_tilde: T,
    pub theta: T,
    /// `tr(state · input)`, recomputed from the output state.
    pub f_achieved: T,
}

impl<T: Real> ClosestPureResult<T> {
    /// The output as a ket `√p̃|0⟩ + √(1 − p̃)e^{iθ}|1⟩`.
    pub fn pure_state(&self) -> PureState<T> {
        PureState::from_unnormalized(
            c_re(self.p_tilde.sqrt()),
            ComplexScalar::from_polar((T::one() - self.p_tilde).sqrt(), self.theta),
        )
        .expect("unit vector")
    }
}

/// Closest pure state to `rho`.
///
/// Fails with [`Error::DegenerateState`] when `rho` is maximally mixed.
pub fn purify_b<T: Real>(rho: &DensityMatrix<T>) -> Result<ClosestPureResult<T>> {
    let a = rho.m00();
    let p = rho.m01();
    let tol = T::exact_tol();

    let (p_tilde, theta, off) = if p.norm() < tol {
        if (a - half()).abs() < tol {
            return Err(Error::DegenerateState);
        }
        let p_tilde = if a > half() { T::one() } else { T::zero() };
        (p_tilde, T::zero(), c_re(T::zero()))
    } else {
        let d = T::one() - two::<T>() * a;
        let r = (T::lit(4.0) * p.norm_sqr() + d * d).sqrt();
        let p_tilde = (half::<T>() * (T::one() - d / r))
            .max(T::zero())
            .min(T::one());
        let theta = -p.arg();
        let off = ComplexScalar::from_polar((p_tilde * (T::one() - p_tilde)).sqrt(), -theta);
        (p_tilde, theta, off)
    };

    let state = DensityMatrix::new_with_tol(p_tilde, off, T::invariant_tol())
        .expect("closest pure state is a valid state");
    let f_achieved = fidelity(&state, rho);
    debug_assert!(
        (f_achieved - closed_form_fidelity(rho, p_tilde, theta)).abs() <= T::invariant_tol(),
        "recomputed fidelity disagrees with the closed form"
    );
    Ok(ClosestPureResult {
        state,
        p_tilde,
        theta,
        f_achieved,
    })
}

/// `F(p̃, θ)` evaluated directly from the input entries.
pub fn closed_form_fidelity<T: Real>(rho: &DensityMatrix<T>, p_tilde: T, theta: T) -> T {
    let a = rho.m00();
    let p = rho.m01();
    a * p_tilde
        + (T::one() - a) * (T::one() - p_tilde)
        + two::<T>() * p.norm() * (p_tilde * (T::one() - p_tilde)).sqrt() * (theta + p.arg()).cos()
}

/// `dF/dp̃ = 2a − 1 + |p|(1 − 2p̃)/√(p̃(1 − p̃))` at the optimal phase.
/// Only meaningful for `p ≠ 0` and `p̃ ∈ (0, 1)`.
pub fn stationarity_residual<T: Real>(rho: &DensityMatrix<T>, p_tilde: T) -> T {
    let a = rho.m00();
    two::<T>() * a - T::one()
        + rho.m01().norm() * (T::one() - two::<T>() * p_tilde)
            / (p_tilde * (T::one() - p_tilde)).sqrt()
}

/// Exhaustive maximization of `⟨ψ|ρ|ψ⟩` over a latitude–longitude grid
/// `θ_i = πi/(n_theta − 1)`, `φ_j = 2πj/n_phi` with
/// `ψ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
///
/// Rows are scanned in parallel; ties go to the smaller θ index, then the
/// smaller φ index, so the result does not depend on scheduling.
pub fn grid_oracle<T: Real>(
    rho: &DensityMatrix<T>,
    n_theta: usize,
    n_phi: usize,
) -> Result<(PureState<T>, T)> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid must be at least 2x2, got {n_theta}x{n_phi}"
        )));
    }
    let (m00, m11, m01) = (rho.m00(), rho.m11(), rho.m01());
    let thetas: Vec<T> = (0..n_theta)
        .map(|i| T::PI() * T::lit(i as f64) / T::lit((n_theta - 1) as f64))
        .collect();
    let phis: Vec<(T, T, T)> = (0..n_phi)
        .map(|j| {
            let phi = T::TAU() * T::lit(j as f64) / T::lit(n_phi as f64);
            (phi, phi.cos(), phi.sin())
        })
        .collect();

    let (best_f, bi, bj) = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let (s, c) = (thetas[i] * half()).sin_cos();
            let diag = c * c * m00 + s * s * m11;
            let cross = two::<T>() * c * s;
            let mut best = (T::neg_infinity(), i, 0usize);
            for (j, &(_, cos_phi, sin_phi)) in phis.iter().enumerate() {
                let f = diag + cross * (m01.re * cos_phi - m01.im * sin_phi);
                if f > best.0 {
                    best = (f, i, j);
                }
            }
            best
        })
        .reduce(
            || (T::neg_infinity(), usize::MAX, usize::MAX),
            |x, y| {
                if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    y
                } else {
                    x
                }
            },
        );
    debug_assert!(bi < n_theta && bj < n_phi);
    Ok((PureState::from_angles(thetas[bi], phis[bj].0), best_f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{hs_distance, BlochVector};
    use crate::random::{haar_random_pure, random_mixed, rng_from_seed};
    use crate::scalar::c;

    fn dm(m00: f64, re: f64, im: f64) -> DensityMatrix<f64> {
        DensityMatrix::new(m00, c(re, im)).unwrap()
    }

    // Frozen by brute force: maximize (1 + r cos γ)/2 over the sphere for the
    // Bloch vector (0.4, 0, 0.4), i.e. F* = (1 + 0.4√2)/2 and
    // p̃ = (1 + 1/√2)/2 (top eigenvector), checked below with grid_oracle.
    const P_TILDE_0702: f64 = 0.853_553_390_593_273_8;
    const F_0702: f64 = 0.782_842_712_474_619;

    #[test]
    fn oracle_confirms_frozen_values() {
        let rho = dm(0.7, 0.2, 0.0);
        let (_, f) = grid_oracle(&rho, 720, 1440).unwrap();
        assert!((f - F_0702).abs() < 1e-5, "oracle {f}");
        assert!(f <= F_0702 + 1e-15);
    }

    #[test]
    fn mixed_example() {
        let r = purify_b(&dm(0.7, 0.2, 0.0)).unwrap();
        assert!((r.p_tilde - P_TILDE_0702).abs() < 1e-12);
        assert!((r.f_achieved - F_0702).abs() < 1e-12);
        assert!((r.state.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_input_is_fixed_point() {
        let psi = PureState::<f64>::from_angles(1.3, 2.9);
        let rho = psi.to_density();
        let r = purify_b(&rho).unwrap();
        assert!(r.pure_state().max_abs_diff(&psi) < 1e-12);
        assert!(r.state.max_abs_diff(&rho) < 1e-12);
        assert!((r.f_achieved - 1.0).abs() < 1e-12);
        assert!((r.p_tilde - rho.m00()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_branches() {
        let r = purify_b(&DensityMatrix::<f64>::diag(0.8).unwrap()).unwrap();
        assert_eq!(r.state, DensityMatrix::diag(1.0).unwrap());
        assert!((r.f_achieved - 0.8).abs() < 1e-15);
        let r = purify_b(&DensityMatrix::<f64>::diag(0.3).unwrap()).unwrap();
        assert_eq!(r.state, DensityMatrix::diag(0.0).unwrap());
        assert!((r.f_achieved - 0.7).abs() < 1e-15);
    }

    #[test]
    fn maximally_mixed_is_degenerate() {
        assert_eq!(
            purify_b(&DensityMatrix::<f64>::maximally_mixed()),
            Err(Error::DegenerateState)
        );
        assert_eq!(purify_b(&dm(0.5, 1e-13, 0.0)), Err(Error::DegenerateState));
        // Just outside the degenerate point the p = 0 branch applies.
        assert!(purify_b(&dm(0.5 + 1e-9, 0.0, 0.0)).is_ok());
    }

    #[test]
    fn phase_follows_off_diagonal() {
        let rho = dm(0.45, -0.1, 0.25);
        let r = purify_b(&rho).unwrap();
        assert!((r.theta + rho.m01().arg()).abs() < 1e-15);
        let ratio = r.state.m01() / rho.m01();
        assert!(ratio.im.abs() < 1e-12 && ratio.re > 0.0);
    }

    #[test]
    fn matches_top_eigenvector() {
        let mut rng = rng_from_seed(31);
        for _ in 0..1000 {
            let rho: DensityMatrix<f64> = random_mixed(&mut rng);
            let r = purify_b(&rho).unwrap();
            let top = rho.eigen().vec_large.to_density();
            assert!(r.state.max_abs_diff(&top) < 1e-10);
            assert!(r.f_achieved >= rho.m00().max(rho.m11()) - 1e-12);
            assert!(r.f_achieved >= 0.5 && r.f_achieved <= 1.0 + 1e-12);
            assert!((r.f_achieved - closed_form_fidelity(&rho, r.p_tilde, r.theta)).abs() < 1e-10);
        }
    }

    #[test]
    fn stationary_at_optimum() {
        let mut rng = rng_from_seed(32);
        for _ in 0..1000 {
            let rho: DensityMatrix<f64> = random_mixed(&mut rng);
            let r = purify_b(&rho).unwrap();
            assert!(stationarity_residual(&rho, r.p_tilde).abs() < 1e-8);
        }
    }

    #[test]
    fn minimizes_hs_distance_among_grid_states() {
        let mut rng = rng_from_seed(33);
        for _ in 0..5 {
            let rho: DensityMatrix<f64> = random_mixed(&mut rng);
            let r = purify_b(&rho).unwrap();
            let d_star = hs_distance(&r.state, &rho);
            let (n_t, n_p) = (181, 360);
            let mut best = f64::INFINITY;
            for i in 0..n_t {
                for j in 0..n_p {
                    let theta = std::f64::consts::PI * i as f64 / (n_t - 1) as f64;
                    let phi = std::f64::consts::TAU * j as f64 / n_p as f64;
                    let sigma = PureState::from_angles(theta, phi).to_density();
                    best = best.min(hs_distance(&sigma, &rho));
                }
            }
            assert!(d_star <= best + 1e-12, "{d_star} vs grid {best}");
            assert!(best - d_star < 1e-3);
        }
    }

    #[test]
    fn oracle_on_pure_and_diagonal_inputs() {
        let (_, f) = grid_oracle(&DensityMatrix::<f64>::diag(0.8).unwrap(), 720, 1440).unwrap();
        assert!((f - 0.8).abs() < 1e-5);
        let mut rng = rng_from_seed(2);
        let psi: PureState<f64> = haar_random_pure(&mut rng);
        let (arg, f) = grid_oracle(&psi.to_density(), 720, 1440).unwrap();
        assert!((f - 1.0).abs() < 1e-5);
        assert!(arg.overlap(&psi) > 1.0 - 1e-5);
    }

    #[test]
    fn oracle_is_deterministic_and_validates_grid() {
        let rho = dm(0.6, 0.1, -0.2);
        assert_eq!(
            grid_oracle(&rho, 90, 180).unwrap(),
            grid_oracle(&rho, 90, 180).unwrap()
        );
        assert!(grid_oracle(&rho, 1, 10).is_err());
        assert!(grid_oracle(&rho, 10, 1).is_err());
    }

    #[test]
    fn oracle_ties_prefer_lowest_index() {
        // Every grid point has fidelity 1/2.
        let (arg, f) = grid_oracle(&DensityMatrix::<f64>::maximally_mixed(), 4, 4).unwrap();
        assert_eq!(f, 0.5);
        assert_eq!(arg, PureState::zero());
    }

    #[test]
    fn bloch_form_of_optimum() {
        // F* = (1 + |v|)/2 for any input.
        let mut rng = rng_from_seed(34);
        for _ in 0..100 {
            let rho: DensityMatrix<f64> = random_mixed(&mut rng);
            let v: BlochVector<f64> = rho.bloch();
            let r = purify_b(&rho).unwrap();
            assert!((r.f_achieved - 0.5 * (1.0 + v.norm())).abs() < 1e-12);
        }
    }
}
