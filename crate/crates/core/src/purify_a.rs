//! Probability-preserving purification.
//!
//! A mixture `p₁ρ₁ + p₂ρ₂` of orthogonal pure states is mapped to a pure
//! state whose overlaps with `ρ₁` and `ρ₂` are still `p₁` and `p₂`. That
//! leaves one relative phase `φ` free; it is selected by a rank-1
//! projection `Π` not orthogonal to either component, and no principle
//! fixes it, so every entry point here takes it explicitly.

use crate::error::{Error, Result};
use crate::kraus::KrausPair;
use crate::linalg::Mat2;
use crate::qubit::{fidelity, DensityMatrix, PureState};
use crate::scalar::{c_re, ComplexScalar, Real};

/// `p₁ρ₁ + (1 − p₁)ρ₂` with `ρ₁ ⟂ ρ₂` pure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalMixture<T: Real> {
    p1: T,
    rho1: DensityMatrix<T>,
    rho2: DensityMatrix<T>,
}

impl<T: Real> OrthogonalMixture<T> {
    pub fn new(p1: T, rho1: DensityMatrix<T>, rho2: DensityMatrix<T>) -> Result<Self> {
        check_probability("p1", p1)?;
        let tol = T::invariant_tol();
        if !rho1.is_pure(tol) || !rho2.is_pure(tol) {
            return Err(Error::InvalidMixture("components must be pure".into()));
        }
        let overlap = fidelity(&rho1, &rho2);
        if overlap >= tol {
            return Err(Error::InvalidMixture(format!(
                "tr(rho1 rho2) = {overlap}, components not orthogonal"
            )));
        }
        Ok(OrthogonalMixture { p1, rho1, rho2 })
    }

    /// Mixture of the computational basis states, `diag(p₁, 1 − p₁)`.
    pub fn computational(p1: T) -> Result<Self> {
        Self::new(
            p1,
            PureState::zero().to_density(),
            PureState::one().to_density(),
        )
    }

    /// Spectral form of an arbitrary state: `p₁` is the larger eigenvalue.
    /// For `I/2` the computational basis is used.
    pub fn from_density(rho: &DensityMatrix<T>) -> Self {
        let s = rho.eigen();
        OrthogonalMixture {
            p1: s.lambda_large.min(T::one()),
            rho1: s.vec_large.to_density(),
            rho2: s.vec_small.to_density(),
        }
    }

    pub fn p1(&self) -> T {
        self.p1
    }

    pub fn p2(&self) -> T {
        T::one() - self.p1
    }

    pub fn rho1(&self) -> &DensityMatrix<T> {
        &self.rho1
    }

    pub fn rho2(&self) -> &DensityMatrix<T> {
        &self.rho2
    }

    pub fn mixed_state(&self) -> DensityMatrix<T> {
        let m = self.rho1.matrix().scale(c_re(self.p1)) + self.rho2.matrix().scale(c_re(self.p2()));
        DensityMatrix::from_matrix_with_tol(&m, T::invariant_tol()).expect("convex combination")
    }
}

/// The vector `μ|0⟩ + ν|1⟩` spanning `Π`, with both amplitudes non-zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionChoice<T: Real> {
    mu: ComplexScalar<T>,
    nu: ComplexScalar<T>,
}

impl<T: Real> ProjectionChoice<T> {
    pub fn new(mu: ComplexScalar<T>, nu: ComplexScalar<T>) -> Result<Self> {
        let norm_sq = mu.norm_sqr() + nu.norm_sqr();
        if (norm_sq - T::one()).abs() > T::exact_tol() {
            return Err(Error::InvalidProjection(format!(
                "|mu|^2 + |nu|^2 = {norm_sq}"
            )));
        }
        let floor = T::invariant_tol();
        if mu.norm() <= floor || nu.norm() <= floor {
            return Err(Error::InvalidProjection(
                "mu and nu must both be non-zero".into(),
            ));
        }
        Ok(ProjectionChoice { mu, nu })
    }

    /// Balanced choice `(1, e^{−iφ})/√2`, whose effective phase is `φ`.
    pub fn with_phase(phi: T) -> Self {
        let s = T::FRAC_1_SQRT_2();
        ProjectionChoice {
            mu: c_re(s),
            nu: ComplexScalar::from_polar(s, -phi),
        }
    }

    pub fn mu(&self) -> ComplexScalar<T> {
        self.mu
    }

    pub fn nu(&self) -> ComplexScalar<T> {
        self.nu
    }

    /// `arg(μν*)`.
    pub fn phase(&self) -> T {
        (self.mu * self.nu.conj()).arg()
    }

    /// `Π = |v⟩⟨v|` with `v = μ|0⟩ + ν|1⟩`.
    pub fn projection(&self) -> Mat2<T> {
        Mat2::outer([self.mu, self.nu], [self.mu, self.nu])
    }

    /// `Π = |v⟩⟨v|` with `v = μ|b₁⟩ + ν|b₂⟩` in an arbitrary orthonormal basis.
    pub fn projection_in_basis(&self, b1: &PureState<T>, b2: &PureState<T>) -> Mat2<T> {
        let v = [
            self.mu * b1.a0() + self.nu * b2.a0(),
            self.mu * b1.a1() + self.nu * b2.a1(),
        ];
        Mat2::outer(v, v)
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

fn check_rank_one_projection<T: Real>(proj: &Mat2<T>) -> Result<()> {
    let tol = T::invariant_tol();
    if !proj.is_finite() {
        return Err(Error::InvalidProjection("non-finite entry".into()));
    }
    let herm = proj.max_abs_diff(&proj.adjoint());
    let idem = (*proj * *proj).max_abs_diff(proj);
    let tr = proj.trace();
    if herm > tol || idem > tol || (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(Error::InvalidProjection(format!(
            "not a rank-1 orthogonal projection (hermiticity {herm}, idempotency {idem}, trace {tr})"
        )));
    }
    Ok(())
}

/// `p₁ρ₁ + p₂ρ₂ + √(p₁p₂)·(ρ₁Πρ₂ + ρ₂Πρ₁)/√(tr(ρ₁Π)·tr(ρ₂Π))`.
pub fn purify_a_general<T: Real>(
    mix: &OrthogonalMixture<T>,
    proj: &Mat2<T>,
) -> Result<DensityMatrix<T>> {
    check_rank_one_projection(proj)?;
    let r1 = mix.rho1.matrix();
    let r2 = mix.rho2.matrix();
    let t1 = (r1 * *proj).trace().re;
    let t2 = (r2 * *proj).trace().re;
    let floor = T::invariant_tol();
    for t in [t1, t2] {
        if t < floor {
            return Err(Error::OrthogonalProjection {
                overlap: t.as_f64(),
            });
        }
    }
    let (p1, p2) = (mix.p1(), mix.p2());
    let coherence = (p1 * p2).sqrt() / (t1 * t2).sqrt();
    let cross = r1 * *proj * r2 + r2 * *proj * r1;
    let m = r1.scale(c_re(p1)) + r2.scale(c_re(p2)) + cross.scale(c_re(coherence));
    DensityMatrix::from_matrix_with_tol(&m, floor)
}

/// Computational-basis member of the family:
/// `p₁|0⟩⟨0| + p₂|1⟩⟨1| + √(p₁p₂)(e^{iφ}|0⟩⟨1| + h.c.)`.
pub fn purify_a_z<T: Real>(p1: T, phi: T) -> Result<DensityMatrix<T>> {
    check_probability("p1", p1)?;
    let p2 = T::one() - p1;
    DensityMatrix::new_with_tol(
        p1,
        ComplexScalar::from_polar((p1 * p2).sqrt(), phi),
        T::invariant_tol(),
    )
}

/// Same family in the basis `{|l⟩, |s⟩}`:
/// `p₁|l⟩⟨l| + p₂|s⟩⟨s| + √(p₁p₂)(e^{iφ}|l⟩⟨s| + h.c.)`.
pub fn purify_a_in_basis<T: Real>(
    p1: T,
    phi: T,
    l: &PureState<T>,
    s: &PureState<T>,
) -> Result<DensityMatrix<T>> {
    check_probability("p1", p1)?;
    let p2 = T::one() - p1;
    let ket = |v: &PureState<T>| [v.a0(), v.a1()];
    let ls = Mat2::outer(ket(l), ket(s)).scale(ComplexScalar::from_polar(T::one(), phi));
    let m = Mat2::outer(ket(l), ket(l)).scale(c_re(p1))
        + Mat2::outer(ket(s), ket(s)).scale(c_re(p2))
        + (ls + ls.adjoint()).scale(c_re((p1 * p2).sqrt()));
    DensityMatrix::from_matrix_with_tol(&m, T::invariant_tol())
}

/// `A0 = √p₁e^{iφ}|0⟩⟨0| + √p₂|1⟩⟨0|`, `A1 = √p₁e^{iφ}|0⟩⟨1| + √p₂|1⟩⟨1|`.
pub fn kraus_for_a<T: Real>(p1: T, phi: T) -> Result<KrausPair<T>> {
    check_probability("p1", p1)?;
    let top = ComplexScalar::from_polar(p1.sqrt(), phi);
    let bottom = c_re((T::one() - p1).sqrt());
    let mut a0 = Mat2::zero();
    a0.0[0][0] = top;
    a0.0[1][0] = bottom;
    let mut a1 = Mat2::zero();
    a1.0[0][1] = top;
    a1.0[1][1] = bottom;
    KrausPair::new(a0, a1)
}

/// [`purify_a_general`] with `Π` spanned by `μ|0⟩ + ν|1⟩`.
pub fn purify_a_with_choice<T: Real>(
    mix: &OrthogonalMixture<T>,
    choice: &ProjectionChoice<T>,
) -> Result<DensityMatrix<T>> {
    purify_a_general(mix, &choice.projection())
}

/// Pure state `√p₁e^{iφ}|0⟩ + √p₂|1⟩` prepared by [`kraus_for_a`].
pub fn target_state_a<T: Real>(p1: T, phi: T) -> Result<PureState<T>> {
    check_probability("p1", p1)?;
    PureState::new_with_tol(
        ComplexScalar::from_polar(p1.sqrt(), phi),
        c_re((T::one() - p1).sqrt()),
        T::invariant_tol(),
    )
}
