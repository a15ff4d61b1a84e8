//! Single-qubit state algebra.
//!
//! Basis convention: `|0⟩ ≡ |+⟩_z = (1, 0)`, `|1⟩ ≡ |−⟩_z = (0, 1)`, and
//! `σ_y = [[0, −i], [i, 0]]`, so that `|+⟩_y = (1, i)/√2` and
//! `|+⟩_x = (1, 1)/√2`.
//!
//! "Fidelity" throughout the crate is the overlap `tr(ρ₁ρ₂)`. For two pure
//! states it coincides with the usual `|⟨ψ|φ⟩|²`; for mixed arguments it is
//! *not* the Uhlmann fidelity and should not be compared against it.

use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::scalar::{c, c_re, half, is_finite_c, two, ComplexScalar, Real};
use serde::{Deserialize, Serialize};

/// Spin measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];
}

/// Normalized qubit ket `a0|0⟩ + a1|1⟩` in canonical global phase: the first
/// amplitude with non-negligible modulus is real and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    into = "PureStateRepr<T>",
    try_from = "PureStateRepr<T>",
    bound(
        serialize = "T: Real + Serialize",
        deserialize = "T: Real + Deserialize<'de>"
    )
)]
pub struct PureState<T: Real> {
    a0: ComplexScalar<T>,
    a1: ComplexScalar<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PureStateRepr<T> {
    a0_re: T,
    a0_im: T,
    a1_re: T,
    a1_im: T,
}

impl<T: Real> From<PureState<T>> for PureStateRepr<T> {
    fn from(s: PureState<T>) -> Self {
        PureStateRepr {
            a0_re: s.a0.re,
            a0_im: s.a0.im,
            a1_re: s.a1.re,
            a1_im: s.a1.im,
        }
    }
}

impl<T: Real> TryFrom<PureStateRepr<T>> for PureState<T> {
    type Error = Error;
    fn try_from(r: PureStateRepr<T>) -> Result<Self> {
        PureState::new(c(r.a0_re, r.a0_im), c(r.a1_re, r.a1_im))
    }
}

impl<T: Real> PureState<T> {
    /// Validates normalization within [`Real::exact_tol`], then renormalizes
    /// and fixes the global phase.
    pub fn new(a0: ComplexScalar<T>, a1: ComplexScalar<T>) -> Result<Self> {
        Self::new_with_tol(a0, a1, T::exact_tol())
    }

    pub fn new_with_tol(a0: ComplexScalar<T>, a1: ComplexScalar<T>, tol: T) -> Result<Self> {
        if !is_finite_c(a0) || !is_finite_c(a1) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm_sq = a0.norm_sqr() + a1.norm_sqr();
        if (norm_sq - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!(
                "|a0|^2 + |a1|^2 = {norm_sq}, expected 1"
            )));
        }
        Ok(Self::normalized(a0, a1))
    }

    /// Normalizes any non-zero vector. Returns `None` for the zero vector.
    pub fn from_unnormalized(a0: ComplexScalar<T>, a1: ComplexScalar<T>) -> Option<Self> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return None;
        }
        Some(Self::normalized(a0, a1))
    }

    fn normalized(a0: ComplexScalar<T>, a1: ComplexScalar<T>) -> Self {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        Self::canonical(a0.unscale(n), a1.unscale(n))
    }

    fn canonical(a0: ComplexScalar<T>, a1: ComplexScalar<T>) -> Self {
        let r0 = a0.norm();
        if r0 > T::exact_tol() {
            let rot = a0.conj().unscale(r0);
            return PureState {
                a0: c_re(r0),
                a1: a1 * rot,
            };
        }
        let r1 = a1.norm();
        if r1 == T::zero() {
            return PureState { a0, a1 };
        }
        let rot = a1.conj().unscale(r1);
        PureState {
            a0: a0 * rot,
            a1: c_re(r1),
        }
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_angles(theta: T, phi: T) -> Self {
        let h = theta * half();
        Self::canonical(c_re(h.cos()), ComplexScalar::from_polar(h.sin(), phi))
    }

    /// Pure state whose Bloch vector points along `n` (normalized internally).
    pub fn from_bloch_direction(n: &BlochVector<T>) -> Option<Self> {
        let r = n.norm();
        if !(r > T::zero()) || !r.is_finite() {
            return None;
        }
        let (nx, ny, nz) = (n.x / r, n.y / r, n.z / r);
        let t = (nx * nx + ny * ny).sqrt();
        // cos(θ/2)·sin(θ/2) = t/2; take the well-conditioned half-angle root.
        let (m0, m1) = if nz >= T::zero() {
            let m0 = ((T::one() + nz) * half()).sqrt();
            (m0, t / (two::<T>() * m0))
        } else {
            let m1 = ((T::one() - nz) * half()).sqrt();
            (t / (two::<T>() * m1), m1)
        };
        let phase = if t > T::zero() {
            c(nx / t, ny / t)
        } else {
            c_re(T::one())
        };
        Some(Self::canonical(c_re(m0), phase.scale(m1)))
    }

    pub fn zero() -> Self {
        PureState {
            a0: c_re(T::one()),
            a1: c_re(T::zero()),
        }
    }

    pub fn one() -> Self {
        PureState {
            a0: c_re(T::zero()),
            a1: c_re(T::one()),
        }
    }

    /// `|±⟩` along `axis`.
    pub fn axis_state(axis: Axis, plus: bool) -> Self {
        let s = T::FRAC_1_SQRT_2();
        let sign = if plus { T::one() } else { -T::one() };
        match (axis, plus) {
            (Axis::Z, true) => Self::zero(),
            (Axis::Z, false) => Self::one(),
            (Axis::X, _) => PureState {
                a0: c_re(s),
                a1: c_re(sign * s),
            },
            (Axis::Y, _) => PureState {
                a0: c_re(s),
                a1: c(T::zero(), sign * s),
            },
        }
    }

    pub fn a0(&self) -> ComplexScalar<T> {
        self.a0
    }

    pub fn a1(&self) -> ComplexScalar<T> {
        self.a1
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> ComplexScalar<T> {
        self.a0.conj() * other.a0 + self.a1.conj() * other.a1
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// The orthogonal state (antipodal on the Bloch sphere).
    pub fn orthogonal(&self) -> Self {
        Self::canonical(-self.a1.conj(), self.a0.conj())
    }

    pub fn to_density(&self) -> DensityMatrix<T> {
        density_from_pure(self)
    }

    pub fn bloch(&self) -> BlochVector<T> {
        self.to_density().bloch()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.a0 - other.a0).norm().max((self.a1 - other.a1).norm())
    }
}

/// Qubit density matrix stored by its independent entries: `m11 = 1 − m00`
/// and `m10 = conj(m01)` hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(
    into = "DensityMatrixRepr<T>",
    try_from = "DensityMatrixRepr<T>",
    bound(
        serialize = "T: Real + Serialize",
        deserialize = "T: Real + Deserialize<'de>"
    )
)]
pub struct DensityMatrix<T: Real> {
    m00: T,
    m01: ComplexScalar<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityMatrixRepr<T> {
    m00: T,
    m01_re: T,
    m01_im: T,
}

impl<T: Real> From<DensityMatrix<T>> for DensityMatrixRepr<T> {
    fn from(r: DensityMatrix<T>) -> Self {
        DensityMatrixRepr {
            m00: r.m00,
            m01_re: r.m01.re,
            m01_im: r.m01.im,
        }
    }
}

impl<T: Real> TryFrom<DensityMatrixRepr<T>> for DensityMatrix<T> {
    type Error = Error;
    fn try_from(r: DensityMatrixRepr<T>) -> Result<Self> {
        DensityMatrix::new(r.m00, c(r.m01_re, r.m01_im))
    }
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(m00: T, m01: ComplexScalar<T>) -> Result<Self> {
        Self::new_with_tol(m00, m01, T::exact_tol())
    }

    pub fn new_with_tol(m00: T, m01: ComplexScalar<T>, tol: T) -> Result<Self> {
        if !m00.is_finite() || !is_finite_c(m01) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let m11 = T::one() - m00;
        if m00 < -tol || m11 < -tol {
            return Err(Error::InvalidState(format!(
                "diagonal ({m00}, {m11}) not non-negative"
            )));
        }
        let det = m00 * m11 - m01.norm_sqr();
        if det < -tol {
            return Err(Error::InvalidState(format!(
                "determinant {det} < 0: not positive semidefinite"
            )));
        }
        Ok(DensityMatrix { m00, m01 })
    }

    /// Builds from a full 2×2 matrix, checking Hermiticity and unit trace.
    pub fn from_matrix(m: &Mat2<T>) -> Result<Self> {
        Self::from_matrix_with_tol(m, T::exact_tol())
    }

    pub fn from_matrix_with_tol(m: &Mat2<T>, tol: T) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = m.max_abs_diff(&m.adjoint());
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {herm})"
            )));
        }
        let tr = m.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        // Split the rounding residue of the trace evenly across the diagonal.
        let m00 = m.0[0][0].re + (T::one() - tr.re) * half();
        let m01 = (m.0[0][1] + m.0[1][0].conj()).scale(half());
        Self::new_with_tol(m00, m01, tol)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            m00: half(),
            m01: c_re(T::zero()),
        }
    }

    /// `diag(p, 1 − p)`.
    pub fn diag(p: T) -> Result<Self> {
        Self::new(p, c_re(T::zero()))
    }

    pub fn m00(&self) -> T {
        self.m00
    }

    pub fn m11(&self) -> T {
        T::one() - self.m00
    }

    pub fn m01(&self) -> ComplexScalar<T> {
        self.m01
    }

    pub fn m10(&self) -> ComplexScalar<T> {
        self.m01.conj()
    }

    pub fn matrix(&self) -> Mat2<T> {
        Mat2([
            [c_re(self.m00), self.m01],
            [self.m01.conj(), c_re(self.m11())],
        ])
    }

    pub fn det(&self) -> T {
        self.m00 * self.m11() - self.m01.norm_sqr()
    }

    pub fn purity(&self) -> T {
        purity(self)
    }

    pub fn is_pure(&self, tol: T) -> bool {
        (self.purity() - T::one()).abs() <= tol
    }

    pub fn bloch(&self) -> BlochVector<T> {
        bloch_from_density(self)
    }

    pub fn eigen(&self) -> Spectral2<T> {
        eigen2(self)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState<T>) -> T {
        let (a0, a1) = (psi.a0(), psi.a1());
        a0.norm_sqr() * self.m00
            + a1.norm_sqr() * self.m11()
            + two::<T>() * (a0.conj() * self.m01 * a1).re
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.m00 - other.m00)
            .abs()
            .max((self.m01 - other.m01).norm())
    }
}

/// Real 3-vector `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)`; each component is `2⟨S_i⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn sub(&self, o: &Self) -> Self {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn scale(&self, s: T) -> Self {
        BlochVector::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }
}

/// Closed-form eigendecomposition of a qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct Spectral2<T: Real> {
    pub lambda_large: T,
    pub vec_large: PureState<T>,
    pub lambda_small: T,
    pub vec_small: PureState<T>,
    /// Set when the eigenvalue gap is below [`Real::exact_tol`]; the vectors
    /// are then the computational basis.
    pub degenerate: bool,
}

impl<T: Real> Spectral2<T> {
    /// `λ_l|l⟩⟨l| + λ_s|s⟩⟨s|` as a full matrix.
    pub fn reconstruct(&self) -> Mat2<T> {
        let proj = |v: &PureState<T>| Mat2::outer([v.a0(), v.a1()], [v.a0(), v.a1()]);
        proj(&self.vec_large).scale(c_re(self.lambda_large))
            + proj(&self.vec_small).scale(c_re(self.lambda_small))
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_pure<T: Real>(psi: &PureState<T>) -> DensityMatrix<T> {
    DensityMatrix {
        m00: psi.a0().norm_sqr(),
        m01: psi.a0() * psi.a1().conj(),
    }
}

/// `x = 2 Re m01`, `y = −2 Im m01`, `z = 2 m00 − 1`.
pub fn bloch_from_density<T: Real>(rho: &DensityMatrix<T>) -> BlochVector<T> {
    BlochVector::new(
        two::<T>() * rho.m01.re,
        -two::<T>() * rho.m01.im,
        two::<T>() * rho.m00 - T::one(),
    )
}

/// `ρ = (I + x σ_x + y σ_y + z σ_z)/2`.
pub fn density_from_bloch<T: Real>(v: &BlochVector<T>) -> Result<DensityMatrix<T>> {
    let norm = v.norm();
    if !norm.is_finite() || norm > T::one() + T::exact_tol() {
        return Err(Error::InvalidBloch {
            norm: norm.as_f64(),
        });
    }
    Ok(DensityMatrix {
        m00: (T::one() + v.z) * half(),
        m01: c(v.x * half(), -v.y * half()),
    })
}

/// Overlap fidelity `tr(ρ₁ρ₂)`.
pub fn fidelity<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> T {
    rho1.m00 * rho2.m00 + rho1.m11() * rho2.m11() + two::<T>() * (rho1.m01 * rho2.m01.conj()).re
}

/// Hilbert–Schmidt distance `tr(ρ₁ − ρ₂)²`.
pub fn hs_distance<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> T {
    let d00 = rho1.m00 - rho2.m00;
    let d01 = rho1.m01 - rho2.m01;
    two::<T>() * (d00 * d00 + d01.norm_sqr())
}

/// `tr ρ²`.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.m00 * rho.m00 + rho.m11() * rho.m11() + two::<T>() * rho.m01.norm_sqr()
}

/// Eigenvalues `(1 ± |v|)/2`; eigenvectors are the pure states along `±v`.
pub fn eigen2<T: Real>(rho: &DensityMatrix<T>) -> Spectral2<T> {
    let v = rho.bloch();
    let r = v.norm();
    let lambda_large = (T::one() + r) * half();
    let lambda_small = (T::one() - r) * half();
    if r < T::exact_tol() {
        return Spectral2 {
            lambda_large,
            vec_large: PureState::zero(),
            lambda_small,
            vec_small: PureState::one(),
            degenerate: true,
        };
    }
    let vec_large = PureState::from_bloch_direction(&v).expect("non-zero Bloch vector");
    let vec_small = PureState::from_bloch_direction(&v.neg()).expect("non-zero Bloch vector");
    Spectral2 {
        lambda_large,
        vec_large,
        lambda_small,
        vec_small,
        degenerate: false,
    }
}
