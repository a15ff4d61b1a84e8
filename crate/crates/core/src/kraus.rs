//! Two-element Kraus channels that prepare a fixed pure state, and their
//! unitary dilation on system ⊗ environment.
//!
//! Tensor ordering is system ⊗ environment with the system index varying
//! slowest: basis `(|0⟩|0_E⟩, |0⟩|1_E⟩, |1⟩|0_E⟩, |1⟩|1_E⟩)`. With that
//! order the Kraus operator `⟨k_E|U|0_E⟩` is read off entries
//! `U[2i + k][2j]`.

use crate::error::{Error, Result};
use crate::linalg::{Mat2, Mat4};
use crate::qubit::DensityMatrix;
use crate::scalar::{c_re, is_finite_c, ComplexScalar, Real};
use serde::{Serialize, Serializer};

/// Amplitudes `(α, β)` of the prepared state `α|0⟩ + β|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetAmplitudes<T: Real> {
    alpha: ComplexScalar<T>,
    beta: ComplexScalar<T>,
}

impl<T: Real> TargetAmplitudes<T> {
    pub fn new(alpha: ComplexScalar<T>, beta: ComplexScalar<T>) -> Result<Self> {
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        if !is_finite_c(alpha) || !is_finite_c(beta) || (norm_sq - T::one()).abs() > T::exact_tol()
        {
            return Err(Error::InvalidAmplitudes {
                norm_sq: norm_sq.as_f64(),
            });
        }
        Ok(TargetAmplitudes { alpha, beta })
    }

    pub fn alpha(&self) -> ComplexScalar<T> {
        self.alpha
    }

    pub fn beta(&self) -> ComplexScalar<T> {
        self.beta
    }

    fn column(&self) -> [ComplexScalar<T>; 2] {
        [self.alpha, self.beta]
    }
}

/// Trace-preserving pair `{A0, A1}` with `A0†A0 + A1†A1 = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair<T: Real> {
    a0: Mat2<T>,
    a1: Mat2<T>,
}

impl<T: Real> KrausPair<T> {
    pub fn new(a0: Mat2<T>, a1: Mat2<T>) -> Result<Self> {
        Self::new_with_tol(a0, a1, T::exact_tol())
    }

    pub fn new_with_tol(a0: Mat2<T>, a1: Mat2<T>, tol: T) -> Result<Self> {
        let pair = KrausPair { a0, a1 };
        let residual = pair.completeness_residual();
        if !(residual <= tol) {
            return Err(Error::CompletenessViolation {
                residual: residual.as_f64(),
            });
        }
        Ok(pair)
    }

    pub fn a0(&self) -> &Mat2<T> {
        &self.a0
    }

    pub fn a1(&self) -> &Mat2<T> {
        &self.a1
    }

    /// Entrywise max of `|A0†A0 + A1†A1 − I|`.
    pub fn completeness_residual(&self) -> T {
        let sum = self.a0.adjoint() * self.a0 + self.a1.adjoint() * self.a1;
        sum.max_abs_diff(&Mat2::identity())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.a0
            .max_abs_diff(&other.a0)
            .max(self.a1.max_abs_diff(&other.a1))
    }
}

impl<T: Real + Serialize> Serialize for KrausPair<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<T> {
            a0: Vec<[T; 2]>,
            a1: Vec<[T; 2]>,
        }
        let entries = |m: &Mat2<T>| m.0.iter().flatten().map(|z| [z.re, z.im]).collect();
        Repr {
            a0: entries(&self.a0),
            a1: entries(&self.a1),
        }
        .serialize(s)
    }
}

/// 4×4 unitary on system ⊗ environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationUnitary<T: Real> {
    u: Mat4<T>,
}

impl<T: Real> DilationUnitary<T> {
    pub fn new(u: Mat4<T>) -> Result<Self> {
        let d = DilationUnitary { u };
        let residual = d.unitarity_residual();
        if !(residual <= T::exact_tol()) {
            return Err(Error::NotUnitary {
                residual: residual.as_f64(),
            });
        }
        Ok(d)
    }

    pub fn matrix(&self) -> &Mat4<T> {
        &self.u
    }

    /// Entrywise max of `|U†U − I|`.
    pub fn unitarity_residual(&self) -> T {
        (self.u.adjoint() * self.u).max_abs_diff(&Mat4::identity())
    }

    pub fn det(&self) -> ComplexScalar<T> {
        self.u.det()
    }
}

/// `A0 = (α|0⟩ + β|1⟩)⟨0|`, `A1 = (α|0⟩ + β|1⟩)⟨1|`.
pub fn kraus_pair_from_target<T: Real>(t: &TargetAmplitudes<T>) -> KrausPair<T> {
    let one = c_re(T::one());
    let zero = c_re(T::zero());
    KrausPair {
        a0: Mat2::outer(t.column(), [one, zero]),
        a1: Mat2::outer(t.column(), [zero, one]),
    }
}

/// `Σ_k A_k ρ A_k†`.
pub fn apply<T: Real>(k: &KrausPair<T>, rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    let m = rho.matrix();
    let out = k.a0 * m * k.a0.adjoint() + k.a1 * m * k.a1.adjoint();
    DensityMatrix::from_matrix_with_tol(&out, T::invariant_tol())
        .expect("trace-preserving pair maps states to states")
}

/// The four-term dilation
///
/// ```text
/// U = (α|0⟩+β|1⟩)⟨0| ⊗ |0_E⟩⟨0_E| + (α|0⟩+β|1⟩)⟨1| ⊗ |1_E⟩⟨0_E|
///   + (α*|1⟩⟨0| − β*|0⟩⟨0|) ⊗ |0_E⟩⟨1_E| + (α*|1⟩⟨1| − β*|0⟩⟨1|) ⊗ |1_E⟩⟨1_E|
/// ```
pub fn dilation_unitary<T: Real>(t: &TargetAmplitudes<T>) -> DilationUnitary<T> {
    let one = c_re(T::one());
    let zero = c_re(T::zero());
    let ket0 = [one, zero];
    let ket1 = [zero, one];
    let v = t.column();
    // α*|1⟩ − β*|0⟩
    let w = [-t.beta.conj(), t.alpha.conj()];

    let u = Mat4::kron(&Mat2::outer(v, ket0), &Mat2::outer(ket0, ket0))
        + Mat4::kron(&Mat2::outer(v, ket1), &Mat2::outer(ket1, ket0))
        + Mat4::kron(&Mat2::outer(w, ket0), &Mat2::outer(ket0, ket1))
        + Mat4::kron(&Mat2::outer(w, ket1), &Mat2::outer(ket1, ket1));
    DilationUnitary { u }
}

/// `A_k = ⟨k_E|U|0_E⟩` for `k = 0, 1`.
pub fn kraus_from_unitary<T: Real>(u: &DilationUnitary<T>) -> Result<KrausPair<T>> {
    let block = |k: usize| {
        let mut a = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                a.0[i][j] = u.u.0[2 * i + k][2 * j];
            }
        }
        a
    };
    KrausPair::new_with_tol(block(0), block(1), T::invariant_tol())
}
