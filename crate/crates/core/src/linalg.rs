//! Fixed-size complex matrices for single-qubit operators and their
//! two-qubit (system ⊗ environment) dilations.

use crate::scalar::Real;
use num_complex::Complex;
use std::ops::{Add, Mul, Sub};

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T: Real>(pub [[Complex<T>; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn zero() -> Self {
        Mat2([[Complex::new(T::zero(), T::zero()); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.0[0][0] = Complex::new(T::one(), T::zero());
        m.0[1][1] = Complex::new(T::one(), T::zero());
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: [Complex<T>; 2], v: [Complex<T>; 2]) -> Self {
        let mut m = Self::zero();
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m.0[i][j] = ui * vj.conj();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex<T> {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        m
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        m
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        m
    }
}

/// Row-major 4×4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T: Real>(pub [[Complex<T>; 4]; 4]);

impl<T: Real> Mat4<T> {
    pub fn zero() -> Self {
        Mat4([[Complex::new(T::zero(), T::zero()); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Kronecker product `a ⊗ b`; the left factor's index varies slowest.
    pub fn kron(a: &Mat2<T>, b: &Mat2<T>) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Determinant by Laplace expansion along the first row.
    pub fn det(&self) -> Complex<T> {
        let minor = |skip: usize| -> Complex<T> {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip).collect();
            let r = |i: usize, j: usize| self.0[i][cols[j]];
            r(1, 0) * (r(2, 1) * r(3, 2) - r(2, 2) * r(3, 1))
                - r(1, 1) * (r(2, 0) * r(3, 2) - r(2, 2) * r(3, 0))
                + r(1, 2) * (r(2, 0) * r(3, 1) - r(2, 1) * r(3, 0))
        };
        (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
            let term = self.0[0][j] * minor(j);
            if j % 2 == 0 {
                acc + term
            } else {
                acc - term
            }
        })
    }
}

impl<T: Real> Add for Mat4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        m
    }
}

impl<T: Real> Mul for Mat4<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
                    acc + self.0[i][k] * rhs.0[k][j]
                });
            }
        }
        m
    }
}
