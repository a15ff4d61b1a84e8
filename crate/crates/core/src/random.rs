//! Seeded sampling of qubit states for Monte Carlo sweeps.
//!
//! Every stream is a `ChaCha8Rng`, which is portable across platforms and
//! releases, so a seed fully determines the sampled states.

use crate::qubit::{BlochVector, DensityMatrix, PureState};
use crate::scalar::{c_re, Real};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for the `index`-th independent task of a run seeded with `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    base.wrapping_add(index)
}

/// Uniform point on the Bloch sphere: `z ~ U[−1, 1]`, `φ ~ U[0, 2π)`.
pub fn haar_random_pure<T: Real, R: Rng + ?Sized>(rng: &mut R) -> PureState<T> {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let a0 = ((1.0 + z) / 2.0).sqrt();
    let a1 = Complex::from_polar(((1.0 - z) / 2.0).sqrt(), phi);
    PureState::from_unnormalized(c_re(T::lit(a0)), Complex::new(T::lit(a1.re), T::lit(a1.im)))
        .expect("unit vector")
}

pub fn haar_random_pure_seeded<T: Real>(seed: u64) -> PureState<T> {
    haar_random_pure(&mut rng_from_seed(seed))
}

/// Uniform Bloch-ball sample (radius `r = u^{1/3}`, strictly inside the
/// sphere), i.e. a random mixed state.
pub fn random_mixed<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix<T> {
    let dir = haar_random_pure::<T, R>(rng).bloch();
    let u: f64 = rng.random_range(0.0..1.0);
    let r = T::lit(u.cbrt());
    let v = BlochVector::new(dir.x * r, dir.y * r, dir.z * r);
    crate::qubit::density_from_bloch(&v).expect("inside the Bloch ball")
}
