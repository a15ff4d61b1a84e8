//! Purification of mixed qubit states into pure states.
//!
//! Two protocols are provided. [`purify_a`] keeps the outcome
//! probabilities of the mixture and leaves a free phase. [`purify_b`]
//! returns the pure state with the largest overlap `tr(ρσ)`, which is the
//! top eigenvector. [`measurement`] models complete, partial and single-axis
//! spin measurements, and [`analysis`] compares the fidelities each protocol
//! reaches after them.
//!
//! Everything is generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the `*F64` and `*F32` aliases below fix the choice.
//!
//! ```
//! use purekit::{purify_b, DensityMatrixF64};
//! use num_complex::Complex;
//!
//! let rho = DensityMatrixF64::new(0.7, Complex::new(0.2, 0.0)).unwrap();
//! let best = purify_b(&rho).unwrap();
//! assert!((best.f_achieved - 0.782842712474619).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod kraus;
pub mod linalg;
pub mod measurement;
pub mod purify_a;
pub mod purify_b;
pub mod qubit;
pub mod random;
pub mod scalar;

pub use analysis::{
    chain_complete, chain_partial, chain_single, montecarlo, verify_inequalities, FidelityName,
    FidelityReport, MonteCarloSummary,
};
pub use error::{Error, Result};
pub use kraus::{
    apply, dilation_unitary, kraus_from_unitary, kraus_pair_from_target, DilationUnitary,
    KrausPair, TargetAmplitudes,
};
pub use measurement::{
    msmt_state_complete, msmt_state_partial, msmt_state_single, protocol_a_candidates_partial,
    reconstruct_complete, sample_ensemble, CompleteRecord, EnsembleConfig, Mode, PartialRecord,
    Record, SingleRecord,
};
pub use purify_a::{purify_a_general, purify_a_z, OrthogonalMixture, ProjectionChoice};
pub use purify_b::{grid_oracle, purify_b, ClosestPureResult};
pub use qubit::{
    bloch_from_density, density_from_bloch, density_from_pure, eigen2, fidelity, hs_distance,
    purity, Axis, BlochVector, DensityMatrix, PureState, Spectral2,
};
pub use scalar::{ComplexScalar, Real};

pub type PureStateF64 = PureState<f64>;
pub type DensityMatrixF64 = DensityMatrix<f64>;
pub type BlochVectorF64 = BlochVector<f64>;
pub type KrausPairF64 = KrausPair<f64>;
pub type DilationUnitaryF64 = DilationUnitary<f64>;
pub type ClosestPureResultF64 = ClosestPureResult<f64>;
pub type FidelityReportF64 = FidelityReport<f64>;

pub type PureStateF32 = PureState<f32>;
pub type DensityMatrixF32 = DensityMatrix<f32>;
pub type BlochVectorF32 = BlochVector<f32>;
pub type KrausPairF32 = KrausPair<f32>;
pub type DilationUnitaryF32 = DilationUnitary<f32>;
pub type ClosestPureResultF32 = ClosestPureResult<f32>;
pub type FidelityReportF32 = FidelityReport<f32>;
