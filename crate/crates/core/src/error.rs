use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by state construction and by the protocols.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// failing computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("Bloch vector norm {norm} exceeds 1")]
    InvalidBloch { norm: f64 },

    #[error("probability {value} outside [0, 1] for {what}")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("amplitudes not normalized: |alpha|^2 + |beta|^2 = {norm_sq}")]
    InvalidAmplitudes { norm_sq: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {residual}")]
    NotUnitary { residual: f64 },

    #[error("Kraus pair violates completeness: max |A0^dag A0 + A1^dag A1 - I| = {residual}")]
    CompletenessViolation { residual: f64 },

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("projection is orthogonal to a mixture component: tr(rho_k Pi) = {overlap}")]
    OrthogonalProjection { overlap: f64 },

    #[error("mixture components are not orthogonal pure states: {0}")]
    InvalidMixture(String),

    #[error("no unique closest pure state: input is maximally mixed")]
    DegenerateState,

    #[error(
        "eigenvalues ({large}, {small}) are not (2/3, 1/3): not a complete-measurement mixture"
    )]
    NotAMeasurementMixture { large: f64, small: f64 },

    #[error("record is infeasible for a pure state: radicand {radicand} < 0")]
    InfeasibleRecord { radicand: f64 },

    #[error("invalid ensemble configuration: {0}")]
    InvalidEnsemble(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidState(_) => "INVALID_STATE",
            Error::InvalidBloch { .. } => "INVALID_BLOCH",
            Error::InvalidProbability { .. } => "INVALID_PROBABILITY",
            Error::InvalidAmplitudes { .. } => "INVALID_AMPLITUDES",
            Error::NotUnitary { .. } => "NOT_UNITARY",
            Error::CompletenessViolation { .. } => "COMPLETENESS_VIOLATION",
            Error::InvalidProjection(_) => "INVALID_PROJECTION",
            Error::OrthogonalProjection { .. } => "ORTHOGONAL_PROJECTION",
            Error::InvalidMixture(_) => "INVALID_MIXTURE",
            Error::DegenerateState => "DEGENERATE_STATE",
            Error::NotAMeasurementMixture { .. } => "NOT_A_MEASUREMENT_MIXTURE",
            Error::InfeasibleRecord { .. } => "INFEASIBLE_RECORD",
            Error::InvalidEnsemble(_) => "INVALID_ENSEMBLE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }

    /// Domain errors are well-formed inputs on which a protocol has no
    /// answer; everything else is malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::DegenerateState
                | Error::InfeasibleRecord { .. }
                | Error::NotAMeasurementMixture { .. }
                | Error::OrthogonalProjection { .. }
                | Error::CompletenessViolation { .. }
        )
    }
}
