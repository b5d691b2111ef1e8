use thiserror::Error;

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate metric: smallest eigenvalue {min_eigenvalue:.3e}")]
    DegenerateMetric { min_eigenvalue: f64 },

    #[error("degenerate plane: |X∧Y|² = {wedge_norm_sq:.3e}")]
    DegeneratePlane { wedge_norm_sq: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point {point:?} lies outside the safe box of chart `{chart}`")]
    OutsideChart { chart: String, point: Vec<f64> },

    #[error("Q singular/indefinite at p: smallest eigenvalue of its symmetrization {min_eigenvalue:.3e}")]
    QNotPositive { min_eigenvalue: f64 },

    #[error("not a weak metric f-structure: `{identity}` residual {residual:.3e}")]
    NotWeakMetricF { identity: String, residual: f64 },

    #[error("hypothesis not satisfied: `{gate}` residual {residual:.3e}")]
    HypothesisNotSatisfied { gate: String, residual: f64 },

    #[error("E-NN violated: ḡ(f̄N_{i}, N_{j}) = {residual:.3e}")]
    EnnViolated { i: usize, j: usize, residual: f64 },

    #[error("f̄N_{i} not tangent: normal component {residual:.3e}")]
    NotTangent { i: usize, residual: f64 },

    #[error("normal frame invalid: {reason} (residual {residual:.3e})")]
    BadNormalFrame { reason: String, residual: f64 },

    #[error("f̄N frame not orthonormal: residual {residual:.3e}")]
    ReebFrameNotOrthonormal { residual: f64 },

    #[error("ambient tensor is not weak Hermitian: {reason}")]
    NotWeakHermitian { reason: String },

    #[error("Q not positive-definite for t = {t}: smallest eigenvalue {min_eigenvalue:.3e}")]
    RotationNotPositive { t: f64, min_eigenvalue: f64 },

    #[error("ψ = 0 — degenerate rotation choice (‖ψ‖ = {psi_norm:.3e})")]
    DegenerateRotation { psi_norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("non-finite value while evaluating {what}")]
    NonFinite { what: String },
}
