use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("grade mismatch: {0}")]
    GradeMismatch(String),

    #[error("contraction of a 0-form")]
    ContractScalar,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("scalar has no exact {n}-th root: {what}")]
    RootNotRepresentable { n: u32, what: String },

    #[error("degenerate or wrongly oriented input: {0}")]
    DegenerateInput(String),

    #[error("structure failed validity check: {0}")]
    InvalidStructure(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not a Lie algebra automorphism (first violation at ({i},{j}))")]
    NotAutomorphism { i: usize, j: usize },

    #[error("torsion solve inconsistent: residual {residual}")]
    TorsionSolve { residual: f64 },

    #[error("unknown structure group '{0}'")]
    UnknownGroup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
