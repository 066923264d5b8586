use thiserror::Error;

/// Errors raised by matrix construction, family validation and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (‖A − A†‖_F = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not unitary (‖U†U − I‖_F = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("invalid density operator{}: {reason}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    InvalidDensity { context: Option<String>, reason: String },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("block index {index} out of range (decomposition has {count} blocks)")]
    InvalidBlock { index: usize, count: usize },

    #[error("family member does not match spec: {0}")]
    MemberMismatch(String),

    #[error("malformed parameters: {0}")]
    InvalidParams(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn density(context: impl Into<Option<String>>, reason: impl Into<String>) -> Self {
        Error::InvalidDensity {
            context: context.into(),
            reason: reason.into(),
        }
    }

    /// Attach a location (e.g. "block 1") to a density-operator validation error. An
    /// existing location is kept as the inner part, `outer: inner`.
    pub fn with_context(self, ctx: impl Into<String>) -> Self {
        match self {
            Error::InvalidDensity { context, reason } => Error::InvalidDensity {
                context: Some(match context {
                    Some(inner) => format!("{}: {inner}", ctx.into()),
                    None => ctx.into(),
                }),
                reason,
            },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
