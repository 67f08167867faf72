use thiserror::Error;

#[derive(Debug, Error)]
pub enum CvcError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("kind_mismatch: {0}")]
    KindMismatch(String),

    #[error("oracle budget exceeded: {n} vertices > {max}")]
    BudgetExceeded { n: usize, max: usize },

    #[error("rule not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("input graph is not chordal")]
    NotChordal,

    #[error("degree precondition violated: {0}")]
    Degree(String),

    #[error("lift chain mismatch: {0}")]
    ChainMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = CvcError> = std::result::Result<T, E>;

impl CvcError {
    /// Short machine-readable name used in JSON error output.
    pub fn code(&self) -> &'static str {
        match self {
            CvcError::Parse { .. } => "parse_error",
            CvcError::VertexOutOfRange { .. } => "vertex_out_of_range",
            CvcError::SelfLoop(_) => "self_loop",
            CvcError::KindMismatch(_) => "kind_mismatch",
            CvcError::BudgetExceeded { .. } => "budget_exceeded",
            CvcError::NotApplicable(_) => "not_applicable",
            CvcError::InvalidDecomposition(_) => "invalid_decomposition",
            CvcError::NotChordal => "not_chordal",
            CvcError::Degree(_) => "degree",
            CvcError::ChainMismatch(_) => "chain_mismatch",
            CvcError::InvalidParameter(_) => "invalid_parameter",
            CvcError::Io(_) => "io_error",
            CvcError::Json(_) => "json_error",
        }
    }
}
