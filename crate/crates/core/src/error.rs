use thiserror::Error;

/// Errors produced by the ranking library, CLI and service.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors must have at least 2 coordinates, got {0}")]
    DimensionTooSmall(usize),

    #[error("at least 2 alternatives are required, got {0}")]
    TooFewAlternatives(usize),

    #[error("duplicate alternative id `{0}`")]
    DuplicateId(String),

    #[error("unknown alternative id `{0}`")]
    UnknownId(String),

    #[error("weight vector must be nonzero")]
    ZeroWeight,

    #[error("weight vector is not in the dual cone")]
    WeightOutsideDual,

    #[error("infeasible weight bounds: {0}")]
    InfeasibleBounds(String),

    #[error("improper cone: {0}")]
    ImproperCone(String),

    #[error("cone must be pointed")]
    NonPointedCone,

    #[error("strict comparison requires a cone with nonempty interior")]
    NoInterior,

    #[error("labeled classes are not linearly separable")]
    NonSeparable,

    #[error("separating normal is antipodal to the dual-cone interior direction; rotation plane undefined")]
    AntipodalRotation,

    #[error("no labeled alternatives")]
    EmptyLabels,

    #[error("criterion column {0} is identically zero")]
    DegenerateColumn(usize),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),

    #[error("revision conflict: requested {requested}, current {current}")]
    RevisionConflict { requested: u64, current: u64 },

    #[error("computation cancelled")]
    Cancelled,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used for CLI exit codes and HTTP status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    InfeasibleCone,
    Precondition,
    NotFound,
    Conflict,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            InfeasibleBounds(_) | ImproperCone(_) => ErrorKind::InfeasibleCone,
            NonPointedCone | NoInterior | NonSeparable | AntipodalRotation | EmptyLabels
            | DegenerateColumn(_) => ErrorKind::Precondition,
            UnknownDataset(_) => ErrorKind::NotFound,
            RevisionConflict { .. } => ErrorKind::Conflict,
            Io(_) | Cancelled => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }

    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            ErrorKind::Validation | ErrorKind::NotFound | ErrorKind::Conflict => 2,
            ErrorKind::InfeasibleCone => 3,
            ErrorKind::Precondition => 4,
            ErrorKind::Internal => 1,
        }
    }

    /// HTTP status code used by the service.
    pub fn http_status(&self) -> u16 {
        match self.kind() {
            ErrorKind::Validation | ErrorKind::InfeasibleCone => 400,
            ErrorKind::NotFound => 404,
            ErrorKind::Conflict => 409,
            ErrorKind::Precondition => 422,
            ErrorKind::Internal => 500,
        }
    }

    /// Stable machine-readable code for JSON error bodies.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            DimensionMismatch { .. } | DimensionTooSmall(_) => "dimension",
            TooFewAlternatives(_) => "too_few_alternatives",
            DuplicateId(_) => "duplicate_id",
            UnknownId(_) => "unknown_id",
            ZeroWeight | WeightOutsideDual | InvalidWeights(_) => "invalid_weights",
            InfeasibleBounds(_) => "infeasible_bounds",
            ImproperCone(_) => "improper_cone",
            NonPointedCone => "non_pointed_cone",
            NoInterior => "no_interior",
            NonSeparable => "non_separable",
            AntipodalRotation => "antipodal_rotation",
            EmptyLabels => "empty_labels",
            DegenerateColumn(_) => "degenerate_column",
            InvalidParameter(_) => "invalid_parameter",
            Parse(_) | Json(_) => "parse",
            UnknownDataset(_) => "unknown_dataset",
            RevisionConflict { .. } => "revision_conflict",
            Cancelled => "cancelled",
            Io(_) => "io",
        }
    }
}
