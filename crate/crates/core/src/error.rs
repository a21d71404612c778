use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite entry at feature {row}, sample {col}")]
    NonFinite { row: usize, col: usize },
    #[error("encoding precision must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("class {class} has no samples")]
    EmptyClass { class: usize },
    #[error("class {class} has too few samples ({count}) for this measure")]
    DegenerateClass { class: usize, count: usize },
    #[error("label {label} at sample {sample} is outside [0, {classes})")]
    LabelOutOfRange {
        sample: usize,
        label: usize,
        classes: usize,
    },
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("total coding rate is zero; separability is undefined")]
    ZeroTotalRate,
    #[error("matrix is not positive definite even after jitter")]
    NotPositiveDefinite,
    #[error("{m} samples exceed the dense distance cap of {cap}; use streaming distances")]
    TooManySamples { m: usize, cap: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("feature {feature} is degenerate for this preprocessing")]
    DegenerateFeature { feature: usize },
    #[error("sample {sample} has zero norm")]
    ZeroVector { sample: usize },
    #[error("signal power is zero")]
    ZeroSignalPower,
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("at least two classes are required")]
    SingleClass,
    #[error("input has zero variance")]
    ZeroVariance,
    #[error("least-squares design is rank deficient ({distinct} distinct abscissae, need 3)")]
    RankDeficient { distinct: usize },
    #[error("every task is in the saturation zone")]
    AllSaturated,
    #[error("label vector has {found} entries, expected {expected}")]
    LabelCountMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable identifier of the error class, used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFinite { .. } => "NonFinite",
            Error::NonPositiveEpsilon(_) => "NonPositiveEpsilon",
            Error::EmptyClass { .. } => "EmptyClass",
            Error::DegenerateClass { .. } => "DegenerateClass",
            Error::LabelOutOfRange { .. } => "LabelOutOfRange",
            Error::Shape(_) => "ShapeMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroTotalRate => "ZeroTotalRate",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::TooManySamples { .. } => "TooManySamples",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::DegenerateFeature { .. } => "DegenerateFeature",
            Error::ZeroVector { .. } => "ZeroVector",
            Error::ZeroSignalPower => "ZeroSignalPower",
            Error::InvalidRange(_) => "InvalidRange",
            Error::SingleClass => "SingleClass",
            Error::ZeroVariance => "ZeroVariance",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::AllSaturated => "AllSaturated",
            Error::LabelCountMismatch { .. } => "LabelCountMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}
