use thiserror::Error;

/// Errors raised by the geometry and counting engines.
///
/// Variant names double as the machine-readable `code` reported by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus {0} is too large: p^2 must fit in 64 bits")]
    ModulusTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the two points coincide")]
    IdenticalPoints,
    #[error("budget exceeded: {what} needs {needed} operations, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u64,
    },
    #[error("need at least two objects, got {0}")]
    TooFewObjects(usize),
    #[error("vector does not satisfy the Klein relation")]
    NotOnKleinQuadric,
    #[error("lines {0} and {1} are not skew")]
    NotMutuallySkew(usize, usize),
    #[error("conic is degenerate (rank {rank}, {} rational line factors)", factors.len())]
    DegenerateConic {
        rank: usize,
        factors: Vec<Vec<[u64; 6]>>,
    },
    #[error("line complex is singular")]
    SingularComplex,
    #[error("no admissible choice found after {draws} draws")]
    SearchExhausted { draws: u64 },
    #[error("line {0} is not contained in the three-quadric")]
    NotInG(usize),
    #[error("line {0} has fewer than two rational points")]
    FewerThanTwoRationalPoints(usize),
    #[error("m < n and dualization was not allowed")]
    OrientationError,
    #[error("no nonzero polynomial of degree {degree} vanishes on the lines")]
    NoKernel { degree: usize },
    #[error("degree {degree} interpolation needs p >= {needed}")]
    DegreeTooLarge { degree: usize, needed: u64 },
    #[error("modulus {p} too small: need p > {needed}")]
    ModulusTooSmall { p: u64, needed: u64 },
    #[error("cubic surface contains a plane")]
    DegenerateCubic,
    #[error("insufficient space: {0}")]
    InsufficientSpace(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("missing artifact: {0}")]
    MissingArtifact(String),
}

impl Error {
    /// Stable short identifier for structured error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::EvenCharacteristic => "EvenCharacteristic",
            Error::ModulusTooLarge(_) => "ModulusTooLarge",
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroVector => "ZeroVector",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::IdenticalPoints => "IdenticalPoints",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::TooFewObjects(_) => "TooFewObjects",
            Error::NotOnKleinQuadric => "NotOnKleinQuadric",
            Error::NotMutuallySkew(..) => "NotMutuallySkew",
            Error::DegenerateConic { .. } => "DegenerateConic",
            Error::SingularComplex => "SingularComplex",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::NotInG(_) => "NotInG",
            Error::FewerThanTwoRationalPoints(_) => "FewerThanTwoRationalPoints",
            Error::OrientationError => "OrientationError",
            Error::NoKernel { .. } => "NoKernel",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::ModulusTooSmall { .. } => "ModulusTooSmall",
            Error::DegenerateCubic => "DegenerateCubic",
            Error::InsufficientSpace(_) => "InsufficientSpace",
            Error::InvalidInput(_) => "InvalidInput",
            Error::MissingArtifact(_) => "MissingArtifact",
        }
    }

    /// True for failures caused by a finite search or work budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::SearchExhausted { .. } | Error::BudgetExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
