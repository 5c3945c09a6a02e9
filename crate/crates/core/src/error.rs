use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable `{name}` at {pos} is outside the declared dimension")]
    VariableOutOfRange { name: String, pos: usize },
    #[error("radical at {pos} does not match the field: {msg}")]
    RadicalMismatch { pos: usize, msg: String },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("symbolic expansion of about {terms} terms exceeds the cap {cap}")]
    ExpansionCapExceeded { terms: u64, cap: u64 },
    #[error("iterated bracket did not vanish within {cap} steps")]
    NonNilpotent { cap: usize },
    #[error("map is not symplectic")]
    NotSymplectic,
    #[error("matrix is not symmetric")]
    AsymmetricInput,
    #[error("regularity could not be certified within the sample budget")]
    RegularityUnknown,
    #[error("Hamiltonian is not affine-integrable")]
    NotAffineIntegrable,
    #[error("H(x) J H(x) does not vanish at the given point")]
    PreconditionMJM,
    #[error("p-p Hessian block is singular at the given point")]
    SingularA,
    #[error("Z A^-1 is not symmetric (asymmetry {asymmetry:.3e})")]
    AsymmetricZeta { asymmetry: f64 },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("no sample point with nonsingular p-p Hessian block")]
    NoValidPoint,
    #[error("Hamiltonian is not a shear")]
    NotAShear,
    #[error("DX(x)DX(y)DX(z) does not vanish identically")]
    NotTripleNilpotent,
    #[error("no point with Hessian rank n found within the sample budget")]
    NoRankNPoint,
    #[error("F - I is not homogeneous of degree >= 2")]
    NotHomogeneous,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("W^T DV - V^T DW does not vanish")]
    IntegrabilityViolated,
    #[error("F - I has degree {degree}, expected 3")]
    NotCubic { degree: u32 },
    #[error("map is degenerate: no rank-n point within the sample budget")]
    DegenerateMap,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    /// Stable name of the error kind, used in reports and CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "Parse",
            Error::VariableOutOfRange { .. } => "VariableOutOfRange",
            Error::RadicalMismatch { .. } => "RadicalMismatch",
            Error::InvalidField(_) => "InvalidField",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegreeCapExceeded { .. } | Error::ExpansionCapExceeded { .. } => "DegreeCapExceeded",
            Error::NonNilpotent { .. } => "NonNilpotent",
            Error::NotSymplectic => "NotSymplectic",
            Error::AsymmetricInput => "AsymmetricInput",
            Error::RegularityUnknown => "RegularityUnknown",
            Error::NotAffineIntegrable => "NotAffineIntegrable",
            Error::PreconditionMJM => "PreconditionMJM",
            Error::SingularA => "SingularA",
            Error::AsymmetricZeta { .. } => "AsymmetricZeta",
            Error::NumericFailure(_) => "NumericFailure",
            Error::NoValidPoint => "NoValidPoint",
            Error::NotAShear => "NotAShear",
            Error::NotTripleNilpotent => "NotTripleNilpotent",
            Error::NoRankNPoint => "NoRankNPoint",
            Error::NotHomogeneous => "NotHomogeneous",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::IntegrabilityViolated => "IntegrabilityViolated",
            Error::NotCubic { .. } => "NotCubic",
            Error::DegenerateMap => "DegenerateMap",
            Error::Precondition(_) => "Precondition",
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::VariableOutOfRange { .. }
                | Error::RadicalMismatch { .. }
                | Error::InvalidField(_)
        )
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NumericFailure(_))
    }
}
