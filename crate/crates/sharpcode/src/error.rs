use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A bracket handed to the root isolator contains no sign change.
    MissingRoot {
        lo: f64,
        hi: f64,
    },
    /// A constructed rule failed its own certification.
    RuleConstruction(String),
    /// A negative or zero quadrature weight where positivity is required.
    NonpositiveWeight {
        node: f64,
        weight: f64,
    },
    /// Unknown catalog name or malformed parametric name.
    UnknownCode(String),
    /// A catalog construction failed one of its self-checks.
    CodeSelfCheck {
        code: String,
        check: String,
    },
    /// The requested bound level is not attained by this code.
    LevelNotAttained {
        code: String,
        level: String,
        reason: String,
    },
    /// Invalid argument (dimension, degree, multiplicity, ...).
    InvalidArgument(String),
    /// Potential kernel evaluated at (or too close to) its singularity.
    SingularEvaluation {
        t: f64,
    },
    /// Interpolant fails to stay below the potential.
    DominationFailure {
        t: f64,
        excess: f64,
    },
    /// Distance clustering could not separate two nearby values.
    ClusterAmbiguity {
        a: f64,
        b: f64,
    },
    /// Per-point distributions expected to coincide differ.
    DistributionMismatch(String),
    /// Kernel spec string could not be parsed.
    BadPotentialSpec(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MissingRoot { lo, hi } => {
                write!(f, "missing root: no sign change on [{lo}, {hi}]")
            }
            Error::RuleConstruction(msg) => write!(f, "quadrature construction failed: {msg}"),
            Error::NonpositiveWeight { node, weight } => {
                write!(f, "nonpositive weight {weight} at node {node}")
            }
            Error::UnknownCode(name) => write!(f, "unknown code '{name}'"),
            Error::CodeSelfCheck { code, check } => {
                write!(f, "self-check failed for {code}: {check}")
            }
            Error::LevelNotAttained {
                code,
                level,
                reason,
            } => {
                write!(f, "{code} does not attain the {level} bound: {reason}")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SingularEvaluation { t } => {
                write!(f, "potential is singular at t = 1 (evaluation at t = {t})")
            }
            Error::DominationFailure { t, excess } => {
                write!(
                    f,
                    "interpolant exceeds the potential at t = {t} by {excess:e}"
                )
            }
            Error::ClusterAmbiguity { a, b } => {
                write!(
                    f,
                    "distance clusters at {a} and {b} are too close to separate"
                )
            }
            Error::DistributionMismatch(msg) => write!(f, "distribution mismatch: {msg}"),
            Error::BadPotentialSpec(spec) => write!(f, "cannot parse potential spec '{spec}'"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
