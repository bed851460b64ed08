use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor of degree {0} in t is not a unit")]
    NonUnitDivisor(isize),

    #[error("monomial degree {degree} outside 1..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear part is singular")]
    SingularLinearPart,
    #[error("cannot project order {from} jet to higher order {to}")]
    OrderIncrease { from: usize, to: usize },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("eigenvalues carry no declared multiplicative structure")]
    UnclassifiableSpectrum,
    #[error("unsupported spectrum: {0}")]
    SpectrumUnsupported(String),

    #[error("coefficients must be exact")]
    InexactCoefficients,
    #[error("parameter vector has length {got}, expected {expected}")]
    ParameterLengthMismatch { expected: usize, got: usize },
    #[error("lambda is a root of unity")]
    RootOfUnityLambda,

    #[error("family is obstructed at degree {degree}: coordinate {coordinate}, exponents {exponents:?}")]
    FamilyObstructed { degree: usize, exponents: Vec<u32>, coordinate: usize, witness: Vec<crate::rings::ExactComplex> },
    #[error("germ is not linearizable at order {order}")]
    NotLinearizable { order: usize },
    #[error("linear part does not satisfy A^{q} = I")]
    TorsionMismatch { q: usize },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("axis {0} is not an eigendirection of the linear part")]
    NotEigendirection(usize),
    #[error("perturbation has valuation {0}, at least 2 required")]
    ValuationTooLow(usize),

    #[error("precision of {bits} bits cannot separate a divisor from zero")]
    PrecisionTooLow { bits: usize },
    #[error("continued fraction expansion lost stability after {terms} terms at {bits} bits")]
    PrecisionExhausted { terms: usize, bits: usize },
    #[error("growth certificate has no sampled coefficients")]
    EmptyCertificate,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    /// True for errors caused by malformed input or the environment rather than by the mathematics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::InvariantViolation(_)
                | Error::Io { .. }
                | Error::InvalidArgument(_)
                | Error::ParameterLengthMismatch { .. }
                | Error::DimensionMismatch(_)
        )
    }
}
