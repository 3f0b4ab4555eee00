use std::fmt;

/// Errors shared across the library.
///
/// Anything detectable on well-formed input (improper charts, exhausted chart
/// searches) is reported here rather than panicking; panics are reserved for
/// contract violations inside the library (e.g. mixing polynomials from
/// different universes in arithmetic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A polynomial was expected to be nonzero (leading terms, colon divisors).
    ZeroPolynomial(&'static str),
    /// A module element had the wrong number of components.
    RankMismatch { expected: usize, found: usize },
    /// Two objects from different variable universes were combined.
    UniverseMismatch,
    /// A polynomial used variables outside the range permitted by the operation.
    VariableOutOfScope { name: String, context: &'static str },
    /// Quotient annihilator requires the reference module to contain the other.
    NotContained,
    /// The singular-base test needs a nonzero base ideal.
    ZeroBaseIdeal,
    /// The strict transform of the base ideal misses the origin on every
    /// candidate chart, so no verdict can be computed there.
    NoChartFound,
    /// A specific chart was requested but its strict transform misses the origin.
    ImproperChart { exceptional: usize },
    /// Coordinate-change constants need a nonzero homogeneous input.
    InhomogeneousInput,
    /// Map components must vanish at the origin.
    MapNotCentered { component: usize },
    /// Problem-file syntax error with 1-based position.
    Parse { line: usize, col: usize, msg: String },
    /// Validation error on an otherwise well-formed problem file.
    Input(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroPolynomial(ctx) => write!(f, "zero polynomial not allowed: {ctx}"),
            Error::RankMismatch { expected, found } => {
                write!(f, "module rank mismatch: expected {expected} components, found {found}")
            }
            Error::UniverseMismatch => write!(f, "objects come from different variable universes"),
            Error::VariableOutOfScope { name, context } => {
                write!(f, "variable {name} is not allowed in {context}")
            }
            Error::NotContained => {
                write!(f, "quotient annihilator requires the second module to contain the first")
            }
            Error::ZeroBaseIdeal => {
                write!(f, "singular-base test requires a nonzero base ideal")
            }
            Error::NoChartFound => write!(
                f,
                "no blow-up chart found: the strict transform misses the origin for every \
                 candidate chart and coordinate change"
            ),
            Error::ImproperChart { exceptional } => write!(
                f,
                "strict transform misses the origin on the requested chart \
                 (exceptional variable index {exceptional})"
            ),
            Error::InhomogeneousInput => {
                write!(f, "coordinate-change constants require a nonzero homogeneous polynomial")
            }
            Error::MapNotCentered { component } => {
                write!(f, "map component {component} has a nonzero constant term")
            }
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
