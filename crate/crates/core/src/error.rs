use core::fmt;

/// Which matrix of a pair an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Which::A => f.write_str("A"),
            Which::B => f.write_str("B"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    NotHermitian(Which),
    NotPositiveDefinite(Which),
    NonPositiveAlpha(f64),
    ZeroDimension,
    ParityMismatch,
    /// Requested more eigenpairs than the truncation has.
    TooManyEigenpairs { requested: usize, available: usize },
    ConvergenceFailure,
    TruncationBudgetExceeded { last_change: f64 },
    NotCommutative { commutator_norm: f64 },
    SingularDenominator { defect: f64 },
    /// The tetrad is not on the requested zero set. `degenerate_cokernel`
    /// is set when `a − β² = 0`, where the cokernel vector collapses.
    OffManifold { residual: f64, scale: f64, degenerate_cokernel: bool },
    InconsistentSystem { mismatch: f64 },
    OutsideRegion,
    OutOfInterval,
    InfeasibleFamilyPoint,
    NotFound,
    SingularEncountered,
    BudgetExceeded { samples: usize },
    InvalidArgument(&'static str),
}

impl Error {
    /// Errors caused by the caller's input rather than by a numerical failure.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            Error::ConvergenceFailure
                | Error::TruncationBudgetExceeded { .. }
                | Error::InconsistentSystem { .. }
                | Error::SingularEncountered
        )
    }
}

impl core::error::Error for Error {}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotHermitian(w) => write!(f, "matrix {w} is not Hermitian"),
            Error::NotPositiveDefinite(w) => write!(f, "matrix {w} is not positive definite"),
            Error::NonPositiveAlpha(a) => write!(f, "basis scale alpha must be positive, got {a}"),
            Error::ZeroDimension => f.write_str("truncation must contain at least one block"),
            Error::ParityMismatch => f.write_str("coefficient vector has the wrong parity"),
            Error::TooManyEigenpairs { requested, available } => {
                write!(f, "requested {requested} eigenpairs but only {available} exist")
            }
            Error::ConvergenceFailure => f.write_str("eigensolver did not converge"),
            Error::TruncationBudgetExceeded { last_change } => write!(
                f,
                "truncation budget exhausted, last eigenvalue change {last_change:e}"
            ),
            Error::NotCommutative { commutator_norm } => {
                write!(f, "pair does not commute (|AB-BA| = {commutator_norm:e})")
            }
            Error::SingularDenominator { defect } => {
                write!(f, "defect a+c-(1+b)beta^2 = {defect:e} is numerically zero")
            }
            Error::OffManifold { residual, scale, degenerate_cokernel } => {
                if *degenerate_cokernel {
                    f.write_str("point is off the manifold: a - beta^2 = 0 collapses the cokernel vector")
                } else {
                    write!(f, "point is off the manifold (residual {residual:e}, scale {scale:e})")
                }
            }
            Error::InconsistentSystem { mismatch } => {
                write!(f, "coefficient equations disagree (relative mismatch {mismatch:e})")
            }
            Error::OutsideRegion => f.write_str("tetrad lies outside the positive-definite region"),
            Error::OutOfInterval => f.write_str("b is outside the admissible interval for this sign"),
            Error::InfeasibleFamilyPoint => f.write_str("family point is not positive definite"),
            Error::NotFound => f.write_str("no sign change in the bracket"),
            Error::SingularEncountered => f.write_str("root finder hit a singular point"),
            Error::BudgetExceeded { samples } => write!(f, "grid of {samples} samples exceeds the budget"),
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
