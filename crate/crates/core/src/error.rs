use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The flow polytope has no nonnegative flow at all.
    #[error("the flow polytope is empty")]
    EmptyPolytope,

    /// An operation that forbids loops (or loops away from vertex 1) met one.
    #[error("unexpected loop at vertex {0}")]
    UnexpectedLoop(usize),

    /// The Ehrhart interpolant through `t = 0..=d` missed the extra sample at
    /// `t = d + 1`, which indicates a wrong dimension.
    #[error("interpolation guard failed at t = {t}: interpolant {expected}, counted {actual}")]
    InterpolationGuard {
        t: u64,
        expected: String,
        actual: String,
    },

    /// A dynamic flow that is not hit by the family correspondence.
    #[error("dynamic flow is not in the image of the family correspondence: {0}")]
    NotInImage(String),

    #[error("reduction node budget of {0} exceeded")]
    NodeBudgetExceeded(usize),

    /// A Gamma product whose sqrt(pi) powers failed to cancel.
    #[error("value has a residual sqrt(pi) factor of exponent {0}")]
    SqrtPiResidue(i64),

    /// Gamma evaluated outside the positive half-integers.
    #[error("gamma argument {0}/2 is not positive")]
    GammaArgument(i64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
