use thiserror::Error;

/// Errors raised by the numerical kernels and the higher-level constructions.
///
/// Pole-type variants carry a short description of the offending factor so
/// that a failing verification run points at the formula involved.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("q-shifted factorial vanishes: {0}")]
    Zero(String),
    #[error("pole in denominator: {0}")]
    PoleAtDenominator(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("q-gamma pole at nonpositive integer argument {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("evaluation point too close to a pole: {0}")]
    NearPole(String),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("evaluation point has a zero coordinate")]
    ZeroCoordinate,
    #[error("sample matrix ill conditioned after {0} attempts")]
    IllConditionedSamples(usize),
    #[error("diagonal of operator matrix disagrees with closed-form eigenvalue at {mu:?} (rel {rel:e})")]
    DiagonalMismatch { mu: Vec<u32>, rel: f64 },
    #[error("eigenvalue collision between {lambda:?} and {mu:?}")]
    EigenvalueCollision { lambda: Vec<u32>, mu: Vec<u32> },
    #[error("pole in product: {0}")]
    PoleInProduct(String),
    #[error("pole in prefactor: {0}")]
    PoleInPrefactor(String),
    #[error("pole in weight: {0}")]
    PoleInWeight(String),
    #[error("pole in theta function: {0}")]
    PoleInTheta(String),
    #[error("pole in q-gamma product: {0}")]
    PoleInGamma(String),
    #[error("parameters outside the admissible domain: {0}")]
    DomainViolation(String),
    #[error("weight expected positive but evaluated to {0}")]
    NonPositiveWeight(String),
    #[error("two closed forms disagree: {0}")]
    FormMismatch(String),
    #[error("pole survives symbolic cancellation: {0}")]
    UncancelledPole(String),
    #[error("multisum did not converge within depth {0}")]
    SlowConvergence(usize),
    #[error("Gram matrix numerically singular (condition number {0:e})")]
    SingularGram(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
