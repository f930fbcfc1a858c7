use thiserror::Error;

use crate::corering::Scalar;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero in coefficient")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("polynomials or matrices live over different ambients")]
    AmbientMismatch,
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("enumeration cap exceeded: {needed} > {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error("functional violates the linear relation {0:?}")]
    InconsistentFunctional(Vec<Scalar>),
    #[error("map is not surjective; target vector {0:?} is not reached")]
    NotSurjective(Vec<Scalar>),
    #[error("map does not send the source subspace into the target subspace")]
    NotInTarget,
    #[error("leading block is singular")]
    SingularBlock,
    #[error("relation {index} does not vanish at the point (value {value})")]
    NotOnScheme { index: usize, value: Scalar },
    #[error("vector is not tangent at the point")]
    NotTangent,
    #[error("map is not well defined: relation {0} of the target does not pull back into the source ideal")]
    MapNotWellDefined(usize),
    #[error("Jacobian is singular at the residue point")]
    SingularJacobian,
    #[error("relations do not vanish modulo the nilpotent ideal")]
    NotInNilpotentIdeal,
    #[error("system must be square: {relations} relations in {vars} variables")]
    NotSquare { relations: usize, vars: usize },
    #[error("invalid test extension: {0}")]
    InvalidExtension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
