use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),

    #[error(transparent)]
    Parse(#[from] ParseRationalError),

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("exterior problem has no solution: boundary coefficient vanishes at l = {ell}")]
    NoSolution { ell: usize },

    /// Two independent computations of the same quantity disagree.
    #[error("verification failed for {name}: computed {computed}, expected {expected}")]
    Verification {
        name: String,
        computed: String,
        expected: String,
    },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
