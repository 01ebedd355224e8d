use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(zeta_N)")]
    DivisionByZero,

    /// A division that the construction guarantees to be exact left a
    /// remainder. Always an internal-consistency failure.
    #[error("non-exact polynomial division: {context}")]
    NonExactDivision { context: String },

    #[error("index order violation: need 1 <= i <= j <= n, got i={i}, j={j}, n={n}")]
    IndexOrder { i: usize, j: usize, n: usize },

    #[error("potential is not invariant under {element}: monomial {monomial} changes")]
    NotInvariant { element: String, monomial: String },

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("sector mismatch: {0}")]
    SectorMismatch(String),

    #[error("morphism is not closed: {0}")]
    NotClosed(String),

    #[error("morphism is not homogeneous")]
    Inhomogeneous,

    #[error("unknown group element `{0}`")]
    UnknownElement(String),
}
