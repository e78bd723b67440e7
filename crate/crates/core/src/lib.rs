//! Exact symbolic computation in the free bialgebra `k<g,h>` on the ordered
//! alphabet `g < h`, together with the machinery hanging off it: Lyndon words
//! and the Lyndon–Shirshov basis, shuffle type polynomials, PBW coordinates,
//! the quotient bialgebra obtained by forcing the `E`-generators to commute,
//! its localization and the chain of quotient Hopf algebras in positive
//! characteristic, the commutative and noncommutative Faa di Bruno bialgebras,
//! and growth/dimension/filtration analysis on top of all of them.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals or
//! prime-field residues, and no floating point enters the algebraic core (the
//! growth-slope estimator in [`analysis`] is the one deliberately numeric
//! exception).

pub mod analysis;
pub mod exec;
pub mod cli;
pub mod expr;
pub mod fdb;
pub mod free;
pub mod linalg;
pub mod quotient;
pub mod report;
pub mod scalar;
pub mod word;

pub use scalar::{Field, Scalar};
pub use word::{Letter, Word};

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("operands live in different fields: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid partition: block sizes {got} do not sum to {want}")]
    InvalidPartition { want: u64, got: u64 },
    #[error("the empty word is not allowed here")]
    EmptyWord,
    #[error("`{0}` is not a Lyndon word")]
    NotLyndon(String),
    #[error("single letters have no standard factorization")]
    SingleLetter,
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("characteristic {chr} does not match preset parameter p = {p}")]
    CharMismatch { chr: u64, p: u64 },
    #[error("p = {p} does not divide n = {n}")]
    PNotDividingN { p: u64, n: u64 },
    #[error("bad d-vector: {0}")]
    BadDVector(String),
    #[error("generator {0} is not legal for this preset")]
    IllegalGenerator(String),
    #[error("rewriting did not terminate within the fuel limit (internal bug)")]
    NonTerminating,
    #[error("element belongs to a different algebra preset")]
    SpecMismatch,
    #[error("this preset is a bialgebra without antipode")]
    NotHopf,
    #[error("bad Bell polynomial indices (n, k) = ({0}, {1})")]
    BadIndices(u32, u32),
    #[error("this check needs characteristic 0")]
    CharPositive,
    #[error("characteristic {0} is too small for this check")]
    CharTooSmall(u64),
    #[error("graded piece is infinite dimensional; supply a g-exponent cap")]
    InfinitePiece,
    #[error("degenerate fit window ({0}, {1})")]
    DegenerateWindow(u32, u32),
    #[error("index {0} out of range for this preset")]
    IndexOutOfRange(u32),
    #[error("truncation bound too large: {0}")]
    BoundTooLargeForMemory(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
