use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A vertex appears in two groups, or not at all.
    PartitionOverlap(usize),
    PartitionMissing(usize),
    /// A terminal group with fewer than two vertices.
    UnitGroup(usize),
    VertexOutOfRange(usize),
    TriangleViolation { a: usize, b: usize, c: usize },
    WeightClassViolation { u: usize, v: usize },
    AsymmetricWeights { u: usize, v: usize },
    NegativeWeight { u: usize, v: usize },
    BadDimensions,
    InvalidCover(String),
    OddVertexCount,
    NoPerfectMatching,
    SizeMismatch,
    IsolatedVertex(usize),
    NoTwoFactor,
    /// A minimum T-join does not exist (odd target count in a component).
    TJoinInfeasible,
    NotEulerian(usize),
    /// Jain's rounding found no edge with value at least one half.
    RoundingStall,
    LpInfeasible,
    Precondition(String),
    BudgetExceeded { solver: &'static str, n: usize, max: usize },
    Overflow,
    /// Malformed instance or solution text; `line` is 1-based.
    Parse { line: usize, msg: String },
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PartitionOverlap(v) => write!(f, "vertex {v} appears in more than one group"),
            Error::PartitionMissing(v) => write!(f, "vertex {v} belongs to no group"),
            Error::UnitGroup(g) => write!(f, "group {g} has fewer than two vertices"),
            Error::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            Error::TriangleViolation { a, b, c } => {
                write!(f, "triangle inequality violated: w({a},{c}) > w({a},{b}) + w({b},{c})")
            }
            Error::WeightClassViolation { u, v } => {
                write!(f, "weight of ({u},{v}) is not 1 or 2")
            }
            Error::AsymmetricWeights { u, v } => {
                write!(f, "symmetric instance has w({u},{v}) != w({v},{u})")
            }
            Error::NegativeWeight { u, v } => write!(f, "negative weight on ({u},{v})"),
            Error::BadDimensions => write!(f, "weight matrix does not match vertex count"),
            Error::InvalidCover(msg) => write!(f, "invalid cycle cover: {msg}"),
            Error::OddVertexCount => write!(f, "perfect matching requested on an odd vertex count"),
            Error::NoPerfectMatching => write!(f, "graph has no perfect matching"),
            Error::SizeMismatch => write!(f, "left and right sides differ in size"),
            Error::IsolatedVertex(v) => write!(f, "vertex {v} is isolated"),
            Error::NoTwoFactor => write!(f, "no 2-factor exists"),
            Error::TJoinInfeasible => write!(f, "T-join infeasible: odd number of targets in a component"),
            Error::NotEulerian(v) => write!(f, "vertex {v} violates the Eulerian degree condition"),
            Error::RoundingStall => write!(f, "iterative rounding stalled: no edge with x(e) >= 1/2"),
            Error::LpInfeasible => write!(f, "cut LP is infeasible"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::BudgetExceeded { solver, n, max } => {
                write!(f, "{solver}: n = {n} exceeds oracle budget {max}")
            }
            Error::Overflow => write!(f, "arithmetic overflow while scaling weights"),
            Error::Parse { line, msg } => write!(f, "line {line}: {msg}"),
            Error::Internal(msg) => write!(f, "internal invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
