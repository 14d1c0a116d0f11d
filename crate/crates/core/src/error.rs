use thiserror::Error;

use crate::structure::Violation;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("invalid sequence family `{0}`")]
    Family(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error("structure violates {} axiom(s):\n{}", .0.len(), render_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no arrow {0} -> {1}")]
    UnknownArrow(String, String),
    #[error("`{outcome}` is not an outcome of `{variable}`")]
    UnknownOutcome { variable: String, outcome: String },
    #[error("no product of `{0}` and `{1}`")]
    NoProduct(String, String),
}

fn render_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[derive(Debug, Error, PartialEq)]
pub enum FunctionalError {
    #[error("functional lives on `{found}` but `{expected}` was required")]
    VariableMismatch { expected: String, found: String },
    #[error("`{coarse}` is not coarser than `{fine}`")]
    NotCoarser { coarse: String, fine: String },
    #[error("`{outcome}` is not an outcome of `{variable}`")]
    UnknownOutcome { variable: String, outcome: String },
    #[error("conditioning on `{variable}` = `{outcome}` which has zero mass")]
    ZeroConditioningMass { variable: String, outcome: String },
    #[error("no product of `{0}` and `{1}`")]
    MissingProduct(String, String),
    #[error("invalid counting function: {0}")]
    InvalidCounts(String),
    #[error("invalid probability law: {0}")]
    InvalidLaw(String),
    #[error("entropy order must be positive")]
    NonPositiveOrder,
}

#[derive(Debug, Error, PartialEq)]
pub enum FwError {
    #[error("all parts are zero")]
    AllZeroParts,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("sequence prefix has {len} terms, D_{requested} requested")]
    BeyondPrefix { len: usize, requested: usize },
    #[error("inadmissible sequence: {0}")]
    Inadmissible(String),
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
    #[error("table entry {parts:?} is {found}, recovered sequence gives {expected}")]
    InconsistentTable {
        parts: (u32, u32),
        found: String,
        expected: String,
    },
    #[error("table is missing entry {0:?}")]
    IncompleteTable((u32, u32)),
}

#[derive(Debug, Error, PartialEq)]
pub enum CohomologyError {
    #[error("cochain of degree {expected} evaluated on {found} generator(s)")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("table bound {bound} exceeded: [{generators}] needs magnitude {magnitude}")]
    TableBoundExceeded { generators: String, magnitude: u64, bound: u32 },
    #[error("table has no entry for [{generators}] at {counts:?}")]
    MissingEntry { generators: String, counts: Vec<u32> },
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Fw(#[from] FwError),
    #[error("boundary condition fails: {table}{parts:?} = {value}")]
    BoundaryViolation { table: String, parts: (u32, u32), value: String },
    #[error("{table}({n}, 1) = {left} but {table}(1, {n}) = {right}")]
    SymmetryViolation { table: String, n: u32, left: String, right: String },
    #[error("functional equation fails at (ν0, ν1, ν2) = {triple:?}: {lhs} vs {rhs}")]
    FunctionalEquationViolation { triple: (u32, u32, u32), lhs: String, rhs: String },
    #[error("point outside the admissible domain: {0}")]
    DomainViolation(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("product of `{0}` and `{1}` is degenerate")]
    DegenerateProduct(String, String),
    #[error("component {0:?} has no nondegenerate product")]
    NoNondegenerateProduct(Vec<String>),
}

#[derive(Debug, Error, PartialEq)]
pub enum AsymptoticsError {
    #[error("unsupported family for this check: {0}")]
    UnsupportedFamily(String),
    #[error("invalid sample sizes: {0}")]
    InvalidSizes(String),
    #[error("non-finite value at n = {0}")]
    Overflow(u64),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Fw(#[from] FwError),
}
