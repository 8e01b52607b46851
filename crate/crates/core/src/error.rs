use thiserror::Error;

use crate::reduction::Endpoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChebError {
    #[error("degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("t = {t} lies outside [{a}, {b}]")]
    OutOfDomain { t: f64, a: f64, b: f64 },
    #[error("a Chebyshev series needs at least one coefficient")]
    EmptySeries,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("unbalanced parentheses")]
    UnbalancedParens,
    #[error("expected an operand")]
    EmptyOperand,
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected trailing input")]
    TrailingInput,
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("exponent must not depend on t")]
    NonConstantExponent,
    #[error("expression must not depend on t")]
    NotConstant,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate `{expr}` at t = {t}: {reason}")]
pub struct EvalError {
    pub expr: String,
    pub t: f64,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Eval { line: usize, source: EvalError },
    #[error("missing required directive `{0}`")]
    Missing(&'static str),
    #[error("line {line}: duplicate directive `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("order must be a positive integer")]
    InvalidOrder,
    #[error("invalid interval [{a}, {b}]: need finite a < b")]
    InvalidInterval { a: f64, b: f64 },
    #[error("coefficient index {index} outside 1..={order}")]
    CoeffIndex { index: usize, order: usize },
    #[error("expected m={expected} boundary conditions, found {found}")]
    BcCount { expected: usize, found: usize },
    #[error("duplicate boundary condition on derivative {k} at the {endpoint} endpoint")]
    DuplicateBc { k: usize, endpoint: Endpoint },
    #[error("boundary condition on derivative {k} needs k < order {order}")]
    BcOrder { k: usize, order: usize },
    #[error("line {line}: `{found}` is not an interval bound")]
    UnknownEndpoint { line: usize, found: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("n must be ≥ order (n = {n}, order = {m})")]
    DegreeTooSmall { n: usize, m: usize },
    #[error("coefficient evaluation failed at node {node} (t = {t}): {source}")]
    Eval {
        node: usize,
        t: f64,
        source: EvalError,
    },
    #[error("expected {expected} boundary conditions, found {found}")]
    BcArity { expected: usize, found: usize },
    #[error("conflicting boundary conditions on component {component} at the {endpoint} endpoint")]
    ConflictingBc { component: usize, endpoint: Endpoint },
    #[error("boundary condition names component {component}, system has {m}")]
    BcComponent { component: usize, m: usize },
    #[error("collocation matrix is numerically singular (condition estimate {cond:e})")]
    Singular { cond: f64 },
    #[error(transparent)]
    Cheb(#[from] ChebError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvaluateError {
    #[error("derivative order {deriv} out of range: solution carries derivatives 0..={max}")]
    DerivOutOfRange { deriv: usize, max: usize },
    #[error(transparent)]
    Domain(#[from] ChebError),
}
