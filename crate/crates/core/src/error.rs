use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a > 1 required (got a = {0})")]
    BlowUpBaseTooSmall(u32),
    #[error("a < b required (got a = {a}, b = {b})")]
    BasesNotOrdered { a: u32, b: u32 },
    #[error("digit {digit} outside alphabet 0..{b}")]
    DigitOutOfRange { digit: u32, b: u32 },
    #[error("x must lie in [0,1] (got {0})")]
    OutOfUnitInterval(Rational),
    #[error("period must contain at least one digit")]
    EmptyPeriod,
    #[error("digit set must be nonempty")]
    EmptyDigitSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("enumeration overflow: node cap {cap} exceeded at depth {depth}")]
    EnumerationOverflow {
        cap: u64,
        depth: usize,
        partial_counts: Vec<u128>,
    },
    #[error("combinatorial cap exceeded: {needed} > {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("count overflowed 128 bits at depth {0}")]
    CountOverflow(usize),
    #[error("bisection did not reach |f(s)| < {tol} (residual {residual})")]
    NotConverged { tol: f64, residual: f64 },
    #[error("degenerate regression: {0}")]
    DegenerateRegression(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for resource exhaustion, as opposed to bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::EnumerationOverflow { .. }
                | Error::CapExceeded { .. }
                | Error::CountOverflow(_)
                | Error::NotConverged { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
