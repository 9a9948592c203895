//! Exact and certified arithmetic: dyadic balls, lazily refined reals,
//! integer polynomials with root isolation.

mod ball;
mod poly;
mod real;

pub use ball::{Ball, Dyadic, DEFAULT_PREC};
pub use poly::{refine_root, PolyZ};
pub use real::{floor_scaled, Precision, Real};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("root not isolated")]
    RootNotIsolated,
    #[error("interval not isolating")]
    IntervalNotIsolating,
    #[error("log of nonpositive")]
    LogNonPositive,
    #[error("sqrt of negative")]
    SqrtNegative,
    #[error("division by a ball containing zero")]
    DivisionByZero,
    #[error("floor uncertifiable at precision cap {cap} bits")]
    FloorUncertifiable { cap: u32 },
    #[error("{what}: uncertifiable at precision cap {cap} bits")]
    Uncertifiable { what: String, cap: u32 },
    #[error("roots uncertified")]
    RootsUncertified,
    #[error("cannot parse number `{0}`")]
    Parse(String),
}
