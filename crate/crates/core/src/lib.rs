//! Exact convexification and minimization of L♮-convex functions.
//!
//! The crate works entirely over exact rationals. Its layers:
//!
//! - [`rat`], [`lattice`], [`linalg`]: scalars, boxes, permutations,
//!   inequalities and exact elimination;
//! - [`lp`]: a two-phase rational simplex with duals and certificates;
//! - [`fnzoo`] and [`checkers`]: function oracles and finite-box verifiers
//!   for midpoint convexity, submodularity and integral convexity;
//! - [`sepi`]: greedy epigraph inequalities, exact separation, hull
//!   assembly and a cutting-plane minimizer;
//! - [`mixing`], [`jointepi`], [`misepi`]: the integer mixing set, joint
//!   epigraphs, and the mixed-integer extension `max_i h^i(x) - y_i`;
//! - [`oracle`]: brute-force references that share no code with the above.

pub mod checkers;
pub mod fixtures;
pub mod fnzoo;
pub mod jointepi;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod misepi;
pub mod mixing;
pub mod oracle;
pub mod rat;
pub mod sepi;

pub use lattice::{
    chain, join, meet, unit_hypercube, Bound, DiscreteBox, FractionalPoint, LatticePoint,
    LinearInequality, Permutation,
};
pub use rat::{fmt_compact, fmt_rational, int, parse_rational, rat, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("box has an infinite bound")]
    UnboundedBox,
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("inequality has no variable coefficients")]
    ZeroInequality,
    #[error("univariate table is not discretely convex at t = {0}")]
    NotDiscretelyConvex(i64),
    #[error("matrix is not a symmetric diagonally dominant M-matrix: {0}")]
    NotMMatrix(String),
    #[error("affine pair violates the difference structure: {0}")]
    BadStructure(String),
    #[error("box too large: {0}")]
    BoxTooLarge(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("box contains no pair x, x + 1")]
    NoInteriorPair,
    #[error("p = {0:?} is not in the inner box (p + 1 must stay in the domain)")]
    PointNotInInnerBox(Vec<i64>),
    #[error("point lies outside the relaxed box")]
    PointOutsideBox,
    #[error("extra constraints are infeasible on the working box")]
    InfeasibleExtras,
    #[error("weights are not in U: {0}")]
    NotInU(String),
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("h-values tie at level {0}")]
    DistinctnessViolated(usize),
    #[error("no boundary level exists for these weights")]
    NoBoundaryLevels,
    #[error("arcs do not form an elementary cycle: {0}")]
    NotElementary(String),
    #[error("invalid arc ({0}, {1}): equal q on a non-loop")]
    InvalidArc(usize, usize),
    #[error("objective is unbounded below: {0}")]
    UnboundedObjective(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("malformed LP: {0}")]
    MalformedProblem(String),
    #[error("simplex exceeded its pivot budget of {0}")]
    PivotBudget(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
