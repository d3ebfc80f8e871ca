//! Exact combinatorics for families of k-sets with bounded matching number.
//!
//! Sets are `u64` bitmasks over `[n]`, `n <= 64`, with element `x` stored in
//! bit `x - 1`. Counts are arbitrary precision. The solver maximizes `|F|`
//! subject to `nu(F) <= s - 1` for instances with `binom(n, k)` up to
//! [`SOLVER_CAP`].

pub mod bounds;
pub mod combinatorics;
pub mod constructions;
pub mod error;
pub mod family;
pub mod partitions;
pub mod random;
pub mod scalar;
pub mod shifting;
pub mod solver;

use num_rational::BigRational;

/// Exact rationals used for densities and bound evaluation.
pub type Rational = BigRational;
pub type ExactBounds = bounds::BoundParams<Rational>;
pub type FloatBounds = bounds::BoundParams<f64>;

pub use bounds::{
    epsilon_formulas, stab_upper_bound, supersat_lower_bound, BoundParams, EpsilonPair,
};
pub use combinatorics::{
    binomial, colex_rank, colex_unrank, enumerate_ksets, BigCount, GroundSet, KSet, MAX_N,
};
pub use constructions::{construct_a, construct_b, kleitman_extremal, star};
pub use error::{EmcError, Result};
pub use family::{DegreeProfile, Family, FamilyJson};
pub use partitions::{
    count_m, count_m_prime, count_partitions, enumerate_partitions, verify_double_count,
    DoubleCountReport, Partition,
};
pub use scalar::{parse_rational, render_rational, Scalar};
pub use shifting::{
    is_left_compressed, left_compress, shift_family, verify_shiftdeg_a, verify_shiftdeg_b,
    ShiftPair,
};
pub use solver::{
    certify, drop_ratio_check, emc_consistency, enumerate_optima, export_lp, kleitman_check, solve,
    solve_max_family, solve_min_disjoint_pairs, Certificate, DropRatioReport, EmcReport,
    KleitmanReport, Objective, Problem, SolverResult, OPTIMA_CAP, SOLVER_CAP,
};
