use std::time::Duration;

use serde::Serialize;

use crate::combinatorics::{binomial_u64, BigCount, GroundSet};
use crate::error::{EmcError, Result};
use crate::family::Family;

/// Largest `binom(n, k)` the solver accepts.
pub const SOLVER_CAP: u64 = 1 << 20;

/// Most optimal families [`enumerate_optima`](super::enumerate_optima) will
/// return.
pub const OPTIMA_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Objective {
    /// Largest family with matching number at most `s - 1`.
    MaxSize,
    /// Fewest disjoint pairs among families of exactly `fixed_size` members.
    /// The matching constraint is not applied.
    MinDisjointPairs,
}

/// A constrained search instance over subfamilies of `binom([n], k)`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub objective: Objective,
    pub min_degree: Option<u64>,
    pub max_degree: Option<u64>,
    pub fixed_size: Option<u64>,
    pub restrict_left_compressed: bool,
    pub forced: Option<Family>,
    pub forbidden: Option<Family>,
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub workers: usize,
    /// Number of leading branch decisions that define the independent subtrees.
    pub split_depth: u32,
    /// Start from the best named construction that satisfies the constraints.
    pub seed_incumbent: bool,
}

impl Problem {
    pub fn max_size(n: u32, k: u32, s: u32) -> Self {
        Problem {
            n,
            k,
            s,
            objective: Objective::MaxSize,
            min_degree: None,
            max_degree: None,
            fixed_size: None,
            restrict_left_compressed: false,
            forced: None,
            forbidden: None,
            node_budget: None,
            time_budget: None,
            workers: 1,
            split_depth: 8,
            seed_incumbent: true,
        }
    }

    pub fn min_disjoint_pairs(n: u32, k: u32, fixed_size: u64, max_degree: u64) -> Self {
        Problem {
            objective: Objective::MinDisjointPairs,
            fixed_size: Some(fixed_size),
            max_degree: Some(max_degree),
            s: 2,
            ..Problem::max_size(n, k, 2)
        }
    }

    pub fn left_compressed(mut self) -> Self {
        self.restrict_left_compressed = true;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_min_degree(mut self, d: u64) -> Self {
        self.min_degree = Some(d);
        self
    }

    pub fn with_max_degree(mut self, d: u64) -> Self {
        self.max_degree = Some(d);
        self
    }

    pub fn candidate_count(&self) -> u64 {
        binomial_u64(self.n, self.k)
    }

    pub fn validate(&self) -> Result<()> {
        GroundSet::new(self.n)?;
        if self.k == 0 || self.k > self.n {
            return Err(EmcError::InvalidParameters(format!(
                "need n >= k >= 1, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if self.s < 2 {
            return Err(EmcError::InvalidParameters(format!(
                "need s >= 2, got {}",
                self.s
            )));
        }
        let total = self.candidate_count();
        if total > SOLVER_CAP {
            return Err(EmcError::CapExceeded(format!(
                "binom({}, {}) = {total} exceeds solver cap {SOLVER_CAP}",
                self.n, self.k
            )));
        }
        if self.restrict_left_compressed && (self.min_degree.is_some() || self.max_degree.is_some())
        {
            return Err(EmcError::InvalidParameters(
                "left-compressed restriction is only sound without degree constraints".into(),
            ));
        }
        if self.restrict_left_compressed && self.objective != Objective::MaxSize {
            return Err(EmcError::InvalidParameters(
                "left-compressed restriction applies to the maximum-size objective only".into(),
            ));
        }
        if self.objective == Objective::MinDisjointPairs && self.fixed_size.is_none() {
            return Err(EmcError::InvalidParameters(
                "minimum disjoint pairs needs a fixed size".into(),
            ));
        }
        for fam in [&self.forced, &self.forbidden].into_iter().flatten() {
            if fam.n() != self.n || fam.k() != self.k {
                return Err(EmcError::ShapeMismatch);
            }
        }
        if let (Some(f), Some(g)) = (&self.forced, &self.forbidden) {
            if let Some(both) = f.iter().find(|s| g.contains(*s)) {
                return Err(EmcError::InvalidParameters(format!(
                    "{both} is both forced and forbidden"
                )));
            }
        }
        Ok(())
    }

    /// Whether `family` meets every constraint of the instance (the objective
    /// value itself is not checked).
    pub fn admits(&self, family: &Family) -> bool {
        if family.n() != self.n || family.k() != self.k {
            return false;
        }
        if self.objective == Objective::MaxSize && family.has_matching_of_size(self.s) {
            return false;
        }
        if let Some(size) = self
            .fixed_size
            .filter(|_| self.objective == Objective::MinDisjointPairs)
        {
            if family.len() as u64 != size {
                return false;
            }
        }
        let profile = family.degree_profile();
        if self.min_degree.is_some_and(|d| profile.min_degree < d) {
            return false;
        }
        if self.max_degree.is_some_and(|d| profile.max_degree > d) {
            return false;
        }
        if self
            .forced
            .as_ref()
            .is_some_and(|f| !f.is_subfamily_of(family))
        {
            return false;
        }
        if self
            .forbidden
            .as_ref()
            .is_some_and(|g| family.iter().any(|s| g.contains(s)))
        {
            return false;
        }
        if self.restrict_left_compressed && !crate::shifting::is_left_compressed(family) {
            return false;
        }
        true
    }
}

/// The certified outcome of a search.
#[derive(Debug, Clone)]
pub struct SolverResult {
    pub optimum: BigCount,
    pub witnesses: Vec<Family>,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
    pub wall_time: Duration,
}

impl SolverResult {
    pub fn optimum_u64(&self) -> u64 {
        u64::try_from(&self.optimum).expect("solver optima fit in u64")
    }
}
