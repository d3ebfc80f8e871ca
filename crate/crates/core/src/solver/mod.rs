//! Exact maximization of families with bounded matching number, plus the
//! minimum-disjoint-pairs variant, optimum enumeration and LP export.
//!
//! Every search is split into the subtrees hanging below the first
//! `split_depth` branch decisions. Subtrees are solved independently (in
//! parallel when `workers > 1`) and merged in frontier order, so optima,
//! witnesses and node counts do not depend on the number of workers.

mod checks;
mod lp;
mod pairs;
mod problem;
mod search;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

pub use checks::{
    certify, drop_ratio_check, emc_consistency, kleitman_check, Certificate, DropRatioReport,
    EmcReport, KleitmanReport,
};
pub use lp::export_lp;
pub use problem::{Objective, Problem, SolverResult, OPTIMA_CAP, SOLVER_CAP};

use crate::combinatorics::BigCount;
use crate::constructions::{construct_a, construct_b, kleitman_extremal, star};
use crate::error::{EmcError, Result};
use crate::family::Family;
use search::{Budget, Context, Mode, Search};

/// Maximum `|F|` subject to `nu(F) <= s - 1` and the problem's constraints.
/// The first witness is the optimum whose colex-sorted member list is
/// lexicographically least.
pub fn solve_max_family(p: &Problem) -> Result<SolverResult> {
    run_max(p, Mode::Best)
}

/// Every optimal family, in canonical order.
pub fn enumerate_optima(p: &Problem) -> Result<Vec<Family>> {
    let r = run_max(p, Mode::All)?;
    if !r.proven_optimal {
        return Err(EmcError::Infeasible(
            "search budget exhausted before all optima were found".into(),
        ));
    }
    Ok(r.witnesses)
}

/// Solves a problem with either objective, returning all optima when `all`.
pub fn solve(p: &Problem, all: bool) -> Result<SolverResult> {
    match p.objective {
        Objective::MaxSize => run_max(p, if all { Mode::All } else { Mode::Best }),
        Objective::MinDisjointPairs => pairs::solve_min_disjoint_pairs(p, all),
    }
}

pub fn solve_min_disjoint_pairs(p: &Problem) -> Result<SolverResult> {
    if p.objective != Objective::MinDisjointPairs {
        return Err(EmcError::InvalidParameters(
            "objective must be MIN_DISJOINT_PAIRS".into(),
        ));
    }
    pairs::solve_min_disjoint_pairs(p, false)
}

pub(crate) fn new_budget(p: &Problem, start: Instant) -> Budget {
    Budget {
        node_limit: p.node_budget,
        deadline: p.time_budget.map(|d| start + d),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    }
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| EmcError::InvalidParameters(format!("thread pool: {e}")))
}

/// Largest named construction that satisfies every constraint.
fn seed_family(p: &Problem) -> Option<Family> {
    let (n, k, s) = (p.n, p.k, p.s);
    let mut candidates = Vec::new();
    if let Ok(a) = construct_a(n, k, s) {
        candidates.push(a);
    }
    if let Ok(b) = construct_b(n, k, s) {
        candidates.push(b);
    }
    if n % k == 0 && n / k == s {
        candidates.extend(kleitman_extremal(n, k, n).ok());
    }
    candidates.extend(star(n, k, 1).ok());
    candidates
        .into_iter()
        .filter(|f| p.admits(f))
        .max_by_key(|f| f.len())
}

fn run_max(p: &Problem, mode: Mode) -> Result<SolverResult> {
    p.validate()?;
    if p.objective != Objective::MaxSize {
        return Err(EmcError::InvalidParameters(
            "objective must be MAX_SIZE".into(),
        ));
    }
    let start = Instant::now();
    if let Some(f) = &p.forced {
        if f.has_matching_of_size(p.s) {
            return Err(EmcError::Infeasible(format!(
                "forced members already contain {} pairwise disjoint sets",
                p.s
            )));
        }
    }
    let ctx = Context::new(p);
    let budget = new_budget(p, start);
    let seed = if p.seed_incumbent {
        seed_family(p)
    } else {
        None
    };
    let need = seed.as_ref().map_or(0, |f| f.len());

    let frontier =
        Search::new(&ctx, &budget, need).run(&[], Mode::Frontier(p.split_depth as usize));
    let prefixes = frontier.prefixes;
    let pool = thread_pool(p.workers)?;
    let outcomes: Vec<_> = pool.install(|| {
        prefixes
            .par_iter()
            .map(|prefix| Search::new(&ctx, &budget, need).run(prefix, mode))
            .collect()
    });

    let overflow = outcomes.iter().any(|o| o.overflow);
    let truncated = budget.aborted.load(Ordering::Relaxed);
    let nodes = frontier.nodes + outcomes.iter().map(|o| o.nodes).sum::<u64>();
    let best = outcomes.iter().filter_map(|o| o.value).max();
    let mut families: Vec<Vec<u32>> = Vec::new();
    if let Some(v) = best {
        for o in outcomes.into_iter().filter(|o| o.value == Some(v)) {
            families.extend(o.families);
            if mode == Mode::Best {
                break;
            }
        }
    }
    if overflow || families.len() > OPTIMA_CAP {
        return Err(EmcError::CapExceeded(format!(
            "more than {OPTIMA_CAP} optimal families"
        )));
    }
    families.sort();

    let witnesses: Vec<Family> = families
        .into_iter()
        .map(|ranks| {
            let bits = ranks.iter().map(|&r| ctx.sets[r as usize]).collect();
            Family::from_unique_bits(p.n, p.k, bits)
        })
        .collect();

    let (optimum, witnesses) = match (best, seed) {
        (Some(v), _) => (v, witnesses),
        (None, Some(seed)) if truncated => (seed.len(), vec![seed]),
        (None, _) if truncated => {
            return Err(EmcError::Infeasible(
                "search budget exhausted without a feasible family".into(),
            ))
        }
        (None, _) => {
            return Err(EmcError::Infeasible(
                "no family satisfies the constraints".into(),
            ));
        }
    };

    Ok(SolverResult {
        optimum: BigCount::from(optimum),
        witnesses,
        nodes_explored: nodes,
        proven_optimal: !truncated,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests;
