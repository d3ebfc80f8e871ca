//! Minimum number of disjoint pairs over families of a fixed size, with degree
//! caps. Members are chosen in increasing colex order, so the first optimum
//! found in a subtree is its lexicographically least one.

use std::sync::atomic::Ordering;
use std::time::Instant;

use rayon::prelude::*;

use crate::combinatorics::{all_ksets, colex_rank, BigCount};
use crate::error::{EmcError, Result};
use crate::family::Family;

use super::problem::{Problem, SolverResult, OPTIMA_CAP};
use super::search::Budget;
use super::{new_budget, thread_pool};

/// Below this many candidates the lower bound also charges each open slot
/// with the cheapest remaining candidate.
const LOOKAHEAD_LIMIT: usize = 4096;

struct Ctx {
    sets: Vec<u64>,
    size: usize,
    forced: Vec<bool>,
    forbidden: Vec<bool>,
    min_degree: Option<u32>,
    max_degree: Option<u32>,
    n: usize,
}

struct Sub<'a> {
    ctx: &'a Ctx,
    budget: &'a Budget,
    chosen: Vec<u32>,
    degree: Vec<u32>,
    best: Option<u64>,
    found: Vec<Vec<u32>>,
    overflow: bool,
    all: bool,
    nodes: u64,
    scratch: Vec<u64>,
}

impl Sub<'_> {
    fn next_forced(&self, from: usize) -> Option<usize> {
        (from..self.ctx.sets.len()).find(|&i| self.ctx.forced[i])
    }

    fn admissible(&self, i: usize) -> bool {
        if self.ctx.forbidden[i] {
            return false;
        }
        match self.ctx.max_degree {
            Some(cap) => {
                let mut bits = self.ctx.sets[i];
                while bits != 0 {
                    if self.degree[bits.trailing_zeros() as usize] >= cap {
                        return false;
                    }
                    bits &= bits - 1;
                }
                true
            }
            None => true,
        }
    }

    fn cost_of(&self, i: usize) -> u64 {
        let a = self.ctx.sets[i];
        self.chosen
            .iter()
            .filter(|&&c| self.ctx.sets[c as usize] & a == 0)
            .count() as u64
    }

    fn beaten(&self, bound: u64) -> bool {
        match self.best {
            Some(b) if self.all => bound > b,
            Some(b) => bound >= b,
            None => false,
        }
    }

    fn lower_bound(&mut self, from: usize, cost: u64) -> Option<u64> {
        let open = self.ctx.size - self.chosen.len();
        if open == 0 {
            return Some(cost);
        }
        let total = self.ctx.sets.len();
        if total - from > LOOKAHEAD_LIMIT {
            return Some(cost);
        }
        self.scratch.clear();
        let mut reach = vec![0u32; self.ctx.n];
        for i in from..total {
            if self.admissible(i) {
                self.scratch.push(self.cost_of(i));
                let mut bits = self.ctx.sets[i];
                while bits != 0 {
                    reach[bits.trailing_zeros() as usize] += 1;
                    bits &= bits - 1;
                }
            }
        }
        if self.scratch.len() < open {
            return None;
        }
        if let Some(d) = self.ctx.min_degree {
            let short = (0..self.ctx.n).any(|x| self.degree[x] + reach[x].min(open as u32) < d);
            if short {
                return None;
            }
        }
        self.scratch.sort_unstable();
        Some(cost + self.scratch[..open].iter().sum::<u64>())
    }

    fn push(&mut self, i: usize) {
        self.chosen.push(i as u32);
        let mut bits = self.ctx.sets[i];
        while bits != 0 {
            self.degree[bits.trailing_zeros() as usize] += 1;
            bits &= bits - 1;
        }
    }

    fn pop(&mut self) {
        let i = self.chosen.pop().expect("chosen") as usize;
        let mut bits = self.ctx.sets[i];
        while bits != 0 {
            self.degree[bits.trailing_zeros() as usize] -= 1;
            bits &= bits - 1;
        }
    }

    fn go(&mut self, from: usize, cost: u64) {
        self.nodes += 1;
        if self.overflow || self.budget.tick() {
            return;
        }
        if self.chosen.len() == self.ctx.size {
            if self.next_forced(from).is_some() {
                return;
            }
            if let Some(d) = self.ctx.min_degree {
                if self.degree.iter().any(|&x| x < d) {
                    return;
                }
            }
            if self.best != Some(cost) {
                self.found.clear();
            }
            if !self.all {
                self.found.clear();
            }
            self.best = Some(cost);
            if self.found.len() < OPTIMA_CAP {
                self.found.push(self.chosen.clone());
            } else {
                self.overflow = true;
            }
            return;
        }
        let Some(lb) = self.lower_bound(from, cost) else {
            return;
        };
        if self.beaten(lb) {
            return;
        }
        let stop = self.next_forced(from);
        let total = self.ctx.sets.len();
        let open = self.ctx.size - self.chosen.len();
        for i in from..total {
            if total - i < open || stop.is_some_and(|f| i > f) {
                break;
            }
            if !self.admissible(i) {
                continue;
            }
            let c = cost + self.cost_of(i);
            if self.beaten(c) {
                continue;
            }
            self.push(i);
            self.go(i + 1, c);
            self.pop();
        }
    }
}

/// Best value, its families, nodes, and whether the optima cap was hit.
type Outcome = (Option<u64>, Vec<Vec<u32>>, u64, bool);

pub(super) fn solve_min_disjoint_pairs(p: &Problem, all: bool) -> Result<SolverResult> {
    p.validate()?;
    let start = Instant::now();
    let size = p.fixed_size.expect("validated") as usize;
    let sets = all_ksets(p.n, p.k);
    if size > sets.len() {
        return Err(EmcError::Infeasible(format!(
            "size {size} exceeds binom({}, {}) = {}",
            p.n,
            p.k,
            sets.len()
        )));
    }
    let mark = |fam: &Option<Family>| {
        let mut v = vec![false; sets.len()];
        for s in fam.iter().flat_map(|f| f.iter()) {
            v[colex_rank(s) as usize] = true;
        }
        v
    };
    let ctx = Ctx {
        forced: mark(&p.forced),
        forbidden: mark(&p.forbidden),
        size,
        min_degree: p.min_degree.map(|d| d.min(u32::MAX as u64) as u32),
        max_degree: p.max_degree.map(|d| d.min(u32::MAX as u64) as u32),
        n: p.n as usize,
        sets,
    };
    if ctx.forced.iter().filter(|&&f| f).count() > size {
        return Err(EmcError::Infeasible(
            "more forced members than the fixed size".into(),
        ));
    }
    let budget = new_budget(p, start);
    let fresh = || Sub {
        ctx: &ctx,
        budget: &budget,
        chosen: Vec::new(),
        degree: vec![0; ctx.n],
        best: None,
        found: Vec::new(),
        overflow: false,
        all,
        nodes: 0,
        scratch: Vec::new(),
    };

    // one subtree per choice of the colex-least member
    let firsts: Vec<usize> = if size == 0 {
        Vec::new()
    } else {
        let stop = (0..ctx.sets.len()).find(|&i| ctx.forced[i]);
        (0..=ctx.sets.len() - size)
            .filter(|&i| stop.is_none_or(|f| i <= f) && !ctx.forbidden[i])
            .collect()
    };
    let pool = thread_pool(p.workers)?;
    let mut outcomes: Vec<Outcome> = pool.install(|| {
        firsts
            .par_iter()
            .map(|&i| {
                let mut sub = fresh();
                if sub.admissible(i) {
                    sub.push(i);
                    sub.go(i + 1, 0);
                }
                (sub.best, sub.found, sub.nodes, sub.overflow)
            })
            .collect()
    });
    if size == 0 {
        let mut sub = fresh();
        sub.go(0, 0);
        outcomes.push((sub.best, sub.found, sub.nodes, sub.overflow));
    }

    let truncated = budget.aborted.load(Ordering::Relaxed);
    let nodes: u64 = outcomes.iter().map(|o| o.2).sum();
    let best = outcomes.iter().filter_map(|o| o.0).min();
    let Some(best) = best else {
        return Err(EmcError::Infeasible(
            "no family of the requested size satisfies the degree constraints".into(),
        ));
    };
    let mut families = Vec::new();
    if outcomes.iter().any(|o| o.3) {
        return Err(EmcError::CapExceeded(format!(
            "more than {OPTIMA_CAP} optimal families"
        )));
    }
    for (value, found, _, _) in outcomes {
        if value == Some(best) {
            families.extend(found);
            if !all {
                break;
            }
        }
    }
    if families.len() > OPTIMA_CAP {
        return Err(EmcError::CapExceeded(format!(
            "more than {OPTIMA_CAP} optimal families"
        )));
    }
    families.sort();
    let witnesses = families
        .into_iter()
        .map(|ranks| {
            Family::from_unique_bits(
                p.n,
                p.k,
                ranks.iter().map(|&r| ctx.sets[r as usize]).collect(),
            )
        })
        .collect();
    Ok(SolverResult {
        optimum: BigCount::from(best),
        witnesses,
        nodes_explored: nodes,
        proven_optimal: !truncated,
        wall_time: start.elapsed(),
    })
}
