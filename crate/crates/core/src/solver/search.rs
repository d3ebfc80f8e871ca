//! Include/exclude branch and bound for the maximum-size objective.
//!
//! Candidates are all k-subsets of `[n]` in colex order. The search keeps a
//! set of "available" candidates (included, or undecided and not yet ruled
//! out) and prunes with two upper bounds on the final size:
//!
//! * the number of available candidates;
//! * the s-matching average: every s-matching of `[n]` holds at most `s - 1`
//!   members and every k-set lies in the same number `m` of s-matchings, so
//!   `m |F| <= sum over s-matchings of min(s - 1, available members)`.
//!
//! In left-compressed mode a candidate may be included only when all of its
//! lower shift covers are included, so the included sets always form a down
//! set of the shift order; excluding a candidate rules out its whole up set.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use crate::combinatorics::{all_ksets, colex_rank};
use crate::family::find_matching;
use crate::partitions::disjoint_tuples;

use super::problem::{Problem, OPTIMA_CAP};

/// Above this many s-matchings the averaging bound is skipped.
const MATCHING_TABLE_CAP: usize = 4_000_000;
/// The averaging bound is also skipped when a single set lies in more
/// s-matchings than this.
const MAX_MATCHINGS_PER_SET: u64 = 1024;

/// Static tables shared by every subtree search.
pub(crate) struct Context {
    pub n: u32,
    pub s: u32,
    pub sets: Vec<u64>,
    pub lower_covers: Vec<Vec<u32>>,
    pub upper_covers: Vec<Vec<u32>>,
    pub sets_with: Vec<Vec<u32>>,
    pub forced: Vec<bool>,
    pub forbidden: Vec<bool>,
    pub shifted: bool,
    pub min_degree: Option<u32>,
    pub max_degree: Option<u32>,
    /// s-matchings as candidate indices, flattened with stride `s`.
    pub matchings: Vec<u32>,
    pub matchings_of: Vec<Vec<u32>>,
    /// Number of s-matchings through any fixed candidate.
    pub per_set: u64,
}

impl Context {
    pub fn new(p: &Problem) -> Context {
        let sets = all_ksets(p.n, p.k);
        let total = sets.len();
        let rank = |bits: u64| colex_rank(crate::combinatorics::KSet::from_bits(bits)) as u32;
        let mut lower_covers = vec![Vec::new(); total];
        let mut upper_covers = vec![Vec::new(); total];
        let mut sets_with = vec![Vec::new(); p.n as usize];
        for (r, &a) in sets.iter().enumerate() {
            let mut bits = a;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                sets_with[b as usize].push(r as u32);
                if b >= 1 && a & (1u64 << (b - 1)) == 0 {
                    let lower = a & !(1u64 << b) | (1u64 << (b - 1));
                    let lr = rank(lower);
                    lower_covers[r].push(lr);
                    upper_covers[lr as usize].push(r as u32);
                }
            }
        }
        let mark = |fam: &Option<crate::family::Family>| {
            let mut v = vec![false; total];
            for s in fam.iter().flat_map(|f| f.iter()) {
                v[colex_rank(s) as usize] = true;
            }
            v
        };

        let mut matchings = Vec::new();
        let mut matchings_of = vec![Vec::new(); total];
        let mut per_set = 0;
        let estimate = estimated_matchings(p);
        let per_set_estimate = estimate * f64::from(p.s) / total as f64;
        if estimate <= MATCHING_TABLE_CAP as f64
            && per_set_estimate <= MAX_MATCHINGS_PER_SET as f64 + 0.5
        {
            let tuples = disjoint_tuples(crate::combinatorics::full_mask(p.n), p.k, p.s);
            if !tuples.is_empty() && tuples.len() <= MATCHING_TABLE_CAP {
                for (i, t) in tuples.iter().enumerate() {
                    for &b in t {
                        let r = rank(b);
                        matchings.push(r);
                        matchings_of[r as usize].push(i as u32);
                    }
                }
                per_set = matchings_of[0].len() as u64;
                debug_assert!(matchings_of.iter().all(|m| m.len() as u64 == per_set));
                if per_set > MAX_MATCHINGS_PER_SET {
                    per_set = 0;
                }
            }
        }
        if per_set == 0 {
            matchings = Vec::new();
            matchings_of = Vec::new();
        }

        Context {
            n: p.n,
            s: p.s,
            lower_covers,
            upper_covers,
            sets_with,
            forced: mark(&p.forced),
            forbidden: mark(&p.forbidden),
            shifted: p.restrict_left_compressed,
            min_degree: p.min_degree.map(|d| d.min(u32::MAX as u64) as u32),
            max_degree: p.max_degree.map(|d| d.min(u32::MAX as u64) as u32),
            matchings,
            matchings_of,
            per_set,
            sets,
        }
    }

    pub fn total(&self) -> usize {
        self.sets.len()
    }

    fn averaging(&self) -> bool {
        self.per_set > 0
    }
}

fn estimated_matchings(p: &Problem) -> f64 {
    // binom(n, sk) * (sk)! / ((k!)^s s!)
    let mut acc = 1.0f64;
    let mut remaining = p.n as f64;
    for i in 0..p.s {
        for j in 0..p.k {
            acc *= (remaining - j as f64) / (j + 1) as f64;
        }
        remaining -= p.k as f64;
        acc /= (i + 1) as f64;
        if acc > 1e12 {
            break;
        }
    }
    acc
}

/// Shared stopping conditions.
pub(crate) struct Budget {
    pub node_limit: Option<u64>,
    pub deadline: Option<Instant>,
    pub nodes: AtomicU64,
    pub aborted: AtomicBool,
}

impl Budget {
    pub fn tick(&self) -> bool {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.node_limit.is_some_and(|l| used > l) {
            self.aborted.store(true, Ordering::Relaxed);
        }
        if used.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.aborted.store(true, Ordering::Relaxed);
        }
        self.aborted.load(Ordering::Relaxed)
    }
}

/// What a subtree search is asked to do.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// First (lexicographically least) family of maximum size.
    Best,
    /// Every family of maximum size.
    All,
    /// Collect decision prefixes of the given length.
    Frontier(usize),
}

pub(crate) struct SubtreeOutcome {
    pub value: Option<usize>,
    pub families: Vec<Vec<u32>>,
    pub prefixes: Vec<Vec<bool>>,
    pub nodes: u64,
    /// More than [`OPTIMA_CAP`] optima were found in this subtree.
    pub overflow: bool,
}

struct ChoicePoint {
    pos: usize,
    depth: usize,
    trail: usize,
    members: usize,
}

pub(crate) struct Search<'a> {
    ctx: &'a Context,
    budget: &'a Budget,
    in_family: Vec<bool>,
    members: Vec<u32>,
    degree: Vec<u32>,
    avail: Vec<bool>,
    avail_total: usize,
    avail_deg: Vec<u32>,
    mcount: Vec<u8>,
    msum: u64,
    trail: Vec<u32>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
    scratch: Vec<u64>,
    need: usize,
    best: Option<usize>,
    found: Vec<Vec<u32>>,
    overflow: bool,
    nodes: u64,
}

impl<'a> Search<'a> {
    pub fn new(ctx: &'a Context, budget: &'a Budget, need: usize) -> Self {
        let total = ctx.total();
        let n = ctx.n as usize;
        let s = ctx.s;
        let matchings = ctx.matchings.len() / s as usize;
        let mut avail_deg = vec![0u32; n];
        for (x, list) in ctx.sets_with.iter().enumerate() {
            avail_deg[x] = list.len() as u32;
        }
        let mut search = Search {
            ctx,
            budget,
            in_family: vec![false; total],
            members: Vec::new(),
            degree: vec![0; n],
            avail: vec![true; total],
            avail_total: total,
            avail_deg,
            mcount: vec![s as u8; matchings],
            msum: matchings as u64 * u64::from(s - 1),
            trail: Vec::new(),
            stamp: vec![0; total],
            epoch: 0,
            queue: Vec::new(),
            scratch: Vec::new(),
            need,
            best: None,
            found: Vec::new(),
            overflow: false,
            nodes: 0,
        };
        for r in 0..total {
            if ctx.forbidden[r] {
                search.mark(r as u32);
            }
        }
        search
    }

    fn mark(&mut self, r: u32) {
        let ri = r as usize;
        if !self.avail[ri] {
            return;
        }
        self.avail[ri] = false;
        self.trail.push(r);
        self.avail_total -= 1;
        let mut bits = self.ctx.sets[ri];
        while bits != 0 {
            self.avail_deg[bits.trailing_zeros() as usize] -= 1;
            bits &= bits - 1;
        }
        if self.ctx.averaging() {
            let cap = (self.ctx.s - 1) as u8;
            for &m in &self.ctx.matchings_of[ri] {
                let c = &mut self.mcount[m as usize];
                if *c <= cap {
                    self.msum -= 1;
                }
                *c -= 1;
            }
        }
    }

    fn unmark_to(&mut self, len: usize) {
        let cap = (self.ctx.s - 1) as u8;
        while self.trail.len() > len {
            let r = self.trail.pop().expect("trail entry") as usize;
            self.avail[r] = true;
            self.avail_total += 1;
            let mut bits = self.ctx.sets[r];
            while bits != 0 {
                self.avail_deg[bits.trailing_zeros() as usize] += 1;
                bits &= bits - 1;
            }
            if self.ctx.averaging() {
                for &m in &self.ctx.matchings_of[r] {
                    let c = &mut self.mcount[m as usize];
                    *c += 1;
                    if *c <= cap {
                        self.msum += 1;
                    }
                }
            }
        }
    }

    /// Rules out `r` and, in left-compressed mode, everything above it.
    fn exclude(&mut self, r: usize) {
        self.mark(r as u32);
        if !self.ctx.shifted {
            return;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|v| *v = 0);
            self.epoch = 1;
        }
        self.queue.clear();
        self.queue.push(r as u32);
        self.stamp[r] = self.epoch;
        while let Some(cur) = self.queue.pop() {
            for i in 0..self.ctx.upper_covers[cur as usize].len() {
                let up = self.ctx.upper_covers[cur as usize][i];
                if self.stamp[up as usize] != self.epoch {
                    self.stamp[up as usize] = self.epoch;
                    self.mark(up);
                    self.queue.push(up);
                }
            }
        }
    }

    fn include(&mut self, r: usize) {
        self.in_family[r] = true;
        self.members.push(r as u32);
        let mut bits = self.ctx.sets[r];
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            self.degree[x] += 1;
            if self.ctx.max_degree == Some(self.degree[x]) {
                for i in 0..self.ctx.sets_with[x].len() {
                    let other = self.ctx.sets_with[x][i];
                    if other as usize > r {
                        self.mark(other);
                    }
                }
            }
        }
    }

    fn drop_members_to(&mut self, len: usize) {
        while self.members.len() > len {
            let r = self.members.pop().expect("member") as usize;
            self.in_family[r] = false;
            let mut bits = self.ctx.sets[r];
            while bits != 0 {
                self.degree[bits.trailing_zeros() as usize] -= 1;
                bits &= bits - 1;
            }
        }
    }

    fn can_include(&mut self, r: usize) -> bool {
        let ctx = self.ctx;
        if ctx.shifted
            && !ctx.lower_covers[r]
                .iter()
                .all(|&c| self.in_family[c as usize])
        {
            return false;
        }
        let a = ctx.sets[r];
        if let Some(cap) = ctx.max_degree {
            let mut bits = a;
            while bits != 0 {
                if self.degree[bits.trailing_zeros() as usize] >= cap {
                    return false;
                }
                bits &= bits - 1;
            }
        }
        !self.completes_matching(a)
    }

    /// Whether the current family has `s - 1` pairwise disjoint members
    /// avoiding `a`.
    fn completes_matching(&mut self, a: u64) -> bool {
        let need = self.ctx.s - 1;
        let full = crate::combinatorics::full_mask(self.ctx.n);
        // A left-compressed family restricted to the complement of `a` is
        // again left-compressed there, so any matching of it can be pushed
        // into the first (s-1)k elements of that complement.
        let window = if self.ctx.shifted {
            let mut rest = full & !a;
            let mut keep = 0u64;
            for _ in 0..need * a.count_ones() {
                if rest == 0 {
                    break;
                }
                let low = rest & rest.wrapping_neg();
                keep |= low;
                rest &= !low;
            }
            keep
        } else {
            full & !a
        };
        self.scratch.clear();
        for &m in &self.members {
            let b = self.ctx.sets[m as usize];
            if b & !window == 0 {
                if need == 1 {
                    return true;
                }
                self.scratch.push(b);
            }
        }
        if (self.scratch.len() as u32) < need {
            return false;
        }
        find_matching(&self.scratch, need).is_some()
    }

    fn upper_bound(&self) -> usize {
        let simple = self.avail_total;
        if self.ctx.averaging() {
            simple.min((self.msum / self.ctx.per_set) as usize)
        } else {
            simple
        }
    }

    fn pruned(&self) -> bool {
        if self.upper_bound() < self.need {
            return true;
        }
        if let Some(d) = self.ctx.min_degree {
            if self.avail_deg.iter().any(|&a| a < d) {
                return true;
            }
        }
        false
    }

    fn record(&mut self, mode: Mode) {
        let value = self.members.len();
        match mode {
            Mode::Best => {
                if value >= self.need {
                    self.best = Some(value);
                    self.found = vec![self.members.clone()];
                    self.need = value + 1;
                }
            }
            Mode::All => {
                if value >= self.need {
                    if self.best != Some(value) {
                        self.found.clear();
                    }
                    self.best = Some(value);
                    if self.found.len() < OPTIMA_CAP {
                        self.found.push(self.members.clone());
                    } else {
                        self.overflow = true;
                    }
                    self.need = value;
                }
            }
            Mode::Frontier(_) => {}
        }
    }

    /// Runs the search below the node reached by replaying `prefix`.
    pub fn run(mut self, prefix: &[bool], mode: Mode) -> SubtreeOutcome {
        let total = self.ctx.total();
        let mut stack: Vec<ChoicePoint> = Vec::new();
        let mut path: Vec<bool> = Vec::new();
        let mut prefixes = Vec::new();
        let mut pos = 0usize;

        'descend: loop {
            // walk forward until a leaf, a prune, or the frontier
            loop {
                if self.pruned() {
                    break;
                }
                if pos == total {
                    if let Mode::Frontier(_) = mode {
                        prefixes.push(path.clone());
                    } else {
                        self.record(mode);
                        if self.overflow {
                            break 'descend;
                        }
                    }
                    break;
                }
                if !self.avail[pos] {
                    pos += 1;
                    continue;
                }
                let forced = self.ctx.forced[pos];
                if !self.can_include(pos) {
                    if forced {
                        break;
                    }
                    self.exclude(pos);
                    pos += 1;
                    continue;
                }
                if forced {
                    self.include(pos);
                    pos += 1;
                    continue;
                }
                // genuine branch point
                let depth = path.len();
                if depth < prefix.len() {
                    path.push(prefix[depth]);
                    if prefix[depth] {
                        self.include(pos);
                    } else {
                        self.exclude(pos);
                    }
                    pos += 1;
                    continue;
                }
                if let Mode::Frontier(d) = mode {
                    if depth >= d {
                        prefixes.push(path.clone());
                        break;
                    }
                }
                self.nodes += 1;
                if self.budget.tick() {
                    break 'descend;
                }
                stack.push(ChoicePoint {
                    pos,
                    depth,
                    trail: self.trail.len(),
                    members: self.members.len(),
                });
                path.push(true);
                self.include(pos);
                pos += 1;
            }

            // take the exclude branch of the most recent choice point
            let Some(cp) = stack.pop() else {
                break;
            };
            self.drop_members_to(cp.members);
            self.unmark_to(cp.trail);
            path.truncate(cp.depth);
            self.nodes += 1;
            if self.budget.tick() {
                break;
            }
            path.push(false);
            self.exclude(cp.pos);
            pos = cp.pos + 1;
        }

        SubtreeOutcome {
            value: self.best,
            families: self.found,
            prefixes,
            nodes: self.nodes,
            overflow: self.overflow,
        }
    }
}
