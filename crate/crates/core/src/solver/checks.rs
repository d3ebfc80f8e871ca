//! Solver-backed verification reports: optimality certificates, Kleitman's
//! value and uniqueness at `n = sk`, the density gap at `n = sk + 1`, and
//! agreement with `max{|A_{k,s}|, |B_{n,k,s}|}`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::combinatorics::{binomial, BigCount};
use crate::constructions::{construct_a, construct_b};
use crate::error::{EmcError, Result};
use crate::family::Family;
use crate::Rational;

use super::problem::{Objective, Problem, SolverResult};
use super::{enumerate_optima, solve_max_family};

/// Independent re-verification of a [`SolverResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Every witness satisfies every constraint.
    pub witnesses_admissible: bool,
    /// Every witness attains the reported optimum.
    pub witnesses_attain: bool,
    /// For the maximum-size objective: no single extra set keeps a witness
    /// admissible.
    pub locally_maximal: bool,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.witnesses_admissible && self.witnesses_attain && self.locally_maximal
    }
}

pub fn certify(p: &Problem, result: &SolverResult) -> Certificate {
    let mut admissible = !result.witnesses.is_empty();
    let mut attain = true;
    let mut maximal = true;
    for w in &result.witnesses {
        admissible &= p.admits(w);
        let value = match p.objective {
            Objective::MaxSize => BigCount::from(w.len()),
            Objective::MinDisjointPairs => w.count_disjoint_pairs(),
        };
        attain &= value == result.optimum;
        if p.objective == Objective::MaxSize {
            let mut relaxed = p.clone();
            relaxed.restrict_left_compressed = false;
            let complement = match w.complement() {
                Ok(c) => c,
                Err(_) => {
                    maximal = false;
                    continue;
                }
            };
            for extra in complement.iter() {
                if p.forbidden.as_ref().is_some_and(|f| f.contains(extra)) {
                    continue;
                }
                let bigger = w
                    .union(&Family::from_unique_bits(w.n(), w.k(), vec![extra.bits()]))
                    .expect("same shape");
                if relaxed.admits(&bigger) {
                    maximal = false;
                    break;
                }
            }
        }
    }
    Certificate {
        witnesses_admissible: admissible,
        witnesses_attain: attain,
        locally_maximal: maximal,
    }
}

fn ratio(num: &BigCount, den: &BigCount) -> Rational {
    Rational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

#[derive(Debug, Clone, Serialize)]
pub struct KleitmanReport {
    pub claim: &'static str,
    pub s: u32,
    pub k: u32,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub optimum: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub expected: BigCount,
    pub optima: usize,
    /// For each optimum, the element it avoids (if it is a Kleitman family).
    pub avoided_elements: Vec<Option<u32>>,
    pub nodes_explored: u64,
    pub value_matches: bool,
    /// The optima are exactly the `sk` families avoiding one element.
    pub unique: bool,
    pub pass: bool,
}

/// Solves `f(sk, k, s)` over the full space, compares with
/// `C(sk,k) - C(sk-1,k-1)`, and checks that the optima are exactly the `sk`
/// families avoiding one element.
pub fn kleitman_check(s: u32, k: u32, workers: usize) -> Result<KleitmanReport> {
    if s < 2 || k < 1 {
        return Err(EmcError::InvalidParameters(format!(
            "need s >= 2, k >= 1 (s = {s}, k = {k})"
        )));
    }
    let n = s * k;
    let p = Problem::max_size(n, k, s).with_workers(workers);
    let solved = solve_max_family(&p)?;
    let optima = enumerate_optima(&p)?;
    let expected =
        binomial(u64::from(n), u64::from(k)) - binomial(u64::from(n - 1), u64::from(k - 1));
    // the Kleitman family avoiding x is every k-set of the other sk - 1 elements
    let full_star = binomial(u64::from(n - 1), u64::from(k));
    let mut avoided = Vec::with_capacity(optima.len());
    for f in &optima {
        let covered = f.iter().fold(0u64, |acc, set| acc | set.bits());
        let missing = crate::combinatorics::full_mask(n) & !covered;
        let hit = (missing.count_ones() == 1 && BigCount::from(f.len()) == full_star)
            .then(|| missing.trailing_zeros() + 1);
        avoided.push(hit);
    }
    let mut distinct: Vec<u32> = avoided.iter().flatten().copied().collect();
    distinct.sort_unstable();
    distinct.dedup();
    let value_matches = solved.proven_optimal && solved.optimum == expected;
    let unique = optima.len() == n as usize
        && avoided.iter().all(Option::is_some)
        && distinct.len() == n as usize;
    Ok(KleitmanReport {
        claim: "Kleitman: f(sk,k,s) = C(sk,k) - C(sk-1,k-1), attained only by the families avoiding one element",
        s,
        k,
        optimum: solved.optimum,
        expected,
        optima: optima.len(),
        avoided_elements: avoided,
        nodes_explored: solved.nodes_explored,
        value_matches,
        unique,
        pass: value_matches && unique,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DropRatioReport {
    pub claim: &'static str,
    pub s: u32,
    pub k: u32,
    pub n: u32,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub optimum: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub total: BigCount,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub gap: Rational,
    pub nodes_explored: u64,
    pub proven_optimal: bool,
    pub pass: bool,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::scalar::render_rational(q))
}

/// Computes `f(sk+1, k, s)` exactly (over left-compressed families) and the
/// gap between `(s-1)/s` and `f / C(sk+1, k)`. Passes iff the gap is positive.
pub fn drop_ratio_check(s: u32, k: u32, workers: usize) -> Result<DropRatioReport> {
    if s < 2 || k < 1 {
        return Err(EmcError::InvalidParameters(format!(
            "need s >= 2, k >= 1 (s = {s}, k = {k})"
        )));
    }
    let n = s * k + 1;
    let p = Problem::max_size(n, k, s)
        .left_compressed()
        .with_workers(workers);
    let solved = solve_max_family(&p)?;
    let total = binomial(u64::from(n), u64::from(k));
    let ratio = ratio(&solved.optimum, &total);
    let target = Rational::new(BigInt::from(s - 1), BigInt::from(s));
    let gap = &target - &ratio;
    let pass = solved.proven_optimal && gap > Rational::from_integer(BigInt::from(0));
    Ok(DropRatioReport {
        claim: "density drop: f(sk+1,k,s) / C(sk+1,k) < (s-1)/s",
        s,
        k,
        n,
        optimum: solved.optimum,
        total,
        ratio,
        target,
        gap,
        nodes_explored: solved.nodes_explored,
        proven_optimal: solved.proven_optimal,
        pass,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EmcReport {
    pub claim: &'static str,
    pub n: u32,
    pub k: u32,
    pub s: u32,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub optimum: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub size_a: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub size_b: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub conjectured: BigCount,
    pub consistent: bool,
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub seconds: f64,
    pub witness: Family,
}

/// Solves `f(n, k, s)` over left-compressed families and compares it with
/// `max{|A_{k,s}|, |B_{n,k,s}|}`. Requires `n >= sk`.
pub fn emc_consistency(n: u32, k: u32, s: u32, workers: usize) -> Result<EmcReport> {
    if n < s * k {
        return Err(EmcError::InvalidParameters(format!(
            "need n >= sk, got n = {n}, sk = {}",
            s * k
        )));
    }
    let p = Problem::max_size(n, k, s)
        .left_compressed()
        .with_workers(workers);
    let solved = solve_max_family(&p)?;
    let size_a = BigCount::from(construct_a(n, k, s)?.len());
    let size_b = BigCount::from(construct_b(n, k, s)?.len());
    let conjectured = size_a.clone().max(size_b.clone());
    Ok(EmcReport {
        claim: "Erdős matching conjecture: f(n,k,s) = max{|A_{k,s}|, |B_{n,k,s}|}",
        n,
        k,
        s,
        consistent: solved.proven_optimal && solved.optimum == conjectured,
        optimum: solved.optimum,
        size_a,
        size_b,
        conjectured,
        proven_optimal: solved.proven_optimal,
        nodes_explored: solved.nodes_explored,
        seconds: solved.wall_time.as_secs_f64(),
        witness: solved
            .witnesses
            .into_iter()
            .next()
            .expect("solver returns a witness"),
    })
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
