//! Partitions of `[sk]` into `s` blocks of size `k`, their counts, and the
//! exact double count of (complement member, partition) incidences.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{binomial, full_mask, BigCount, KSet};
use crate::error::{EmcError, Result};
use crate::family::Family;

/// Largest `s * k` for which partitions are enumerated explicitly.
pub const PARTITION_CAP: u32 = 14;

/// An ordered, canonical partition: block `i` contains the smallest element not
/// covered by blocks `0..i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<KSet>,
}

impl Partition {
    pub fn blocks(&self) -> &[KSet] {
        &self.blocks
    }

    pub fn contains_block(&self, block: KSet) -> bool {
        self.blocks.contains(&block)
    }

    pub fn hits(&self, family: &Family) -> usize {
        self.blocks.iter().filter(|b| family.contains(**b)).count()
    }
}

/// `(1/j!) prod_{i=1}^{j} C(ik, k)`: partitions of `[jk]` into `j` k-blocks.
fn partitions_of(j: u32, k: u32) -> BigCount {
    let mut acc = BigCount::one();
    let mut fact = BigCount::one();
    for i in 1..=j {
        acc *= binomial(u64::from(i) * u64::from(k), u64::from(k));
        fact *= i;
    }
    acc / fact
}

pub fn count_partitions(s: u32, k: u32) -> BigCount {
    partitions_of(s, k)
}

/// Partitions through one fixed block: `(1/(s-1)!) prod_{j=1}^{s-1} C(jk,k)`.
pub fn count_m(s: u32, k: u32) -> Result<BigCount> {
    if s < 1 {
        return Err(EmcError::InvalidParameters("s must be at least 1".into()));
    }
    Ok(partitions_of(s - 1, k))
}

/// Partitions through two fixed disjoint blocks:
/// `(1/(s-2)!) prod_{j=1}^{s-2} C(jk,k)`.
pub fn count_m_prime(s: u32, k: u32) -> Result<BigCount> {
    if s < 2 {
        return Err(EmcError::InvalidParameters("s must be at least 2".into()));
    }
    Ok(partitions_of(s - 2, k))
}

/// Streams the canonical partitions of `[sk]` in lexicographic order of their
/// block lists.
pub fn enumerate_partitions(s: u32, k: u32) -> Result<Partitions> {
    if s == 0 || k == 0 {
        return Err(EmcError::InvalidParameters(
            "s and k must be positive".into(),
        ));
    }
    if s * k > PARTITION_CAP {
        return Err(EmcError::CapExceeded(format!(
            "partitions of [{}] exceed the enumeration cap sk <= {PARTITION_CAP}",
            s * k
        )));
    }
    Ok(Partitions::new(full_mask(s * k), k))
}

/// Streams every set of `s` pairwise disjoint k-blocks inside `ground`, each
/// once, with blocks in increasing colex order. With `ground = [sk]` this is
/// the same collection as [`enumerate_partitions`].
pub(crate) fn disjoint_tuples(ground: u64, k: u32, s: u32) -> Vec<Vec<u64>> {
    fn go(avail: u64, k: u32, need: u32, floor: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if need == 0 {
            out.push(acc.clone());
            return;
        }
        if avail.count_ones() < need * k {
            return;
        }
        for block in Combos::new(avail, k) {
            if block <= floor {
                continue;
            }
            acc.push(block);
            go(avail & !block, k, need - 1, block, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(ground, k, s, 0, &mut Vec::new(), &mut out);
    out
}

/// All `r`-subsets of the bits of `mask`, as masks, in increasing order.
struct Combos {
    positions: Vec<u32>,
    next: Option<u64>,
    limit: u64,
}

impl Combos {
    fn new(mask: u64, r: u32) -> Self {
        let positions: Vec<u32> = KSet::from_bits(mask).iter().map(|x| x - 1).collect();
        let m = positions.len() as u32;
        let next = (r <= m).then(|| full_mask(r));
        Combos {
            positions,
            next,
            limit: full_mask(m),
        }
    }
}

impl Iterator for Combos {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt & !self.limit == 0 && r != 0).then_some(nxt)
        };
        let mut out = 0u64;
        let mut bits = cur;
        while bits != 0 {
            out |= 1u64 << self.positions[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        Some(out)
    }
}

struct Level {
    covered: u64,
    low: u64,
    combos: Combos,
}

/// Depth-first partition stream: each level fixes the block through the lowest
/// uncovered element.
pub struct Partitions {
    ground: u64,
    k: u32,
    stack: Vec<Level>,
    blocks: Vec<u64>,
}

impl Partitions {
    fn new(ground: u64, k: u32) -> Self {
        let mut p = Partitions {
            ground,
            k,
            stack: Vec::new(),
            blocks: Vec::new(),
        };
        p.push_level(0);
        p
    }

    fn push_level(&mut self, covered: u64) {
        let remaining = self.ground & !covered;
        let low = remaining & remaining.wrapping_neg();
        self.stack.push(Level {
            covered,
            low,
            combos: Combos::new(remaining & !low, self.k - 1),
        });
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        loop {
            let level = self.stack.last_mut()?;
            match level.combos.next() {
                None => {
                    self.stack.pop();
                    self.blocks.pop();
                }
                Some(rest) => {
                    let block = rest | level.low;
                    let covered = level.covered | block;
                    if covered == self.ground {
                        let blocks = self
                            .blocks
                            .iter()
                            .chain(std::iter::once(&block))
                            .map(|&b| KSet::from_bits(b))
                            .collect();
                        return Some(Partition { blocks });
                    }
                    self.blocks.push(block);
                    self.push_level(covered);
                }
            }
        }
    }
}

/// Outcome of the exact double count over all partitions of `[sk]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCountReport {
    pub s: u32,
    pub k: u32,
    pub family_size: usize,
    pub complement_size: usize,
    pub matching_number: u32,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub m: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub m_prime: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub partitions: BigCount,
    /// Sum over partitions of the number of blocks lying in `G`.
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub incidences: BigCount,
    /// `|G| * M`.
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub expected_incidences: BigCount,
    pub identity_holds: bool,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub partitions_hit_at_least_once: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub partitions_hit_at_least_twice: BigCount,
    /// Sum over partitions of `C(hits, 2)`; equals `dp(G) * M'`.
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub pair_incidences: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub complement_disjoint_pairs: BigCount,
    pub pair_identity_holds: bool,
    /// Only meaningful when `matching_number <= s - 1`.
    pub every_partition_hit: Option<bool>,
    /// `|G| M >= #partitions + #(partitions hit twice)`, checked when the
    /// matching number is below `s`.
    pub chain_holds: Option<bool>,
    /// `C(s,2) * #(partitions hit twice) >= dp(G) * M'`.
    pub pair_chain_holds: bool,
}

impl DoubleCountReport {
    pub fn passed(&self) -> bool {
        self.identity_holds
            && self.pair_identity_holds
            && self.pair_chain_holds
            && self.every_partition_hit.unwrap_or(true)
            && self.chain_holds.unwrap_or(true)
    }
}

/// Counts pairs `(G, pi)` with `G` in the complement of `family` and `G` a
/// block of `pi`, by full enumeration, and compares with `|G| * M`.
pub fn verify_double_count(family: &Family) -> Result<DoubleCountReport> {
    let n = family.n();
    let k = family.k();
    if !n.is_multiple_of(k) || n / k < 1 {
        return Err(EmcError::InvalidParameters(format!(
            "ground set [{n}] is not [sk] for k = {k}"
        )));
    }
    let s = n / k;
    let parts = enumerate_partitions(s, k)?;
    let g = family.complement()?;
    let m = count_m(s, k)?;
    let m_prime = if s >= 2 {
        count_m_prime(s, k)?
    } else {
        BigCount::zero()
    };
    let matching_number = family.matching_number();

    let mut total = 0u64;
    let mut incidences = 0u64;
    let mut once = 0u64;
    let mut twice = 0u64;
    let mut pair_incidences = 0u64;
    for p in parts {
        let h = p.hits(&g) as u64;
        total += 1;
        incidences += h;
        pair_incidences += h * h.saturating_sub(1) / 2;
        once += u64::from(h >= 1);
        twice += u64::from(h >= 2);
    }
    let partitions = BigCount::from(total);
    let expected_incidences = &m * g.len();
    let incidences = BigCount::from(incidences);
    let complement_disjoint_pairs = g.count_disjoint_pairs();
    let pair_incidences = BigCount::from(pair_incidences);
    let twice_big = BigCount::from(twice);
    let pairs_per_partition = BigCount::from(s * s.saturating_sub(1) / 2);
    let bounded = matching_number < s;

    Ok(DoubleCountReport {
        s,
        k,
        family_size: family.len(),
        complement_size: g.len(),
        matching_number,
        identity_holds: incidences == expected_incidences,
        pair_identity_holds: pair_incidences == &complement_disjoint_pairs * &m_prime,
        pair_chain_holds: &pairs_per_partition * &twice_big
            >= &complement_disjoint_pairs * &m_prime,
        every_partition_hit: bounded.then_some(once == total),
        chain_holds: bounded.then(|| incidences >= &partitions + &twice_big),
        m,
        m_prime,
        partitions,
        incidences,
        expected_incidences,
        partitions_hit_at_least_once: BigCount::from(once),
        partitions_hit_at_least_twice: twice_big,
        pair_incidences,
        complement_disjoint_pairs,
    })
}
