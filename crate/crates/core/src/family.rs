//! k-uniform families on `[n]` and the quantities derived from them: degrees,
//! restrictions `F_x`, `F_x̄`, `F_{x,y}`, `F_{x,ȳ}`, the matching number and the
//! number of disjoint pairs.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial_u64, enumerate_ksets, BigCount, GroundSet, KSet};
use crate::error::{EmcError, Result};

/// Families with more than this many potential members are never materialized
/// by [`Family::complement`] or [`Family::full`].
pub const MATERIALIZE_CAP: u64 = 1 << 26;

/// A duplicate-free collection of k-subsets of `[n]`, kept in colex order.
#[derive(Clone)]
pub struct Family {
    ground: GroundSet,
    k: u32,
    members: Vec<KSet>,
    index: HashSet<u64>,
}

impl Family {
    pub fn empty(n: u32, k: u32) -> Result<Self> {
        Self::from_sets(n, k, std::iter::empty())
    }

    /// Builds a family, rejecting duplicates and sets of the wrong size or
    /// with elements outside `[n]`.
    pub fn from_sets(n: u32, k: u32, sets: impl IntoIterator<Item = KSet>) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        if k == 0 || k > n {
            return Err(EmcError::InvalidParameters(format!(
                "uniformity k = {k} must satisfy 1 <= k <= n = {n}"
            )));
        }
        let mut members = Vec::new();
        let mut index = HashSet::new();
        for set in sets {
            if set.len() != k {
                return Err(EmcError::MalformedSet(format!(
                    "{set} has size {} not {k}",
                    set.len()
                )));
            }
            if set.bits() & !ground.full_mask() != 0 {
                return Err(EmcError::MalformedSet(format!(
                    "{set} not contained in [{n}]"
                )));
            }
            if !index.insert(set.bits()) {
                return Err(EmcError::DuplicateSet(set.to_string()));
            }
            members.push(set);
        }
        members.sort_unstable();
        Ok(Family {
            ground,
            k,
            members,
            index,
        })
    }

    /// Trusted constructor for callers that already hold a duplicate-free list
    /// of valid k-sets.
    pub(crate) fn from_unique_bits(n: u32, k: u32, mut bits: Vec<u64>) -> Self {
        bits.sort_unstable();
        debug_assert!(bits.windows(2).all(|w| w[0] < w[1]));
        let index = bits.iter().copied().collect();
        Family {
            ground: GroundSet::new(n).expect("validated ground set"),
            k,
            members: bits.into_iter().map(KSet::from_bits).collect(),
            index,
        }
    }

    /// All of `binom([n], k)`.
    pub fn full(n: u32, k: u32) -> Result<Self> {
        check_materializable(n, k)?;
        let sets = enumerate_ksets(n, k)?.map(KSet::bits).collect();
        Ok(Self::from_unique_bits(n, k, sets))
    }

    pub fn n(&self) -> u32 {
        self.ground.n()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: KSet) -> bool {
        self.index.contains(&set.bits())
    }

    /// Members in colex order.
    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = KSet> + '_ {
        self.members.iter().copied()
    }

    pub(crate) fn bits(&self) -> Vec<u64> {
        self.members.iter().map(|s| s.bits()).collect()
    }

    pub fn same_shape(&self, other: &Family) -> bool {
        self.n() == other.n() && self.k == other.k
    }

    /// `|F_x|`, the number of members containing `x`.
    pub fn degree(&self, x: u32) -> Result<u64> {
        self.ground.check_element(x)?;
        Ok(self.iter().filter(|s| s.contains(x)).count() as u64)
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let n = self.n();
        let mut counts = vec![0u64; n as usize];
        for s in self.iter() {
            for x in s.iter() {
                counts[(x - 1) as usize] += 1;
            }
        }
        DegreeProfile::from_counts(&counts)
    }

    /// Members that contain every element of `contains` and none of `avoids`.
    pub fn restrict(&self, contains: KSet, avoids: KSet) -> Result<Family> {
        if !contains.is_disjoint(avoids) {
            return Err(EmcError::InvalidParameters(format!(
                "restriction sets overlap: contains {contains}, avoids {avoids}"
            )));
        }
        let mask = self.ground.full_mask();
        if (contains.bits() | avoids.bits()) & !mask != 0 {
            return Err(EmcError::InvalidParameters(format!(
                "restriction elements outside [{}]",
                self.n()
            )));
        }
        let bits = self
            .iter()
            .filter(|s| s.is_superset(contains) && s.is_disjoint(avoids))
            .map(KSet::bits)
            .collect();
        Ok(Family::from_unique_bits(self.n(), self.k, bits))
    }

    /// `F_x` in the usual notation.
    pub fn containing(&self, x: u32) -> Result<Family> {
        self.ground.check_element(x)?;
        self.restrict(KSet::from_elements(self.n(), &[x])?, KSet::EMPTY)
    }

    /// `F_x̄`.
    pub fn avoiding(&self, x: u32) -> Result<Family> {
        self.ground.check_element(x)?;
        self.restrict(KSet::EMPTY, KSet::from_elements(self.n(), &[x])?)
    }

    /// Exact matching number by include/exclude branch and bound.
    pub fn matching_number(&self) -> u32 {
        max_matching(&self.bits(), self.k, self.ground.full_mask()).len() as u32
    }

    /// A maximum matching, in colex order of its members.
    pub fn maximum_matching(&self) -> Vec<KSet> {
        let mut m: Vec<KSet> = max_matching(&self.bits(), self.k, self.ground.full_mask())
            .into_iter()
            .map(KSet::from_bits)
            .collect();
        m.sort_unstable();
        m
    }

    /// Whether `s` pairwise disjoint members exist.
    pub fn has_matching_of_size(&self, s: u32) -> bool {
        has_matching(&self.bits(), s)
    }

    pub fn count_disjoint_pairs(&self) -> BigCount {
        BigCount::from(disjoint_pairs(&self.bits()))
    }

    /// `binom([n], k) \ F`.
    pub fn complement(&self) -> Result<Family> {
        check_materializable(self.n(), self.k)?;
        let sets = enumerate_ksets(self.n(), self.k)?
            .filter(|s| !self.contains(*s))
            .map(KSet::bits)
            .collect();
        Ok(Family::from_unique_bits(self.n(), self.k, sets))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        if !self.same_shape(other) {
            return Err(EmcError::ShapeMismatch);
        }
        let mut bits = self.bits();
        bits.extend(other.iter().filter(|s| !self.contains(*s)).map(KSet::bits));
        Ok(Family::from_unique_bits(self.n(), self.k, bits))
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.same_shape(other) && self.iter().all(|s| other.contains(s))
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            n: self.n(),
            k: self.k,
            sets: self.iter().map(KSet::elements).collect(),
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Family> {
        let mut sets = Vec::with_capacity(json.sets.len());
        for raw in &json.sets {
            if raw.windows(2).any(|w| w[0] >= w[1]) {
                return Err(EmcError::MalformedSet(format!(
                    "{raw:?} is not a strictly increasing element list"
                )));
            }
            sets.push(KSet::from_elements(json.n, raw)?);
        }
        Family::from_sets(json.n, json.k, sets)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("family json serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Family> {
        let json: FamilyJson =
            serde_json::from_str(text).map_err(|e| EmcError::Json(e.to_string()))?;
        Family::from_json(&json)
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other) && self.members == other.members
    }
}

impl Eq for Family {}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, k={}, ", self.n(), self.k)?;
        f.debug_list().entries(self.members.iter()).finish()?;
        write!(f, ")")
    }
}

fn check_materializable(n: u32, k: u32) -> Result<()> {
    GroundSet::new(n)?;
    let total = binomial_u64(n, k);
    if total > MATERIALIZE_CAP {
        return Err(EmcError::CapExceeded(format!(
            "binom({n},{k}) = {total} sets exceeds {MATERIALIZE_CAP}"
        )));
    }
    Ok(())
}

/// Serialized family: `{"n":6,"k":2,"sets":[[1,2],[1,3]]}` with 1-indexed,
/// strictly increasing element lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub n: u32,
    pub k: u32,
    pub sets: Vec<Vec<u32>>,
}

/// Per-element degrees with their extremes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub degrees: BTreeMap<u32, u64>,
    pub min_degree: u64,
    pub max_degree: u64,
}

impl DegreeProfile {
    fn from_counts(counts: &[u64]) -> Self {
        DegreeProfile {
            degrees: counts
                .iter()
                .enumerate()
                .map(|(i, &d)| (i as u32 + 1, d))
                .collect(),
            min_degree: counts.iter().copied().min().unwrap_or(0),
            max_degree: counts.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn total(&self) -> u64 {
        self.degrees.values().sum()
    }
}

/// Maximum set of pairwise disjoint masks. Branches include-first on the
/// colex-least remaining candidate and prunes when even covering every free
/// vertex cannot beat the incumbent.
pub(crate) fn max_matching(sets: &[u64], k: u32, ground: u64) -> Vec<u64> {
    struct Search {
        k: u32,
        best: Vec<u64>,
        current: Vec<u64>,
        ceiling: usize,
    }

    impl Search {
        fn run(&mut self, cands: &[u64], free: u64) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if self.best.len() >= self.ceiling || cands.is_empty() {
                return;
            }
            let by_vertices = (free.count_ones() / self.k) as usize;
            let room = by_vertices.min(cands.len());
            if self.current.len() + room <= self.best.len() {
                return;
            }
            let first = cands[0];
            let rest: Vec<u64> = cands[1..]
                .iter()
                .copied()
                .filter(|c| c & first == 0)
                .collect();
            self.current.push(first);
            self.run(&rest, free & !first);
            self.current.pop();
            self.run(&cands[1..], free);
        }
    }

    if sets.is_empty() {
        return Vec::new();
    }
    let ceiling = ((ground.count_ones() / k) as usize).min(sets.len());
    let mut search = Search {
        k,
        best: Vec::new(),
        current: Vec::new(),
        ceiling,
    };
    search.run(sets, ground);
    search.best
}

/// Decision form of [`max_matching`]: stops at the first `s` disjoint masks.
pub(crate) fn has_matching(sets: &[u64], s: u32) -> bool {
    find_matching(sets, s).is_some()
}

pub(crate) fn find_matching(sets: &[u64], s: u32) -> Option<Vec<u64>> {
    fn go(cands: &[u64], need: u32, acc: &mut Vec<u64>) -> bool {
        if need == 0 {
            return true;
        }
        let need_us = need as usize;
        for (i, &c) in cands.iter().enumerate() {
            if cands.len() - i < need_us {
                return false;
            }
            if need == 1 {
                acc.push(c);
                return true;
            }
            let rest: Vec<u64> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|d| d & c == 0)
                .collect();
            if rest.len() + 1 < need_us {
                continue;
            }
            acc.push(c);
            if go(&rest, need - 1, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }

    let mut acc = Vec::with_capacity(s as usize);
    go(sets, s, &mut acc).then_some(acc)
}

pub(crate) fn disjoint_pairs(sets: &[u64]) -> u64 {
    let mut count = 0u64;
    for (i, &a) in sets.iter().enumerate() {
        count += sets[i + 1..].iter().filter(|&&b| a & b == 0).count() as u64;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_a, construct_b, kleitman_extremal, star};

    fn set(n: u32, xs: &[u32]) -> KSet {
        KSet::from_elements(n, xs).unwrap()
    }

    /// Subset-enumeration oracle for ν, independent of the branch and bound.
    fn brute_nu(f: &Family) -> u32 {
        let m = f.members();
        let mut best = 0;
        for mask in 0u32..(1 << m.len()) {
            let chosen: Vec<_> = (0..m.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| m[i])
                .collect();
            let disjoint = chosen
                .iter()
                .enumerate()
                .all(|(i, a)| chosen[i + 1..].iter().all(|b| a.is_disjoint(*b)));
            if disjoint {
                best = best.max(chosen.len() as u32);
            }
        }
        best
    }

    #[test]
    fn degrees() {
        let s = star(6, 2, 1).unwrap();
        assert_eq!(s.degree(1).unwrap(), 5);
        let b = construct_b(7, 2, 3).unwrap();
        assert_eq!(b.degree(1).unwrap(), 6);
        let e = Family::empty(5, 2).unwrap();
        assert!((1..=5).all(|x| e.degree(x).unwrap() == 0));
        assert_eq!(
            e.degree(6).unwrap_err(),
            EmcError::ElementOutOfRange { x: 6, n: 5 }
        );
        let p = b.degree_profile();
        assert_eq!(p.total(), 2 * b.len() as u64);
        assert_eq!(p.max_degree, 6);
        assert_eq!(p.min_degree, 2);
    }

    #[test]
    fn restrictions() {
        let b = construct_b(7, 2, 3).unwrap();
        assert_eq!(b.restrict(KSet::EMPTY, KSet::EMPTY).unwrap(), b);
        let b7 = b.containing(7).unwrap();
        assert_eq!(b7.members(), &[set(7, &[1, 7]), set(7, &[2, 7])]);
        for x in 1..=7 {
            assert_eq!(
                b.containing(x).unwrap().len() + b.avoiding(x).unwrap().len(),
                b.len()
            );
        }
        let overlap = b.restrict(set(7, &[1]), set(7, &[1, 2]));
        assert!(matches!(overlap, Err(EmcError::InvalidParameters(_))));
        // F_{1,2̄}
        let f = b.restrict(set(7, &[1]), set(7, &[2])).unwrap();
        assert_eq!(f.len(), 5);
    }

    #[test]
    fn matching_numbers() {
        assert_eq!(Family::empty(6, 2).unwrap().matching_number(), 0);
        assert_eq!(star(7, 3, 4).unwrap().matching_number(), 1);
        assert_eq!(construct_a(6, 2, 3).unwrap().matching_number(), 2);
        let full = Family::full(6, 2).unwrap();
        assert_eq!(full.matching_number(), 3);
        assert_eq!(brute_nu(&full), 3);
        assert_eq!(full.maximum_matching().len(), 3);
    }

    #[test]
    fn matching_decisions() {
        let a = construct_a(6, 2, 3).unwrap();
        assert!(a.has_matching_of_size(0));
        assert!(a.has_matching_of_size(2));
        assert!(!a.has_matching_of_size(3));
        assert!(!construct_b(7, 2, 3).unwrap().has_matching_of_size(3));
        assert!(Family::empty(4, 2).unwrap().has_matching_of_size(0));
        assert!(!Family::empty(4, 2).unwrap().has_matching_of_size(1));
    }

    /// Every family of at most 6 edges on [6]: the decision search, the
    /// optimizing search and the subset oracle agree.
    #[test]
    fn matching_exhaustive_small_graphs() {
        let edges: Vec<KSet> = enumerate_ksets(6, 2).unwrap().collect();
        let mut checked = 0;
        for mask in 0u32..(1 << edges.len()) {
            if mask.count_ones() > 6 {
                continue;
            }
            let f = Family::from_sets(
                6,
                2,
                (0..15).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]),
            )
            .unwrap();
            let nu = f.matching_number();
            assert_eq!(nu, brute_nu(&f), "{f:?}");
            for s in 0..=4 {
                assert_eq!(f.has_matching_of_size(s), nu >= s);
            }
            checked += 1;
        }
        assert_eq!(checked, 9949);
    }

    #[test]
    fn disjoint_pairs() {
        assert_eq!(
            star(6, 2, 3).unwrap().count_disjoint_pairs(),
            BigCount::from(0u32)
        );
        assert_eq!(
            construct_a(6, 2, 3).unwrap().count_disjoint_pairs(),
            BigCount::from(15u32)
        );
        assert_eq!(
            Family::full(4, 2).unwrap().count_disjoint_pairs(),
            BigCount::from(3u32)
        );
    }

    #[test]
    fn complements() {
        let e = Family::empty(6, 2).unwrap();
        assert_eq!(e.complement().unwrap(), Family::full(6, 2).unwrap());
        let b = construct_b(7, 2, 3).unwrap();
        assert_eq!(b.complement().unwrap().complement().unwrap(), b);
        assert_eq!(b.len() + b.complement().unwrap().len(), 21);
        let kl = kleitman_extremal(6, 2, 6).unwrap();
        assert_eq!(kl.complement().unwrap(), star(6, 2, 6).unwrap());
    }

    #[test]
    fn json_format() {
        let f = Family::from_json_str(r#"{"n":6,"k":2,"sets":[[1,3],[1,2]]}"#).unwrap();
        assert_eq!(f.to_json_string(), r#"{"n":6,"k":2,"sets":[[1,2],[1,3]]}"#);
        let dup = Family::from_json_str(r#"{"n":6,"k":2,"sets":[[1,2],[1,2]]}"#);
        assert!(matches!(dup, Err(EmcError::DuplicateSet(_))));
        let unsorted = Family::from_json_str(r#"{"n":6,"k":2,"sets":[[2,1]]}"#);
        assert!(matches!(unsorted, Err(EmcError::MalformedSet(_))));
        let wrong_k = Family::from_json_str(r#"{"n":6,"k":2,"sets":[[1,2,3]]}"#);
        assert!(matches!(wrong_k, Err(EmcError::MalformedSet(_))));
        let outside = Family::from_json_str(r#"{"n":6,"k":2,"sets":[[1,7]]}"#);
        assert!(outside.is_err());
        assert!(matches!(
            Family::from_json_str("{\"n\":6}"),
            Err(EmcError::Json(_))
        ));
    }
}
