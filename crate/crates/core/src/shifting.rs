//! The shifting operation `S_{i,j}`, left-compression, and exact checks of the
//! two degree inequalities that hold for left-compressed families.

use serde::Serialize;

use crate::combinatorics::{binomial, BigCount, KSet};
use crate::error::{EmcError, Result};
use crate::family::Family;

/// An ordered pair `1 <= i < j <= n` naming the shift that replaces `j` by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftPair {
    i: u32,
    j: u32,
}

impl ShiftPair {
    pub fn new(i: u32, j: u32, n: u32) -> Result<Self> {
        if !(1 <= i && i < j && j <= n) {
            return Err(EmcError::InvalidParameters(format!(
                "shift pair ({i},{j}) needs 1 <= i < j <= {n}"
            )));
        }
        Ok(ShiftPair { i, j })
    }

    pub fn i(self) -> u32 {
        self.i
    }

    pub fn j(self) -> u32 {
        self.j
    }

    /// All pairs for `[n]` in lexicographic order.
    pub fn all(n: u32) -> impl Iterator<Item = ShiftPair> {
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| ShiftPair { i, j }))
    }
}

/// The image of one member under `S_{i,j}` relative to `family`.
pub fn shift_set(set: KSet, p: ShiftPair, family: &Family) -> KSet {
    let bi = 1u64 << (p.i - 1);
    let bj = 1u64 << (p.j - 1);
    let b = set.bits();
    if b & bi == 0 && b & bj != 0 {
        let image = KSet::from_bits(b & !bj | bi);
        if !family.contains(image) {
            return image;
        }
    }
    set
}

fn shift_bits(family: &Family, p: ShiftPair) -> (Vec<u64>, bool) {
    let mut moved = false;
    let bits = family
        .iter()
        .map(|s| {
            let t = shift_set(s, p, family);
            moved |= t != s;
            t.bits()
        })
        .collect();
    (bits, moved)
}

/// `S_{i,j}(F)`. Sizes are preserved: distinct members never collide because a
/// set only moves when its image is absent from `F`.
pub fn shift_family(family: &Family, p: ShiftPair) -> Result<Family> {
    if p.j > family.n() {
        return Err(EmcError::InvalidParameters(format!(
            "shift ({},{}) outside [{}]",
            p.i,
            p.j,
            family.n()
        )));
    }
    let (bits, _) = shift_bits(family, p);
    Ok(Family::from_unique_bits(family.n(), family.k(), bits))
}

/// First pair that moves some member, if any.
pub fn first_moving_pair(family: &Family) -> Option<ShiftPair> {
    ShiftPair::all(family.n()).find(|&p| family.iter().any(|s| shift_set(s, p, family) != s))
}

pub fn is_left_compressed(family: &Family) -> bool {
    first_moving_pair(family).is_none()
}

/// Sweeps every pair in lexicographic order, then sweeps again while anything
/// moved. The result is a fixed point of every `S_{i,j}`.
pub fn left_compress(family: &Family) -> Family {
    let mut current = family.clone();
    loop {
        let mut changed = false;
        for p in ShiftPair::all(current.n()) {
            let (bits, moved) = shift_bits(&current, p);
            if moved {
                current = Family::from_unique_bits(current.n(), current.k(), bits);
                changed = true;
            }
        }
        if !changed {
            return current;
        }
    }
}

/// Sum of all element names over all members. Every non-identity shift lowers
/// it, which bounds the number of sweeps.
pub fn shift_potential(family: &Family) -> u64 {
    family.iter().flat_map(|s| s.iter()).map(u64::from).sum()
}

fn require_compressed(family: &Family) -> Result<()> {
    match first_moving_pair(family) {
        None => Ok(()),
        Some(p) => Err(EmcError::NotLeftCompressed(format!(
            "S_{{{},{}}} moves a member",
            p.i, p.j
        ))),
    }
}

/// `(n-k)|F_n| <= k|F_n̄|`, both sides as exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftDegAReport {
    pub degree_n: u64,
    pub avoid_n: u64,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub lhs: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub rhs: BigCount,
    pub holds: bool,
}

/// `|F_n| / C(n-1,k-1) <= |F_{n-1,n̄}| / C(n-2,k-1)`, compared by
/// cross-multiplication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftDegBReport {
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub lhs_num: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub lhs_den: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub rhs_num: BigCount,
    #[serde(serialize_with = "crate::combinatorics::ser_count")]
    pub rhs_den: BigCount,
    pub holds: bool,
}

pub fn verify_shiftdeg_a(family: &Family) -> Result<ShiftDegAReport> {
    require_compressed(family)?;
    let n = family.n();
    let k = family.k();
    let degree_n = family.degree(n)?;
    let avoid_n = family.len() as u64 - degree_n;
    let lhs = BigCount::from(n - k) * degree_n;
    let rhs = BigCount::from(k) * avoid_n;
    let holds = lhs <= rhs;
    Ok(ShiftDegAReport {
        degree_n,
        avoid_n,
        lhs,
        rhs,
        holds,
    })
}

pub fn verify_shiftdeg_b(family: &Family) -> Result<ShiftDegBReport> {
    require_compressed(family)?;
    let n = family.n();
    let k = family.k();
    if n < 2 {
        return Err(EmcError::InvalidParameters("needs n >= 2".into()));
    }
    let lhs_num = BigCount::from(family.degree(n)?);
    let with_prev = KSet::from_elements(n, &[n - 1])?;
    let without_last = KSet::from_elements(n, &[n])?;
    let rhs_num = BigCount::from(family.restrict(with_prev, without_last)?.len());
    let lhs_den = binomial((n - 1) as u64, (k - 1) as u64);
    let rhs_den = binomial((n - 2) as u64, (k - 1) as u64);
    let holds = &lhs_num * &rhs_den <= &rhs_num * &lhs_den;
    Ok(ShiftDegBReport {
        lhs_num,
        lhs_den,
        rhs_num,
        rhs_den,
        holds,
    })
}
