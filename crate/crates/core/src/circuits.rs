//! Four-element circuits of `A_n` and the census behind `b_3`.
//!
//! A 3-set of hyperplanes whose members pairwise intersect is broken exactly
//! when it is a 4-circuit minus its maximum. Those circuits are tetrahedra
//! (`χ_1 + χ_2 + χ_3 = 2χ_4`) or rectangles (`χ_1 + χ_3 = χ_2 + χ_4`), and
//! both are counted through set partitions.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};
use crate::mask::{common_dimension, SubsetMask};
use crate::partition::for_each_partition;
use crate::stirling::{exact_quotient, stirling2};

/// Shape of a four-element family whose three smallest members pairwise
/// intersect. `a1`, `a3` are the generating sets; the family is
/// `{a1, a3, a2, d}` with `d` the maximum.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CircuitType {
    /// `a2 = a1 △ a3`, `d = a1 ∪ a3` (tetrahedron).
    TypeI { a1: SubsetMask, a3: SubsetMask },
    /// `a2 = a1 ∩ a3`, `d = a1 △ a3`.
    TypeII { a1: SubsetMask, a3: SubsetMask },
    /// `a2 = a1 ∩ a3`, `d = a1 ∪ a3` (rectangle).
    TypeIII { a1: SubsetMask, a3: SubsetMask },
    /// `a2 = (a1 ∩ a3) ∪ x`, `d = (a1 ∪ a3) \ x`, `∅ ≠ x ⊆ a1 △ a3` (rectangle).
    TypeIV { a1: SubsetMask, a3: SubsetMask, x: SubsetMask },
    NotRelevantCircuit,
}

impl CircuitType {
    pub fn is_rectangle(&self) -> bool {
        matches!(self, CircuitType::TypeIII { .. } | CircuitType::TypeIV { .. })
    }

    pub fn is_tetrahedron(&self) -> bool {
        matches!(self, CircuitType::TypeI { .. })
    }
}

fn star(a1: u64, a3: u64) -> bool {
    a1 & a3 != 0 && a1 & !a3 != 0 && a3 & !a1 != 0
}

/// Classifies a family of four distinct hyperplanes.
pub fn classify_relevant_4circuit(family: &[SubsetMask]) -> Result<CircuitType> {
    let n = common_dimension(family)?.unwrap_or(0);
    if family.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "expected 4 hyperplanes, got {}",
            family.len()
        )));
    }
    let mut f = family.to_vec();
    f.sort();
    f.dedup();
    if f.len() != 4 {
        return Err(Error::InvalidInput("hyperplanes must be distinct".into()));
    }
    let d = f[3].bits();
    let rest = [f[0].bits(), f[1].bits(), f[2].bits()];
    if rest[0] & rest[1] == 0 || rest[0] & rest[2] == 0 || rest[1] & rest[2] == 0 {
        return Ok(CircuitType::NotRelevantCircuit);
    }
    let mask = |bits: u64| SubsetMask::new(bits, n);
    for pos in 0..3 {
        let a2 = rest[pos];
        let (a1, a3) = match pos {
            0 => (rest[1], rest[2]),
            1 => (rest[0], rest[2]),
            _ => (rest[0], rest[1]),
        };
        if !star(a1, a3) {
            continue;
        }
        let (meet, join, sym) = (a1 & a3, a1 | a3, a1 ^ a3);
        let (m1, m3) = (mask(a1)?, mask(a3)?);
        if a2 == sym && d == join {
            return Ok(CircuitType::TypeI { a1: m1, a3: m3 });
        }
        if a2 == meet && d == sym {
            return Ok(CircuitType::TypeII { a1: m1, a3: m3 });
        }
        if a2 == meet && d == join {
            return Ok(CircuitType::TypeIII { a1: m1, a3: m3 });
        }
        let x = a2 & !meet;
        if a2 & meet == meet && x != 0 && x & !sym == 0 && d == join & !x {
            return Ok(CircuitType::TypeIV { a1: m1, a3: m3, x: mask(x)? });
        }
    }
    Ok(CircuitType::NotRelevantCircuit)
}

/// Families `{A, B, C}` of pairwise intersecting subsets of `[n]`.
///
/// Evaluates the exponential formula and the Stirling expansion
/// `13S_4 + 92S_5 + 360S_6 + 840S_7 + 840S_8` (at `n + 1`) and insists they agree.
pub fn count_intersecting_triples(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let p = |b: u32| BigInt::from(b).pow(n as u32);
    let numer = p(8) - 3 * p(6) + 3 * p(5) - 4 * p(4) + 3 * p(3) + 2 * p(2) - 2;
    let exponential = exact_quotient(numer, 6, "intersecting triples")?;
    let stirling = [(4, 13u32), (5, 92), (6, 360), (7, 840), (8, 840)]
        .iter()
        .map(|&(k, c)| stirling2(n + 1, k) * c)
        .sum::<BigUint>();
    if exponential != stirling {
        return Err(Error::Invariant(format!(
            "intersecting triples for n={n}: {exponential} vs {stirling}"
        )));
    }
    Ok(exponential)
}

/// Largest `n` for which counts are cross-checked by explicit enumeration.
pub const TETRAHEDRON_ENUMERATION_LIMIT: usize = 5;
pub const RECTANGLE_ENUMERATION_LIMIT: usize = 4;

/// Tetrahedron circuits from partitions `P_1..P_4` of `[n+1]` with `n+1 ∈ P_4`:
/// `A_4 = [n+1] \ P_4`, `A_i = A_4 \ P_i`. Returned as `[A_1, A_2, A_3, A_4]`.
pub fn tetrahedron_circuits(n: usize) -> Result<Vec<[SubsetMask; 4]>> {
    if n == 0 || n >= SubsetMask::MAX_N {
        return Err(Error::InvalidInput(format!("n = {n} out of range")));
    }
    let mut out = Vec::new();
    let mut err = None;
    for_each_partition(n + 1, 4, |blocks| {
        let a4 = blocks[0] | blocks[1] | blocks[2];
        let built = (|| {
            Ok([
                SubsetMask::new(a4 & !blocks[0], n)?,
                SubsetMask::new(a4 & !blocks[1], n)?,
                SubsetMask::new(a4 & !blocks[2], n)?,
                SubsetMask::new(a4, n)?,
            ])
        })();
        match built {
            Ok(t) => out.push(t),
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `S(n+1, 4)`; for small `n` also enumerates the circuits and checks each.
pub fn count_tetrahedron_circuits(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let formula = stirling2(n + 1, 4);
    if n <= TETRAHEDRON_ENUMERATION_LIMIT {
        let all = tetrahedron_circuits(n)?;
        for t in &all {
            if !classify_relevant_4circuit(t)?.is_tetrahedron() {
                return Err(Error::Invariant(format!("{t:?} is not a tetrahedron circuit")));
            }
        }
        if BigUint::from(all.len()) != formula {
            return Err(Error::Invariant(format!(
                "enumerated {} tetrahedra, formula gives {formula}",
                all.len()
            )));
        }
    }
    Ok(formula)
}

/// Sides `S_1..S_4` and midpoint `M` of a rectangle, as bitmasks over `[n]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct SideMidpointTuple {
    sides: [u64; 4],
    midpoint: u64,
    n: usize,
}

impl SideMidpointTuple {
    pub fn new(sides: [u64; 4], midpoint: u64, n: usize) -> Result<Self> {
        if n == 0 || n > SubsetMask::MAX_N {
            return Err(Error::InvalidInput(format!("n = {n} out of range")));
        }
        let full = (1u64 << n) - 1;
        if sides.iter().chain([&midpoint]).any(|&s| s & !full != 0) {
            return Err(Error::InvalidInput("side or midpoint leaves [n]".into()));
        }
        let mut seen = 0u64;
        for &s in &sides {
            if seen & s != 0 {
                return Err(Error::InvalidInput("sides must be pairwise disjoint".into()));
            }
            seen |= s;
        }
        if seen & midpoint != 0 {
            return Err(Error::InvalidInput("midpoint meets a side".into()));
        }
        if midpoint == 0 {
            return Err(Error::InvalidInput("midpoint must be nonempty".into()));
        }
        if (sides[0] == 0 && sides[2] == 0) || (sides[1] == 0 && sides[3] == 0) {
            return Err(Error::InvalidInput("two opposite sides are empty".into()));
        }
        Ok(SideMidpointTuple { sides, midpoint, n })
    }

    pub fn sides(&self) -> [u64; 4] {
        self.sides
    }

    pub fn midpoint(&self) -> u64 {
        self.midpoint
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `A_i = M ∪ S_{i−1} ∪ S_i` with cyclic indices.
pub fn rectangle_from_sides(t: &SideMidpointTuple) -> Result<[SubsetMask; 4]> {
    let s = t.sides;
    let vertex = |i: usize| SubsetMask::new(t.midpoint | s[(i + 3) % 4] | s[i], t.n);
    Ok([vertex(0)?, vertex(1)?, vertex(2)?, vertex(3)?])
}

/// `M = ∩ A_i`, `S_i = (A_i ∩ A_{i+1}) \ M`, for a rectangle in cyclic order.
pub fn sides_from_rectangle(a: &[SubsetMask; 4]) -> Result<SideMidpointTuple> {
    let n = common_dimension(a)?.unwrap_or(0);
    let b = a.map(|m| m.bits());
    for i in 0..4 {
        for j in i + 1..4 {
            if b[i] == b[j] {
                return Err(Error::InvalidInput("rectangle vertices must be distinct".into()));
            }
            if b[i] & b[j] == 0 {
                return Err(Error::InvalidInput("rectangle vertices must intersect".into()));
            }
        }
    }
    // χ_1 + χ_3 = χ_2 + χ_4 for 0/1 vectors means equal meets and joins
    if b[0] & b[2] != b[1] & b[3] || b[0] | b[2] != b[1] | b[3] {
        return Err(Error::InvalidInput("no rectangle relation".into()));
    }
    let m = b.iter().fold(u64::MAX, |acc, &x| acc & x);
    let sides = [0, 1, 2, 3].map(|i| b[i] & b[(i + 1) % 4] & !m);
    SideMidpointTuple::new(sides, m, n)
}

/// Every side-midpoint tuple over `[n]` (ordered, so each rectangle circuit
/// appears once per symmetry of the square).
pub fn side_midpoint_tuples(n: usize) -> Result<Vec<SideMidpointTuple>> {
    if n == 0 || n > 12 {
        return Err(Error::InvalidInput(format!("n = {n} out of range for enumeration")));
    }
    let mut out = Vec::new();
    // label 0..4 = side, 4 = midpoint, 5 = unused
    let total = 6usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut sides = [0u64; 4];
        let mut midpoint = 0u64;
        for x in 0..n {
            match c % 6 {
                s @ 0..=3 => sides[s] |= 1 << x,
                4 => midpoint |= 1 << x,
                _ => {}
            }
            c /= 6;
        }
        if let Ok(t) = SideMidpointTuple::new(sides, midpoint, n) {
            out.push(t);
        }
    }
    Ok(out)
}

/// Relevant rectangle circuits as sorted 4-sets, from side-midpoint tuples.
pub fn rectangle_circuits(n: usize) -> Result<BTreeSet<[SubsetMask; 4]>> {
    let mut out = BTreeSet::new();
    for t in side_midpoint_tuples(n)? {
        let mut r = rectangle_from_sides(&t)?;
        r.sort();
        out.insert(r);
    }
    Ok(out)
}

/// `3S(n+1,4) + 12S(n+1,5) + 15S(n+1,6)`; for small `n` also counts
/// side-midpoint tuples exhaustively (eight per circuit).
pub fn count_rectangle_circuits(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let formula: BigUint = [(4, 3u32), (5, 12), (6, 15)]
        .iter()
        .map(|&(k, c)| stirling2(n + 1, k) * c)
        .sum();
    if n <= RECTANGLE_ENUMERATION_LIMIT {
        let tuples = side_midpoint_tuples(n)?.len();
        if tuples % 8 != 0 || BigUint::from(tuples / 8) != formula {
            return Err(Error::Invariant(format!(
                "{tuples} side-midpoint tuples do not match {formula} rectangles"
            )));
        }
    }
    Ok(formula)
}

/// `b_3(A_n)` = intersecting triples − tetrahedra − rectangles.
pub fn b3_via_circuits(n: usize) -> Result<BigUint> {
    let triples = count_intersecting_triples(n)?;
    let broken = count_tetrahedron_circuits(n)? + count_rectangle_circuits(n)?;
    if broken > triples {
        return Err(Error::Invariant(format!(
            "{broken} broken 3-sets exceed {triples} intersecting triples"
        )));
    }
    Ok(triples - broken)
}
