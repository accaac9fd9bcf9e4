//! `(i, k)`-prototypes: the combinatorial skeleton of an `i`-tuple of
//! hyperplanes of `A_n`.
//!
//! An ordered tuple `(A_1, ..., A_i)` of distinct nonempty subsets of `[n]`
//! cuts `[n+1]` into `k` atoms (the last one holding `n + 1` and every
//! element outside all `A_j`). Recording, for each of the first `k - 1`
//! atoms, which `A_j` contain it gives an injective map
//! `f : [k-1] -> 2^[i] \ {∅}`, the prototype. Whether the tuple contains a
//! broken circuit depends on `f` alone, so `b_i(A_n)` is a fixed
//! combination of `S(n+1, k)`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::config::Guards;
use crate::error::{Error, Result};
use crate::mask::{common_dimension, SubsetMask};
use crate::nbc::is_nbc;
use crate::partition::Partition;
use crate::stirling::{factorial, stirling2, StirlingCombination};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prototype {
    i: usize,
    k: usize,
    /// `images[l - 1] = f(l)` as a bitmask over `[i]`.
    images: Vec<u16>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// Every realisation is an NBC set.
    Functional,
    /// Every realisation contains a broken circuit.
    Broken,
    /// Two building blocks coincide or one is empty, so the realised
    /// sets are not `i` distinct hyperplanes.
    Degenerate,
}

impl Prototype {
    pub fn new(i: usize, k: usize, images: Vec<u16>) -> Result<Self> {
        if i == 0 || i > 15 {
            return Err(Error::InvalidInput(format!("tuple length {i} out of range")));
        }
        if k < i + 1 || k > 1 << i {
            return Err(Error::InvalidInput(format!(
                "block count {k} outside {}..={}",
                i + 1,
                1 << i
            )));
        }
        if images.len() != k - 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} images, got {}",
                k - 1,
                images.len()
            )));
        }
        let limit = 1u32 << i;
        if images.iter().any(|&x| x == 0 || x as u32 >= limit) {
            return Err(Error::InvalidInput("images must be nonempty subsets of [i]".into()));
        }
        if images.iter().duplicates().next().is_some() {
            return Err(Error::InvalidInput("prototype is not injective".into()));
        }
        Ok(Prototype { i, k, images })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    /// `f(l)` for `1 <= l <= k - 1`.
    pub fn image(&self, l: usize) -> u16 {
        self.images[l - 1]
    }

    /// `I_j = { l : j ∈ f(l) }` for `j = 1..=i`, as masks over `[k-1]`.
    pub fn building_blocks(&self) -> Vec<u64> {
        (0..self.i)
            .map(|j| {
                self.images
                    .iter()
                    .enumerate()
                    .filter(|(_, &img)| img >> j & 1 == 1)
                    .fold(0u64, |acc, (l, _)| acc | 1 << l)
            })
            .collect()
    }

    /// Inverse of [`Prototype::building_blocks`].
    pub fn from_building_blocks(i: usize, k: usize, blocks: &[u64]) -> Result<Self> {
        if blocks.len() != i {
            return Err(Error::InvalidInput(format!(
                "expected {i} building blocks, got {}",
                blocks.len()
            )));
        }
        let images = (0..k.saturating_sub(1))
            .map(|l| {
                blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b >> l & 1 == 1)
                    .fold(0u16, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Self::new(i, k, images)
    }

    /// True if the building blocks are nonempty and pairwise distinct, i.e.
    /// every realisation is a tuple of `i` distinct hyperplanes.
    pub fn is_proper(&self) -> bool {
        let blocks = self.building_blocks();
        blocks.iter().all(|&b| b != 0) && blocks.iter().all_unique()
    }
}

impl fmt::Debug for Prototype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Prototype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})[", self.i, self.k)?;
        for (l, img) in self.images.iter().enumerate() {
            if l > 0 {
                write!(f, " ")?;
            }
            let elems: Vec<String> = (0..self.i)
                .filter(|j| img >> j & 1 == 1)
                .map(|j| (j + 1).to_string())
                .collect();
            write!(f, "{}->{{{}}}", l + 1, elems.join(","))?;
        }
        write!(f, "]")
    }
}

fn check_guard(i: usize, guards: &Guards) -> Result<()> {
    Guards::check("prototype enumeration (i)", i, guards.prototypes_i)
}

/// Number of `(i, k)`-prototypes: `(2^i - 1)! / (2^i - k)!`.
pub fn prototype_count(i: usize, k: usize) -> BigUint {
    let values = (1usize << i) - 1;
    if k == 0 || k - 1 > values {
        return BigUint::zero();
    }
    (0..k - 1).fold(BigUint::from(1u32), |acc, x| acc * (values - x))
}

/// Every `(i, k)`-prototype, lexicographic in the image sequence.
pub fn enumerate_prototypes(
    i: usize,
    k: usize,
    guards: &Guards,
) -> Result<impl Iterator<Item = Prototype>> {
    check_guard(i, guards)?;
    // validates the (i, k) range
    if i == 0 || k < i + 1 || k > 1 << i {
        return Err(Error::InvalidInput(format!("no ({i},{k})-prototypes")));
    }
    let values: Vec<u16> = (1..1u16 << i).collect();
    Ok(values
        .into_iter()
        .permutations(k - 1)
        .map(move |images| Prototype { i, k, images }))
}

/// The tuple `A_{f,π}`: `A_j` is the union of the blocks `P_l` with `l ∈ I_j`.
///
/// `π` partitions `[n+1]` and the result lives in `A_n`.
pub fn realize(p: &Prototype, partition: &Partition) -> Result<Vec<SubsetMask>> {
    if partition.len() != p.k {
        return Err(Error::InvalidInput(format!(
            "prototype needs {} blocks, partition has {}",
            p.k,
            partition.len()
        )));
    }
    let n = partition.ground_size() - 1;
    let blocks = partition.blocks();
    p.building_blocks()
        .into_iter()
        .map(|ij| {
            let bits = (0..p.k - 1)
                .filter(|l| ij >> l & 1 == 1)
                .fold(0u64, |acc, l| acc | blocks[l]);
            SubsetMask::new(bits, n)
        })
        .collect()
}

/// Recovers the prototype and partition of a tuple of distinct hyperplanes.
///
/// Tuples cutting `[n+1]` into at most `i` atoms are dependent and have no
/// prototype; they are rejected.
pub fn prototype_of(tuple: &[SubsetMask]) -> Result<(Prototype, Partition)> {
    let n = common_dimension(tuple)?
        .ok_or_else(|| Error::InvalidInput("empty tuple".into()))?;
    if tuple.iter().duplicates().next().is_some() {
        return Err(Error::InvalidInput("tuple entries must be distinct".into()));
    }
    if tuple.len() > 15 {
        return Err(Error::InvalidInput("tuple too long".into()));
    }
    // atom signature of each element of [n+1]; n+1 itself lies in no A_j
    let mut atoms: BTreeMap<u16, u64> = BTreeMap::new();
    for x in 0..=n {
        let sig = tuple
            .iter()
            .enumerate()
            .filter(|(_, a)| x < n && a.bits() >> x & 1 == 1)
            .fold(0u16, |acc, (j, _)| acc | 1 << j);
        *atoms.entry(sig).or_default() |= 1 << x;
    }
    if atoms.len() <= tuple.len() {
        // i vectors inside the span of at most i - 1 atom vectors
        return Err(Error::InvalidInput(format!(
            "tuple has only {} atoms, so it is linearly dependent and has no prototype",
            atoms.len()
        )));
    }
    let partition = Partition::new(n + 1, atoms.values().copied().collect())?;
    let by_block: BTreeMap<u64, u16> = atoms.into_iter().map(|(s, b)| (b, s)).collect();
    let images: Vec<u16> = partition.blocks()[..partition.len() - 1]
        .iter()
        .map(|b| by_block[b])
        .collect();
    let proto = Prototype::new(tuple.len(), partition.len(), images)?;
    Ok((proto, partition))
}

/// Status of `p` evaluated on a particular partition.
pub fn classify_on(p: &Prototype, partition: &Partition) -> Result<Status> {
    if !p.is_proper() {
        return Ok(Status::Degenerate);
    }
    let tuple = realize(p, partition)?;
    Ok(if is_nbc(&tuple)? {
        Status::Functional
    } else {
        Status::Broken
    })
}

/// Status of `p` on the all-singletons partition of `[k]` (so `n = k - 1`).
pub fn classify(p: &Prototype) -> Result<Status> {
    classify_on(p, &Partition::singletons(p.k)?)
}

/// Number of functional `(i, k)`-prototypes for each `k`.
pub fn functional_counts(i: usize, guards: &Guards) -> Result<BTreeMap<usize, u64>> {
    check_guard(i, guards)?;
    let mut out = BTreeMap::new();
    for k in i + 1..=1 << i {
        let protos: Vec<Prototype> = enumerate_prototypes(i, k, guards)?.collect();
        let count = protos
            .par_iter()
            .map(|p| classify(p).map(|s| (s == Status::Functional) as u64))
            .sum::<Result<u64>>()?;
        out.insert(k, count);
    }
    Ok(out)
}

/// `c_{i,k} = #{functional (i,k)-prototypes} / i!`.
pub fn coefficients(i: usize, guards: &Guards) -> Result<StirlingCombination> {
    let fact = factorial(i);
    let mut coeffs = BTreeMap::new();
    for (k, count) in functional_counts(i, guards)? {
        let count = num_bigint::BigInt::from(count);
        if &count % &fact != num_bigint::BigInt::zero() {
            return Err(Error::Invariant(format!(
                "{count} functional ({i},{k})-prototypes is not divisible by {i}!"
            )));
        }
        coeffs.insert(k, (count / &fact).magnitude().clone());
    }
    Ok(StirlingCombination::new(i, coeffs))
}

/// `b_i(A_n) = Σ_k c_{i,k} S(n+1, k)`.
pub fn betti_via_prototypes(i: usize, n: usize, guards: &Guards) -> Result<BigUint> {
    let c = coefficients(i, guards)?;
    Ok(c
        .coeffs
        .iter()
        .map(|(&k, ck)| ck * stirling2(n + 1, k))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(elems: &[usize], n: usize) -> SubsetMask {
        SubsetMask::from_elements(elems.iter().copied(), n).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let g = Guards::default();
        assert_eq!(enumerate_prototypes(2, 3, &g).unwrap().count(), 6);
        assert_eq!(enumerate_prototypes(2, 4, &g).unwrap().count(), 6);
        assert_eq!(enumerate_prototypes(3, 8, &g).unwrap().count(), 5040);
        assert_eq!(prototype_count(3, 8), BigUint::from(5040u32));
        assert!(enumerate_prototypes(2, 2, &g).is_err());
        assert!(enumerate_prototypes(4, 5, &g).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic_and_unique() {
        let g = Guards::default();
        let all: Vec<Prototype> = enumerate_prototypes(3, 4, &g).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0].images < w[1].images));
    }

    #[test]
    fn realize_examples() {
        let singletons = Partition::singletons(3).unwrap();
        let p = Prototype::new(2, 3, vec![0b01, 0b10]).unwrap();
        assert_eq!(realize(&p, &singletons).unwrap(), vec![m(&[1], 2), m(&[2], 2)]);
        let p = Prototype::new(2, 3, vec![0b11, 0b01]).unwrap();
        assert_eq!(realize(&p, &singletons).unwrap(), vec![m(&[1, 2], 2), m(&[1], 2)]);
        assert!(realize(&p, &Partition::singletons(4).unwrap()).is_err());
    }

    #[test]
    fn building_blocks_round_trip() {
        let g = Guards::default();
        for p in enumerate_prototypes(3, 5, &g).unwrap() {
            let back = Prototype::from_building_blocks(3, 5, &p.building_blocks()).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn classification_examples() {
        let g = Guards::default();
        let statuses = |i, k| {
            enumerate_prototypes(i, k, &g)
                .unwrap()
                .map(|p| classify(&p).unwrap())
                .collect::<Vec<_>>()
        };
        assert!(statuses(2, 4).iter().all(|&s| s == Status::Functional));
        let two_three = statuses(2, 3);
        assert_eq!(two_three.iter().filter(|&&s| s == Status::Functional).count(), 4);
        let three_four = statuses(3, 4);
        assert_eq!(three_four.iter().filter(|&&s| s == Status::Functional).count(), 54);
    }

    #[test]
    fn improper_prototypes_are_degenerate() {
        // A_3 would be empty
        let p = Prototype::new(3, 4, vec![0b001, 0b010, 0b011]).unwrap();
        assert!(!p.is_proper());
        assert_eq!(classify(&p).unwrap(), Status::Degenerate);
        // I_1 = I_2, so A_1 = A_2
        let p = Prototype::new(3, 4, vec![0b111, 0b011, 0b100]).unwrap();
        assert!(!p.is_proper());
        assert_eq!(classify(&p).unwrap(), Status::Degenerate);
    }

    #[test]
    fn small_coefficients() {
        let g = Guards::default();
        assert_eq!(
            coefficients(1, &g).unwrap(),
            StirlingCombination::from_pairs(1, &[(2, 1)])
        );
        assert_eq!(
            coefficients(2, &g).unwrap(),
            StirlingCombination::from_pairs(2, &crate::stirling::B2_COEFFS)
        );
        assert_eq!(betti_via_prototypes(2, 5, &g).unwrap(), BigUint::from(375u32));
    }

    #[test]
    fn tuple_round_trip() {
        let tuple = vec![m(&[1, 2], 4), m(&[2, 3], 4), m(&[4], 4)];
        let (p, pi) = prototype_of(&tuple).unwrap();
        assert_eq!(realize(&p, &pi).unwrap(), tuple);
        assert!(prototype_of(&[m(&[1], 2), m(&[1], 2)]).is_err());
    }
}
