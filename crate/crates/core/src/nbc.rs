//! The broken circuit complex of `A_n` under the binary order.
//!
//! Betti numbers are face counts of this complex: `b_i` is the number of
//! NBC sets of size `i`. [`is_broken_circuit`] and [`is_nbc`] follow the
//! definition literally and are meant for checking; the counting routines
//! run a depth-first search that only ever adds hyperplanes in increasing
//! binary order.
//!
//! # Search invariant
//!
//! When `S` is NBC and `e > max S`, the set `S ∪ {e}` is NBC iff it is
//! independent and its closure contains nothing above `e`. The search walks
//! candidates `e` from the top down; the first candidate met in each new
//! flat `cl(S ∪ {e})` is its maximum and is the only one accepted, and it
//! marks the rest of the flat as used.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arrangement::CharPoly;
use crate::config::Guards;
use crate::error::{Error, Result};
use crate::linalg::{closure, is_circuit, is_independent, IntEchelon};
use crate::mask::{common_dimension, SubsetMask};

/// A set of hyperplanes containing no broken circuit, in binary order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NbcSet {
    elements: Vec<SubsetMask>,
    n: usize,
}

impl NbcSet {
    /// Validates `elements` against the definition.
    pub fn new(mut elements: Vec<SubsetMask>, n: usize) -> Result<Self> {
        elements.sort();
        if let Some(d) = common_dimension(&elements)? {
            if d != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: d,
                });
            }
        }
        if !is_nbc(&elements)? {
            return Err(Error::InvalidInput("set contains a broken circuit".into()));
        }
        Ok(NbcSet { elements, n })
    }

    pub fn empty(n: usize) -> Self {
        NbcSet {
            elements: Vec::new(),
            n,
        }
    }

    pub fn elements(&self) -> &[SubsetMask] {
        &self.elements
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Appends `e` if the result is still NBC.
    pub fn extended(&self, e: SubsetMask) -> Result<Option<NbcSet>> {
        if nbc_extend(&self.elements, e)? {
            let mut elements = self.elements.clone();
            elements.push(e);
            Ok(Some(NbcSet { elements, n: self.n }))
        } else {
            Ok(None)
        }
    }
}

fn check_distinct(t: &[SubsetMask]) -> Result<()> {
    let mut sorted = t.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("repeated hyperplane".into()));
    }
    Ok(())
}

/// Returns some `H > max(t)` such that `t ∪ {H}` is a circuit of `A_n`.
pub fn broken_circuit_witness(t: &[SubsetMask]) -> Result<Option<SubsetMask>> {
    let Some(n) = common_dimension(t)? else {
        return Ok(None);
    };
    check_distinct(t)?;
    if !is_independent(t)? {
        return Ok(None);
    }
    let top = t.iter().max().map(|m| m.bits()).unwrap_or(0);
    let mut basis = IntEchelon::new(n);
    for m in t {
        basis.insert_mask(m.bits())?;
    }
    for bits in top + 1..1u64 << n {
        if !basis.contains_mask(bits)? {
            continue;
        }
        let h = SubsetMask::new(bits, n)?;
        let mut c = t.to_vec();
        c.push(h);
        if is_circuit(&c)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

pub fn is_broken_circuit(t: &[SubsetMask]) -> Result<bool> {
    Ok(broken_circuit_witness(t)?.is_some())
}

/// True iff no subset of `s` is a broken circuit.
///
/// Checks every nonempty subset, so keep `|s|` small.
pub fn is_nbc(s: &[SubsetMask]) -> Result<bool> {
    common_dimension(s)?;
    check_distinct(s)?;
    if s.len() > 20 {
        return Err(Error::InvalidInput(format!(
            "subset test over {} elements is too large",
            s.len()
        )));
    }
    for pick in 1u32..1 << s.len() {
        let t: Vec<SubsetMask> = (0..s.len())
            .filter(|&i| pick >> i & 1 == 1)
            .map(|i| s[i])
            .collect();
        if is_broken_circuit(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Incremental test: is `s ∪ {e}` NBC, given that `s` is NBC and `e > max s`?
///
/// Decided as: `s ∪ {e}` independent and no `f > e` in
/// `closure(s ∪ {e}) \ closure(s)`.
pub fn nbc_extend(s: &[SubsetMask], e: SubsetMask) -> Result<bool> {
    let mut all = s.to_vec();
    all.push(e);
    let n = common_dimension(&all)?.unwrap_or(e.n());
    if let Some(&top) = s.iter().max() {
        if e <= top {
            return Err(Error::InvalidInput(format!(
                "{e} does not come after {top} in binary order"
            )));
        }
    }
    if !is_independent(&all)? {
        return Ok(false);
    }
    let above: Vec<SubsetMask> = (e.bits() + 1..1u64 << n)
        .map(|b| SubsetMask::new(b, n))
        .collect::<Result<_>>()?;
    let mut universe = all.clone();
    universe.extend_from_slice(&above);
    let old = closure(s, &universe)?;
    let new = closure(&all, &universe)?;
    Ok(!new.iter().any(|f| *f > e && !old.contains(f)))
}

/// Integer basis of the orthogonal complement of span(S).
///
/// A 0/1 vector `f` lies in span(S) iff every kernel vector sums to zero
/// over the support of `f`.
#[derive(Clone)]
struct Cospan {
    n: usize,
    vecs: Vec<i64>,
}

impl Cospan {
    fn full(n: usize) -> Self {
        let mut vecs = vec![0; n * n];
        for i in 0..n {
            vecs[i * n + i] = 1;
        }
        Cospan { n, vecs }
    }

    #[inline]
    fn count(&self) -> usize {
        self.vecs.len() / self.n
    }

    #[inline]
    fn dot(w: &[i64], mut bits: u64) -> i64 {
        let mut acc = 0;
        while bits != 0 {
            acc += w[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        acc
    }

    #[inline]
    fn in_span(&self, bits: u64) -> bool {
        self.vecs.chunks_exact(self.n).all(|w| Self::dot(w, bits) == 0)
    }

    /// Complement of span(S ∪ {e}); `e` must not be in span(S).
    fn with(&self, bits: u64) -> Result<Cospan> {
        let n = self.n;
        let rows: Vec<&[i64]> = self.vecs.chunks_exact(n).collect();
        let pivot = rows
            .iter()
            .position(|w| Self::dot(w, bits) != 0)
            .ok_or_else(|| Error::Invariant("extension lies in the span".into()))?;
        let d = Self::dot(rows[pivot], bits);
        let mut vecs = Vec::with_capacity(self.vecs.len() - n);
        for (idx, w) in rows.iter().enumerate() {
            if idx == pivot {
                continue;
            }
            let c = Self::dot(w, bits);
            let start = vecs.len();
            for (x, y) in w.iter().zip(rows[pivot]) {
                let v = if c == 0 {
                    *x
                } else {
                    x.checked_mul(d)
                        .and_then(|a| y.checked_mul(c).and_then(|b| a.checked_sub(b)))
                        .ok_or(Error::Overflow("NBC kernel update"))?
                };
                vecs.push(v);
            }
            let g = vecs[start..]
                .iter()
                .fold(0i64, |g, &x| num_integer::gcd(g, x));
            if g > 1 {
                vecs[start..].iter_mut().for_each(|x| *x /= g);
            }
        }
        Ok(Cospan { n, vecs })
    }
}

struct Search {
    n: usize,
    top: u64,
    max_size: usize,
}

impl Search {
    /// Counts NBC sets extending a node whose largest element is `last`.
    fn walk(&self, kernel: &Cospan, last: u64, size: usize, counts: &mut [u64]) -> Result<()> {
        counts[size] += 1;
        if size == self.max_size {
            return Ok(());
        }
        let lo = last + 1;
        let span = (self.top + 1 - lo) as usize;
        let mut marked = vec![0u64; span.div_ceil(64)];
        let is_marked = |m: &[u64], b: u64| {
            let i = (b - lo) as usize;
            m[i / 64] >> (i % 64) & 1 == 1
        };
        for e in (lo..=self.top).rev() {
            if is_marked(&marked, e) {
                continue;
            }
            let child = kernel.with(e)?;
            if child.count() == 0 {
                // full rank: the new flat is everything
                for w in marked.iter_mut() {
                    *w = u64::MAX;
                }
            } else {
                for f in lo..e {
                    if !is_marked(&marked, f) && child.in_span(f) {
                        let i = (f - lo) as usize;
                        marked[i / 64] |= 1 << (i % 64);
                    }
                }
            }
            if size + 1 == self.max_size {
                counts[size + 1] += 1;
            } else {
                self.walk(&child, e, size + 1, counts)?;
            }
        }
        Ok(())
    }
}

/// Number of NBC sets of each size `0..=max_size`.
///
/// Roots of the search (the singletons) are processed in parallel and their
/// counts summed, so the result does not depend on the thread count.
pub fn nbc_face_counts(n: usize, max_size: usize) -> Result<Vec<u64>> {
    if n == 0 || n > 62 {
        return Err(Error::InvalidInput(format!("dimension {n} out of range")));
    }
    let max_size = max_size.min(n);
    let search = Search {
        n,
        top: (1u64 << n) - 1,
        max_size,
    };
    let mut counts = vec![0u64; max_size + 1];
    counts[0] = 1;
    if max_size == 0 {
        return Ok(counts);
    }
    let root = Cospan::full(n);
    // every singleton is NBC
    let partials: Vec<Vec<u64>> = (1..=search.top)
        .into_par_iter()
        .map(|e| {
            let mut local = vec![0u64; max_size + 1];
            let child = root.with(e)?;
            search.walk(&child, e, 1, &mut local)?;
            Ok(local)
        })
        .collect::<Result<_>>()?;
    for p in partials {
        for (c, x) in counts.iter_mut().zip(p) {
            *c += x;
        }
    }
    debug_assert_eq!(search.n, n);
    Ok(counts)
}

/// Betti numbers `b_0..b_{i_max}` of `A_n` as NBC face counts.
pub fn betti_via_nbc(n: usize, i_max: usize, guards: &Guards) -> Result<Vec<BigUint>> {
    if i_max > n {
        return Err(Error::InvalidInput(format!("i_max {i_max} exceeds n = {n}")));
    }
    guards.check_nbc(n, i_max)?;
    Ok(nbc_face_counts(n, i_max)?
        .into_iter()
        .map(BigUint::from)
        .collect())
}

/// The full characteristic polynomial from all NBC face counts.
pub fn charpoly_via_nbc(n: usize, guards: &Guards) -> Result<CharPoly> {
    Guards::check("full NBC enumeration", n, guards.nbc_full)?;
    let betti = betti_via_nbc(n, n, &Guards::unlimited())?;
    CharPoly::from_betti(&betti)
}

/// Lists NBC sets of size at most `max_size`, stopping after `cap` sets.
///
/// Uses [`nbc_extend`] directly; meant for tests and small examples.
pub fn list_nbc_sets(n: usize, max_size: usize, cap: usize) -> Result<Vec<NbcSet>> {
    let mut out = Vec::new();
    let mut stack = vec![NbcSet::empty(n)];
    while let Some(s) = stack.pop() {
        if out.len() == cap {
            break;
        }
        let start = s.elements().last().map_or(1, |m| m.bits() + 1);
        if s.len() < max_size {
            for bits in (start..1u64 << n).rev() {
                if let Some(child) = s.extended(SubsetMask::new(bits, n)?)? {
                    stack.push(child);
                }
            }
        }
        out.push(s);
    }
    Ok(out)
}
