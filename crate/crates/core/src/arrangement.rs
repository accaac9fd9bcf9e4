//! The resonance arrangement `A_n` and its characteristic polynomial.
//!
//! Three independent routes to `χ(A_n; t)` live in this crate: the Whitney
//! subset sum here, finite-field point counting here, and the broken circuit
//! enumeration in [`crate::nbc`]. Chamber counts come either from the
//! polynomial (sum of Betti numbers) or from a geometric deletion/restriction
//! recursion that never looks at the polynomial.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::config::Guards;
use crate::error::{Error, Result};
use crate::linalg::{normalize_direction, ExactMatrix, IntEchelon};
use crate::mask::SubsetMask;

/// All `2^n - 1` hyperplanes of `A_n`, ascending in binary order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    hyperplanes: Vec<SubsetMask>,
}

impl Arrangement {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > SubsetMask::MAX_N {
            return Err(Error::InvalidInput(format!(
                "dimension {n} outside [1, {}]",
                SubsetMask::MAX_N
            )));
        }
        if n > 26 {
            // 2^n hyperplanes would not fit in memory anyway
            return Err(Error::InvalidInput(format!(
                "cannot materialise 2^{n} - 1 hyperplanes"
            )));
        }
        let hyperplanes = (1..1u64 << n)
            .map(|bits| SubsetMask::new(bits, n))
            .collect::<Result<_>>()?;
        Ok(Arrangement { n, hyperplanes })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn hyperplanes(&self) -> &[SubsetMask] {
        &self.hyperplanes
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }
}

pub fn build_arrangement(n: usize) -> Result<Arrangement> {
    Arrangement::new(n)
}

/// A characteristic polynomial; `coeffs[d]` is the coefficient of `t^d`.
#[derive(Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.last() {
            Some(c) if c.is_one() => Ok(CharPoly { coeffs }),
            _ => Err(Error::InvalidInput(
                "characteristic polynomial must be monic".into(),
            )),
        }
    }

    /// Builds `Σ (-1)^i b_i t^{n-i}` from Betti numbers `b_0..b_n`.
    pub fn from_betti(betti: &[BigUint]) -> Result<Self> {
        let n = betti
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("empty Betti vector".into()))?;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for (i, b) in betti.iter().enumerate() {
            let v = BigInt::from(b.clone());
            coeffs[n - i] = if i % 2 == 0 { v } else { -v };
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Unsigned coefficients `b_0..b_n`, `b_i = |coeff of t^{n-i}|`.
    pub fn betti(&self) -> Vec<BigUint> {
        self.coeffs
            .iter()
            .rev()
            .map(|c| c.magnitude().clone())
            .collect()
    }

    /// Coefficients from `t^n` down to `t^0`.
    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Checks the sign pattern and `b_1 = 2^n - 1` expected of `χ(A_n)`.
    pub fn check_resonance_invariants(&self) -> Result<()> {
        let n = self.degree();
        for (i, c) in self.coeffs.iter().rev().enumerate() {
            let bad_sign = if i % 2 == 0 { c.is_negative() } else { c.is_positive() };
            if bad_sign {
                return Err(Error::Invariant(format!(
                    "coefficient of t^{} has the wrong sign",
                    n - i
                )));
            }
        }
        if n >= 1 {
            let expected = (BigUint::one() << n) - 1u32;
            if self.coeffs[n - 1].magnitude() != &expected {
                return Err(Error::Invariant(format!(
                    "|coefficient of t^{}| is {}, expected {expected}",
                    n - 1,
                    self.coeffs[n - 1]
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || d == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Number of chambers of a real arrangement: the sum of its Betti numbers.
pub fn region_count(p: &CharPoly) -> BigUint {
    p.coeffs.iter().map(|c| c.magnitude().clone()).sum()
}

/// `χ(A_n; t) = Σ_{S ⊆ A_n} (-1)^{|S|} t^{n - r(S)}` by direct summation.
pub fn whitney_charpoly(n: usize, guards: &Guards) -> Result<CharPoly> {
    Guards::check("Whitney summation", n, guards.whitney)?;
    let arr = Arrangement::new(n)?;
    let bits: Vec<u64> = arr.hyperplanes().iter().map(|h| h.bits()).collect();
    // signed count of subsets per rank
    let mut by_rank = vec![0i64; n + 1];
    whitney_walk(&bits, 0, IntEchelon::new(n), 0, &mut by_rank)?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (r, c) in by_rank.into_iter().enumerate() {
        coeffs[n - r] = BigInt::from(c);
    }
    CharPoly::new(coeffs)
}

fn whitney_walk(
    bits: &[u64],
    next: usize,
    basis: IntEchelon,
    size: usize,
    by_rank: &mut [i64],
) -> Result<()> {
    if next == bits.len() {
        by_rank[basis.rank()] += if size.is_multiple_of(2) { 1 } else { -1 };
        return Ok(());
    }
    let mut with = basis.clone();
    with.insert_mask(bits[next])?;
    whitney_walk(bits, next + 1, with, size + 1, by_rank)?;
    whitney_walk(bits, next + 1, basis, size, by_rank)
}

/// Largest determinant of an `n x n` 0/1 matrix for small `n`.
const MAX_01_DETERMINANT: [u64; 8] = [1, 1, 2, 3, 5, 9, 32, 56];

/// Upper bound on every minor of the normal matrix of `A_n`.
///
/// Exact maxima for `n <= 8`, the Hadamard bound `(n+1)^{(n+1)/2} / 2^n`
/// beyond that.
pub fn minor_bound(n: usize) -> BigUint {
    if (1..=MAX_01_DETERMINANT.len()).contains(&n) {
        return BigUint::from(MAX_01_DETERMINANT[n - 1]);
    }
    // ceil of sqrt((n+1)^(n+1)) / 2^n
    let sq = BigUint::from(n as u64 + 1).pow(n as u32 + 1);
    let root = sq.sqrt() + 1u32;
    (root >> n) + 1u32
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Primes accepted by the bitset point counter.
pub const MAX_COUNTING_PRIME: u64 = 127;

/// The smallest `n + 1` primes exceeding the minor bound of `A_n`.
pub fn default_primes(n: usize) -> Vec<u64> {
    let bound = minor_bound(n);
    (2u64..)
        .filter(|&q| is_prime(q) && BigUint::from(q) > bound)
        .take(n + 1)
        .collect()
}

/// Number of points of `F_q^n` lying on no hyperplane of `A_n`.
///
/// Equivalently the number of sequences `x_1..x_n` in `F_q` all of whose
/// nonempty subset sums are nonzero. Scaling by `F_q^*` fixes `x_1 = 1`;
/// the reachable subset sums are carried as a bitset of residues and the
/// last coordinate is counted in closed form.
pub fn count_points_off(n: usize, q: u64) -> Result<u128> {
    if !is_prime(q) {
        return Err(Error::InvalidInput(format!("{q} is not prime")));
    }
    if q > MAX_COUNTING_PRIME {
        return Err(Error::InvalidInput(format!(
            "prime {q} exceeds the supported maximum {MAX_COUNTING_PRIME}"
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let q = q as u32;
    let full: u128 = (1u128 << q) - 1;
    let start: u128 = 1 << 1;
    let scaled = match n {
        1 => 1,
        2 => count_tail(start, 0, q, full),
        _ => (1..q)
            .into_par_iter()
            .map(|x| match extend_sums(start, x, q, full) {
                Some(s) => count_tail(s, n - 3, q, full),
                None => 0,
            })
            .sum::<u128>(),
    };
    Ok(scaled * (q as u128 - 1))
}

#[inline]
fn extend_sums(sums: u128, x: u32, q: u32, full: u128) -> Option<u128> {
    let rotated = ((sums << x) | (sums >> (q - x))) & full;
    let next = sums | rotated | (1u128 << x);
    (next & 1 == 0).then_some(next)
}

fn count_tail(sums: u128, remaining: usize, q: u32, full: u128) -> u128 {
    if remaining == 0 {
        // x is admissible iff x != 0 and -x is not already a subset sum
        return (q - 1 - sums.count_ones()) as u128;
    }
    (1..q)
        .filter_map(|x| extend_sums(sums, x, q, full))
        .map(|s| count_tail(s, remaining - 1, q, full))
        .sum()
}

/// `χ(A_n)` by interpolating point counts over several prime fields.
///
/// Each prime must exceed [`minor_bound`] so that reduction mod `q` keeps
/// the matroid of `A_n`; at least `n + 1` primes are needed. Extra primes
/// are used as consistency checks.
pub fn finite_field_charpoly(n: usize, primes: &[u64], guards: &Guards) -> Result<CharPoly> {
    Guards::check("finite-field point counting", n, guards.finite_field)?;
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if primes.len() < n + 1 {
        return Err(Error::InvalidInput(format!(
            "need at least {} primes, got {}",
            n + 1,
            primes.len()
        )));
    }
    let bound = minor_bound(n);
    let mut seen = HashSet::new();
    for &q in primes {
        if !is_prime(q) {
            return Err(Error::InvalidInput(format!("{q} is not prime")));
        }
        if BigUint::from(q) <= bound {
            return Err(Error::InvalidInput(format!(
                "prime {q} does not exceed the minor bound {bound} of A_{n}"
            )));
        }
        if !seen.insert(q) {
            return Err(Error::InvalidInput(format!("prime {q} listed twice")));
        }
    }
    let counts: Vec<(u64, u128)> = primes
        .iter()
        .map(|&q| count_points_off(n, q).map(|c| (q, c)))
        .collect::<Result<_>>()?;

    let (fit, check) = counts.split_at(n + 1);
    let vandermonde: Vec<Vec<i64>> = fit
        .iter()
        .map(|&(q, _)| (0..=n).map(|d| (q as i64).pow(d as u32)).collect())
        .collect();
    let rhs: Vec<BigRational> = fit
        .iter()
        .map(|&(_, c)| BigRational::from_integer(BigInt::from(c)))
        .collect();
    let sol = ExactMatrix::from_integer_rows(&vandermonde)?.solve(&rhs)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    for c in sol {
        if !c.is_integer() {
            return Err(Error::Invariant(format!(
                "interpolated coefficient {c} is not an integer"
            )));
        }
        coeffs.push(c.to_integer());
    }
    let poly = CharPoly::new(coeffs).map_err(|_| {
        Error::Invariant("interpolated point count polynomial is not monic".into())
    })?;
    for &(q, c) in check {
        if poly.eval(&BigInt::from(q)) != BigInt::from(c) {
            return Err(Error::Invariant(format!(
                "point count over F_{q} disagrees with the interpolant"
            )));
        }
    }
    Ok(poly)
}

/// Number of chambers of `A_n`, counted geometrically.
///
/// Hyperplanes are inserted in binary order; inserting `H` into the
/// arrangement of its predecessors adds one chamber per chamber of their
/// restriction to `H`, which is counted recursively in one dimension less.
/// Only exact integer normals are used; the characteristic polynomial is
/// never consulted.
pub fn enumerate_chambers_bruteforce(n: usize, guards: &Guards) -> Result<BigUint> {
    Guards::check("chamber enumeration", n, guards.chambers)?;
    let arr = Arrangement::new(n)?;
    let normals: Vec<Vec<i64>> = arr.hyperplanes().iter().map(|h| h.to_vector()).collect();
    count_regions(n, &normals).map(BigUint::from)
}

/// Chambers of the central arrangement in `Q^dim` with the given normals.
pub fn count_regions(dim: usize, normals: &[Vec<i64>]) -> Result<u64> {
    let hs = distinct_hyperplanes(dim, normals)?;
    if hs.is_empty() {
        return Ok(1);
    }
    if dim == 1 {
        return Ok(2);
    }
    let added: Vec<u64> = (0..hs.len())
        .into_par_iter()
        .map(|j| {
            let restricted = restrict(&hs[..j], &hs[j])?;
            count_regions(dim - 1, &restricted)
        })
        .collect::<Result<_>>()?;
    Ok(1 + added.iter().sum::<u64>())
}

fn distinct_hyperplanes(dim: usize, normals: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for v in normals {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let mut v = v.clone();
        if normalize_direction(&mut v) && seen.insert(v.clone()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Normals of `hs ∩ H` in coordinates of `H`, eliminating one coordinate of `h`.
fn restrict(hs: &[Vec<i64>], h: &[i64]) -> Result<Vec<Vec<i64>>> {
    let p = h
        .iter()
        .position(|&x| x != 0)
        .ok_or_else(|| Error::Invariant("zero normal vector".into()))?;
    hs.iter()
        .map(|g| {
            (0..h.len())
                .filter(|&i| i != p)
                .map(|i| {
                    h[p].checked_mul(g[i])
                        .and_then(|a| g[p].checked_mul(h[i]).and_then(|b| a.checked_sub(b)))
                        .ok_or(Error::Overflow("hyperplane restriction"))
                })
                .collect()
        })
        .collect()
}
