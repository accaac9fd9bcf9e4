//! Stirling numbers of the second kind and the Betti number formulas built
//! on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

/// Triangular table of `S(n, k)` for `0 <= k <= n <= cap`, built by the
/// recurrence `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(cap: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(cap + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=cap {
            let prev = &rows[n - 1];
            let mut row = vec![BigUint::zero(); n + 1];
            for k in 1..=n {
                let keep = if k < n { &prev[k] * k } else { BigUint::zero() };
                row[k] = keep + &prev[k - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn cap(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Option<BigUint> {
        let row = self.rows.get(n)?;
        Some(row.get(k).cloned().unwrap_or_default())
    }
}

const SHARED_CAP: usize = 64;

fn shared_table() -> &'static StirlingTable {
    static TABLE: OnceLock<StirlingTable> = OnceLock::new();
    TABLE.get_or_init(|| StirlingTable::new(SHARED_CAP))
}

/// `S(n, k)` via the recurrence.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    match shared_table().get(n, k) {
        Some(v) => v,
        None => StirlingTable::new(n).get(n, k).unwrap_or_default(),
    }
}

/// `S(n, k) = (1/k!) Σ_{i=0}^{k} (-1)^i C(k, i) (k - i)^n`, with the
/// division checked to be exact.
pub fn stirling2_formula(n: usize, k: usize) -> Result<BigUint> {
    let mut sum = BigInt::zero();
    let mut binom = BigInt::one();
    for i in 0..=k {
        let term = &binom * BigInt::from(k - i).pow(n as u32);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * (k - i) / (i + 1);
    }
    let (q, r) = sum.div_rem(&factorial(k));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Invariant(format!(
            "alternating sum for S({n}, {k}) is not divisible by {k}!"
        )));
    }
    Ok(q.magnitude().clone())
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, x| acc * x)
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_k c_k S(n+1, k)` for fixed Betti index `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct StirlingCombination {
    pub i: usize,
    pub coeffs: BTreeMap<usize, BigUint>,
}

impl StirlingCombination {
    pub fn new(i: usize, coeffs: BTreeMap<usize, BigUint>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        StirlingCombination { i, coeffs }
    }

    pub fn from_pairs(i: usize, pairs: &[(usize, u64)]) -> Self {
        Self::new(
            i,
            pairs.iter().map(|&(k, c)| (k, BigUint::from(c))).collect(),
        )
    }

    pub fn get(&self, k: usize) -> BigUint {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    /// The combination evaluated at `n`, i.e. `b_i(A_n)`.
    pub fn eval(&self, n: usize) -> BigUint {
        self.coeffs
            .iter()
            .map(|(&k, c)| c * stirling2(n + 1, k))
            .sum()
    }

    /// Checks the support range `i+1 <= k <= 2^i` and the upper bound
    /// `c_k <= C(2^i - 1, k - 1) (k - 1)! / i!`.
    pub fn check_bounds(&self) -> Result<()> {
        let top = 1usize << self.i;
        for (&k, c) in &self.coeffs {
            if self.i > 0 && (k < self.i + 1 || k > top) {
                return Err(Error::Invariant(format!(
                    "c_{{{},{k}}} outside the range {}..={top}",
                    self.i,
                    self.i + 1
                )));
            }
            if BigInt::from(c.clone()) > coefficient_bound(self.i, k) {
                return Err(Error::Invariant(format!(
                    "c_{{{},{k}}} = {c} exceeds its prototype bound",
                    self.i
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for StirlingCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for StirlingCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| format!("{c} S(n+1,{k})"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `floor(C(2^i - 1, k - 1) (k - 1)! / i!)`: the number of `(i, k)`
/// prototypes divided by `i!`.
pub fn coefficient_bound(i: usize, k: usize) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    let top = (1usize << i) - 1;
    BigInt::from(binomial(top, k - 1)) * factorial(k - 1) / factorial(i)
}

/// `b_2(A_n)` from both closed forms, which must agree.
pub fn b2_closed(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let via_stirling = BigUint::from(2u32) * stirling2(n + 1, 3) + BigUint::from(3u32) * stirling2(n + 1, 4);
    let e = n as u32;
    let numer = BigInt::from(4).pow(e) - BigInt::from(3).pow(e) - BigInt::from(2).pow(e) + 1;
    let via_powers = exact_quotient(numer, 2, "b_2 power form")?;
    if via_stirling != via_powers {
        return Err(Error::Invariant(format!(
            "b_2(A_{n}) closed forms disagree: {via_stirling} vs {via_powers}"
        )));
    }
    Ok(via_stirling)
}

/// Stirling coefficients of `b_3`, as `(k, c_{3,k})`.
pub const B3_COEFFS: [(usize, u64); 5] = [(4, 9), (5, 80), (6, 345), (7, 840), (8, 840)];
/// Stirling coefficients of `b_2`.
pub const B2_COEFFS: [(usize, u64); 2] = [(3, 2), (4, 3)];

/// `b_3(A_n)` from both closed forms, which must agree.
pub fn b3_closed(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let via_stirling = StirlingCombination::from_pairs(3, &B3_COEFFS).eval(n);
    let e = n as u32;
    let p = |b: i64| BigInt::from(b).pow(e);
    let numer = 4 * p(8) - 15 * p(6) + 15 * p(5) - 14 * p(4) + 18 * p(3) - 7 * p(2) - 1;
    let via_powers = exact_quotient(numer, 24, "b_3 power form")?;
    if via_stirling != via_powers {
        return Err(Error::Invariant(format!(
            "b_3(A_{n}) closed forms disagree: {via_stirling} vs {via_powers}"
        )));
    }
    Ok(via_stirling)
}

pub(crate) fn exact_quotient(numer: BigInt, denom: u64, what: &str) -> Result<BigUint> {
    let (q, r) = numer.div_rem(&BigInt::from(denom));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Invariant(format!(
            "{what}: {numer} is not a nonnegative multiple of {denom}"
        )));
    }
    Ok(q.magnitude().clone())
}

/// Recovers `c_{i,k}` from `b_i(A_1), ..., b_i(A_{2^i})` by solving
/// `Σ_k c_k S(n+1, k) = b_i(A_n)` exactly.
pub fn fit_stirling_coeffs(i: usize, values: &[BigUint]) -> Result<StirlingCombination> {
    if i >= 16 {
        return Err(Error::InvalidInput(format!("index i = {i} is too large")));
    }
    let size = 1usize << i;
    if values.len() != size {
        return Err(Error::InvalidInput(format!(
            "expected {size} values b_{i}(A_1..A_{size}), got {}",
            values.len()
        )));
    }
    let mut m = ExactMatrix::zeros(size, size);
    for row in 0..size {
        for col in 0..size {
            let s = BigInt::from(stirling2(row + 2, col + 1));
            m.set(row, col, BigRational::from_integer(s));
        }
    }
    let rhs: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(BigInt::from(v.clone())))
        .collect();
    let sol = m.solve(&rhs)?;
    let mut coeffs = BTreeMap::new();
    for (idx, c) in sol.into_iter().enumerate() {
        let k = idx + 1;
        if !c.is_integer() || c.is_negative() {
            return Err(Error::InvalidInput(format!(
                "c_{{{i},{k}}} = {c} is not a nonnegative integer"
            )));
        }
        if k <= i && !c.is_zero() {
            return Err(Error::InvalidInput(format!(
                "c_{{{i},{k}}} = {c} should vanish for k <= i"
            )));
        }
        coeffs.insert(k, c.to_integer().magnitude().clone());
    }
    Ok(StirlingCombination::new(i, coeffs))
}

/// `floor(2^{i n} / i!)`.
pub fn betti_upper_bound(i: usize, n: usize) -> BigUint {
    (BigUint::one() << (i * n)) / factorial(i).magnitude()
}

/// Exact test of the strict bound `b < 2^{i n} / i!`.
pub fn betti_bound_holds(i: usize, n: usize, b: &BigUint) -> bool {
    b * factorial(i).magnitude() < BigUint::one() << (i * n)
}

/// The chamber exponent bound and the summed Betti bounds behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionBound {
    /// `n^2 - n + 1`.
    pub exponent: usize,
    /// `Σ_{i=0}^{n} floor(2^{i n} / i!)`.
    pub summed_bounds: BigUint,
    /// Whether `summed_bounds < 2^exponent`.
    pub summation_suffices: bool,
}

impl RegionBound {
    /// `R < 2^exponent`.
    pub fn admits(&self, regions: &BigUint) -> bool {
        regions < &(BigUint::one() << self.exponent)
    }
}

/// `log2 R_n < n^2 - n + 1`, together with the bound summation.
///
/// Summing the per-index bounds only closes the argument from `n = 3` on;
/// at `n = 2` the summed bounds reach 13 > 8 and the bound has to be
/// checked against `R_2 = 6` directly.
pub fn region_log2_bound(n: usize) -> Result<RegionBound> {
    if n < 2 {
        return Err(Error::InvalidInput("bound requires n > 1".into()));
    }
    let exponent = n * n - n + 1;
    let summed_bounds: BigUint = (0..=n).map(|i| betti_upper_bound(i, n)).sum();
    let summation_suffices = summed_bounds < BigUint::one() << exponent;
    Ok(RegionBound {
        exponent,
        summed_bounds,
        summation_suffices,
    })
}
