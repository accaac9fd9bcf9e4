//! Exact linear algebra over the rationals.
//!
//! Everything here is exact. Rank is computed by fraction-free (Bareiss)
//! elimination over big integers; the hot paths on 0/1 vectors use an
//! incremental echelon basis over `i64` with gcd normalisation and fall back
//! to the big-integer route if an entry ever overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::mask::{common_dimension, SubsetMask};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(ExactMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| BigRational::from_integer(x.into())));
        }
        Self::new(rows.len(), cols, entries)
    }

    /// Builds a matrix whose columns are the given integer vectors.
    pub fn from_integer_columns(dim: usize, columns: &[Vec<i64>]) -> Result<Self> {
        let mut m = Self::zeros(dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(x.into()));
            }
        }
        Ok(m)
    }

    /// Columns are the characteristic vectors of the masks.
    pub fn from_masks(masks: &[SubsetMask]) -> Result<Self> {
        let dim = common_dimension(masks)?.unwrap_or(0);
        let cols: Vec<Vec<i64>> = masks.iter().map(|m| m.to_vector()).collect();
        Self::from_integer_columns(dim, &cols)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: BigRational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn column(&self, col: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out.set(i, c, self.get(r, c).clone());
            }
        }
        out
    }

    /// Entries as integers, if every entry is integral.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| {
                        let x = self.get(r, c);
                        x.is_integer().then(|| x.to_integer())
                    })
                    .collect()
            })
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.integral_rows())
    }

    /// Rows scaled by the lcm of their denominators; the row space is unchanged.
    fn integral_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = &self.entries[r * self.cols..(r + 1) * self.cols];
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect()
            })
            .collect()
    }

    /// Scales `row` so the pivot becomes 1 and clears the rest of `col`.
    ///
    /// Row operations only, so the column matroid is unchanged.
    pub fn pivot(&self, row: usize, col: usize) -> Result<ExactMatrix> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::InvalidInput(format!(
                "pivot position ({row}, {col}) outside {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let p = self.get(row, col).clone();
        if p.is_zero() {
            return Err(Error::ZeroPivot { row, col });
        }
        let mut out = self.clone();
        for c in 0..self.cols {
            let v = out.get(row, c) / &p;
            out.set(row, c, v);
        }
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let factor = out.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                let v = out.get(r, c) - &factor * out.get(row, c);
                out.set(r, c, v);
            }
        }
        Ok(out)
    }

    /// Solves `self * x = rhs` for a square nonsingular matrix.
    ///
    /// Forward elimination is fraction-free; only back substitution touches
    /// rationals.
    pub fn solve(&self, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
        let n = self.rows;
        if self.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.cols,
            });
        }
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut aug = ExactMatrix::zeros(n, n + 1);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n, rhs[r].clone());
        }
        let mut a = aug.integral_rows();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Err(Error::InvalidInput("singular system".into()));
            };
            a.swap(k, p);
            for i in k + 1..n {
                for j in k + 1..=n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut x = vec![BigRational::zero(); n];
        for k in (0..n).rev() {
            let mut acc = BigRational::from_integer(a[k][n].clone());
            for j in k + 1..n {
                acc -= BigRational::from_integer(a[k][j].clone()) * &x[j];
            }
            x[k] = acc / BigRational::from_integer(a[k][k].clone());
        }
        Ok(x)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of an integer matrix by Bareiss elimination.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &a[i][j] * &a[rank][col] - &a[i][col] * &a[rank][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division not exact");
                a[i][j] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank of an integer matrix over `F_p`. Used as an independent cross-check.
pub fn rank_mod_p(rows: &[Vec<i64>], p: u64) -> usize {
    let p = p as i128;
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(p)).collect())
        .collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = mod_inverse(a[rank][col], p);
        for c in col..ncols {
            a[rank][c] = a[rank][c] * inv % p;
        }
        for r in 0..nrows {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for c in col..ncols {
                    a[r][c] = (a[r][c] - f * a[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: i128, p: i128) -> i128 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i128, 1i128, p, a);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p)
}

/// Incremental row-echelon basis of integer vectors.
///
/// Basis vectors are kept primitive and each one is zero at the pivot
/// positions of the vectors inserted before it, so reducing a candidate in
/// insertion order is enough to decide span membership.
#[derive(Clone, Debug)]
pub struct IntEchelon {
    dim: usize,
    basis: Vec<(usize, Vec<i64>)>,
}

impl IntEchelon {
    pub fn new(dim: usize) -> Self {
        IntEchelon {
            dim,
            basis: Vec::with_capacity(dim),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut v = v.to_vec();
        for (p, b) in &self.basis {
            let vp = v[*p];
            if vp == 0 {
                continue;
            }
            let bp = b[*p];
            let g = bp.gcd(&vp);
            let (mv, mb) = (bp / g, vp / g);
            for (x, &y) in v.iter_mut().zip(b) {
                *x = x
                    .checked_mul(mv)
                    .and_then(|l| y.checked_mul(mb).and_then(|r| l.checked_sub(r)))
                    .ok_or(Error::Overflow("echelon reduction"))?;
            }
            make_primitive(&mut v);
        }
        Ok(v)
    }

    /// True if `v` lies in the span of the basis.
    pub fn contains(&self, v: &[i64]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(|&x| x == 0))
    }

    /// Adds `v`; returns false (and leaves the basis alone) if it was dependent.
    pub fn insert(&mut self, v: &[i64]) -> Result<bool> {
        let r = self.reduce(v)?;
        match r.iter().position(|&x| x != 0) {
            None => Ok(false),
            Some(p) => {
                self.basis.push((p, r));
                Ok(true)
            }
        }
    }

    pub fn contains_mask(&self, bits: u64) -> Result<bool> {
        self.contains(&bits_to_vector(bits, self.dim))
    }

    pub fn insert_mask(&mut self, bits: u64) -> Result<bool> {
        self.insert(&bits_to_vector(bits, self.dim))
    }
}

fn make_primitive(v: &mut [i64]) {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

pub(crate) fn bits_to_vector(bits: u64, dim: usize) -> Vec<i64> {
    (0..dim).map(|i| ((bits >> i) & 1) as i64).collect()
}

/// Rank of a set of integer column vectors of length `dim`.
pub fn integer_rank(dim: usize, columns: &[Vec<i64>]) -> Result<usize> {
    let mut e = IntEchelon::new(dim);
    let fast = columns.iter().try_for_each(|c| e.insert(c).map(|_| ()));
    match fast {
        Ok(()) => Ok(e.rank()),
        Err(Error::Overflow(_)) => {
            let rows: Vec<Vec<BigInt>> = columns
                .iter()
                .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            // rank of the transpose is the same
            Ok(bareiss_rank(rows))
        }
        Err(e) => Err(e),
    }
}

/// Rank of a set of subset masks (their 0/1 characteristic vectors).
pub fn rank(columns: &[SubsetMask]) -> Result<usize> {
    let Some(dim) = common_dimension(columns)? else {
        return Ok(0);
    };
    let cols: Vec<Vec<i64>> = columns.iter().map(|m| m.to_vector()).collect();
    integer_rank(dim, &cols)
}

pub fn is_independent(columns: &[SubsetMask]) -> Result<bool> {
    Ok(rank(columns)? == columns.len())
}

fn basis_of(s: &[SubsetMask], dim: usize) -> Result<IntEchelon> {
    let mut e = IntEchelon::new(dim);
    for m in s {
        e.insert_mask(m.bits())?;
    }
    Ok(e)
}

/// All members of `universe` lying in the span of `s`, in universe order.
pub fn closure(s: &[SubsetMask], universe: &[SubsetMask]) -> Result<Vec<SubsetMask>> {
    let mut all = s.to_vec();
    all.extend_from_slice(universe);
    let Some(dim) = common_dimension(&all)? else {
        return Ok(Vec::new());
    };
    if let Some(m) = s.iter().find(|m| !universe.contains(m)) {
        return Err(Error::InvalidInput(format!("{m} is not in the universe")));
    }
    let basis = basis_of(s, dim)?;
    let mut out = Vec::new();
    for &h in universe {
        if basis.contains_mask(h.bits())? {
            out.push(h);
        }
    }
    Ok(out)
}

/// The unique circuit in `t ∪ {e}` through `e`, for independent `t`.
///
/// Returned in binary order, `e` included.
pub fn fundamental_circuit(t: &[SubsetMask], e: SubsetMask) -> Result<Vec<SubsetMask>> {
    let mut all = t.to_vec();
    all.push(e);
    let dim = common_dimension(&all)?.unwrap_or(0);
    if t.contains(&e) {
        return Err(Error::InvalidInput(format!("{e} already belongs to the set")));
    }
    let basis = basis_of(t, dim)?;
    if basis.rank() != t.len() {
        return Err(Error::InvalidInput("set is not independent".into()));
    }
    if !basis.contains_mask(e.bits())? {
        return Err(Error::InvalidInput(format!("{e} is not in the closure")));
    }
    // for independent t, x is in the support of e's expansion iff dropping x
    // loses e from the span
    let mut circuit = vec![e];
    for (idx, &x) in t.iter().enumerate() {
        let rest: Vec<SubsetMask> = t
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != idx)
            .map(|(_, &m)| m)
            .collect();
        if !basis_of(&rest, dim)?.contains_mask(e.bits())? {
            circuit.push(x);
        }
    }
    circuit.sort();
    Ok(circuit)
}

/// True if `set` is a circuit: dependent, with every proper subset independent.
pub fn is_circuit(set: &[SubsetMask]) -> Result<bool> {
    if set.is_empty() || rank(set)? != set.len() - 1 {
        return Ok(false);
    }
    for skip in 0..set.len() {
        let rest: Vec<SubsetMask> = set
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &m)| m)
            .collect();
        if rank(&rest)? != rest.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Converts a rational to `i64` when it is an integer that fits.
pub fn rational_to_i64(x: &BigRational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Sign-normalised primitive form: gcd 1, first nonzero entry positive.
pub(crate) fn normalize_direction(v: &mut [i64]) -> bool {
    make_primitive(v);
    match v.iter().find(|&&x| x != 0) {
        None => false,
        Some(&first) => {
            if first < 0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            true
        }
    }
}
