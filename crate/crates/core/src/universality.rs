//! Embedding the column matroid of an integer matrix as a minor of a
//! resonance matroid, with a pivot certificate.
//!
//! Every column `a_i` is split into level sets `a_i = Σ χ(P_j) − Σ χ(N_k)`.
//! Fresh coordinates then turn each `χ(P_j)`, `χ(N_k)` into a 0/1 vector of
//! `R`, and contracting `R` leaves the 0/1 vectors `v_i` representing `a_i`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{integer_rank, rational_to_i64, ExactMatrix};

/// Level-set decomposition of an integer vector; row indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnDecomposition {
    pub positive: Vec<Vec<usize>>,
    pub negative: Vec<Vec<usize>>,
}

impl ColumnDecomposition {
    pub fn m_plus(&self) -> usize {
        self.positive.len()
    }

    pub fn m_minus(&self) -> usize {
        self.negative.len()
    }

    /// `Σ χ(P_j) − Σ χ(N_k)` in dimension `dim`.
    pub fn reconstruct(&self, dim: usize) -> Vec<i64> {
        let mut out = vec![0i64; dim];
        for p in &self.positive {
            for &row in p {
                out[row - 1] += 1;
            }
        }
        for n in &self.negative {
            for &row in n {
                out[row - 1] -= 1;
            }
        }
        out
    }
}

/// `P_j = {rows with a ≥ j}`, `N_k = {rows with a ≤ −k}`.
pub fn decompose_column(a: &[i64]) -> ColumnDecomposition {
    let level = |pred: &dyn Fn(i64) -> bool| -> Vec<usize> {
        a.iter()
            .enumerate()
            .filter(|(_, &x)| pred(x))
            .map(|(row, _)| row + 1)
            .collect()
    };
    let top = a.iter().copied().max().unwrap_or(0).max(0);
    let bottom = a.iter().copied().min().unwrap_or(0).min(0);
    ColumnDecomposition {
        positive: (1..=top).map(|j| level(&|x| x >= j)).collect(),
        negative: (1..=-bottom).map(|k| level(&|x| x <= -k)).collect(),
    }
}

/// Name of a coordinate of `Q^N`; `col`, `j`, `k` are 1-based.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Base(usize),
    Minus { col: usize, k: usize },
    Plus { col: usize, j: usize },
    PlusPlus { col: usize, j: usize },
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Coord::Base(i) => write!(f, "e{i}"),
            Coord::Minus { col, k } => write!(f, "e{k}^{col},-"),
            Coord::Plus { col, j } => write!(f, "e{j}^{col},+"),
            Coord::PlusPlus { col, j } => write!(f, "e{j}^{col},++"),
        }
    }
}

impl std::str::FromStr for Coord {
    type Err = Error;

    /// Inverse of `Display`: `e3`, `e1^2,-`, `e1^2,+`, `e1^2,++`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad coordinate label {s:?}"));
        let rest = s.strip_prefix('e').ok_or_else(bad)?;
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let Some((idx, tail)) = rest.split_once('^') else {
            return Ok(Coord::Base(num(rest)?));
        };
        let (col, sign) = tail.split_once(',').ok_or_else(bad)?;
        let (idx, col) = (num(idx)?, num(col)?);
        match sign {
            "-" => Ok(Coord::Minus { col, k: idx }),
            "+" => Ok(Coord::Plus { col, j: idx }),
            "++" => Ok(Coord::PlusPlus { col, j: idx }),
            _ => Err(bad()),
        }
    }
}

/// A 0/1 vector of `R` together with the coordinate it owns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RVector {
    pub label: Coord,
    pub entries: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub r: usize,
    pub decompositions: Vec<ColumnDecomposition>,
    /// `layout[c]` names coordinate `c` of `Q^N`.
    pub layout: Vec<Coord>,
    pub v: Vec<Vec<u8>>,
    /// Grouped per input column: `r^{i,−}_*`, `r^{i,+}_*`, `r^{i,++}_*`.
    pub r_vectors: Vec<RVector>,
}

/// Which vector a column of the assembled matrix holds.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ColumnRef {
    V(usize),
    R(usize),
}

impl Embedding {
    /// Ambient dimension `N`.
    pub fn dim(&self) -> usize {
        self.layout.len()
    }

    pub fn columns(&self) -> usize {
        self.v.len()
    }

    fn coord_index(&self, c: Coord) -> Option<usize> {
        self.layout.iter().position(|&x| x == c)
    }

    /// Columns in the order `v_1, r^{1,−}_*, r^{1,+}_*, r^{1,++}_*, v_2, ...`.
    pub fn column_order(&self) -> Vec<ColumnRef> {
        let mut out = Vec::with_capacity(self.v.len() + self.r_vectors.len());
        for i in 1..=self.v.len() {
            out.push(ColumnRef::V(i - 1));
            out.extend(
                self.r_vectors
                    .iter()
                    .enumerate()
                    .filter(|(_, rv)| owner(rv.label) == i)
                    .map(|(idx, _)| ColumnRef::R(idx)),
            );
        }
        out
    }

    fn vector(&self, c: ColumnRef) -> &[u8] {
        match c {
            ColumnRef::V(i) => &self.v[i],
            ColumnRef::R(i) => &self.r_vectors[i].entries,
        }
    }

    /// The `N × |V ∪ R|` matrix in [`Embedding::column_order`].
    pub fn assemble(&self) -> ExactMatrix {
        let order = self.column_order();
        let cols: Vec<Vec<i64>> = order
            .iter()
            .map(|&c| self.vector(c).iter().map(|&x| x as i64).collect())
            .collect();
        ExactMatrix::from_integer_columns(self.dim(), &cols)
            .expect("embedding vectors have length N")
    }

    /// Checks the 0/1, nonzero, length and distinctness conditions.
    pub fn check_vectors(&self) -> Result<()> {
        let n = self.dim();
        let all: Vec<&[u8]> = self
            .v
            .iter()
            .map(|x| x.as_slice())
            .chain(self.r_vectors.iter().map(|rv| rv.entries.as_slice()))
            .collect();
        let mut seen = HashSet::new();
        for vec in all {
            if vec.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: vec.len() });
            }
            if vec.iter().any(|&x| x > 1) || vec.iter().all(|&x| x == 0) {
                return Err(Error::Invariant("vector is not a nonzero 0/1 vector".into()));
            }
            if !seen.insert(vec) {
                return Err(Error::Invariant("vectors of V ∪ R are not distinct".into()));
            }
        }
        Ok(())
    }
}

fn owner(c: Coord) -> usize {
    match c {
        Coord::Base(_) => 0,
        Coord::Minus { col, .. } | Coord::Plus { col, .. } | Coord::PlusPlus { col, .. } => col,
    }
}

fn shape(a: &[Vec<i64>]) -> Result<(usize, usize)> {
    let r = a.len();
    let n = a.first().map_or(0, |row| row.len());
    if r == 0 || n == 0 {
        return Err(Error::InvalidInput("matrix must be nonempty".into()));
    }
    if let Some(bad) = a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
    }
    Ok((r, n))
}

fn column_of(a: &[Vec<i64>], j: usize) -> Vec<i64> {
    a.iter().map(|row| row[j]).collect()
}

/// Builds the embedding of the `r × n` integer matrix given by its rows.
pub fn embed(a: &[Vec<i64>]) -> Result<Embedding> {
    let (r, n) = shape(a)?;
    let decompositions: Vec<ColumnDecomposition> =
        (0..n).map(|j| decompose_column(&column_of(a, j))).collect();
    if let Some(j) = decompositions
        .iter()
        .position(|d| d.positive.is_empty() && d.negative.is_empty())
    {
        return Err(Error::InvalidInput(format!(
            "column {} is zero; loops are not supported",
            j + 1
        )));
    }

    let mut layout: Vec<Coord> = (1..=r).map(Coord::Base).collect();
    for (i, d) in decompositions.iter().enumerate() {
        let col = i + 1;
        layout.extend((1..=d.m_minus()).map(|k| Coord::Minus { col, k }));
        layout.extend((1..=d.m_plus()).map(|j| Coord::Plus { col, j }));
        layout.extend((1..=d.m_plus()).map(|j| Coord::PlusPlus { col, j }));
    }
    let big_n = layout.len();
    let index = |c: Coord| layout.iter().position(|&x| x == c).expect("coordinate in layout");
    let unit = |c: Coord| {
        let mut out = vec![0u8; big_n];
        out[index(c)] = 1;
        out
    };
    let add_set = |v: &mut Vec<u8>, rows: &[usize]| {
        for &row in rows {
            v[row - 1] = 1;
        }
    };

    let mut v = Vec::with_capacity(n);
    let mut r_vectors = Vec::new();
    for (i, d) in decompositions.iter().enumerate() {
        let col = i + 1;
        let mut vi = vec![0u8; big_n];
        for j in 1..=d.m_plus() {
            vi[index(Coord::PlusPlus { col, j })] = 1;
        }
        for k in 1..=d.m_minus() {
            vi[index(Coord::Minus { col, k })] = 1;
        }
        v.push(vi);

        for (k, set) in d.negative.iter().enumerate() {
            let label = Coord::Minus { col, k: k + 1 };
            let mut entries = unit(label);
            add_set(&mut entries, set);
            r_vectors.push(RVector { label, entries });
        }
        for (j, set) in d.positive.iter().enumerate() {
            let label = Coord::Plus { col, j: j + 1 };
            let mut entries = unit(label);
            add_set(&mut entries, set);
            r_vectors.push(RVector { label, entries });
        }
        for j in 1..=d.m_plus() {
            let label = Coord::PlusPlus { col, j };
            let mut entries = unit(label);
            entries[index(Coord::Plus { col, j })] = 1;
            r_vectors.push(RVector { label, entries });
        }
    }
    let e = Embedding { r, decompositions, layout, v, r_vectors };
    e.check_vectors()?;
    Ok(e)
}

/// A pivot at `(row, col)` of the assembled matrix (0-based).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub label: Coord,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub verified: bool,
    pub pivots: Vec<Pivot>,
    /// The assembled matrix after all pivots.
    pub reduced: ExactMatrix,
}

/// Runs the pivot sequence and compares the surviving block with `a`.
///
/// For each input column: pivot on `(e^{i,−}_k, r^{i,−}_k)` for all `k`,
/// then on `(e^{i,+}_j, r^{i,+}_j)` and `(e^{i,++}_j, r^{i,++}_j)` for each `j`.
pub fn verify_embedding(e: &Embedding, a: &[Vec<i64>]) -> Result<Certificate> {
    let (r, n) = shape(a)?;
    if e.r != r || e.columns() != n {
        return Err(Error::InvalidInput(format!(
            "embedding is for a {}x{} matrix, got {r}x{n}",
            e.r,
            e.columns()
        )));
    }
    let order = e.column_order();
    let mut m = e.assemble();
    let mut pivots = Vec::with_capacity(e.r_vectors.len());
    for i in 1..=n {
        let d = &e.decompositions[i - 1];
        let mut labels: Vec<Coord> = (1..=d.m_minus())
            .map(|k| Coord::Minus { col: i, k })
            .collect();
        for j in 1..=d.m_plus() {
            labels.push(Coord::Plus { col: i, j });
            labels.push(Coord::PlusPlus { col: i, j });
        }
        for label in labels {
            let row = e
                .coord_index(label)
                .ok_or_else(|| Error::Invariant(format!("coordinate {label} missing")))?;
            let ridx = e
                .r_vectors
                .iter()
                .position(|rv| rv.label == label)
                .ok_or_else(|| Error::Invariant(format!("vector for {label} missing")))?;
            let col = order
                .iter()
                .position(|&c| c == ColumnRef::R(ridx))
                .expect("every R vector is assembled");
            m = m.pivot(row, col)?;
            pivots.push(Pivot { row, col, label });
        }
    }

    let units_ok = pivots.iter().all(|p| {
        (0..m.rows()).all(|row| {
            let want = if row == p.row { BigRational::one() } else { BigRational::zero() };
            *m.get(row, p.col) == want
        })
    });
    let block_ok = (0..n).all(|i| {
        let col = order
            .iter()
            .position(|&c| c == ColumnRef::V(i))
            .expect("every V vector is assembled");
        (0..r).all(|row| *m.get(row, col) == BigRational::from_integer(BigInt::from(a[row][i])))
    });
    Ok(Certificate { verified: units_ok && block_ok, pivots, reduced: m })
}

/// Checks `rank(S ∪ R) − rank(R) = rank_A(S)` for subsets `S` of the columns.
///
/// Exhaustive when `2^n ≤ budget`, otherwise `budget` random subsets drawn
/// from a seeded generator.
pub fn minor_matroid_check(e: &Embedding, a: &[Vec<i64>], budget: usize, seed: u64) -> Result<bool> {
    let (r, n) = shape(a)?;
    if e.columns() != n {
        return Err(Error::DimensionMismatch { expected: n, found: e.columns() });
    }
    if e.check_vectors().is_err() {
        return Ok(false);
    }
    let to_i64 = |v: &[u8]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
    let big_n = e.dim();
    let rs: Vec<Vec<i64>> = e.r_vectors.iter().map(|rv| to_i64(&rv.entries)).collect();
    let vs: Vec<Vec<i64>> = e.v.iter().map(|v| to_i64(v)).collect();
    let a_cols: Vec<Vec<i64>> = (0..n).map(|j| column_of(a, j)).collect();
    let rank_r = integer_rank(big_n, &rs)?;

    let subsets: Vec<Vec<usize>> = if n < 64 && (1u128 << n) <= budget as u128 {
        (0..1u64 << n)
            .map(|s| (0..n).filter(|&j| s >> j & 1 == 1).collect())
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..budget)
            .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
            .collect()
    };
    let checks = subsets
        .par_iter()
        .map(|s| {
            let mut big = rs.clone();
            big.extend(s.iter().map(|&j| vs[j].clone()));
            let small: Vec<Vec<i64>> = s.iter().map(|&j| a_cols[j].clone()).collect();
            Ok(integer_rank(big_n, &big)? - rank_r == integer_rank(r, &small)?)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(checks.into_iter().all(|ok| ok))
}

/// Parses `"r n"` followed by `r` rows of `n` entries (integers or `p/q`).
///
/// Lines starting with `#` are ignored. Rational columns are scaled by the
/// lcm of their denominators, which leaves the column matroid unchanged.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("missing \"r n\" header".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidInput(format!("bad header {header:?}")))?;
    let [r, n] = dims[..] else {
        return Err(Error::InvalidInput(format!("bad header {header:?}")));
    };
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(r);
    for line in lines {
        let row = line
            .split_whitespace()
            .map(parse_entry)
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(Error::InvalidInput(format!(
                "row {} has {} entries, expected {n}",
                rows.len() + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != r {
        return Err(Error::InvalidInput(format!("expected {r} rows, found {}", rows.len())));
    }
    let mut out = vec![vec![0i64; n]; r];
    for j in 0..n {
        let lcm = rows
            .iter()
            .fold(BigInt::one(), |acc, row| acc.lcm(row[j].denom()));
        for i in 0..r {
            let scaled = &rows[i][j] * BigRational::from_integer(lcm.clone());
            out[i][j] = rational_to_i64(&scaled)
                .ok_or(Error::Overflow("clearing denominators"))?;
        }
    }
    Ok(out)
}

fn parse_entry(token: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("bad matrix entry {token:?}"));
    let (p, q) = match token.split_once('/') {
        Some((p, q)) => (p, q),
        None => (token, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() || q.is_negative() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Vec<Vec<i64>> {
        vec![vec![1, -1], vec![-2, 0], vec![-1, -1]]
    }

    fn int_column(m: &ExactMatrix, col: usize) -> Vec<i64> {
        m.column(col).iter().map(|x| rational_to_i64(x).unwrap()).collect()
    }

    #[test]
    fn decomposition_examples() {
        let d = decompose_column(&[1, -2, -1]);
        assert_eq!(d.positive, vec![vec![1]]);
        assert_eq!(d.negative, vec![vec![2, 3], vec![2]]);
        let d = decompose_column(&[-1, 0, -1]);
        assert!(d.positive.is_empty());
        assert_eq!(d.negative, vec![vec![1, 3]]);
        let d = decompose_column(&[0, 0]);
        assert!(d.positive.is_empty() && d.negative.is_empty());
    }

    #[test]
    fn decomposition_reconstructs_grid() {
        for x in -10..=10 {
            for y in -10..=10 {
                for z in -10..=10 {
                    let a = [x, y, z];
                    assert_eq!(decompose_column(&a).reconstruct(3), a.to_vec());
                }
            }
        }
    }

    #[test]
    fn worked_example_matrices() {
        let e = embed(&example()).unwrap();
        assert_eq!(e.dim(), 8);
        let before = e.assemble();
        let expected_before = [
            [0, 0, 0, 1, 0, 0, 1],
            [0, 1, 1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0, 1],
            [1, 1, 0, 0, 0, 0, 0],
            [1, 0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 1, 0, 0],
            [1, 0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0, 1, 1],
        ];
        for (row, want) in expected_before.iter().enumerate() {
            for (col, &w) in want.iter().enumerate() {
                assert_eq!(rational_to_i64(before.get(row, col)), Some(w), "({row},{col})");
            }
        }
        let cert = verify_embedding(&e, &example()).unwrap();
        assert!(cert.verified);
        assert_eq!(int_column(&cert.reduced, 0), vec![1, -2, -1, 1, 1, -1, 1, 0]);
        assert_eq!(int_column(&cert.reduced, 5), vec![-1, 0, -1, 0, 0, 0, 0, 1]);
        assert_eq!(cert.pivots.len(), 5);
        assert!(minor_matroid_check(&e, &example(), 16, 0).unwrap());
    }

    #[test]
    fn small_shapes() {
        let id = vec![vec![1, 0], vec![0, 1]];
        let e = embed(&id).unwrap();
        assert_eq!((e.dim(), e.r_vectors.len()), (6, 4));
        assert!(verify_embedding(&e, &id).unwrap().verified);

        let one = vec![vec![1]];
        let e = embed(&one).unwrap();
        assert_eq!((e.dim(), e.v.len(), e.r_vectors.len()), (3, 1, 2));
        assert!(verify_embedding(&e, &one).unwrap().verified);
    }

    #[test]
    fn zero_column_rejected() {
        assert!(embed(&[vec![1, 0], vec![2, 0]]).is_err());
    }

    #[test]
    fn tampering_is_detected() {
        let a = example();
        let mut e = embed(&a).unwrap();
        // r^{1,-}_1 = χ{2,3} + e^{1,-}_1; drop row 3 from it
        e.r_vectors[0].entries[2] = 0;
        assert!(!verify_embedding(&e, &a).unwrap().verified);

        let mut e = embed(&a).unwrap();
        e.v[0] = e.r_vectors[0].entries.clone();
        assert!(!minor_matroid_check(&e, &a, 16, 0).unwrap());
    }

    #[test]
    fn coordinate_labels_round_trip() {
        let e = embed(&example()).unwrap();
        for c in &e.layout {
            assert_eq!(c.to_string().parse::<Coord>().unwrap(), *c);
        }
        assert!("f1".parse::<Coord>().is_err());
        assert!("e1^2,*".parse::<Coord>().is_err());
    }

    #[test]
    fn parse_formats() {
        let text = "# example\n3 2\n1 -1\n-2 0\n# mid\n-1 -1\n";
        assert_eq!(parse_matrix(text).unwrap(), example());
        let text = "2 2\n1/2 1\n1/3 -2\n";
        assert_eq!(parse_matrix(text).unwrap(), vec![vec![3, 1], vec![2, -2]]);
        assert!(parse_matrix("2 2\n1 2\n").is_err());
        assert!(parse_matrix("1 2\n1 x\n").is_err());
        assert!(parse_matrix("1 1\n1/0\n").is_err());
    }
}
