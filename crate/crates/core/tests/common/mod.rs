//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's linear algebra or enumeration code.
#![allow(dead_code)]

use num_rational::Rational64;
use num_traits::Zero;

/// Rank of 0/1 or small integer column vectors by rational Gaussian elimination.
pub fn rank(columns: &[Vec<i64>]) -> usize {
    let Some(dim) = columns.first().map(Vec::len) else {
        return 0;
    };
    // rows of the transpose
    let mut a: Vec<Vec<Rational64>> = columns
        .iter()
        .map(|c| c.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col] / a[r][col];
                for c in col..dim {
                    let v = a[r][c];
                    a[i][c] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn vector(bits: u64, n: usize) -> Vec<i64> {
    (0..n).map(|i| (bits >> i & 1) as i64).collect()
}

/// Hyperplanes of `A_n` as bitmasks in binary order.
pub fn hyperplanes(n: usize) -> Vec<u64> {
    (1..1u64 << n).collect()
}

fn rank_of_subset(hs: &[u64], subset: u32, n: usize) -> usize {
    let cols: Vec<Vec<i64>> = (0..hs.len())
        .filter(|&i| subset >> i & 1 == 1)
        .map(|i| vector(hs[i], n))
        .collect();
    rank(&cols)
}

/// `χ(A_n; t)` coefficients, ascending, by summing over all subsets.
pub fn whitney(n: usize) -> Vec<i64> {
    let hs = hyperplanes(n);
    let mut coeffs = vec![0i64; n + 1];
    for s in 0u32..1 << hs.len() {
        let r = rank_of_subset(&hs, s, n);
        let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
        coeffs[n - r] += sign;
    }
    coeffs
}

/// Points of `F_q^n` on no hyperplane, by visiting all `q^n` points.
pub fn points_off(n: usize, q: u64) -> u64 {
    let mut count = 0;
    let total = q.pow(n as u32);
    'point: for code in 0..total {
        let mut x = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            x.push(c % q);
            c /= q;
        }
        for h in 1..1u64 << n {
            let s: u64 = (0..n).filter(|&i| h >> i & 1 == 1).map(|i| x[i]).sum();
            if s % q == 0 {
                continue 'point;
            }
        }
        count += 1;
    }
    count
}

/// Broken circuits of `A_n` as bitmasks over the hyperplane indices.
pub fn broken_circuits(n: usize) -> Vec<u32> {
    let hs = hyperplanes(n);
    let m = hs.len();
    let mut out = Vec::new();
    for s in 1u32..1 << m {
        let size = s.count_ones() as usize;
        if rank_of_subset(&hs, s, n) == size {
            continue;
        }
        let minimal = (0..m)
            .filter(|&i| s >> i & 1 == 1)
            .all(|i| rank_of_subset(&hs, s & !(1 << i), n) == size - 1);
        if minimal {
            let top = 31 - s.leading_zeros();
            out.push(s & !(1 << top));
        }
    }
    out
}

/// NBC set counts by size, from the definition.
pub fn nbc_counts(n: usize) -> Vec<u64> {
    let m = (1usize << n) - 1;
    let broken = broken_circuits(n);
    let mut counts = vec![0u64; n + 1];
    for s in 0u32..1 << m {
        if broken.iter().all(|&b| s & b != b) {
            let size = s.count_ones() as usize;
            assert!(size <= n, "NBC set larger than the rank");
            counts[size] += 1;
        }
    }
    counts
}

/// Sets of hyperplanes (as sorted mask lists) that are NBC, from the definition.
pub fn nbc_sets(n: usize) -> Vec<Vec<u64>> {
    let hs = hyperplanes(n);
    let broken = broken_circuits(n);
    (0u32..1 << hs.len())
        .filter(|&s| broken.iter().all(|&b| s & b != b))
        .map(|s| (0..hs.len()).filter(|&i| s >> i & 1 == 1).map(|i| hs[i]).collect())
        .collect()
}

/// Pairwise intersecting triples of distinct nonempty subsets of `[n]`.
pub fn intersecting_triples(n: usize) -> u64 {
    let top = 1u64 << n;
    let mut count = 0;
    for a in 1..top {
        for b in a + 1..top {
            for c in b + 1..top {
                if a & b != 0 && a & c != 0 && b & c != 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

/// All 4-sets `a < b < c < d` of nonempty subsets of `[n]`.
pub fn four_sets(n: usize) -> Vec<[u64; 4]> {
    let top = 1u64 << n;
    let mut out = Vec::new();
    for a in 1..top {
        for b in a + 1..top {
            for c in b + 1..top {
                for d in c + 1..top {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// `χ_a + χ_b + χ_c = 2χ_d` with `d` the maximum.
pub fn is_tetrahedron(f: &[u64; 4]) -> bool {
    let n = 64 - f[3].leading_zeros() as usize;
    (0..n).all(|x| {
        let s: u64 = f[..3].iter().map(|&m| m >> x & 1).sum();
        s == 2 * (f[3] >> x & 1)
    })
}

/// Some pairing `{p, q} {r, s}` has `χ_p + χ_q = χ_r + χ_s` and a common
/// element shared by all four sets.
pub fn is_rectangle(f: &[u64; 4]) -> bool {
    let pairings = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];
    let n = 64 - f[3].leading_zeros() as usize;
    let all = f.iter().fold(u64::MAX, |acc, &m| acc & m);
    all != 0
        && pairings.iter().any(|(p, q)| {
            (0..n).all(|x| {
                (f[p[0]] >> x & 1) + (f[p[1]] >> x & 1) == (f[q[0]] >> x & 1) + (f[q[1]] >> x & 1)
            })
        })
}
