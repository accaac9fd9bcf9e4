mod common;

use num_bigint::{BigInt, BigUint};
use resonance::arrangement::{count_regions, default_primes, minor_bound};
use resonance::{
    charpoly_via_nbc, count_points_off, enumerate_chambers_bruteforce, finite_field_charpoly,
    region_count, whitney_charpoly, CharPoly, Guards,
};

fn ints(p: &CharPoly) -> Vec<i64> {
    p.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
}

#[test]
fn three_methods_agree_with_the_subset_oracle() {
    let g = Guards::default();
    for n in 1..=4 {
        let oracle = common::whitney(n);
        assert_eq!(ints(&whitney_charpoly(n, &g).unwrap()), oracle, "whitney n={n}");
        let ff = finite_field_charpoly(n, &default_primes(n), &g).unwrap();
        assert_eq!(ints(&ff), oracle, "finite field n={n}");
        assert_eq!(ints(&charpoly_via_nbc(n, &g).unwrap()), oracle, "nbc n={n}");
    }
}

#[test]
fn finite_field_and_nbc_agree_at_five() {
    let g = Guards::default();
    let ff = finite_field_charpoly(5, &default_primes(5), &g).unwrap();
    let nbc = charpoly_via_nbc(5, &g).unwrap();
    assert_eq!(ff, nbc);
    assert_eq!(region_count(&ff), BigUint::from(11292u32));
    ff.check_resonance_invariants().unwrap();
}

#[test]
fn point_counts_match_exhaustive_search() {
    for n in 1..=3 {
        for q in [5u64, 7, 11, 13] {
            assert_eq!(count_points_off(n, q).unwrap(), common::points_off(n, q) as u128, "n={n} q={q}");
        }
    }
    assert_eq!(count_points_off(4, 7).unwrap(), common::points_off(4, 7) as u128);
}

#[test]
fn interpolated_polynomial_predicts_other_primes() {
    let g = Guards::default();
    let p = finite_field_charpoly(4, &default_primes(4), &g).unwrap();
    for q in [31u64, 37, 101] {
        assert_eq!(p.eval(&BigInt::from(q)), BigInt::from(count_points_off(4, q).unwrap()));
    }
}

#[test]
fn primes_below_the_minor_bound_are_rejected() {
    // det of a 0/1 matrix in dimension 4 reaches 3
    assert_eq!(minor_bound(4), BigUint::from(3u32));
    let g = Guards::default();
    assert!(finite_field_charpoly(4, &[2, 3, 5, 7, 11], &g).is_err());
}

#[test]
fn chambers_match_zaslavsky() {
    let g = Guards::default();
    for n in 1..=4 {
        let oracle: i64 = common::whitney(n).iter().map(|c| c.abs()).sum();
        assert_eq!(enumerate_chambers_bruteforce(n, &g).unwrap(), BigUint::from(oracle as u64));
    }
}

#[test]
fn region_recursion_on_generic_planes() {
    // four generic planes through the origin of R^3 cut it into 14 regions
    let normals = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
    assert_eq!(count_regions(3, &normals).unwrap(), 14);
}

#[test]
fn guards_block_expensive_runs() {
    let g = Guards::default();
    assert!(matches!(whitney_charpoly(5, &g), Err(resonance::Error::GuardExceeded { .. })));
    assert!(matches!(charpoly_via_nbc(7, &g), Err(resonance::Error::GuardExceeded { .. })));
    assert!(matches!(enumerate_chambers_bruteforce(6, &g), Err(resonance::Error::GuardExceeded { .. })));
}
