use std::time::{Duration, Instant};

use fmkernel::lambda::*;
use fmkernel::linalg::binomial;
use fmkernel::permgroup::{character_standard, exterior_power_character};

#[test]
fn curve_series_is_unit() {
    for m in 2..=8 {
        assert_eq!(lambda_series(m, 1).unwrap(), GradedMultiplicity::unit(), "m={m}");
    }
}

#[test]
fn surface_series_pattern() {
    for m in 2..=8 {
        let start = Instant::now();
        let s = lambda_series(m, 2).unwrap();
        assert!(start.elapsed() < Duration::from_secs(1), "m={m} took {:?}", start.elapsed());
        assert_eq!(Some(s.clone()), expected_low_dimension(m, 2), "m={m}");
        assert!(s.is_palindromic(2 * (m as i64 - 1)));
    }
}

#[test]
fn surface_m3_frozen() {
    let s = lambda_series(3, 2).unwrap();
    let e: Vec<(i64, OmegaTag, u64)> = s.entries().collect();
    assert_eq!(e, vec![(0, OmegaTag::Tagged(0), 1), (2, OmegaTag::Tagged(-1), 1), (4, OmegaTag::Tagged(-2), 1)]);
}

#[test]
fn matrix_oracle_agrees() {
    for m in 2..=5 {
        for d in 1..=2 {
            assert_eq!(lambda_series_matrix(m, d).unwrap(), lambda_series(m, d).unwrap(), "m={m} d={d}");
        }
    }
    assert_eq!(lambda_series_matrix(2, 3).unwrap(), lambda_series(2, 3).unwrap());
}

#[test]
fn higher_dimension_m2_is_even_wedges() {
    for d in 3..=5usize {
        let s = lambda_series(2, d).unwrap();
        assert!(!s.is_tagged());
        for deg in 0..=d {
            let want = if deg % 2 == 0 { binomial(d as u64, deg as u64) } else { 0 };
            assert_eq!(s.at_degree(deg as i64), want, "d={d} degree={deg}");
        }
    }
    let s = lambda_series(2, 3).unwrap();
    assert_eq!(s.get(0, OmegaTag::Untagged { offset: 0 }), 1);
    assert_eq!(s.get(2, OmegaTag::Untagged { offset: 0 }), 3);
}

#[test]
fn exterior_powers_of_standard_are_irreducible() {
    for m in 2..=8 {
        let rho = character_standard(m).unwrap();
        for i in 1..m {
            let chi = exterior_power_character(&rho, i).unwrap();
            assert_eq!(chi.inner(&chi), fmkernel::linalg::qi(1), "m={m} i={i}");
        }
    }
}

#[test]
fn total_dimension_bound() {
    for m in 2..=6usize {
        for d in 1..=3usize {
            let t = lambda_series(m, d).unwrap().total();
            assert!(t < 1u64 << ((m - 1) * d));
        }
    }
}

#[test]
fn small_conventions() {
    assert_eq!(lambda_series(0, 2).unwrap(), GradedMultiplicity::unit());
    assert_eq!(lambda_series(1, 2).unwrap(), GradedMultiplicity::unit());
    assert!(lambda_series(3, 0).is_err());
}
