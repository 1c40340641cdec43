use fmkernel::cech::*;
use fmkernel::linalg::binomial;

#[test]
fn exact_and_equivariant() {
    for k in 1..=6 {
        for v in [Variant::Check, Variant::Hat] {
            let c = cech_complex(k, v).unwrap();
            assert!(c.squares_to_zero());
            assert!(c.is_exact().unwrap(), "k={k} {v:?}");
            assert!(c.is_equivariant(), "k={k} {v:?}");
            for (i, d) in c.dims().iter().enumerate() {
                assert_eq!(*d as u64, binomial(k as u64, i as u64));
            }
        }
    }
}

#[test]
fn hom_spaces_are_lines() {
    for k in 1..=6 {
        for i in 0..k {
            for v in [Variant::Check, Variant::Hat] {
                assert_eq!(hom_dimension(k, i, v).unwrap(), 1, "k={k} i={i} {v:?}");
            }
        }
    }
    assert!(hom_dimension(3, 3, Variant::Check).is_err());
}

#[test]
fn hat_dimensions_are_reversed_check_dimensions() {
    for k in 0..=6 {
        let a = cech_complex(k, Variant::Check).unwrap().dims();
        let mut b = cech_complex(k, Variant::Hat).unwrap().dims();
        b.reverse();
        assert_eq!(a, b);
    }
}

#[test]
fn cokernels() {
    assert_eq!(truncation_cokernel(1, 1).unwrap().dimension, 1);
    assert_eq!(truncation_cokernel(2, 1).unwrap().dimension, 1);
    let t = truncation_cokernel(3, 1).unwrap();
    assert_eq!((t.term_dimension, t.incoming_rank, t.dimension), (3, 2, 1));
    // by exactness the cokernel of d^{k-i-1} has dimension C(k-1, k-i)
    for k in 1..=6u64 {
        for i in 1..=k {
            assert_eq!(truncation_cokernel(k as usize, i as usize).unwrap().dimension as u64, binomial(k - 1, k - i));
        }
    }
    assert!(truncation_cokernel(2, 3).is_err());
}

#[test]
fn alternating_sum_vanishes() {
    let c = cech_complex(5, Variant::Check).unwrap();
    let s: i64 = c.dims().iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
    assert_eq!(s, 0);
}
