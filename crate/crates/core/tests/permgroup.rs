use fmkernel::linalg::{factorial, qi};
use fmkernel::permgroup::rho::{invariant_surjection, is_equivariant};
use fmkernel::permgroup::*;

#[test]
fn class_sizes_add_up() {
    for m in 1..=8 {
        let total: u64 = conjugacy_classes(m).unwrap().iter().map(|(_, s)| s).sum();
        assert_eq!(total, factorial(m as u64));
    }
}

#[test]
fn standard_character_is_fixed_points_minus_one() {
    for m in 2..=7 {
        let chi = character_standard(m).unwrap();
        for (c, _) in conjugacy_classes(m).unwrap() {
            assert_eq!(*chi.value(&c), qi(c.fixed_points() as i64 - 1));
        }
    }
}

#[test]
fn matrix_model_traces_match_characters() {
    for m in 2..=4 {
        for d in 1..=2 {
            for q in 0..=(m - 1) * d {
                let rep = MatrixRep::new(m, d, q).unwrap();
                assert!(rep.satisfies_coxeter_relations());
                let chi = wedge_standard_character(m, d, q).unwrap();
                for (c, _) in conjugacy_classes(m).unwrap() {
                    assert_eq!(rep.trace(&c.representative()), *chi.value(&c), "m={m} d={d} q={q} {c:?}");
                }
            }
        }
    }
}

#[test]
fn graded_search_finds_the_reynolds_span() {
    for m in 2..=5 {
        for d in 1..=2 {
            for q in 0..=(m - 1) * d {
                let a = invariant_span(m, d, q);
                let b = invariant_span_graded(m, d, q).unwrap();
                assert_eq!(a.rows(), b.rows(), "m={m} d={d} q={q}");
                let want = invariant_dimension(&wedge_standard_character(m, d, q).unwrap()).unwrap();
                assert_eq!(b.rank() as u64, want);
            }
        }
    }
}

#[test]
fn restriction_is_full_rank_on_invariants() {
    for m in 2..=5 {
        for q in 0..=4 {
            let r = invariant_surjection(m, 2, q).unwrap();
            assert!(r.is_full_rank(), "m={m} q={q}: {r:?}");
        }
    }
}

#[test]
fn canonical_maps_are_equivariant() {
    for d in 1..=2 {
        for q in 0..=3 {
            for dir in [MapDirection::Inclusion, MapDirection::Surjection] {
                assert!(is_equivariant(&[1, 3], &[1, 2, 3], d, q, dir).unwrap());
                assert!(is_equivariant(&[2, 3, 4], &[1, 2, 3, 4], d, q, dir).unwrap());
            }
        }
    }
}

#[test]
fn graded_search_bound() {
    assert!(matches!(invariant_span_graded(17, 2, 2), Err(fmkernel::Error::Bound(_))));
}
