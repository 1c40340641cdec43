use fmkernel::diagcomb::*;

fn valid_pairs(max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for big in 1..=max {
        for ell in 0..big {
            out.push((ell, big - ell));
        }
    }
    out
}

#[test]
fn index_sizes_match_formula() {
    for (ell, n) in valid_pairs(6) {
        for i in 0..=ell {
            assert_eq!(enum_index(ell, n, i).unwrap().len() as u64, index_count(ell, n, i));
        }
    }
}

#[test]
fn differential_squares_vanish() {
    for ell in 0..=3 {
        for n in 1..=5 {
            assert!(differential_squares_to_zero(ell, n).unwrap(), "ell={ell} n={n}");
        }
    }
}

#[test]
fn canonical_orbits_match_brute_force() {
    for (ell, n) in valid_pairs(6) {
        for i in 0..=ell {
            for j in 0..=ell {
                let dec = orbit_decompose(ell, n, i, j).unwrap();
                let mut fast: Vec<(u64, u64)> = dec.orbits.iter().map(|o| (o.orbit_size, o.stabilizer_order)).collect();
                fast.sort_unstable();
                let side = Side::new(ell, n);
                // the full group action at n+ell = 6 is slow; sample the top degree
                if ell + n <= 5 || i + j >= 2 * ell.saturating_sub(1) {
                    assert_eq!(fast, brute_force_orbits(side, side, i, j).unwrap(), "ell={ell} n={n} i={i} j={j}");
                }
                assert!(dec.orbit_stabilizer_holds());
                assert!(dec.bijects_with_index(), "ell={ell} n={n} i={i} j={j}");
                assert_eq!(dec.total_pairs(), index_count(ell, n, i) * index_count(ell, n, j));
            }
        }
    }
}

#[test]
fn mixed_orbits_biject_with_index() {
    let cases = [((0, 3), (1, 2)), ((1, 4), (2, 3)), ((0, 5), (2, 3)), ((1, 2), (0, 3))];
    for ((l, n), (lp, np)) in cases {
        let a = Side::new(l, n);
        let b = Side::new(lp, np);
        for i in 0..=lp {
            for j in 0..=l {
                let dec = orbit_decompose_sides(a, b, i, j).unwrap();
                assert!(dec.orbit_stabilizer_holds());
                assert!(dec.bijects_with_index());
                let mut fast: Vec<(u64, u64)> = dec.orbits.iter().map(|o| (o.orbit_size, o.stabilizer_order)).collect();
                fast.sort_unstable();
                assert_eq!(fast, brute_force_orbits(a, b, i, j).unwrap());
            }
        }
    }
}

#[test]
fn epsilon_counts_smaller_entries() {
    assert_eq!(sign_epsilon(&[1, 3], 2).unwrap(), -1);
    assert_eq!(sign_epsilon(&[1, 3], 4).unwrap(), 1);
    assert_eq!(sign_epsilon(&[], 1).unwrap(), 1);
    assert!(sign_epsilon(&[2], 2).is_err());
}

#[test]
fn composition_of_diagonal_labels() {
    // ell = 1, n = 1: J1 = {1,2} and mu2(1) = 2 glue the outer coordinate of b to x
    let a = DiagLabel::new(1, 1, vec![1], vec![1, 2], vec![]).unwrap();
    let b = DiagLabel::new(1, 1, vec![], vec![1], vec![2]).unwrap();
    let c = compose_labels(&a, &b).unwrap();
    assert_eq!(c.pair.k1, vec![1]);
    assert_eq!(c.pair.k2, vec![1]);
    assert_eq!(c.overlap, 1);
}

#[test]
fn fixture_compositions() {
    let a = DiagLabel::new(1, 2, vec![], vec![1, 2], vec![3]).unwrap();
    let b = DiagLabel::new(1, 2, vec![], vec![1, 3], vec![2]).unwrap();
    let c = compose_labels(&a, &b).unwrap();
    assert_eq!((c.pair.k1.clone(), c.pair.k2.clone(), c.k, c.overlap), (vec![1], vec![1], 1, 1));

    let a = DiagLabel::new(2, 2, vec![], vec![1, 2], vec![3, 4]).unwrap();
    let b = DiagLabel::new(2, 2, vec![], vec![3, 4], vec![1, 2]).unwrap();
    assert_eq!(compose_labels(&a, &b).unwrap().overlap, 0);

    let top = DiagLabel::new(2, 3, vec![], vec![1, 2, 3], vec![4, 5]).unwrap();
    let c = compose_labels(&top, &top).unwrap();
    assert_eq!((c.k, c.overlap), (0, 3));
    assert!(c.pair.k1.is_empty() && c.pair.k2.is_empty());
    assert_eq!(sign_epsilon(&[1, 2, 4, 5], 6).unwrap(), 1);
}

#[test]
fn composition_is_middle_equivariant() {
    let la = enum_index(2, 2, 1).unwrap();
    let lb = enum_index(2, 2, 0).unwrap();
    let g = |y: usize| [0, 3, 1, 4, 2][y];
    for a in &la {
        for b in &lb {
            let c = compose_labels(a, b).unwrap();
            let cg = compose_labels(&a.act_middle(&g), &b.act_middle(&g)).unwrap();
            assert_eq!(c, cg);
        }
    }
}

#[test]
fn counts_up_to_ell_four() {
    for ell in 0..=4 {
        for n in 1..=5 {
            for i in 0..=ell {
                assert_eq!(enum_index(ell, n, i).unwrap().len() as u64, index_count(ell, n, i));
            }
        }
    }
}

#[test]
fn small_orbit_tables() {
    assert_eq!(orbit_decompose(1, 2, 0, 0).unwrap().orbits.len(), 2);
    let d = orbit_decompose(0, 4, 0, 0).unwrap();
    assert_eq!(d.orbits.len(), 1);
    assert_eq!(d.orbits[0].stabilizer_order, 24);
    assert_eq!(differential_arrows(1, 2, 0).unwrap().len(), 3);
}
