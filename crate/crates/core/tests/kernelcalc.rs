use std::time::{Duration, Instant};

use fmkernel::diagcomb::{index_count, orbit_decompose, Side};
use fmkernel::fock::EulerPairing;
use fmkernel::kernelcalc::*;
use fmkernel::lambda::{lambda_series, GradedMultiplicity, OmegaTag};
use fmkernel::linalg::{qi, Matrix};

const POSITIVE: [(usize, usize); 5] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)];

const MIXED: [((usize, usize), (usize, usize)); 8] = [
    ((0, 3), (1, 2)),
    ((0, 4), (1, 3)),
    ((0, 5), (1, 4)),
    ((0, 5), (2, 3)),
    ((1, 4), (2, 3)),
    ((0, 6), (1, 5)),
    ((0, 6), (2, 4)),
    ((1, 5), (2, 4)),
];

#[test]
fn kernel_terms() {
    assert_eq!(build_kernel(0, 4).unwrap().sizes(), [1]);
    assert_eq!(build_kernel(1, 2).unwrap().sizes(), [3, 1]);
    let k = build_kernel(2, 3).unwrap();
    // μ ranges over all bijections, so ten J's times two orderings
    assert_eq!(k.sizes()[0], 20);
    for (i, s) in k.sizes().iter().enumerate() {
        assert_eq!(*s as u64, index_count(2, 3, i));
    }
    assert!(build_kernel(1, 0).is_err());
}

#[test]
fn kernel_differential_squares_to_zero() {
    for ell in 0..=3 {
        for n in 1..=5 {
            assert!(build_kernel(ell, n).unwrap().squares_to_zero(), "ell={ell} n={n}");
            assert!(adjoint_twist_check(ell, n).unwrap());
        }
    }
}

#[test]
fn cell_blocks_match_orbits() {
    for (ell, n) in [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3)] {
        for i in 0..=ell {
            for j in 0..=ell {
                let cell = convolve_cell(ell, n, i, j, 2).unwrap();
                assert_eq!(cell.blocks.len(), ell - i.max(j) + 1, "({ell},{n}) cell ({i},{j})");
                let orbits = orbit_decompose(ell, n, i, j).unwrap().blocks();
                for b in &cell.blocks {
                    assert_eq!(orbits[&b.k], b.summands.len());
                    for s in &b.summands {
                        let e = b.k as i64 - j as i64 - i64::from(s.split);
                        assert_eq!(s.shift, 2 * e);
                        assert_eq!(s.omega_exponent, -e);
                        assert_eq!(s.overlap, n + i + j - b.k);
                        assert_eq!(s.split, s.overlap == 0);
                    }
                }
            }
        }
    }
}

fn single_block(cell: &Cell, k: usize) -> GradedMultiplicity {
    let b = cell.blocks.iter().find(|b| b.k == k).unwrap();
    assert_eq!(b.summands.len(), 1);
    b.summands[0].multiplicity.clone()
}

#[test]
fn ell_one_fixtures() {
    // (00): identity support with Λ_2, diagonal with Λ_1·ω^{-1}[-1]
    let c = convolve_cell(1, 2, 0, 0, 1).unwrap();
    assert_eq!(c.blocks.len(), 2);
    assert_eq!(single_block(&c, 0), GradedMultiplicity::unit());
    assert_eq!(single_block(&c, 1), GradedMultiplicity::single(1, OmegaTag::Tagged(-1), 1));
    assert!(c.blocks[0].summands[0].entry.k1.is_empty());
    // (01): diagonal, Λ_2, no shift
    let c = convolve_cell(1, 2, 0, 1, 2).unwrap();
    assert_eq!(c.blocks.len(), 1);
    assert_eq!(c.blocks[0].summands[0].overlap, 2);
    assert_eq!(single_block(&c, 1), lambda_series(2, 2).unwrap());
    // (10): diagonal, Λ_2·ω^{-1}[-d]
    for d in 1..=3 {
        let c = convolve_cell(1, 2, 1, 0, d).unwrap();
        let s = &c.blocks[0].summands[0];
        assert_eq!((c.blocks.len(), s.overlap, s.shift, s.omega_exponent), (1, 2, d as i64, -1));
    }
    // (11): diagonal, Λ_3 on a surface
    let c = convolve_cell(1, 2, 1, 1, 2).unwrap();
    let want: Vec<(i64, OmegaTag, u64)> = vec![(0, OmegaTag::Tagged(0), 1), (2, OmegaTag::Tagged(-1), 1), (4, OmegaTag::Tagged(-2), 1)];
    assert_eq!(single_block(&c, 1).entries().collect::<Vec<_>>(), want);
}

#[test]
fn arrow_descriptors() {
    let s = Side::new(2, 3);
    let arrows = grid_arrows(s, s, 2).unwrap();
    for a in &arrows {
        let (fi, fj, fk) = a.from;
        let (ti, tj, tk) = a.to;
        if ti + 1 == fi {
            assert_eq!(fj, tj);
            assert_eq!(a.map == BlockMap::Zero, fk != tk);
        } else {
            assert_eq!((fi, fj + 1), (ti, tj));
            let want = if tk == fk {
                BlockMap::CechHat { k: fk }
            } else if tk == fk + 1 {
                BlockMap::Opaque
            } else {
                BlockMap::Zero
            };
            assert_eq!(a.map, want);
        }
    }
}

fn run(a: Side, b: Side, mode: DimMode, engine: Engine) -> CohomologyReport {
    let start = Instant::now();
    let r = compose(a, b, mode, engine).unwrap();
    assert!(start.elapsed() < Duration::from_secs(60));
    assert!(r.euler_check(), "{a:?} {b:?} {mode}");
    r
}

#[test]
fn curve_identity() {
    for (ell, n) in POSITIVE {
        let s = Side::new(ell, n);
        let r = run(s, s, DimMode::Curve, Engine::Concrete);
        assert_eq!(r.verdict, Verdict::Identity, "({ell},{n})");
        assert_eq!(r.entries.len(), 1);
        assert_eq!((r.entries[0].degree, r.entries[0].multiplicity), (0, 1));
        assert_eq!(r.exit_code(), 0);
    }
}

#[test]
fn surface_pattern() {
    for (ell, n) in POSITIVE {
        let s = Side::new(ell, n);
        let r = run(s, s, DimMode::Surface, Engine::Concrete);
        assert_eq!(r.verdict, Verdict::PFunctor(n));
        let got: Vec<(i64, Option<i64>, usize)> = r.entries.iter().map(|e| (e.degree, e.omega(2), e.multiplicity)).collect();
        let want: Vec<(i64, Option<i64>, usize)> = (0..n as i64).map(|r| (2 * r, Some(-r), 1)).collect();
        assert_eq!(got, want);
        let id = r.layout.identity_support().unwrap();
        assert!(r.entries.iter().all(|e| e.support.partition == r.layout.class_rep(&id)));
    }
}

#[test]
fn engines_agree() {
    for ell in 0..=3 {
        for n in 1..=5 - ell {
            for mode in [DimMode::Curve, DimMode::Surface] {
                let s = Side::new(ell, n);
                let r = run(s, s, mode, Engine::Both);
                assert!(r.provenance.iter().any(|p| p.contains("engines agree")), "({ell},{n}) {mode}");
                // flagged pairs that could cancel everything off the identity support
                let open = mode == DimMode::Surface && matches!((ell, n), (2, 1) | (3, 2));
                assert_eq!(matches!(r.verdict, Verdict::Inconsistent { .. }), open, "({ell},{n}) {mode}: {:?}", r.verdict);
            }
        }
    }
    for (a, b) in MIXED {
        let r = run(Side::new(a.0, a.1), Side::new(b.0, b.1), DimMode::Surface, Engine::Both);
        assert!(!matches!(r.verdict, Verdict::Inconsistent { .. }));
    }
}

#[test]
fn curve_orthogonality() {
    for (a, b) in MIXED {
        let r = orthogonality(Side::new(a.0, a.1), Side::new(b.0, b.1), DimMode::Curve, Engine::Concrete).unwrap();
        assert_eq!(r.verdict, Verdict::Zero, "{a:?} -> {b:?}");
        assert!(r.euler_check());
    }
    assert!(orthogonality(Side::new(1, 2), Side::new(0, 3), DimMode::Curve, Engine::Concrete).is_err());
}

#[test]
fn surface_mixed_is_not_zero() {
    for n in 2..=5 {
        let r = orthogonality(Side::new(0, n + 1), Side::new(1, n), DimMode::Surface, Engine::Both).unwrap();
        assert_eq!(r.verdict, Verdict::Nonzero);
        assert_eq!(r.entries.len(), 1);
        let e = &r.entries[0];
        assert_eq!((e.degree, e.omega(2), e.multiplicity), (2 * n as i64 - 1, Some(-(n as i64)), 1));
        assert!(!e.support.split);
        assert_eq!(r.exit_code(), 0);
    }
}

#[test]
fn failure_below_the_bound() {
    let s = Side::new(2, 2);
    let xdelta = Partition::from_blocks(vec![vec![0, 4, 5], vec![1, 2, 3]]);
    for mode in [DimMode::Curve, DimMode::Surface] {
        let r = run(s, s, mode, Engine::Both);
        let Verdict::Failure { witness } = &r.verdict else { panic!("{mode}: {:?}", r.verdict) };
        assert!(witness.iter().any(|w| w.support.partition == xdelta && w.support.split));
        assert_eq!(r.exit_code(), 2);
    }
}

#[test]
fn higher_dimension_ell_zero() {
    let s = Side::new(0, 3);
    let r = run(s, s, DimMode::Mult(3), Engine::Concrete);
    assert_eq!(r.verdict, Verdict::IdentityTensorLambda { n: 3, d: 3 });
    assert!(compose(s, s, DimMode::Mult(3), Engine::Symbolic).is_err());
}

#[test]
fn exact_assemblies() {
    assert!(exactsum_check(7, &[2, 2]).unwrap());
    assert!(exactsum_check(0, &[3]).unwrap());
    for seed in 0..100 {
        assert!(exactsum_check(seed, &[2, 3, 4]).unwrap(), "seed {seed}");
    }
}

#[test]
fn grothendieck_identities() {
    let p = EulerPairing::with_trivial_canonical_class(Matrix::from_i64(&[&[-1]])).unwrap();
    assert_eq!(euler_composition(2, &p, &[qi(1)], &[qi(1)]).unwrap(), qi(-2));
    let p = EulerPairing::with_trivial_canonical_class(Matrix::from_i64(&[&[2]])).unwrap();
    assert_eq!(euler_composition(3, &p, &[qi(1)], &[qi(1)]).unwrap(), qi(6));

    // two classes, ω swaps them
    let chi = Matrix::from_i64(&[&[1, 3], &[3, 5]]);
    let swap = Matrix::from_i64(&[&[0, 1], &[1, 0]]);
    let q = EulerPairing::new(chi, swap).unwrap();
    assert!(euler_composition(2, &q, &[qi(1), qi(0)], &[qi(1), qi(0)]).is_err());
    for n in 2..=4 {
        let e = [qi(1), qi(0)];
        let f = [qi(1), qi(0)];
        let twisted = q.twist(&f, -(n as i64)).unwrap();
        let want = -q.chi(&e, &twisted).unwrap();
        assert_eq!(euler_mixed(n, &q, &e, &f).unwrap(), want);
        let r = orthogonality(Side::new(0, n + 1), Side::new(1, n), DimMode::Surface, Engine::Symbolic).unwrap();
        assert_eq!(euler_of_report(&r, &q, &e, &f).unwrap(), Some(want));
    }
}
