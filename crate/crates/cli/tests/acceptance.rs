//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use fmkernel::cech::{cech_complex, hom_dimension, Variant};
use fmkernel::diagcomb::{orbit_decompose, Side};
use fmkernel::fock::{commutator_check, EulerPairing, ModelCohomology};
use fmkernel::kernelcalc::{
    build_kernel, compose, euler_composition, euler_mixed, euler_of_report, orthogonality, CohomologyReport, DimMode,
    Engine, Partition, Verdict,
};
use fmkernel::lambda::{lambda_series, lambda_series_matrix, GradedMultiplicity, OmegaTag};
use fmkernel::linalg::{binomial, qi};
use fmkernel::permgroup::rho::invariant_surjection;
use fmkernel::permgroup::{character_standard, exterior_power_character};
use fmkernel::Matrix;
use fmkernel_cli::commands::{fixtures_ell1, mixed_pairs, par_map};
use serde_json::Value;

const POSITIVE: [(usize, usize); 5] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)];

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, what: &str, f: impl FnOnce() -> fmkernel::Result<CohomologyReport>) -> Result<CohomologyReport, String> {
    let start = Instant::now();
    let r = f().map_err(|e| format!("{what}: {e}"))?;
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}"))?;
    Ok(r)
}

/// `Σ_{r<m} ω^{-r}[-2r]`, written out here rather than taken from the engine.
fn surface_series(m: usize) -> GradedMultiplicity {
    let mut g = GradedMultiplicity::zero();
    for r in 0..m as i64 {
        g.insert(2 * r, OmegaTag::Tagged(-r), 1);
    }
    g
}

fn lambda_series_check() -> Check {
    for m in 2..=8 {
        let start = Instant::now();
        let curve = lambda_series(m, 1).map_err(|e| e.to_string())?;
        let surface = lambda_series(m, 2).map_err(|e| e.to_string())?;
        ensure(start.elapsed() < Duration::from_secs(1), || format!("m={m} took {:?}", start.elapsed()))?;
        ensure(curve == GradedMultiplicity::unit(), || format!("m={m} curve {curve:?}"))?;
        ensure(surface == surface_series(m), || format!("m={m} surface {surface:?}"))?;
        if m <= 5 {
            for d in [1, 2] {
                let oracle = lambda_series_matrix(m, d).map_err(|e| e.to_string())?;
                ensure(oracle == lambda_series(m, d).unwrap(), || format!("matrix oracle m={m} d={d}"))?;
            }
        }
    }
    Ok(())
}

fn irreducibility() -> Check {
    for m in 2..=8 {
        let chi = character_standard(m).map_err(|e| e.to_string())?;
        for i in 1..m {
            let w = exterior_power_character(&chi, i).map_err(|e| e.to_string())?;
            ensure(w.inner(&w) == qi(1), || format!("m={m} i={i}: {}", w.inner(&w)))?;
        }
    }
    Ok(())
}

fn higher_dimension_pairs() -> Check {
    for d in 3..=5usize {
        let s = lambda_series(2, d).map_err(|e| e.to_string())?;
        for k in 0..=d / 2 {
            let want = binomial(d as u64, 2 * k as u64);
            ensure(s.at_degree(2 * k as i64) == want, || format!("d={d} degree {}: {}", 2 * k, s.at_degree(2 * k as i64)))?;
        }
        ensure(s.total() == (0..=d / 2).map(|k| binomial(d as u64, 2 * k as u64)).sum::<u64>(), || format!("d={d}: odd degrees"))?;
    }
    Ok(())
}

fn canonical_maps() -> Check {
    for m in 2..=5 {
        for q in 0..=4 {
            let r = invariant_surjection(m, 2, q).map_err(|e| e.to_string())?;
            ensure(r.is_full_rank(), || format!("m={m} q={q}: rank {} of {}x{}", r.rank, r.target_dim, r.source_dim))?;
        }
    }
    Ok(())
}

fn cech() -> Check {
    for k in 1..=6 {
        for v in [Variant::Check, Variant::Hat] {
            let c = cech_complex(k, v).map_err(|e| e.to_string())?;
            ensure(c.is_exact().map_err(|e| e.to_string())?, || format!("k={k} {v:?} not exact"))?;
            for i in 0..k {
                let h = hom_dimension(k, i, v).map_err(|e| e.to_string())?;
                ensure(h == 1, || format!("k={k} {v:?} hom dimension at {i} is {h}"))?;
            }
        }
    }
    Ok(())
}

fn identity_partition(r: &CohomologyReport) -> Partition {
    r.layout.identity_support().expect("equal sides")
}

fn curve_identity(runs: &mut Vec<CohomologyReport>) -> Check {
    for (ell, n) in POSITIVE {
        let s = Side::new(ell, n);
        let r = timed(Duration::from_secs(60), &format!("({ell},{n})"), || compose(s, s, DimMode::Curve, Engine::Both))?;
        ensure(r.verdict == Verdict::Identity, || format!("({ell},{n}): {:?}", r.verdict))?;
        let id = identity_partition(&r);
        ensure(
            r.entries.len() == 1 && r.entries[0].support.partition == id && r.entries[0].degree == 0 && r.entries[0].multiplicity == 1,
            || format!("({ell},{n}): entries {:?}", r.entries),
        )?;
        runs.push(r);
    }
    for big in 1..=5 {
        for ell in 0..big {
            let s = Side::new(ell, big - ell);
            let r = compose(s, s, DimMode::Curve, Engine::Both).map_err(|e| e.to_string())?;
            ensure(r.provenance.iter().any(|p| p.contains("engines agree")), || format!("engines differ on ({ell},{})", big - ell))?;
        }
    }
    Ok(())
}

fn curve_orthogonality(runs: &mut Vec<CohomologyReport>) -> Check {
    let pairs: Vec<(Side, Side)> = (1..=6).flat_map(mixed_pairs).collect();
    ensure(pairs.len() == 8, || format!("{} mixed pairs", pairs.len()))?;
    for (a, b) in pairs {
        let r = orthogonality(a, b, DimMode::Curve, Engine::Both).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Zero, || format!("{a:?} -> {b:?}: {:?}", r.verdict))?;
        runs.push(r);
    }
    Ok(())
}

fn surface_pattern(runs: &mut Vec<CohomologyReport>) -> Check {
    for (ell, n) in POSITIVE {
        let s = Side::new(ell, n);
        let r = timed(Duration::from_secs(60), &format!("({ell},{n})"), || compose(s, s, DimMode::Surface, Engine::Both))?;
        ensure(r.verdict == Verdict::PFunctor(n), || format!("({ell},{n}): {:?}", r.verdict))?;
        let id = identity_partition(&r);
        let got: Vec<(i64, i64, usize)> = r
            .entries
            .iter()
            .filter(|e| e.support.partition == id)
            .map(|e| (e.degree, e.omega(2).unwrap_or(i64::MIN), e.multiplicity))
            .collect();
        let want: Vec<(i64, i64, usize)> = (0..n as i64).map(|r| (2 * r, -r, 1)).collect();
        ensure(got == want && r.entries.len() == n, || format!("({ell},{n}): {got:?}"))?;
        runs.push(r);
    }
    Ok(())
}

fn failure_mode(runs: &mut Vec<CohomologyReport>) -> Check {
    let s = Side::new(2, 2);
    // x, x1, x2, z, z1, z2 are coordinates 0..6
    let xdelta = Partition::from_blocks(vec![vec![0, 4, 5], vec![1, 2, 3]]);
    for mode in [DimMode::Curve, DimMode::Surface] {
        let r = compose(s, s, mode, Engine::Both).map_err(|e| e.to_string())?;
        let Verdict::Failure { witness } = &r.verdict else {
            return Err(format!("{mode}: {:?}", r.verdict));
        };
        ensure(witness.iter().any(|w| w.support.partition == xdelta && w.support.split), || format!("{mode}: witness {witness:?}"))?;
        ensure(r.exit_code() == 2, || format!("{mode}: exit {}", r.exit_code()))?;
        runs.push(r);
    }
    let out = std::env::temp_dir().join(format!("fmkernel-acceptance-{}.json", std::process::id()));
    let status = Command::new(env!("CARGO_BIN_EXE_fmkernel"))
        .args(["verify-failure", "--ell", "2", "--n", "2", "--out"])
        .arg(&out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.code() == Some(2), || format!("binary exit {:?}", status.status.code()))?;
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_file(&out);
    let want = serde_json::json!([["x", "z1", "z2"], ["x1", "x2", "z"]]);
    for rep in doc["reports"].as_array().ok_or("no reports")? {
        let found = rep["witness"].as_array().into_iter().flatten().any(|w| w["support"]["blocks"] == want);
        ensure(found, || format!("report witness {}", rep["witness"]))?;
    }
    Ok(())
}

fn fixtures() -> Check {
    for n in 2..=5 {
        let o = fixtures_ell1(n, &[DimMode::Curve, DimMode::Surface]).map_err(|e| e.to_string())?;
        ensure(o.exit_code == 0, || o.lines.join("; "))?;
    }
    Ok(())
}

fn euler(runs: &[CohomologyReport]) -> Check {
    ensure(runs.len() == 5 + 8 + 5 + 2, || format!("{} runs recorded", runs.len()))?;
    for r in runs {
        ensure(r.euler_check(), || format!("{:?} {:?} {}", r.a, r.b, r.mode))?;
    }
    Ok(())
}

fn heisenberg() -> Check {
    let model = ModelCohomology::rank_four();
    let ns: Vec<i64> = (-4..=4).filter(|&k| k != 0).collect();
    let pairs: Vec<(i64, i64)> = ns.iter().flat_map(|&a| ns.iter().map(move |&b| (a, b))).collect();
    let ok = par_map(0, &pairs, |&(a, b)| {
        for x in 0..4 {
            for y in 0..4 {
                if !commutator_check(&model, a, b, &model.unit_vector(x), &model.unit_vector(y), 6)? {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    })
    .map_err(|e| e.to_string())?;
    if let Some((a, b)) = ok.into_iter().flatten().next() {
        return Err(format!("commutator fails for n={a}, n'={b}"));
    }

    let chi = Matrix::from_i64(&[&[2, -1], &[-1, 2]]);
    let p = EulerPairing::with_trivial_canonical_class(chi).map_err(|e| e.to_string())?;
    let swap = EulerPairing::new(Matrix::from_i64(&[&[1, 3], &[3, 5]]), Matrix::from_i64(&[&[0, 1], &[1, 0]])).map_err(|e| e.to_string())?;
    let basis = |x: usize| vec![qi(i64::from(x == 0)), qi(i64::from(x == 1))];
    for n in 1..=4usize {
        let rep = orthogonality(Side::new(0, n + 1), Side::new(1, n), DimMode::Surface, Engine::Both).map_err(|e| e.to_string())?;
        for x in 0..2 {
            for y in 0..2 {
                let (e, f) = (basis(x), basis(y));
                let got = euler_composition(n, &p, &e, &f).map_err(|e| e.to_string())?;
                ensure(got == qi(n as i64) * p.chi(&e, &f).unwrap(), || format!("n={n}: {got}"))?;
                for q in [&p, &swap] {
                    let want = -q.chi(&e, &q.twist(&f, -(n as i64)).unwrap()).unwrap();
                    let mixed = euler_mixed(n, q, &e, &f).map_err(|e| e.to_string())?;
                    ensure(mixed == want, || format!("mixed n={n}: {mixed} vs {want}"))?;
                    ensure(euler_of_report(&rep, q, &e, &f).map_err(|e| e.to_string())? == Some(want), || format!("report n={n}"))?;
                }
            }
        }
        // the mixed value is not zero: these two kernels are not orthogonal
        ensure(euler_mixed(n, &p, &basis(0), &basis(0)).unwrap() != qi(0), || format!("mixed n={n} vanishes"))?;
    }
    Ok(())
}

fn kernels_and_orbits() -> Check {
    for ell in 0..=3 {
        for n in 1..=5 {
            let k = build_kernel(ell, n).map_err(|e| e.to_string())?;
            ensure(k.squares_to_zero(), || format!("d^2 != 0 for ({ell},{n})"))?;
        }
    }
    let mut cells = Vec::new();
    for big in 1..=6 {
        for ell in 0..big {
            for i in 0..=ell {
                for j in 0..=ell {
                    cells.push((ell, big - ell, i, j));
                }
            }
        }
    }
    let bad = par_map(0, &cells, |&(ell, n, i, j)| {
        let dec = orbit_decompose(ell, n, i, j)?;
        Ok((!(dec.orbit_stabilizer_holds() && dec.bijects_with_index())).then_some((ell, n, i, j)))
    })
    .map_err(|e| e.to_string())?;
    match bad.into_iter().flatten().next() {
        Some(c) => Err(format!("orbit-stabilizer fails at {c:?}")),
        None => Ok(()),
    }
}

fn main() {
    let mut runs = Vec::new();
    let results: Vec<(&str, Check)> = vec![
        ("lambda series for curves and surfaces, matrix oracle", lambda_series_check()),
        ("exterior powers of the standard representation are irreducible", irreducibility()),
        ("lambda(2,d) in degree 2k is binomial(d,2k)", higher_dimension_pairs()),
        ("canonical maps are full rank on invariants", canonical_maps()),
        ("Čech complexes exact, hom dimension 1", cech()),
        ("curve self-composition is the identity, engines agree", curve_identity(&mut runs)),
        ("curve mixed products vanish", curve_orthogonality(&mut runs)),
        ("surface self-composition has the P-functor pattern", surface_pattern(&mut runs)),
        ("(2,2) fails with the X×Δ witness, exit 2", failure_mode(&mut runs)),
        ("ell = 1 grid cells", fixtures()),
        ("Euler characteristic conserved", euler(&runs)),
        ("Heisenberg relations and Grothendieck identities", heisenberg()),
        ("d^2 = 0 and orbit-stabilizer", kernels_and_orbits()),
    ];

    let mut failed = 0;
    for (k, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
