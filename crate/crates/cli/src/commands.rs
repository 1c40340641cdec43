//! Subcommand bodies. Each returns an [`Outcome`]; nothing here touches stdout.

use std::path::PathBuf;

use fmkernel::cech::{cech_complex, hom_dimension, Variant, MAX_K};
use fmkernel::diagcomb::{orbit_decompose, DiagLabel, Side};
use fmkernel::fock::{adjointness_check, commutator_check, ModelCohomology};
use fmkernel::kernelcalc::concrete::MAX_OVERLAP;
use fmkernel::kernelcalc::{
    compose, convolve_cell, euler_composition, euler_mixed, euler_of_report, orthogonality, DimMode, Engine,
};
use fmkernel::lambda::{
    expected_low_dimension, lambda_series, lambda_series_matrix, GradedMultiplicity, OmegaTag, MATRIX_ORACLE_MAX_M,
};
use fmkernel::linalg::{fmt_q, qi};
use fmkernel::permgroup::{character_standard, exterior_power_character, MAX_CHARACTER_M};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::config::{EulerConfig, ModelConfig};
use crate::error::{CliError, Result};
use crate::report::ReportJson;

/// Largest `(m-1)·d` the concrete engine is asked to handle.
pub const MAX_CONCRETE_WEDGE: usize = 24;

/// Kernels whose self-composition the sweeps check by default.
pub const DEFAULT_CASES: [(usize, usize); 5] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)];

pub struct Outcome {
    pub exit_code: i32,
    /// human-readable lines for stdout
    pub lines: Vec<String>,
    /// the `--out` document
    pub document: Value,
}

/// 1 beats 2 beats 0.
pub fn combine(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().fold(0, |acc, c| match (acc, c) {
        (1, _) | (_, 1) => 1,
        (2, _) | (_, 2) => 2,
        _ => 0,
    })
}

fn ok_code(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

/// Runs `f` over `items` on `jobs` workers (0: one per core), keeping input order.
pub fn par_map<T, R, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker(s): {e}")))?;
    pool.install(|| items.par_iter().map(&f).collect::<Vec<_>>()).into_iter().collect()
}

fn check_character_bound(m: usize) -> Result<()> {
    if m > MAX_CHARACTER_M {
        return Err(CliError::Bound(format!("character path supports m <= {MAX_CHARACTER_M}, got {m}")));
    }
    Ok(())
}

// lambda-table

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LambdaRowJson {
    pub m: usize,
    pub d: usize,
    pub degree: i64,
    pub omega: String,
    pub multiplicity: u64,
}

fn lambda_rows(cache: &Cache, m: usize, d: usize) -> Result<Vec<LambdaRowJson>> {
    cache.get_or_compute("lambda", &format!("m{m}-d{d}"), || {
        Ok(lambda_series(m, d)?
            .entries()
            .map(|(degree, omega, multiplicity)| LambdaRowJson { m, d, degree, omega: omega.to_string(), multiplicity })
            .collect())
    })
}

fn rows_to_series(rows: &[LambdaRowJson]) -> Option<GradedMultiplicity> {
    let mut g = GradedMultiplicity::zero();
    for r in rows {
        let tag = match r.omega.parse::<i64>() {
            Ok(e) => OmegaTag::Tagged(e),
            Err(_) => return None,
        };
        g.insert(r.degree, tag, r.multiplicity);
    }
    Some(g)
}

pub fn lambda_table(m_max: usize, d: usize, csv: bool, jobs: usize, cache: &Cache) -> Result<Outcome> {
    check_character_bound(m_max)?;
    if d == 0 || m_max == 0 {
        return Err(CliError::Usage("need --m-max >= 1 and --d >= 1".into()));
    }
    let ms: Vec<usize> = (1..=m_max).collect();
    let tables = par_map(jobs, &ms, |&m| lambda_rows(cache, m, d))?;
    let mut code = 0;
    let mut checks = Vec::new();
    for (m, rows) in ms.iter().zip(&tables) {
        if let Some(want) = expected_low_dimension(*m, d) {
            let ok = rows_to_series(rows).as_ref() == Some(&want);
            checks.push(json!({"m": m, "closed_form": ok}));
            code = combine([code, ok_code(ok)]);
        }
    }
    let rows: Vec<&LambdaRowJson> = tables.iter().flatten().collect();
    let lines = if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &rows {
            w.serialize(r).map_err(|e| CliError::Usage(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
        String::from_utf8(bytes).expect("csv output is utf-8").lines().map(str::to_string).collect()
    } else {
        let mut lines = vec![format!("{:>3} {:>3} {:>7} {:>10} {:>12}", "m", "d", "degree", "omega", "multiplicity")];
        lines.extend(rows.iter().map(|r| format!("{:>3} {:>3} {:>7} {:>10} {:>12}", r.m, r.d, r.degree, r.omega, r.multiplicity)));
        if code != 0 {
            lines.push("closed form mismatch".into());
        }
        lines
    };
    let document = json!({"command": "lambda-table", "params": {"m_max": m_max, "d": d}, "rows": rows, "checks": checks, "exit_code": code});
    Ok(Outcome { exit_code: code, lines, document })
}

// char-check

pub fn char_check(m_max: usize, oracle_max: usize, jobs: usize, cache: &Cache) -> Result<Outcome> {
    check_character_bound(m_max)?;
    if oracle_max > MATRIX_ORACLE_MAX_M {
        return Err(CliError::Bound(format!("matrix oracle supports m <= {MATRIX_ORACLE_MAX_M}, got {oracle_max}")));
    }
    let ms: Vec<usize> = (2..=m_max.max(1)).collect();
    type Norms = Vec<(usize, String)>;
    type Oracle = Vec<(usize, bool)>;
    let results = par_map(jobs, &ms, |&m| -> Result<(Norms, Oracle)> {
        let chi = character_standard(m)?;
        let mut norms = Vec::new();
        for i in 1..m {
            let w = exterior_power_character(&chi, i)?;
            norms.push((i, fmt_q(&w.inner(&w))));
        }
        let mut oracle = Vec::new();
        if m <= oracle_max {
            for d in [1, 2] {
                let by_char = rows_to_series(&lambda_rows(cache, m, d)?);
                oracle.push((d, by_char == Some(lambda_series_matrix(m, d)?)));
            }
        }
        Ok((norms, oracle))
    })?;
    let mut lines = Vec::new();
    let mut code = 0;
    let mut out = Vec::new();
    for (m, (norms, oracle)) in ms.iter().zip(&results) {
        let irreducible = norms.iter().all(|(_, v)| v == "1/1");
        let oracle_ok = oracle.iter().all(|(_, ok)| *ok);
        code = combine([code, ok_code(irreducible && oracle_ok)]);
        let mut line = format!("m={m}: <chi,chi> = 1 for all exterior powers: {}", mark(irreducible));
        if !oracle.is_empty() {
            line.push_str(&format!("; matrix oracle d=1,2: {}", mark(oracle_ok)));
        }
        lines.push(line);
        out.push(json!({
            "m": m,
            "norms": norms.iter().map(|(i, v)| json!({"i": i, "norm": v})).collect::<Vec<_>>(),
            "matrix_oracle": oracle.iter().map(|(d, ok)| json!({"d": d, "agrees": ok})).collect::<Vec<_>>(),
        }));
    }
    let document = json!({"command": "char-check", "params": {"m_max": m_max, "oracle_max": oracle_max}, "results": out, "exit_code": code});
    Ok(Outcome { exit_code: code, lines, document })
}

// cech-check

pub fn cech_check(k_max: usize, jobs: usize) -> Result<Outcome> {
    if k_max > MAX_K {
        return Err(CliError::Bound(format!("Čech complexes are built for k <= {MAX_K}, got {k_max}")));
    }
    let tasks: Vec<(usize, Variant)> = (1..=k_max).flat_map(|k| [(k, Variant::Check), (k, Variant::Hat)]).collect();
    let results = par_map(jobs, &tasks, |&(k, v)| -> Result<(bool, bool, bool, Vec<u64>)> {
        let c = cech_complex(k, v)?;
        let homs = (0..k).map(|i| hom_dimension(k, i, v)).collect::<fmkernel::Result<Vec<_>>>()?;
        Ok((c.squares_to_zero(), c.is_exact()?, c.is_equivariant(), homs))
    })?;
    let mut lines = Vec::new();
    let mut out = Vec::new();
    let mut code = 0;
    for ((k, v), (sq, exact, equiv, homs)) in tasks.iter().zip(&results) {
        let name = match v {
            Variant::Check => "check",
            Variant::Hat => "hat",
        };
        let homs_ok = homs.iter().all(|&h| h == 1);
        let ok = *sq && *exact && *equiv && homs_ok;
        code = combine([code, ok_code(ok)]);
        lines.push(format!("k={k} {name}: d^2=0 {}, exact {}, equivariant {}, hom dims {:?}", mark(*sq), mark(*exact), mark(*equiv), homs));
        out.push(json!({"k": k, "variant": name, "squares_to_zero": sq, "exact": exact, "equivariant": equiv, "hom_dimensions": homs}));
    }
    let document = json!({"command": "cech-check", "params": {"k_max": k_max}, "results": out, "exit_code": code});
    Ok(Outcome { exit_code: code, lines, document })
}

// orbit-table

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LabelJson {
    #[serde(rename = "I")]
    pub i_set: Vec<usize>,
    #[serde(rename = "J")]
    pub j_set: Vec<usize>,
    pub mu: Vec<usize>,
}

impl From<&DiagLabel> for LabelJson {
    fn from(l: &DiagLabel) -> Self {
        LabelJson { i_set: l.i_set.clone(), j_set: l.j_set.clone(), mu: l.mu.clone() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrbitJson {
    pub representative: (LabelJson, LabelJson),
    pub stabilizer_order: u64,
    pub orbit_size: u64,
    pub overlap: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrbitTableJson {
    pub params: Value,
    pub orbits: Vec<OrbitJson>,
    pub orbit_stabilizer: bool,
    pub bijects_with_index: bool,
}

fn orbit_table_one(cache: &Cache, ell: usize, n: usize, i: usize, j: usize) -> Result<OrbitTableJson> {
    cache.get_or_compute("orbits", &format!("l{ell}-n{n}-i{i}-j{j}"), || {
        let dec = orbit_decompose(ell, n, i, j)?;
        Ok(OrbitTableJson {
            params: json!({"ell": ell, "n": n, "i": i, "j": j}),
            orbits: dec
                .orbits
                .iter()
                .map(|o| OrbitJson {
                    representative: ((&o.rep_a).into(), (&o.rep_b).into()),
                    stabilizer_order: o.stabilizer_order,
                    orbit_size: o.orbit_size,
                    overlap: o.overlap,
                })
                .collect(),
            orbit_stabilizer: dec.orbit_stabilizer_holds(),
            bijects_with_index: dec.bijects_with_index(),
        })
    })
}

pub fn orbit_table(ell: usize, n: usize, i: Option<usize>, j: Option<usize>, jobs: usize, cache: &Cache) -> Result<Outcome> {
    if n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    check_character_bound(n + ell)?;
    let is: Vec<usize> = i.map_or_else(|| (0..=ell).collect(), |i| vec![i]);
    let js: Vec<usize> = j.map_or_else(|| (0..=ell).collect(), |j| vec![j]);
    let cells: Vec<(usize, usize)> = is.iter().flat_map(|&i| js.iter().map(move |&j| (i, j))).collect();
    let tables = par_map(jobs, &cells, |&(i, j)| orbit_table_one(cache, ell, n, i, j))?;
    let mut lines = Vec::new();
    let mut code = 0;
    for ((i, j), t) in cells.iter().zip(&tables) {
        let ok = t.orbit_stabilizer && t.bijects_with_index;
        code = combine([code, ok_code(ok)]);
        let total: u64 = t.orbits.iter().map(|o| o.orbit_size).sum();
        lines.push(format!("cell ({i},{j}): {} orbit(s), {total} pair(s), orbit-stabilizer {}", t.orbits.len(), mark(ok)));
    }
    let document = json!({"command": "orbit-table", "params": {"ell": ell, "n": n}, "tables": tables, "exit_code": code});
    Ok(Outcome { exit_code: code, lines, document })
}

// verify-*

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Run {
    pub a: Side,
    pub b: Side,
    pub mode: DimMode,
}

/// Rejects runs the concrete engine cannot hold: overlaps reach `n + ℓ`.
pub fn check_run_bounds(run: &Run, engine: Engine) -> Result<()> {
    let big = run.a.big_n();
    check_character_bound(big)?;
    if engine == Engine::Symbolic {
        return Ok(());
    }
    let wedge = (big - 1) * run.mode.d();
    if big > MAX_OVERLAP || wedge > MAX_CONCRETE_WEDGE {
        return Err(CliError::Bound(format!(
            "concrete engine needs n+ell <= {MAX_OVERLAP} and (n+ell-1)d <= {MAX_CONCRETE_WEDGE}; got n+ell = {big}, (n+ell-1)d = {wedge}"
        )));
    }
    Ok(())
}

pub fn verify(command: &str, runs: &[Run], engine: Engine, jobs: usize) -> Result<Outcome> {
    for r in runs {
        check_run_bounds(r, engine)?;
    }
    let reports = par_map(jobs, runs, |r| {
        let rep = if r.a == r.b { compose(r.a, r.b, r.mode, engine)? } else { orthogonality(r.a, r.b, r.mode, engine)? };
        Ok(ReportJson::from_report(&rep))
    })?;
    let code = combine(reports.iter().map(|r| r.exit_code));
    let lines = reports.iter().map(ReportJson::summary).collect();
    let document = json!({"command": command, "exit_code": code, "reports": reports});
    Ok(Outcome { exit_code: code, lines, document })
}

/// Valid mixed pairs `(ℓ, n) → (ℓ', n')` with `ℓ' > ℓ` and `n + ℓ = N`.
pub fn mixed_pairs(big: usize) -> Vec<(Side, Side)> {
    let mut out = Vec::new();
    for ell in 0..big {
        for ell2 in ell + 1..big {
            let (a, b) = (Side::new(ell, big - ell), Side::new(ell2, big - ell2));
            if a.n > a.ell && b.n > b.ell {
                out.push((a, b));
            }
        }
    }
    out
}

// fixtures-ell1

/// `(k, overlap, shift, ω)` for the single summand of each block of the four
/// `ℓ = 1` cells.
fn fixture_blocks(n: usize, i: usize, j: usize, d: usize) -> Vec<(usize, usize, i64, i64)> {
    let d = d as i64;
    match (i, j) {
        (0, 0) => vec![(0, n, 0, 0), (1, n - 1, d, -1)],
        (0, 1) => vec![(1, n, 0, 0)],
        (1, 0) => vec![(1, n, d, -1)],
        _ => vec![(1, n + 1, 0, 0)],
    }
}

fn twisted(g: &GradedMultiplicity, shift: i64, omega: i64) -> GradedMultiplicity {
    let mut out = GradedMultiplicity::zero();
    for (h, tag, m) in g.entries() {
        let tag = match tag {
            OmegaTag::Tagged(e) => OmegaTag::Tagged(e + omega),
            t => t,
        };
        out.insert(h + shift, tag, m);
    }
    out
}

pub fn fixtures_ell1(n: usize, modes: &[DimMode]) -> Result<Outcome> {
    if n < 2 {
        return Err(CliError::Usage("fixtures need n >= 2".into()));
    }
    let mut lines = Vec::new();
    let mut out = Vec::new();
    let mut code = 0;
    for &mode in modes {
        let d = mode.d();
        let Some(_) = expected_low_dimension(1, d) else {
            return Err(CliError::Usage("fixtures are stated for curves and surfaces".into()));
        };
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let cell = convolve_cell(1, n, i, j, d)?;
            let want = fixture_blocks(n, i, j, d);
            let mut ok = cell.blocks.len() == want.len();
            for (block, &(k, overlap, shift, omega)) in cell.blocks.iter().zip(&want) {
                let [s] = block.summands.as_slice() else {
                    ok = false;
                    continue;
                };
                let series = expected_low_dimension(overlap, d).expect("curve or surface");
                ok &= block.k == k
                    && s.entry.k1.len() == k
                    && s.overlap == overlap
                    && s.shift == shift
                    && s.omega_exponent == omega
                    && !s.split
                    && s.multiplicity == twisted(&series, shift, omega);
            }
            code = combine([code, ok_code(ok)]);
            let blocks: Vec<String> = want
                .iter()
                .map(|(k, m, sh, w)| format!("k={k}: Λ_{m} ω^{w} [-{sh}]"))
                .collect();
            lines.push(format!("({i}{j}) {mode} n={n}: {} {}", blocks.join(", "), mark(ok)));
            out.push(json!({
                "cell": [i, j],
                "dim_mode": mode.to_string(),
                "blocks": want.iter().map(|(k, m, sh, w)| json!({"k": k, "lambda": m, "shift": sh, "omega": w})).collect::<Vec<_>>(),
                "matches": ok,
            }));
        }
    }
    let document = json!({"command": "fixtures-ell1", "params": {"n": n}, "cells": out, "exit_code": code});
    Ok(Outcome { exit_code: code, lines, document })
}

// fock-check

pub fn fock_check(model_path: Option<&PathBuf>, max_n: i64, truncation: usize, jobs: usize) -> Result<Outcome> {
    let (model, name) = match model_path {
        Some(p) => (ModelConfig::load(p)?.build()?, p.display().to_string()),
        None => (ModelCohomology::rank_four(), "rank-4 model".to_string()),
    };
    if max_n < 1 || max_n as usize > truncation {
        return Err(CliError::Usage(format!("need 1 <= --max-n <= --truncation ({truncation})")));
    }
    let ns: Vec<i64> = (-max_n..=max_n).filter(|&k| k != 0).collect();
    let pairs: Vec<(i64, i64)> = ns.iter().flat_map(|&a| ns.iter().map(move |&b| (a, b))).collect();
    let r = model.rank();
    let results = par_map(jobs, &pairs, |&(n1, n2)| -> Result<bool> {
        for x in 0..r {
            for y in 0..r {
                if !commutator_check(&model, n1, n2, &model.unit_vector(x), &model.unit_vector(y), truncation)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    })?;
    let failed: Vec<(i64, i64)> = pairs.iter().zip(&results).filter(|(_, ok)| !**ok).map(|(p, _)| *p).collect();
    let adjoint = adjointness_check(&model, truncation);
    let ok = failed.is_empty() && adjoint;
    let code = ok_code(ok);
    let mut lines = vec![format!(
        "{name}: commutators for {} (n, n') pairs, truncation {truncation}: {}",
        pairs.len(),
        mark(failed.is_empty())
    )];
    lines.extend(failed.iter().map(|(a, b)| format!("  commutator fails for n={a}, n'={b}")));
    lines.push(format!("{name}: q_n and q_-n adjoint: {}", mark(adjoint)));
    let document = json!({
        "command": "fock-check",
        "params": {"model": name, "max_n": max_n, "truncation": truncation},
        "commutators_checked": pairs.len(),
        "commutator_failures": failed,
        "adjoint": adjoint,
        "exit_code": code,
    });
    Ok(Outcome { exit_code: code, lines, document })
}

// euler-k

pub fn euler_k(model_path: Option<&PathBuf>, n_max: usize) -> Result<Outcome> {
    let configs = match model_path {
        Some(p) => vec![(p.display().to_string(), EulerConfig::load(p)?)],
        None => vec![
            ("trivial canonical class".to_string(), EulerConfig::trivial_example()),
            ("ω swaps two classes".to_string(), EulerConfig::swap_example()),
        ],
    };
    let mut lines = Vec::new();
    let mut out = Vec::new();
    let mut code = 0;
    for (name, cfg) in &configs {
        let p = cfg.build()?;
        let r = p.rank();
        let basis = |x: usize| (0..r).map(|t| qi(i64::from(t == x))).collect::<Vec<_>>();
        for n in 1..=n_max {
            let mut equal_ok = None;
            if p.has_trivial_canonical_class() {
                let mut ok = true;
                for x in 0..r {
                    for y in 0..r {
                        let (e, f) = (basis(x), basis(y));
                        ok &= euler_composition(n, &p, &e, &f)? == qi(n as i64) * p.chi(&e, &f)?;
                    }
                }
                equal_ok = Some(ok);
            }
            // the (0, n+1) against (1, n) surface product, from the formula and from the engine
            let rep = orthogonality(Side::new(0, n + 1), Side::new(1, n), DimMode::Surface, Engine::Symbolic)?;
            let mut mixed_ok = true;
            let mut values = Vec::new();
            for x in 0..r {
                for y in 0..r {
                    let (e, f) = (basis(x), basis(y));
                    let want = -p.chi(&e, &p.twist(&f, -(n as i64))?)?;
                    let got = euler_mixed(n, &p, &e, &f)?;
                    mixed_ok &= got == want && euler_of_report(&rep, &p, &e, &f)? == Some(want.clone());
                    values.push(fmt_q(&got));
                }
            }
            let nonzero = values.iter().any(|v| v != "0/1");
            let ok = equal_ok.unwrap_or(true) && mixed_ok;
            code = combine([code, ok_code(ok)]);
            let mut line = format!("{name}, n={n}:");
            if let Some(e) = equal_ok {
                line.push_str(&format!(" χ(P*P) = n·χ {};", mark(e)));
            }
            line.push_str(&format!(" mixed = -χ(E, F·ω^-{n}) {}", mark(mixed_ok)));
            if nonzero {
                line.push_str(" (nonzero: the two kernels are not orthogonal)");
            }
            lines.push(line);
            out.push(json!({"pairing": name, "n": n, "equal_n": equal_ok, "mixed": mixed_ok, "mixed_values": values, "mixed_nonzero": nonzero}));
        }
    }
    let document = json!({"command": "euler-k", "params": {"n_max": n_max}, "results": out, "exit_code": code});
    Ok(Outcome { exit_code: code, lines, document })
}
