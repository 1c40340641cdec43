//! Closed-form engine for `d ≤ 2`.
//!
//! On the support `Γ_{K1,K2,μ}` with `|K1| = k1` the pieces are indexed by
//! `I1 ⊂ K1`, `I2 ⊂ K2` and a degree of `Λ*_m`, `m = n' + |I1| + |I2| - k1`.
//! Every multiplicity space has rank at most one, and every induced map between
//! two non-zero spaces is taken to be an isomorphism, so rows and columns are
//! Čech complexes with the `ε` signs. Pieces with `m = 0` sit on split supports
//! and have no partners.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::report::{self, tag_of, CohomologyReport, DimMode, Engine, Piece, Survivor};
use super::support::{ClassCache, Layout, Partition};
use crate::diagcomb::{epsilon, subsets, Side};
use crate::error::{param_err, Result};
use crate::lambda::{lambda_series, GradedMultiplicity};
use crate::linalg::{qi, Matrix};

/// The support `Γ_{[k1],[k2],μ}` with `μ` order preserving on the complements.
pub fn gamma_support(layout: &Layout, k1: usize, k2: usize) -> Partition {
    let mut main = vec![layout.x(), layout.z()];
    main.extend((1..=k1).map(|c| layout.xc(c)));
    main.extend((1..=k2).map(|c| layout.zc(c)));
    let mut blocks = vec![main];
    for t in 1..=layout.ell - k1 {
        blocks.push(vec![layout.xc(k1 + t), layout.zc(k2 + t)]);
    }
    Partition::from_blocks(blocks)
}

/// The split support of `I1 = [j] ⊂ [k1]`, `I2 = [i] ⊂ [k2]` with empty overlap.
pub fn split_support(layout: &Layout, k1: usize, k2: usize, j: usize, i: usize) -> Partition {
    let mut xb = vec![layout.x()];
    xb.extend((1..=j).map(|c| layout.xc(c)));
    xb.extend((i + 1..=k2).map(|c| layout.zc(c)));
    let mut zb = vec![layout.z()];
    zb.extend((1..=i).map(|c| layout.zc(c)));
    zb.extend((j + 1..=k1).map(|c| layout.xc(c)));
    let mut blocks = vec![xb, zb];
    for t in 1..=layout.ell - k1 {
        blocks.push(vec![layout.xc(k1 + t), layout.zc(k2 + t)]);
    }
    Partition::from_blocks(blocks)
}

struct Cell {
    i1: Vec<usize>,
    i2: Vec<usize>,
    series: GradedMultiplicity,
}

pub fn run(a: Side, b: Side, mode: DimMode) -> Result<CohomologyReport> {
    let d = mode.d();
    if d > 2 {
        return Err(param_err!("the symbolic engine covers curves and surfaces only; use the concrete engine for d = {d}"));
    }
    if a.big_n() != b.big_n() || a.n == 0 || b.n == 0 {
        return Err(param_err!("need positive n and matching n + ell"));
    }
    let layout = Layout::new(a, b);
    let mut cache = ClassCache::default();
    let mut pieces: Vec<Piece> = Vec::new();
    let mut survivors: Vec<Survivor> = Vec::new();
    let mut inconsistency = None;
    let mut lambdas: BTreeMap<usize, GradedMultiplicity> = BTreeMap::new();
    let mut series = |m: usize| -> Result<GradedMultiplicity> {
        if let Some(s) = lambdas.get(&m) {
            return Ok(s.clone());
        }
        let s = lambda_series(m, d)?;
        lambdas.insert(m, s.clone());
        Ok(s)
    };

    for k1 in 0..=a.ell {
        let Some(k2) = (k1 + a.n).checked_sub(b.n) else { continue };
        if k2 > b.ell {
            continue;
        }
        // Γ pieces
        let support = cache.rep(&layout, &gamma_support(&layout, k1, k2));
        let mut cells = Vec::new();
        for j in 0..=k1 {
            for i in 0..=k2 {
                let Some(m) = (b.n + i + j).checked_sub(k1).filter(|&m| m >= 1) else { continue };
                let s = series(m)?;
                for i1 in subsets(k1, j) {
                    for i2 in subsets(k2, i) {
                        cells.push(Cell { i1: i1.clone(), i2, series: s.clone() });
                    }
                }
            }
        }
        let mut local: Vec<Piece> = Vec::new();
        let mut at: BTreeMap<(Vec<usize>, Vec<usize>, usize), usize> = BTreeMap::new();
        for c in &cells {
            let (i, j) = (c.i2.len(), c.i1.len());
            for (q, _, mult) in c.series.entries() {
                at.insert((c.i1.clone(), c.i2.clone(), q as usize), local.len());
                local.push(Piece {
                    support: support.clone(),
                    i,
                    j,
                    q: q as usize,
                    p: j as i64 - i as i64,
                    h: (k1 as i64 - j as i64) * d as i64 + q,
                    tag: tag_of(j as i64 - k1 as i64, q as usize, d),
                    omega_blocks: {
                        let mut w = vec![0; support.len()];
                        w[0] = j as i64 - k1 as i64;
                        w
                    },
                    dim: mult as usize,
                });
            }
        }
        let mut blocks: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        for ((i1, i2, q), &src) in &at {
            let j = i1.len();
            // vertical: drop c from I2
            for &c in i2 {
                let rest: Vec<usize> = i2.iter().copied().filter(|&x| x != c).collect();
                if let Some(&tgt) = at.get(&(i1.clone(), rest.clone(), *q)) {
                    let sign = epsilon(&rest, c) * if j % 2 == 0 { 1 } else { -1 };
                    blocks.insert((src, tgt), Matrix::from_rows(&[vec![qi(sign)]]));
                }
            }
            // horizontal: add c ∈ K1 \ I1, wedge degree grows by d
            for c in 1..=k1 {
                if i1.contains(&c) {
                    continue;
                }
                let mut up = i1.clone();
                up.push(c);
                up.sort_unstable();
                if let Some(&tgt) = at.get(&(up, i2.clone(), q + d)) {
                    blocks.insert((src, tgt), Matrix::from_rows(&[vec![qi(epsilon(i1, c))]]));
                }
            }
        }
        if !local.is_empty() {
            match report::local_cohomology(&layout, &local, &blocks) {
                Ok(s) => survivors.extend(s),
                Err(reason) => {
                    inconsistency.get_or_insert(reason);
                }
            }
        }
        pieces.extend(local);

        // split pieces: empty overlap
        for j in 0..=k1 {
            for i in 0..=k2 {
                if b.n + i + j != k1 {
                    continue;
                }
                let support = cache.rep(&layout, &split_support(&layout, k1, k2, j, i));
                let h = (k1 as i64 - j as i64 - 1) * d as i64;
                let zb = support.block_of(layout.z());
                let mut omega_blocks = vec![0; support.len()];
                omega_blocks[zb] = j as i64 - k1 as i64 + 1;
                let piece = Piece {
                    support,
                    i,
                    j,
                    q: 0,
                    p: j as i64 - i as i64,
                    h,
                    tag: qi(0),
                    omega_blocks,
                    dim: 1,
                };
                match report::local_cohomology(&layout, core::slice::from_ref(&piece), &BTreeMap::new()) {
                    Ok(s) => survivors.extend(s),
                    Err(reason) => {
                        inconsistency.get_or_insert(reason);
                    }
                }
                pieces.push(piece);
            }
        }
    }
    let notes = vec![alloc::format!("symbolic engine: {} piece(s); induced maps taken as Čech differentials", pieces.len())];
    report::assemble(layout, &mut cache, a, b, mode, Engine::Symbolic, &pieces, survivors, notes, inconsistency)
}
