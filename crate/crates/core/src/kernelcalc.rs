//! The kernel complex `P_{ℓ,n}`, the cells of the grid `P^{iR} ⋆ P^j`, and the
//! total cohomology of `P^R ⋆ P` by two independent engines.
//!
//! Grading: `P` sits in degrees `[0, ℓ]`; a summand of cell `(i, j)` in block
//! `k` is shifted by `(k - j)·d` and twisted by `ω^{-(k-j)}`; the global shift
//! `(ℓ+1)·d` of the adjoint is absorbed, so the identity sits in degree 0.

pub mod concrete;
pub mod report;
pub mod support;
pub mod symbolic;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cech::{cech_complex, Variant};
use crate::diagcomb::{differential_arrows, enum_index, index_ij, Arrow, DiagLabel, IndexEntry, Side};
use crate::error::{param_err, Result};
use crate::fock::EulerPairing;
use crate::lambda::{lambda_series, GradedMultiplicity, OmegaTag, TwistRule};
use crate::linalg::{complex_cohomology, qi, Matrix, Q};

pub use report::{CohomologyReport, DimMode, Engine, Expectation, Page, PageEntry, Survivor, Verdict};
pub use support::{Layout, Partition, SupportClass};

/// `P_{ℓ,n}` as labelled terms with signed arrows.
#[derive(Clone, Debug)]
pub struct KernelComplex {
    pub ell: usize,
    pub n: usize,
    pub terms: Vec<Vec<DiagLabel>>,
    pub arrows: Vec<Vec<Arrow>>,
}

impl KernelComplex {
    pub fn sizes(&self) -> Vec<usize> {
        self.terms.iter().map(Vec::len).collect()
    }

    /// The signed path count of every length-two composite vanishes.
    pub fn squares_to_zero(&self) -> bool {
        for w in self.arrows.windows(2) {
            let mut sums: BTreeMap<(&DiagLabel, &DiagLabel), i64> = BTreeMap::new();
            for a in &w[0] {
                for b in w[1].iter().filter(|b| b.source == a.target) {
                    *sums.entry((&a.source, &b.target)).or_default() += a.sign * b.sign;
                }
            }
            if sums.values().any(|&s| s != 0) {
                return false;
            }
        }
        true
    }
}

pub fn build_kernel(ell: usize, n: usize) -> Result<KernelComplex> {
    if n == 0 {
        return Err(param_err!("n must be positive"));
    }
    let terms = (0..=ell).map(|i| enum_index(ell, n, i)).collect::<Result<Vec<_>>>()?;
    let arrows = (0..ell).map(|i| differential_arrows(ell, n, i)).collect::<Result<Vec<_>>>()?;
    Ok(KernelComplex { ell, n, terms, arrows })
}

/// For every label and every block of its support: `n` for `x`, plus one per
/// `x_c`, minus one per `y` in the block, is zero.
pub fn adjoint_twist_check(ell: usize, n: usize) -> Result<bool> {
    let k = build_kernel(ell, n)?;
    for label in k.terms.iter().flatten() {
        let main = n as i64 + label.i_set.len() as i64 - label.j_set.len() as i64;
        if main != 0 || label.mu_pairs().len() != ell - label.i_set.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One summand `Q(I1, K1, I2, K2, μ)` of a grid cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub entry: IndexEntry,
    /// `K1 \ I1` and `K2 \ I2`, carrying the sign characters
    pub twist1: Vec<usize>,
    pub twist2: Vec<usize>,
    /// `|J1 ∩ J2|`; the multiplicity is `Λ*` of this
    pub overlap: usize,
    pub omega_exponent: i64,
    pub shift: i64,
    /// already shifted and twisted
    pub multiplicity: GradedMultiplicity,
    /// empty overlap: `x` and `z` are not glued
    pub split: bool,
}

/// Block `P(i,j)_k` of a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellBlock {
    pub k: usize,
    pub summands: Vec<Summand>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub blocks: Vec<CellBlock>,
}

impl Cell {
    /// Multiplicities of all summands added up.
    pub fn total(&self) -> GradedMultiplicity {
        let mut out = GradedMultiplicity::zero();
        for s in self.blocks.iter().flat_map(|b| &b.summands) {
            out = out.add(&s.multiplicity);
        }
        out
    }
}

/// Cell `(i, j)` of `P_{ℓ,n}^{iR} ⋆ P_{ℓ,n}^j`.
pub fn convolve_cell(ell: usize, n: usize, i: usize, j: usize, d: usize) -> Result<Cell> {
    let s = Side::new(ell, n);
    convolve_cell_sides(s, s, i, j, d)
}

/// Cell `(i, j)` of `P_b^{iR} ⋆ P_a^j`.
///
/// An empty overlap glues nothing between `x` and `z`; such a summand is a
/// pushforward from a product and is shifted by `(k - j - 1)·d`.
pub fn convolve_cell_sides(a: Side, b: Side, i: usize, j: usize, d: usize) -> Result<Cell> {
    if a.big_n() != b.big_n() || a.n == 0 || b.n == 0 {
        return Err(param_err!("need positive n and matching n + ell"));
    }
    if j > a.ell || i > b.ell {
        return Err(param_err!("cell ({i}, {j}) outside [0, {}] × [0, {}]", b.ell, a.ell));
    }
    let mut by_k: BTreeMap<usize, Vec<Summand>> = BTreeMap::new();
    for entry in index_ij(a, b, i, j) {
        let k = entry.k1.len();
        let overlap = b.n + i + j - k;
        let minus = |big: &[usize], small: &[usize]| big.iter().copied().filter(|c| !small.contains(c)).collect::<Vec<_>>();
        let twist1 = minus(&entry.k1, &entry.i1);
        let twist2 = minus(&entry.k2, &entry.i2);
        let split = overlap == 0;
        let e = k as i64 - j as i64 - i64::from(split);
        let rule = TwistRule::new(e * d as i64, -e);
        let multiplicity = lambda_series(overlap, d)?.omega_tag(rule);
        by_k.entry(k).or_default().push(Summand {
            entry,
            twist1,
            twist2,
            overlap,
            omega_exponent: -e,
            shift: e * d as i64,
            multiplicity,
            split,
        });
    }
    let blocks = by_k.into_iter().map(|(k, summands)| CellBlock { k, summands }).collect();
    Ok(Cell { i, j, blocks })
}

/// What a block component of a grid arrow is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMap {
    /// vertical, same `k`: differential of `Č_{k2}` on the inner index
    Cech { k: usize },
    /// horizontal, same `k`: differential of `Ĉ_k` on the outer index
    CechHat { k: usize },
    /// horizontal `k → k+1`: nonzero, not needed in closed form
    Opaque,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridArrow {
    /// `(i, j, k)`
    pub from: (usize, usize, usize),
    pub to: (usize, usize, usize),
    pub map: BlockMap,
}

/// Block components of the vertical arrows `(i, j) → (i-1, j)` and the
/// horizontal arrows `(i, j) → (i, j+1)`.
pub fn grid_arrows(a: Side, b: Side, d: usize) -> Result<Vec<GridArrow>> {
    let mut blocks: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for i in 0..=b.ell {
        for j in 0..=a.ell {
            let cell = convolve_cell_sides(a, b, i, j, d)?;
            blocks.insert((i, j), cell.blocks.iter().map(|bl| bl.k).collect());
        }
    }
    let mut out = Vec::new();
    for (&(i, j), ks) in &blocks {
        for &k in ks {
            if i >= 1 {
                for &k2 in &blocks[&(i - 1, j)] {
                    let map = if k2 == k { BlockMap::Cech { k: k + a.n - b.n } } else { BlockMap::Zero };
                    out.push(GridArrow { from: (i, j, k), to: (i - 1, j, k2), map });
                }
            }
            if j < a.ell {
                for &k2 in &blocks[&(i, j + 1)] {
                    let map = match k2 {
                        _ if k2 == k => BlockMap::CechHat { k },
                        _ if k2 == k + 1 => BlockMap::Opaque,
                        _ => BlockMap::Zero,
                    };
                    out.push(GridArrow { from: (i, j, k), to: (i, j + 1, k2), map });
                }
            }
        }
    }
    Ok(out)
}

/// `P^R_{ℓ,n} ⋆ P_{ℓ,n}`.
pub fn total_cohomology(ell: usize, n: usize, mode: DimMode, engine: Engine) -> Result<CohomologyReport> {
    let s = Side::new(ell, n);
    compose(s, s, mode, engine)
}

/// `P^R_b ⋆ P_a` for `ℓ_b > ℓ_a`.
pub fn orthogonality(a: Side, b: Side, mode: DimMode, engine: Engine) -> Result<CohomologyReport> {
    if b.ell <= a.ell {
        return Err(param_err!("orthogonality needs ell' > ell, got {} and {}", a.ell, b.ell));
    }
    compose(a, b, mode, engine)
}

/// Runs one engine, or both and compares their survivors.
pub fn compose(a: Side, b: Side, mode: DimMode, engine: Engine) -> Result<CohomologyReport> {
    match engine {
        Engine::Symbolic => symbolic::run(a, b, mode),
        Engine::Concrete => concrete::run(a, b, mode),
        Engine::Both => {
            let sym = symbolic::run(a, b, mode)?;
            let mut con = concrete::run(a, b, mode)?;
            con.engine = Engine::Both;
            con.provenance.extend(sym.provenance.iter().cloned());
            if sym.signature() != con.signature() || sym.verdict.name() != con.verdict.name() {
                con.verdict = Verdict::Inconsistent {
                    reason: alloc::format!(
                        "engines disagree: symbolic {} with {} entries, concrete {} with {} entries",
                        sym.verdict.name(),
                        sym.entries.len(),
                        con.verdict.name(),
                        con.entries.len()
                    ),
                };
            } else {
                con.provenance.push("symbolic and concrete engines agree".into());
            }
            Ok(con)
        }
    }
}

/// `Σ (-1)^degree · mult · χ(E, F ⊗ ω^e)` over `(degree, e, mult)`.
pub fn euler_of_entries(entries: &[(i64, i64, u64)], pairing: &EulerPairing, e: &[Q], f: &[Q]) -> Result<Q> {
    let mut total = Q::zero();
    for &(degree, omega, mult) in entries {
        let sign = if degree.rem_euclid(2) == 0 { 1 } else { -1 };
        total += qi(sign * mult as i64) * pairing.chi(e, &pairing.twist(f, omega)?)?;
    }
    Ok(total)
}

/// Euler class of a report against `χ(E, -)`; `None` when some entry carries no
/// line-bundle tag.
pub fn euler_of_report(report: &CohomologyReport, pairing: &EulerPairing, e: &[Q], f: &[Q]) -> Result<Option<Q>> {
    let d = report.mode.d();
    let mut entries = Vec::new();
    for s in &report.entries {
        let Some(omega) = s.omega(d) else { return Ok(None) };
        entries.push((s.degree, omega, s.multiplicity as u64));
    }
    euler_of_entries(&entries, pairing, e, f).map(Some)
}

/// `χ(E, H^R H F)` for a surface with trivial canonical class: the summands
/// `ω^{-r}[-2r]`, `r < n`, all contribute `χ(E, F)`.
pub fn euler_composition(n: usize, pairing: &EulerPairing, e: &[Q], f: &[Q]) -> Result<Q> {
    if !pairing.has_trivial_canonical_class() {
        return Err(param_err!("the composition identity needs a trivial canonical class"));
    }
    let entries: Vec<(i64, i64, u64)> = lambda_series(n, 2)?
        .entries()
        .map(|(h, t, m)| match t {
            OmegaTag::Tagged(w) => (h, w, m),
            OmegaTag::Untagged { .. } => unreachable!("surface series are tagged"),
        })
        .collect();
    euler_of_entries(&entries, pairing, e, f)
}

/// `χ(E, H^R_{1,n} H_{0,n+1} F)` on a surface: the single class `ω^{-n}` in
/// degree `2n - 1`, which gives `-χ(E, F ⊗ ω^{-n})`.
pub fn euler_mixed(n: usize, pairing: &EulerPairing, e: &[Q], f: &[Q]) -> Result<Q> {
    euler_of_entries(&[(2 * n as i64 - 1, -(n as i64), 1)], pairing, e, f)
}

/// Assembles exact complexes with strictly lower-triangular mixing and checks
/// the result is exact.
///
/// The assembled differential is `U D U⁻¹` with `D` the direct sum and `U` a
/// random unipotent block-lower-triangular change of basis in each degree, which
/// is what keeps `D∘D = 0`. Every component starts in degree 0.
pub fn exactsum_check(seed: u64, components: &[usize]) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parts = components.iter().map(|&k| cech_complex(k, Variant::Check)).collect::<Result<Vec<_>>>()?;
    let len = parts.iter().map(|c| c.dims().len()).max().unwrap_or(0);
    let dim = |c: usize, t: usize| parts[c].dims().get(t).copied().unwrap_or(0);
    let offsets = |t: usize| -> Vec<usize> {
        let mut acc = 0;
        (0..parts.len())
            .map(|c| {
                let o = acc;
                acc += dim(c, t);
                o
            })
            .collect()
    };
    let totals: Vec<usize> = (0..len).map(|t| (0..parts.len()).map(|c| dim(c, t)).sum()).collect();
    let mut change = Vec::new();
    for (t, &total) in totals.iter().enumerate() {
        let off = offsets(t);
        let mut u = Matrix::identity(total);
        for c in 0..parts.len() {
            for c2 in c + 1..parts.len() {
                for r in 0..dim(c2, t) {
                    for col in 0..dim(c, t) {
                        u.set(off[c2] + r, off[c] + col, qi(rng.gen_range(-2..=2)));
                    }
                }
            }
        }
        change.push(u);
    }
    let mut diffs = Vec::new();
    for t in 0..len.saturating_sub(1) {
        let (src, tgt) = (offsets(t), offsets(t + 1));
        let mut sum = Matrix::zeros(totals[t + 1], totals[t]);
        for (c, part) in parts.iter().enumerate() {
            if let Some(m) = part.differentials.get(t) {
                for r in 0..m.rows() {
                    for col in 0..m.cols() {
                        sum.set(tgt[c] + r, src[c] + col, m.get(r, col).clone());
                    }
                }
            }
        }
        let inv = change[t].inverse().ok_or_else(|| crate::error::internal_err!("unipotent change of basis is singular"))?;
        diffs.push(change[t + 1].mul(&sum).mul(&inv));
    }
    let coh = complex_cohomology(&totals, &diffs).map_err(|t| crate::error::internal_err!("assembled D∘D ≠ 0 at degree {t}"))?;
    Ok(coh.iter().all(|&h| h == 0))
}
