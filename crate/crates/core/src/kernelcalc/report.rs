//! Pieces of the first page, their local cohomology, and the verdict.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::support::{ClassCache, Layout, Partition, SupportClass};
use crate::diagcomb::Side;
use crate::lambda::lambda_series;
use crate::linalg::{qfrac, qi, to_i64, Matrix, Q};
use crate::Result;

/// Which fiber dimension the engine works with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DimMode {
    Curve,
    Surface,
    Mult(usize),
}

impl DimMode {
    pub fn d(&self) -> usize {
        match self {
            DimMode::Curve => 1,
            DimMode::Surface => 2,
            DimMode::Mult(d) => *d,
        }
    }

    pub fn from_d(d: usize) -> Self {
        match d {
            1 => DimMode::Curve,
            2 => DimMode::Surface,
            d => DimMode::Mult(d),
        }
    }
}

impl fmt::Display for DimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimMode::Curve => write!(f, "curve"),
            DimMode::Surface => write!(f, "surface"),
            DimMode::Mult(d) => write!(f, "mult:{d}"),
        }
    }
}

impl core::str::FromStr for DimMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "curve" => Ok(DimMode::Curve),
            "surface" => Ok(DimMode::Surface),
            _ => {
                let d = s
                    .strip_prefix("mult:")
                    .and_then(|x| x.parse::<usize>().ok())
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| crate::error::param_err!("mode must be curve, surface or mult:<d>, got {s}"))?;
                Ok(DimMode::from_d(d))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Engine {
    Symbolic,
    Concrete,
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Symbolic => "symbolic",
            Engine::Concrete => "concrete",
            Engine::Both => "both",
        })
    }
}

/// One summand of one grid cell in one wedge degree `q`, living on a support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub support: Partition,
    pub i: usize,
    pub j: usize,
    pub q: usize,
    /// column position `j - i`
    pub p: i64,
    pub h: i64,
    /// ω exponent of the block of `x`, minus `q/d`
    pub tag: Q,
    /// ω exponents per support block, without the wedge contribution
    pub omega_blocks: Vec<i64>,
    pub dim: usize,
}

impl Piece {
    pub fn degree(&self) -> i64 {
        self.p + self.h
    }
}

/// One entry of the final report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub support: SupportClass,
    pub degree: i64,
    pub tag: Q,
    pub omega_blocks: Vec<i64>,
    pub multiplicity: usize,
    /// column positions of the pieces it can come from
    pub positions: Vec<i64>,
}

impl Survivor {
    /// Integral ω exponent of the main block, when there is one.
    pub fn omega(&self, d: usize) -> Option<i64> {
        if d >= 3 {
            None
        } else {
            to_i64(&self.tag)
        }
    }

    fn key(&self) -> (Partition, i64, Q, usize) {
        (self.support.partition.clone(), self.degree, self.tag.clone(), self.multiplicity)
    }
}

/// Survivors of the complex of pieces on a single support, graded by tag.
///
/// `blocks[(s, t)]` is the matrix from piece `s` to piece `t`.
pub fn local_cohomology(
    layout: &Layout,
    pieces: &[Piece],
    blocks: &BTreeMap<(usize, usize), Matrix>,
) -> core::result::Result<Vec<Survivor>, String> {
    let mut by_tag: BTreeMap<Q, BTreeMap<i64, Vec<usize>>> = BTreeMap::new();
    for (k, pc) in pieces.iter().enumerate() {
        by_tag.entry(pc.tag.clone()).or_default().entry(pc.degree()).or_default().push(k);
    }
    let mut out = Vec::new();
    for (tag, rows) in by_tag {
        let degrees: Vec<i64> = rows.keys().copied().collect();
        let (lo, hi) = (degrees[0], *degrees.last().unwrap());
        let terms: Vec<Vec<usize>> = (lo..=hi).map(|t| rows.get(&t).cloned().unwrap_or_default()).collect();
        let dims: Vec<usize> = terms.iter().map(|ps| ps.iter().map(|&k| pieces[k].dim).sum()).collect();
        let mut diffs = Vec::new();
        for t in 0..terms.len().saturating_sub(1) {
            let mut m = Matrix::zeros(dims[t + 1], dims[t]);
            let mut col = 0;
            for &s in &terms[t] {
                let mut row = 0;
                for &r in &terms[t + 1] {
                    if let Some(b) = blocks.get(&(s, r)) {
                        for x in 0..b.rows() {
                            for y in 0..b.cols() {
                                m.set(row + x, col + y, b.get(x, y).clone());
                            }
                        }
                    }
                    row += pieces[r].dim;
                }
                col += pieces[s].dim;
            }
            diffs.push(m);
        }
        let coh = crate::linalg::complex_cohomology(&dims, &diffs).map_err(|t| {
            alloc::format!("D∘D ≠ 0 on support {:?} at degree {} (tag {})", pieces[0].support, lo + t as i64, tag)
        })?;
        for (t, &h) in coh.iter().enumerate() {
            if h == 0 {
                continue;
            }
            let contributing = &terms[t];
            let mut positions: Vec<i64> = contributing.iter().map(|&k| pieces[k].p).collect();
            positions.sort_unstable();
            positions.dedup();
            let first = &pieces[contributing[0]];
            out.push(Survivor {
                support: layout.describe(&first.support),
                degree: lo + t as i64,
                tag: tag.clone(),
                omega_blocks: first.omega_blocks.clone(),
                multiplicity: h,
                positions,
            });
        }
    }
    Ok(out)
}

/// Pairs of survivors that a later differential could still connect.
///
/// Same support: columns at least two apart. Different supports: the target
/// support (up to `S_ℓ × S_ℓ'`) is strictly smaller and the column grows.
pub fn ambiguous_pairs(layout: &Layout, survivors: &[Survivor]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (x, sx) in survivors.iter().enumerate() {
        for (y, sy) in survivors.iter().enumerate() {
            if sy.degree != sx.degree + 1 {
                continue;
            }
            let p_x = *sx.positions.iter().min().unwrap_or(&0);
            let p_y = *sy.positions.iter().max().unwrap_or(&0);
            let hit = if sx.support.partition == sy.support.partition {
                p_y >= p_x + 2
            } else {
                p_y > p_x
                    && layout
                        .outer_images(&sy.support.partition)
                        .iter()
                        .any(|img| *img != sx.support.partition && sx.support.partition.refines(img))
            };
            if hit {
                out.push((x, y));
            }
        }
    }
    out
}

/// The verdict of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Identity,
    PFunctor(usize),
    /// identity support carrying `Λ*_n` of a `d`-dimensional fiber, `d ≥ 3`
    IdentityTensorLambda { n: usize, d: usize },
    Zero,
    /// a mixed product that does not vanish
    Nonzero,
    Failure { witness: Vec<Survivor> },
    Inconsistent { reason: String },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Identity => "IDENTITY",
            Verdict::PFunctor(_) => "P_FUNCTOR",
            Verdict::IdentityTensorLambda { .. } => "IDENTITY_TENSOR_LAMBDA",
            Verdict::Zero => "ZERO",
            Verdict::Nonzero => "NONZERO",
            Verdict::Failure { .. } => "FAILURE",
            Verdict::Inconsistent { .. } => "INCONSISTENT",
        }
    }
}

/// What the theory predicts for a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    Identity,
    PFunctor(usize),
    IdentityTensorLambda { n: usize, d: usize },
    Zero,
    /// surface `(0, n+1)` against `(1, n)`: one survivor, degree `2n-1`, `ω^{-n}`
    Nonzero { degree: i64, omega: i64 },
    Failure,
    Unknown,
}

pub fn expectation(a: Side, b: Side, mode: DimMode) -> Expectation {
    let d = mode.d();
    if a == b {
        if a.n <= a.ell {
            return Expectation::Failure;
        }
        return match mode {
            DimMode::Curve => Expectation::Identity,
            DimMode::Surface => Expectation::PFunctor(a.n),
            // with ℓ ≥ 1 nothing is predicted once the fibers stop being lines
            DimMode::Mult(d) if a.ell == 0 => Expectation::IdentityTensorLambda { n: a.n, d },
            DimMode::Mult(_) => Expectation::Unknown,
        };
    }
    let valid = a.n > a.ell && b.n > b.ell && b.ell > a.ell;
    if valid && d == 1 {
        return Expectation::Zero;
    }
    if d == 2 && a.ell == 0 && b.ell == 1 && a.n == b.n + 1 {
        return Expectation::Nonzero { degree: 2 * b.n as i64 - 1, omega: -(b.n as i64) };
    }
    Expectation::Unknown
}

/// Survivor pattern predicted for a composition of a kernel with its own
/// adjoint, as `(degree, tag, multiplicity)` on the identity support.
fn identity_pattern(n: usize, mode: DimMode) -> Result<Vec<(i64, Q, usize)>> {
    let d = mode.d();
    let mut out = Vec::new();
    for (h, _, m) in lambda_series(n, d)?.entries() {
        out.push((h, -qfrac(h, d as i64), m as usize));
    }
    Ok(out)
}

pub(crate) fn decide(
    layout: &Layout,
    cache: &mut ClassCache,
    a: Side,
    b: Side,
    mode: DimMode,
    survivors: &[Survivor],
    ambiguous: &[(usize, usize)],
) -> Result<Verdict> {
    let ambiguity = |what: &str| Verdict::Inconsistent {
        reason: alloc::format!("{what}, but {} survivor pair(s) could still be joined by a higher differential", ambiguous.len()),
    };
    let identity = layout.identity_support().map(|p| cache.rep(layout, &p));
    let on_identity = |s: &Survivor| Some(&s.support.partition) == identity.as_ref();
    if survivors.is_empty() {
        return Ok(Verdict::Zero);
    }
    if a == b && survivors.iter().all(on_identity) {
        let mut got: Vec<(i64, Q, usize)> = survivors.iter().map(|s| (s.degree, s.tag.clone(), s.multiplicity)).collect();
        got.sort();
        let mut want = identity_pattern(a.n, mode)?;
        want.sort();
        if got == want {
            if !ambiguous.is_empty() {
                return Ok(ambiguity("the identity pattern survives"));
            }
            return Ok(match mode {
                DimMode::Curve => Verdict::Identity,
                DimMode::Surface => Verdict::PFunctor(a.n),
                DimMode::Mult(d) => Verdict::IdentityTensorLambda { n: a.n, d },
            });
        }
    }
    if a != b {
        if !ambiguous.is_empty() {
            return Ok(ambiguity("the mixed product has survivors"));
        }
        return Ok(Verdict::Nonzero);
    }
    let tangled: Vec<usize> = ambiguous.iter().flat_map(|&(x, y)| [x, y]).collect();
    let witness: Vec<Survivor> = survivors
        .iter()
        .enumerate()
        .filter(|(k, s)| !on_identity(s) && !tangled.contains(k))
        .map(|(_, s)| s.clone())
        .collect();
    if !witness.is_empty() {
        return Ok(Verdict::Failure { witness });
    }
    // every cancellation removes equal multiplicity from both ends of a flagged
    // pair, so at most twice the maximal flow leaves the off-identity part
    let off: Vec<usize> = (0..survivors.len()).filter(|&k| !on_identity(&survivors[k])).collect();
    let off_total: usize = off.iter().map(|&k| survivors[k].multiplicity).sum();
    let mult: Vec<usize> = survivors.iter().map(|s| s.multiplicity).collect();
    let parity: Vec<bool> = survivors.iter().map(|s| s.degree.rem_euclid(2) == 0).collect();
    if 2 * max_cancellation(&mult, &parity, ambiguous) < off_total {
        return Ok(Verdict::Failure { witness: off.iter().map(|&k| survivors[k].clone()).collect() });
    }
    Ok(Verdict::Inconsistent {
        reason: "survivors differ from the identity pattern but could all still cancel off the identity support".into(),
    })
}

/// Maximal flow from even-degree to odd-degree survivors along flagged pairs,
/// node capacities the multiplicities.
fn max_cancellation(mult: &[usize], even: &[bool], pairs: &[(usize, usize)]) -> usize {
    let n = mult.len();
    let (src, sink) = (n, n + 1);
    let mut cap = alloc::vec![alloc::vec![0usize; n + 2]; n + 2];
    for k in 0..n {
        if even[k] {
            cap[src][k] = mult[k];
        } else {
            cap[k][sink] = mult[k];
        }
    }
    for &(x, y) in pairs {
        let (l, r) = if even[x] { (x, y) } else { (y, x) };
        cap[l][r] = usize::MAX / 4;
    }
    let mut flow = 0;
    loop {
        let mut prev = alloc::vec![usize::MAX; n + 2];
        prev[src] = src;
        let mut queue = alloc::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n + 2 {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[sink] == usize::MAX {
            return flow;
        }
        let mut push = usize::MAX;
        let mut v = sink;
        while v != src {
            push = push.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = sink;
        while v != src {
            cap[prev[v]][v] -= push;
            cap[v][prev[v]] += push;
            v = prev[v];
        }
        flow += push;
    }
}

/// Formal Euler class: `(support, tag) ↦ Σ (-1)^degree · dim`.
pub type EulerClass = BTreeMap<(Partition, Q), i64>;

pub fn euler_of_pieces(pieces: &[Piece]) -> EulerClass {
    let mut out = EulerClass::new();
    for pc in pieces {
        let sign = if pc.degree().rem_euclid(2) == 0 { 1 } else { -1 };
        *out.entry((pc.support.clone(), pc.tag.clone())).or_insert(0) += sign * pc.dim as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn euler_of_survivors(survivors: &[Survivor]) -> EulerClass {
    let mut out = EulerClass::new();
    for s in survivors {
        let sign = if s.degree.rem_euclid(2) == 0 { 1 } else { -1 };
        *out.entry((s.support.partition.clone(), s.tag.clone())).or_insert(0) += sign * s.multiplicity as i64;
    }
    out.retain(|_, v| *v != 0);
    out
}

/// A page of the spectral sequence, as `(support, column, h, tag, dim)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub index: usize,
    pub entries: Vec<PageEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageEntry {
    pub support: SupportClass,
    pub p: i64,
    pub h: i64,
    pub tag: Q,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub a: Side,
    pub b: Side,
    pub mode: DimMode,
    pub engine: Engine,
    pub entries: Vec<Survivor>,
    pub verdict: Verdict,
    pub euler_grid: EulerClass,
    pub euler_report: EulerClass,
    pub ambiguous: Vec<(usize, usize)>,
    pub provenance: Vec<String>,
    pub pages: Vec<Page>,
    pub layout: Layout,
}

impl CohomologyReport {
    pub fn euler_check(&self) -> bool {
        self.euler_grid == self.euler_report
    }

    pub fn expectation(&self) -> Expectation {
        expectation(self.a, self.b, self.mode)
    }

    /// Whether the verdict is what the theory predicts.
    pub fn matches_expectation(&self) -> bool {
        match (self.expectation(), &self.verdict) {
            (_, Verdict::Inconsistent { .. }) => false,
            (Expectation::Identity, Verdict::Identity) => true,
            (Expectation::PFunctor(n), Verdict::PFunctor(m)) => n == *m,
            (Expectation::IdentityTensorLambda { n, d }, Verdict::IdentityTensorLambda { n: m, d: e }) => n == *m && d == *e,
            (Expectation::Zero, Verdict::Zero) => true,
            (Expectation::Failure, Verdict::Failure { .. }) => true,
            (Expectation::Nonzero { degree, omega }, Verdict::Nonzero) => {
                self.entries.len() == 1
                    && self.entries[0].degree == degree
                    && self.entries[0].tag == qi(omega)
                    && self.entries[0].multiplicity == 1
            }
            (Expectation::Unknown, _) => true,
            _ => false,
        }
    }

    /// Process exit code: 0 as predicted (or nothing predicted), 2 for a
    /// predicted failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.matches_expectation() || !self.euler_check() {
            1
        } else if self.expectation() == Expectation::Failure {
            2
        } else {
            0
        }
    }

    /// Survivors as a sorted multiset, for comparing engines.
    pub fn signature(&self) -> Vec<(Partition, i64, Q, usize)> {
        let mut v: Vec<_> = self.entries.iter().map(Survivor::key).collect();
        v.sort();
        v
    }
}

/// Shared tail of both engines: classify and package.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble(
    layout: Layout,
    cache: &mut ClassCache,
    a: Side,
    b: Side,
    mode: DimMode,
    engine: Engine,
    pieces: &[Piece],
    mut survivors: Vec<Survivor>,
    mut provenance: Vec<String>,
    inconsistency: Option<String>,
) -> Result<CohomologyReport> {
    survivors.sort_by(|x, y| (x.degree, &x.support, &x.tag).cmp(&(y.degree, &y.support, &y.tag)));
    let ambiguous = ambiguous_pairs(&layout, &survivors);
    let mut verdict = match inconsistency {
        Some(reason) => Verdict::Inconsistent { reason },
        None => decide(&layout, cache, a, b, mode, &survivors, &ambiguous)?,
    };
    let euler_grid = euler_of_pieces(pieces);
    let euler_report = euler_of_survivors(&survivors);
    if euler_grid != euler_report && !matches!(verdict, Verdict::Inconsistent { .. }) {
        verdict = Verdict::Inconsistent { reason: "Euler characteristic not conserved".into() };
    }
    if !ambiguous.is_empty() {
        provenance.push(alloc::format!("degeneracy check: {} ambiguous pair(s)", ambiguous.len()));
    } else {
        provenance.push("degeneracy check: no higher differential possible".into());
    }
    let mut pages = Vec::new();
    if matches!(verdict, Verdict::Inconsistent { .. }) {
        let first = pieces
            .iter()
            .map(|pc| PageEntry { support: layout.describe(&pc.support), p: pc.p, h: pc.h, tag: pc.tag.clone(), dim: pc.dim })
            .collect();
        pages.push(Page { index: 1, entries: first });
        let second = survivors
            .iter()
            .map(|s| PageEntry {
                support: s.support.clone(),
                p: *s.positions.first().unwrap_or(&0),
                h: s.degree - *s.positions.first().unwrap_or(&0),
                tag: s.tag.clone(),
                dim: s.multiplicity,
            })
            .collect();
        pages.push(Page { index: 2, entries: second });
    }
    Ok(CohomologyReport {
        a,
        b,
        mode,
        engine,
        entries: survivors,
        verdict,
        euler_grid,
        euler_report,
        ambiguous,
        provenance,
        pages,
        layout,
    })
}

/// `ω_main - q/d`.
pub(crate) fn tag_of(omega_main: i64, q: usize, d: usize) -> Q {
    qi(omega_main) - qfrac(q as i64, d as i64)
}
