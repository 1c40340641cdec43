//! Matrix engine: every multiplicity space is an explicit space of invariants in
//! `∧^q(ρ_A ⊗ Q^d)` and every induced map is a rational matrix.
//!
//! A summand of `P^{iR} ⋆ P^j` is an `S_N`-orbit of label pairs `(a, b)`. Its
//! invariant sections are the `S_A`-invariants at the canonical representative,
//! `A = J1 ∩ J2`, spread over the orbit by the transport `T_g`. A component of
//! the differential into the representative `y0` of another orbit sums the
//! restriction maps out of every orbit member that maps to `y0`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::report::{self, tag_of, CohomologyReport, DimMode, Engine, Piece, Survivor};
use super::support::{ClassCache, Layout, Partition};
use crate::diagcomb::{canonical_pair, enum_index, epsilon, DiagLabel, Side};
use crate::error::{internal_err, param_err, Error, Result};
use crate::linalg::{qi, EchelonSpan, Matrix, Q};
use crate::permgroup::rho::centered_delta;
use crate::permgroup::{invariant_span_graded, RhoSpace};
use crate::wedge::{self, Sparse, WedgeBasis};

/// Largest `|J1 ∩ J2|` handled; the invariant search enumerates `S_A`.
pub const MAX_OVERLAP: usize = 8;

/// Matrices between pieces, keyed by (source, target).
type Blocks = BTreeMap<(usize, usize), Matrix>;

/// Invariant bases keyed by `(|A|, q)`, computed on `{1, …, |A|}`.
pub struct FiberCache {
    d: usize,
    spans: BTreeMap<(usize, usize), EchelonSpan>,
}

impl FiberCache {
    pub fn new(d: usize) -> Self {
        FiberCache { d, spans: BTreeMap::new() }
    }

    pub fn get(&mut self, m: usize, q: usize) -> Result<&EchelonSpan> {
        if m > MAX_OVERLAP {
            return Err(Error::Bound(alloc::format!("overlap {m} exceeds the concrete engine limit {MAX_OVERLAP}")));
        }
        if !self.spans.contains_key(&(m, q)) {
            let span = invariant_span_graded(m, self.d, q)?;
            self.spans.insert((m, q), span);
        }
        Ok(&self.spans[&(m, q)])
    }

    pub fn dim(&mut self, m: usize, q: usize) -> Result<usize> {
        if q > m.saturating_sub(1) * self.d {
            return Ok(0);
        }
        Ok(self.get(m, q)?.rank())
    }
}

/// An `S_N`-orbit of label pairs with its geometric data.
#[derive(Clone, Debug)]
struct Orbit {
    i: usize,
    j: usize,
    a: DiagLabel,
    b: DiagLabel,
    overlap: Vec<usize>,
    support: Partition,
    h_base: i64,
    omega_blocks: Vec<i64>,
}

fn intersect(x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter().copied().filter(|v| y.contains(v)).collect()
}

fn minus(x: &[usize], y: &[usize]) -> Vec<usize> {
    x.iter().copied().filter(|v| !y.contains(v)).collect()
}

/// Sign of the permutation sorting `g(s)` for sorted `s`.
fn sort_sign(g: &[usize], s: &[usize]) -> i64 {
    let img: Vec<usize> = s.iter().map(|&v| g[v - 1]).collect();
    let mut inv = 0;
    for x in 0..img.len() {
        for y in x + 1..img.len() {
            if img[x] > img[y] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

pub(crate) struct Geometry {
    pub layout: Layout,
    pub d: usize,
}

impl Geometry {
    /// Degree offset `(1 + ℓ - j - #blocks)·d` and the ω exponents per block.
    fn orbit_data(&self, a: &DiagLabel, b: &DiagLabel, j: usize, support: &Partition) -> Result<(i64, Vec<i64>)> {
        let l = &self.layout;
        let overlap = intersect(&a.j_set, &b.j_set).len();
        let (bz1, bz2) = l.side_block_counts(a, b);
        let total = l.outer() + l.big_n;
        let excess = total as i64 - bz1 as i64 - bz2 as i64 + support.len() as i64;
        if excess != overlap.saturating_sub(1) as i64 {
            return Err(internal_err!("excess rank {excess} does not match overlap {overlap} for {:?} / {:?}", a, b));
        }
        let h_base = (1 + l.ell as i64 - j as i64 - support.len() as i64) * self.d as i64;
        let inside = l.a_blocks_inside(a, b, support);
        let zs = l.z_coords_inside(support);
        let omega = inside.iter().zip(zs.iter()).map(|(&r, &z)| 1 - r as i64 + z as i64).collect();
        Ok((h_base, omega))
    }
}

/// The computed first page on all class-representative supports.
pub(crate) struct FirstPage {
    pub pieces: Vec<Piece>,
    /// piece index of `(orbit, q)`
    index: BTreeMap<(usize, usize), usize>,
    /// orbit of each piece
    piece_orbit: Vec<usize>,
    orbits: Vec<Orbit>,
    orbit_of: BTreeMap<(DiagLabel, DiagLabel), usize>,
}

fn enumerate(a: Side, b: Side, geo: &Geometry, fibers: &mut FiberCache, cache: &mut ClassCache) -> Result<FirstPage> {
    let la: Vec<Vec<DiagLabel>> = (0..=a.ell).map(|j| enum_index(a.ell, a.n, j)).collect::<Result<_>>()?;
    let lb: Vec<Vec<DiagLabel>> = (0..=b.ell).map(|i| enum_index(b.ell, b.n, i)).collect::<Result<_>>()?;
    let mut orbits = Vec::new();
    let mut orbit_of = BTreeMap::new();
    for (j, xs) in la.iter().enumerate() {
        for (i, ys) in lb.iter().enumerate() {
            let mut reps: BTreeMap<(DiagLabel, DiagLabel), ()> = BTreeMap::new();
            for x in xs {
                for y in ys {
                    let (ra, rb, _) = canonical_pair(x, y);
                    reps.insert((ra, rb), ());
                }
            }
            for (ra, rb) in reps.into_keys() {
                let support = geo.layout.support(&ra, &rb);
                if cache.rep(&geo.layout, &support) != support {
                    continue;
                }
                let (h_base, omega_blocks) = geo.orbit_data(&ra, &rb, j, &support)?;
                let overlap = intersect(&ra.j_set, &rb.j_set);
                orbit_of.insert((ra.clone(), rb.clone()), orbits.len());
                orbits.push(Orbit { i, j, a: ra, b: rb, overlap, support, h_base, omega_blocks });
            }
        }
    }
    let mut pieces = Vec::new();
    let mut index = BTreeMap::new();
    let mut piece_orbit = Vec::new();
    for (k, o) in orbits.iter().enumerate() {
        let m = o.overlap.len();
        for q in 0..=m.saturating_sub(1) * geo.d {
            let dim = fibers.dim(m, q)?;
            if dim == 0 {
                continue;
            }
            index.insert((k, q), pieces.len());
            piece_orbit.push(k);
            pieces.push(Piece {
                support: o.support.clone(),
                i: o.i,
                j: o.j,
                q,
                p: o.j as i64 - o.i as i64,
                h: o.h_base + q as i64,
                tag: tag_of(o.omega_blocks[0], q, geo.d),
                omega_blocks: o.omega_blocks.clone(),
                dim,
            });
        }
    }
    Ok(FirstPage { pieces, index, piece_orbit, orbits, orbit_of })
}

/// `T_g`: carries a fiber vector at the representative to the orbit member `g·rep`.
fn transport(g: &[usize], rep: &Orbit, target_overlap: &[usize], v: &Sparse<Q>, d: usize) -> Sparse<Q> {
    let src = RhoSpace::new(rep.overlap.clone(), d);
    let tgt = RhoSpace::new(target_overlap.to_vec(), d);
    let cols = src.permutation_columns(&|r| g[r - 1], &tgt);
    let j1 = &rep.a.j_set;
    let j2 = &rep.b.j_set;
    let mut sign = sort_sign(g, j1) * sort_sign(g, j2);
    if d % 2 == 1 {
        sign *= sort_sign(g, &minus(j2, j1));
    }
    wedge::scale(&wedge::exterior_apply(&cols, v), &qi(sign))
}

/// A component of the differential out of one orbit member into `y0`.
enum Step {
    /// horizontal: `A ∪ {y}`, wedge with the volume of `e_y - mean`
    Extend { y: usize, sign: i64 },
    /// vertical: restriction from `A` to `A \ {y}`
    Restrict { sign: i64 },
}

struct Pred {
    a: DiagLabel,
    b: DiagLabel,
    step: Step,
}

fn horizontal_preds(y0a: &DiagLabel, y0b: &DiagLabel, d: usize) -> Vec<Pred> {
    let mut out = Vec::new();
    for &c in &y0a.i_set {
        for &y in &y0a.j_set {
            let a = y0a.retract(c, y).expect("c in I and y in J");
            let s = minus(&y0b.j_set, &a.j_set);
            let mut sign = epsilon(&a.j_set, y);
            if d % 2 == 1 && s.contains(&y) {
                sign *= epsilon(&s, y);
            }
            out.push(Pred { a, b: y0b.clone(), step: Step::Extend { y, sign } });
        }
    }
    out
}

fn vertical_preds(y0a: &DiagLabel, y0b: &DiagLabel, j: usize) -> Vec<Pred> {
    let mut out = Vec::new();
    for c in y0b.i_complement() {
        let y = y0b.mu_of(c).expect("c in the complement");
        let b = y0b.extend(c).expect("extension exists");
        let sign = if j.is_multiple_of(2) { 1 } else { -1 } * epsilon(&y0b.j_set, y);
        out.push(Pred { a: y0a.clone(), b, step: Step::Restrict { sign } });
    }
    out
}

/// Builds all same-support blocks. Components between different supports are
/// only counted: into a larger support they vanish on cohomology sheaves, into
/// a smaller one they are left to the degeneracy check.
fn differentials(
    b: Side,
    geo: &Geometry,
    page: &FirstPage,
    fibers: &mut FiberCache,
) -> Result<(Blocks, Vec<String>)> {
    let d = geo.d;
    // dense images per (source piece, target piece), one per source basis vector
    let mut images: BTreeMap<(usize, usize), Vec<Vec<Q>>> = BTreeMap::new();
    let (mut into_larger, mut into_smaller) = (0usize, 0usize);
    for (yk, y0) in page.orbits.iter().enumerate() {
        let mut preds = Vec::new();
        if y0.j >= 1 {
            preds.extend(horizontal_preds(&y0.a, &y0.b, d));
        }
        if y0.i < b.ell {
            preds.extend(vertical_preds(&y0.a, &y0.b, y0.j));
        }
        for pred in preds {
            let support = geo.layout.support(&pred.a, &pred.b);
            if support != y0.support {
                if y0.support.refines(&support) {
                    into_larger += 1;
                } else {
                    into_smaller += 1;
                }
                continue;
            }
            let (ra, rb, g) = canonical_pair(&pred.a, &pred.b);
            let xk = *page
                .orbit_of
                .get(&(ra, rb))
                .ok_or_else(|| internal_err!("predecessor orbit on a representative support is missing"))?;
            let x = &page.orbits[xk];
            let x_overlap = intersect(&pred.a.j_set, &pred.b.j_set);
            let lift = match pred.step {
                Step::Extend { .. } => d,
                Step::Restrict { .. } => 0,
            };
            for q in 0..=x.overlap.len().saturating_sub(1) * d {
                let q2 = q + lift;
                let (Some(&src), Some(&tgt)) = (page.index.get(&(xk, q)), page.index.get(&(yk, q2))) else {
                    continue;
                };
                let src_span = fibers.get(x.overlap.len(), q)?.clone();
                let src_basis = WedgeBasis::new(x.overlap.len().saturating_sub(1) * d, q);
                let tgt_basis = WedgeBasis::new(y0.overlap.len().saturating_sub(1) * d, q2);
                let acc = images
                    .entry((src, tgt))
                    .or_insert_with(|| vec![vec![Q::zero(); tgt_basis.len()]; src_span.rank()]);
                for (col, row) in src_span.rows().iter().enumerate() {
                    let v = transport(&g, x, &x_overlap, &src_basis.to_sparse(row), d);
                    let img = apply_step(&pred.step, &x_overlap, &y0.overlap, &v, d)?;
                    for (slot, val) in acc[col].iter_mut().zip(tgt_basis.to_dense(&img)) {
                        *slot += val;
                    }
                }
            }
        }
    }
    let mut blocks = BTreeMap::new();
    for ((src, tgt), cols) in images {
        let (x, y) = (&page.pieces[src], &page.pieces[tgt]);
        let tgt_span = fibers.get(page.orbits[page.piece_orbit[tgt]].overlap.len(), y.q)?.clone();
        let mut m = Matrix::zeros(tgt_span.rank(), cols.len());
        for (col, dense) in cols.iter().enumerate() {
            let coords = tgt_span.coordinates(dense).ok_or_else(|| {
                internal_err!("induced map leaves the invariants (piece {:?} q={} -> {:?} q={})", x.support, x.q, y.support, y.q)
            })?;
            for (r, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    m.set(r, col, c);
                }
            }
        }
        blocks.insert((src, tgt), m);
    }
    let notes = vec![alloc::format!(
        "cross-support components: {into_larger} into a larger support (zero on cohomology sheaves), {into_smaller} into a smaller one"
    )];
    Ok((blocks, notes))
}

fn apply_step(step: &Step, x_overlap: &[usize], y_overlap: &[usize], v: &Sparse<Q>, d: usize) -> Result<Sparse<Q>> {
    let src = RhoSpace::new(x_overlap.to_vec(), d);
    let tgt = RhoSpace::new(y_overlap.to_vec(), d);
    match step {
        Step::Extend { y, sign } => {
            let mut grown = x_overlap.to_vec();
            grown.push(*y);
            grown.sort_unstable();
            if grown != y_overlap {
                return Err(internal_err!("horizontal step does not add {y} to the overlap"));
            }
            let inc = wedge::exterior_apply(&src.inclusion_columns(&tgt), v);
            let vol = tgt.volume(&centered_delta(y_overlap, *y));
            Ok(wedge::scale(&wedge::wedge(&inc, &vol), &qi(*sign)))
        }
        Step::Restrict { sign } => {
            if x_overlap.len() != y_overlap.len() + 1 || !y_overlap.iter().all(|t| x_overlap.contains(t)) {
                return Err(internal_err!("vertical step does not remove one element of the overlap"));
            }
            let proj = wedge::exterior_apply(&src.projection_columns(&tgt), v);
            Ok(wedge::scale(&proj, &qi(*sign)))
        }
    }
}

/// Runs the matrix engine.
pub fn run(a: Side, b: Side, mode: DimMode) -> Result<CohomologyReport> {
    if a.big_n() != b.big_n() {
        return Err(param_err!("n + ell must agree: ({}, {}) vs ({}, {})", a.ell, a.n, b.ell, b.n));
    }
    if a.n == 0 || b.n == 0 {
        return Err(param_err!("n must be positive"));
    }
    let d = mode.d();
    let geo = Geometry { layout: Layout::new(a, b), d };
    let mut fibers = FiberCache::new(d);
    let mut cache = ClassCache::default();
    let page = enumerate(a, b, &geo, &mut fibers, &mut cache)?;
    let (blocks, mut notes) = differentials(b, &geo, &page, &mut fibers)?;
    let mut inconsistency = None;

    let mut by_support: BTreeMap<Partition, Vec<usize>> = BTreeMap::new();
    for (k, pc) in page.pieces.iter().enumerate() {
        by_support.entry(pc.support.clone()).or_default().push(k);
    }
    let mut survivors: Vec<Survivor> = Vec::new();
    for members in by_support.values() {
        let local: Vec<Piece> = members.iter().map(|&k| page.pieces[k].clone()).collect();
        let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(n, &k)| (k, n)).collect();
        let mut local_blocks = BTreeMap::new();
        for ((s, t), m) in &blocks {
            if let (Some(&ls), Some(&lt)) = (pos.get(s), pos.get(t)) {
                local_blocks.insert((ls, lt), m.clone());
            }
        }
        match report::local_cohomology(&geo.layout, &local, &local_blocks) {
            Ok(s) => survivors.extend(s),
            Err(reason) => {
                inconsistency.get_or_insert(reason);
            }
        }
    }
    notes.push(alloc::format!("concrete engine: {} orbit(s), {} piece(s)", page.orbits.len(), page.pieces.len()));
    report::assemble(geo.layout, &mut cache, a, b, mode, Engine::Concrete, &page.pieces, survivors, notes, inconsistency)
}
