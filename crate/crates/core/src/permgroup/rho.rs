//! Coordinate model of `ρ_A ⊗ Q^d`.
//!
//! `ρ_A` is the space of sum-zero functions on a finite label set `A`, with basis
//! `e_a - e_{min A}` for `a ∈ A \ {min A}`. The `d` copies are stacked copy-major:
//! basis index `t·(|A|-1) + p` for copy `t` and position `p` in `A \ {min A}`.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::Permutation;
use crate::error::{param_err, Result};
use crate::linalg::{qfrac, qi, EchelonSpan, Matrix, Q};
use crate::wedge::{self, exterior_apply, exterior_apply_basis, Sparse, WedgeBasis};

pub type Columns<T> = Vec<Vec<(usize, T)>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoSpace {
    labels: Vec<usize>,
    d: usize,
}

impl RhoSpace {
    /// `labels` must be strictly increasing.
    pub fn new(labels: Vec<usize>, d: usize) -> Self {
        debug_assert!(labels.windows(2).all(|w| w[0] < w[1]));
        RhoSpace { labels, d }
    }

    pub fn standard(m: usize, d: usize) -> Self {
        Self::new((0..m).collect(), d)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn copies(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.labels.len().saturating_sub(1) * self.d
    }

    fn min(&self) -> usize {
        self.labels[0]
    }

    fn position(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Basis index of `(e_label - e_min) ⊗ t`; `None` for the minimum label.
    pub fn index(&self, label: usize, t: usize) -> Option<usize> {
        let p = self.position(label)?;
        if p == 0 {
            None
        } else {
            Some(t * (self.labels.len() - 1) + p - 1)
        }
    }

    /// Coordinates of `f ⊗ e_t` for a sum-zero function `f` given by its values.
    pub fn function_coords(&self, values: &[(usize, Q)], t: usize) -> Vec<(usize, Q)> {
        values
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .filter_map(|(a, x)| self.index(*a, t).map(|i| (i, x.clone())))
            .collect()
    }

    /// `(label, copy)` for each basis index.
    fn basis_element(&self, idx: usize) -> (usize, usize) {
        let w = self.labels.len() - 1;
        (self.labels[idx % w + 1], idx / w)
    }

    /// `ρ_A → ρ_{A'}` extension by zero, for `A ⊂ A'`.
    pub fn inclusion_columns(&self, target: &RhoSpace) -> Columns<Q> {
        (0..self.dim())
            .map(|i| {
                let (a, t) = self.basis_element(i);
                let f = [(a, Q::one()), (self.min(), -Q::one())];
                target.function_coords(&f, t)
            })
            .collect()
    }

    /// `ρ_A → ρ_{A'}` restriction followed by removing the mean, for `A' ⊂ A`.
    pub fn projection_columns(&self, target: &RhoSpace) -> Columns<Q> {
        let size = target.labels.len() as i64;
        (0..self.dim())
            .map(|i| {
                let (a, t) = self.basis_element(i);
                let mut vals: Vec<(usize, Q)> = target.labels.iter().map(|&b| (b, Q::zero())).collect();
                let mut total = Q::zero();
                for (b, v) in vals.iter_mut() {
                    if *b == a {
                        *v += Q::one();
                    }
                    if *b == self.min() {
                        *v -= Q::one();
                    }
                    total += &*v;
                }
                let mean = total / qi(size);
                for (_, v) in vals.iter_mut() {
                    *v -= &mean;
                }
                target.function_coords(&vals, t)
            })
            .collect()
    }

    /// Transport along a bijection `g` from these labels onto the target labels.
    pub fn permutation_columns(&self, g: &dyn Fn(usize) -> usize, target: &RhoSpace) -> Columns<Q> {
        self.permutation_columns_i64_fn(g, target)
            .into_iter()
            .map(|c| c.into_iter().map(|(i, x)| (i, qi(x))).collect())
            .collect()
    }

    pub fn permutation_columns_i64(&self, g: &Permutation, target: &RhoSpace) -> Columns<i64> {
        self.permutation_columns_i64_fn(&|x| g.apply(x), target)
    }

    fn permutation_columns_i64_fn(&self, g: &dyn Fn(usize) -> usize, target: &RhoSpace) -> Columns<i64> {
        (0..self.dim())
            .map(|i| {
                let (a, t) = self.basis_element(i);
                let mut c = Vec::new();
                if let Some(j) = target.index(g(a), t) {
                    c.push((j, 1));
                }
                if let Some(j) = target.index(g(self.min()), t) {
                    c.push((j, -1));
                }
                c
            })
            .collect()
    }

    /// `∧^q(g)` in the given wedge basis (for the standard space on `0..m`).
    pub fn wedge_action_matrix(&self, g: &Permutation, basis: &WedgeBasis) -> Matrix {
        let cols = self.permutation_columns(&|x| g.apply(x), self);
        exterior_matrix(&cols, basis, basis)
    }

    /// `vol(T ⊗ w) = (w⊗t_0) ∧ … ∧ (w⊗t_{d-1})` for a sum-zero function `w`.
    pub fn volume(&self, w: &[(usize, Q)]) -> Sparse<Q> {
        let mut acc = wedge::unit::<Q>();
        for t in 0..self.d {
            let v = wedge::vector(&self.function_coords(w, t));
            acc = wedge::wedge(&acc, &v);
        }
        acc
    }
}

/// Dense matrix of `∧L` between the given wedge bases.
pub fn exterior_matrix(cols: &Columns<Q>, src: &WedgeBasis, tgt: &WedgeBasis) -> Matrix {
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (j, &mask) in src.masks().iter().enumerate() {
        for (tm, x) in exterior_apply_basis(cols, mask) {
            let i = tgt.index_of(tm).expect("image outside target wedge basis");
            m.set(i, j, x);
        }
    }
    m
}

pub fn apply_exterior(cols: &Columns<Q>, v: &Sparse<Q>) -> Sparse<Q> {
    exterior_apply(cols, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    /// `∧^q(ρ_A^{⊕d}) → ∧^q(ρ_{A'}^{⊕d})`, extension by zero.
    Inclusion,
    /// `∧^q(ρ_{A'}^{⊕d}) → ∧^q(ρ_A^{⊕d})`, restriction modulo constants.
    Surjection,
}

/// Canonical map between wedge powers of standard representations for `A ⊂ A'`.
/// `small` is `A`, `large` is `A'`; the direction picks source and target.
pub fn canonical_map(small: &[usize], large: &[usize], d: usize, q: usize, dir: MapDirection) -> Result<Matrix> {
    if small.is_empty() || !small.iter().all(|a| large.contains(a)) {
        return Err(param_err!("canonical map needs a non-empty A contained in A'"));
    }
    let mut s = small.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut l = large.to_vec();
    l.sort_unstable();
    l.dedup();
    let a = RhoSpace::new(s, d);
    let b = RhoSpace::new(l, d);
    let (src, tgt, cols) = match dir {
        MapDirection::Inclusion => (&a, &b, a.inclusion_columns(&b)),
        MapDirection::Surjection => (&b, &a, b.projection_columns(&a)),
    };
    if src.dim() > crate::wedge::MAX_WEDGE_DIM || tgt.dim() > crate::wedge::MAX_WEDGE_DIM {
        return Err(crate::error::Error::Bound("wedge dimension above 31".into()));
    }
    let sb = WedgeBasis::new(src.dim(), q);
    let tb = WedgeBasis::new(tgt.dim(), q);
    Ok(exterior_matrix(&cols, &sb, &tb))
}

/// Checks `M ∘ g = g ∘ M` for the adjacent transpositions of `A`, each acting on
/// `A'` by fixing `A' \ A`.
pub fn is_equivariant(small: &[usize], large: &[usize], d: usize, q: usize, dir: MapDirection) -> Result<bool> {
    let map = canonical_map(small, large, d, q, dir)?;
    let a = RhoSpace::new(small.to_vec(), d);
    let b = RhoSpace::new(large.to_vec(), d);
    let ab = WedgeBasis::new(a.dim(), q);
    let bb = WedgeBasis::new(b.dim(), q);
    for w in small.windows(2) {
        let (x, y) = (w[0], w[1]);
        let swap = move |z: usize| if z == x { y } else if z == y { x } else { z };
        let ga = exterior_matrix(&a.permutation_columns(&swap, &a), &ab, &ab);
        let gb = exterior_matrix(&b.permutation_columns(&swap, &b), &bb, &bb);
        let ok = match dir {
            MapDirection::Inclusion => map.mul(&ga) == gb.mul(&map),
            MapDirection::Surjection => map.mul(&gb) == ga.mul(&map),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank data of the canonical surjection `∧^q ρ_m^{⊕d} → ∧^q ρ_{m-1}^{⊕d}`
/// restricted to `S_m`-invariants, landing in `S_{m-1}`-invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRestriction {
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl InvariantRestriction {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.source_dim.min(self.target_dim)
    }
}

pub fn invariant_surjection(m: usize, d: usize, q: usize) -> Result<InvariantRestriction> {
    if m < 2 {
        return Err(param_err!("need m >= 2"));
    }
    let large = RhoSpace::standard(m, d);
    let small = RhoSpace::standard(m - 1, d);
    let src_inv = super::invariant_span(m, d, q);
    let tgt_inv = super::invariant_span(m - 1, d, q);
    let cols = large.projection_columns(&small);
    let lb = WedgeBasis::new(large.dim(), q);
    let sb = WedgeBasis::new(small.dim(), q);
    let mut image = EchelonSpan::new(sb.len());
    for v in src_inv.rows() {
        let img = exterior_apply(&cols, &lb.to_sparse(v));
        let dense = sb.to_dense(&img);
        if !tgt_inv.contains(&dense) {
            return Err(crate::error::internal_err!("restricted invariant is not invariant (m={m}, d={d}, q={q})"));
        }
        image.insert(dense);
    }
    Ok(InvariantRestriction { source_dim: src_inv.rank(), target_dim: tgt_inv.rank(), rank: image.rank() })
}

/// Sum-zero function `e_y - mean_A` on `A`.
pub fn centered_delta(labels: &[usize], y: usize) -> Vec<(usize, Q)> {
    let n = labels.len() as i64;
    labels
        .iter()
        .map(|&b| (b, if b == y { qi(1) - qfrac(1, n) } else { -qfrac(1, n) }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusion_then_surjection_is_identity_in_degree_one() {
        let inc = canonical_map(&[0, 2], &[0, 1, 2, 3], 1, 1, MapDirection::Inclusion).unwrap();
        let sur = canonical_map(&[0, 2], &[0, 1, 2, 3], 1, 1, MapDirection::Surjection).unwrap();
        assert_eq!(sur.mul(&inc), Matrix::identity(1));
    }

    #[test]
    fn equal_sets_give_identity() {
        let m = canonical_map(&[1, 2, 4], &[1, 2, 4], 2, 2, MapDirection::Surjection).unwrap();
        assert_eq!(m, Matrix::identity(6));
        let z = canonical_map(&[1, 2], &[1, 2, 3], 2, 0, MapDirection::Inclusion).unwrap();
        assert_eq!(z, Matrix::identity(1));
    }

    #[test]
    fn volume_of_centered_delta() {
        let s = RhoSpace::new(alloc::vec![0, 1, 2], 2);
        let v = s.volume(&centered_delta(&[0, 1, 2], 2));
        assert_eq!(v.len(), 4);
    }
}
