//! Symmetric groups: permutations, conjugacy classes, characters of the standard
//! representation and its wedge powers, and explicit matrix models.

pub mod rho;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{param_err, Error, Result};
use crate::linalg::{factorial, qi, EchelonSpan, Matrix, Q};
use crate::wedge::{exterior_apply_basis, WedgeBasis};

pub use rho::{canonical_map, MapDirection, RhoSpace};

/// Largest group index accepted by the character path.
pub const MAX_CHARACTER_M: usize = 12;

/// A permutation of `{0, …, m-1}`; rendered 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one: Vec<usize> = self.images.iter().map(|x| x + 1).collect();
        write!(f, "Perm{:?}", one)
    }
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { images: (0..m).collect() }
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x >= m || seen[x] {
                return Err(param_err!("not a bijection: {:?}", images));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Build from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(param_err!("1-based images expected"));
        }
        Self::new(images.iter().map(|x| x - 1).collect())
    }

    /// The adjacent transposition swapping `i` and `i + 1`.
    pub fn adjacent(m: usize, i: usize) -> Self {
        let mut p = Self::identity(m);
        p.images.swap(i, i + 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, j: usize) -> Permutation {
        let mut out = Self::identity(self.degree());
        for _ in 0..j {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn cycle_type(&self) -> CycleType {
        let m = self.degree();
        let mut seen = vec![false; m];
        let mut parts = Vec::new();
        for s in 0..m {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            parts.push(len);
        }
        CycleType::new(parts)
    }

    pub fn sign(&self) -> i64 {
        let ct = self.cycle_type();
        let even_cycles = ct.parts.iter().filter(|&&k| k % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, &x)| *i == x).count()
    }

    /// All permutations of degree `m` in lexicographic order of image sequences.
    pub fn all(m: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..m).collect();
        let mut out = vec![Permutation { images: cur.clone() }];
        loop {
            // standard next-permutation step
            let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation { images: cur.clone() });
        }
    }
}

/// A partition of `m`, parts weakly decreasing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn fixed_points(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// Cycle type of `g^j` for `g` of this type.
    pub fn power(&self, j: usize) -> CycleType {
        let mut parts = Vec::new();
        for &k in &self.parts {
            let g = num_integer::gcd(k, j.max(1));
            let g = if j == 0 { k } else { g };
            for _ in 0..g {
                parts.push(k / g);
            }
        }
        CycleType::new(parts)
    }

    /// `m! / ∏ k^{m_k} m_k!`.
    pub fn class_size(&self) -> u64 {
        let m = self.degree() as u64;
        let mut mult: BTreeMap<usize, u64> = BTreeMap::new();
        for &k in &self.parts {
            *mult.entry(k).or_default() += 1;
        }
        let mut denom: u64 = 1;
        for (k, mk) in mult {
            denom *= (k as u64).pow(mk as u32) * factorial(mk);
        }
        factorial(m) / denom
    }

    /// A permutation of this type: consecutive blocks form the cycles.
    pub fn representative(&self) -> Permutation {
        let m = self.degree();
        let mut images = vec![0; m];
        let mut start = 0;
        for &k in &self.parts {
            for t in 0..k {
                images[start + t] = start + (t + 1) % k;
            }
            start += k;
        }
        Permutation { images }
    }

    pub fn sign(&self) -> i64 {
        if self.parts.iter().filter(|&&k| k % 2 == 0).count() % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

pub fn partitions(m: usize) -> Vec<CycleType> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if rem == 0 {
            out.push(CycleType { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Conjugacy classes of `S_m` with their sizes, ordered by cycle type.
pub fn conjugacy_classes(m: usize) -> Result<Vec<(CycleType, u64)>> {
    if m == 0 {
        return Err(param_err!("group index m must be positive"));
    }
    if m > MAX_CHARACTER_M {
        return Err(crate::error::Error::Bound(alloc::format!("character tables are built for m <= {MAX_CHARACTER_M}, got {m}")));
    }
    Ok(partitions(m).into_iter().map(|c| {
        let s = c.class_size();
        (c, s)
    }).collect())
}

/// A class function on `S_m` with exact rational values.
#[derive(Clone, PartialEq, Eq)]
pub struct ClassFunction {
    m: usize,
    values: BTreeMap<CycleType, Q>,
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.values.iter().map(|(k, v)| (k, crate::linalg::fmt_q(v)))).finish()
    }
}

impl ClassFunction {
    pub fn from_fn(m: usize, f: impl Fn(&CycleType) -> Q) -> Result<Self> {
        let classes = conjugacy_classes(m)?;
        Ok(ClassFunction { m, values: classes.iter().map(|(c, _)| (c.clone(), f(c))).collect() })
    }

    pub fn trivial(m: usize) -> Result<Self> {
        Self::from_fn(m, |_| Q::one())
    }

    pub fn sign(m: usize) -> Result<Self> {
        Self::from_fn(m, |c| qi(c.sign()))
    }

    pub fn degree_m(&self) -> usize {
        self.m
    }

    pub fn value(&self, c: &CycleType) -> &Q {
        &self.values[c]
    }

    pub fn values(&self) -> &BTreeMap<CycleType, Q> {
        &self.values
    }

    /// Value at the identity, i.e. the dimension for a genuine character.
    pub fn dimension(&self) -> Q {
        self.values[&CycleType::new(vec![1; self.m])].clone()
    }

    fn zip(&self, other: &ClassFunction, f: impl Fn(&Q, &Q) -> Q) -> ClassFunction {
        assert_eq!(self.m, other.m);
        ClassFunction {
            m: self.m,
            values: self.values.iter().map(|(c, v)| (c.clone(), f(v, &other.values[c]))).collect(),
        }
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        self.zip(other, |a, b| a + b)
    }

    pub fn tensor(&self, other: &ClassFunction) -> ClassFunction {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, s: &Q) -> ClassFunction {
        ClassFunction { m: self.m, values: self.values.iter().map(|(c, v)| (c.clone(), v * s)).collect() }
    }

    /// `(1/m!) Σ_g a(g) b(g)`; characters of `S_m` are real so no conjugation.
    pub fn inner(&self, other: &ClassFunction) -> Q {
        assert_eq!(self.m, other.m);
        let mut s = Q::zero();
        for (c, v) in &self.values {
            s += v * &other.values[c] * qi(c.class_size() as i64);
        }
        s / qi(factorial(self.m as u64) as i64)
    }

    pub fn is_integral(&self) -> bool {
        self.values.values().all(|v| v.is_integer())
    }
}

/// Character of the standard representation `ρ_m`: fixed points minus one.
pub fn character_standard(m: usize) -> Result<ClassFunction> {
    if m < 2 {
        return Err(param_err!("standard representation needs m >= 2, got {m}"));
    }
    ClassFunction::from_fn(m, |c| qi(c.fixed_points() as i64 - 1))
}

/// Character of `∧^k V` from the character of `V`, by the Newton recursion
/// `k·χ_{∧^k}(g) = Σ_{j=1..k} (-1)^{j-1} χ_V(g^j) χ_{∧^{k-j}}(g)`.
pub fn exterior_power_character(chi: &ClassFunction, k: usize) -> Result<ClassFunction> {
    if !chi.is_integral() {
        return Err(param_err!("exterior powers need a genuine (integral) character"));
    }
    let mut values = BTreeMap::new();
    for c in chi.values.keys() {
        // e[t] = χ_{∧^t}(g) for the fixed class
        let mut e: Vec<Q> = vec![Q::one()];
        for t in 1..=k {
            let mut s = Q::zero();
            for j in 1..=t {
                let term = chi.value(&c.power(j)) * &e[t - j];
                if j % 2 == 1 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            e.push(s / qi(t as i64));
        }
        values.insert(c.clone(), e[k].clone());
    }
    Ok(ClassFunction { m: chi.m, values })
}

/// Multiplicity of the trivial representation in `chi`.
pub fn invariant_dimension(chi: &ClassFunction) -> Result<u64> {
    let t = ClassFunction::trivial(chi.m)?;
    let x = chi.inner(&t);
    if !crate::linalg::is_nonnegative_integer(&x) {
        return Err(Error::Internal(alloc::format!(
            "invariant multiplicity {} is not a non-negative integer",
            crate::linalg::fmt_q(&x)
        )));
    }
    crate::linalg::to_i64(&x).map(|v| v as u64).ok_or_else(|| Error::Internal("overflow".into()))
}

/// Character of `∧^q(ρ_m^{⊕d})`.
pub fn wedge_standard_character(m: usize, d: usize, q: usize) -> Result<ClassFunction> {
    let rho = character_standard(m)?.scale(&qi(d as i64));
    exterior_power_character(&rho, q)
}

/// Explicit matrix model of `∧^q(ρ_m^{⊕d})` on the adjacent transpositions.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub m: usize,
    pub d: usize,
    pub q: usize,
    pub basis: WedgeBasis,
    pub generators: Vec<(Permutation, Matrix)>,
}

impl MatrixRep {
    pub fn new(m: usize, d: usize, q: usize) -> Result<Self> {
        if m < 1 {
            return Err(param_err!("m must be positive"));
        }
        let space = RhoSpace::standard(m, d);
        if space.dim() > crate::wedge::MAX_WEDGE_DIM {
            return Err(Error::Bound(alloc::format!("(m-1)d = {} too large for the matrix model", space.dim())));
        }
        let basis = WedgeBasis::new(space.dim(), q);
        let generators = (0..m.saturating_sub(1))
            .map(|i| {
                let g = Permutation::adjacent(m, i);
                let mat = space.wedge_action_matrix(&g, &basis);
                (g, mat)
            })
            .collect();
        Ok(MatrixRep { m, d, q, basis, generators })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Checks `s_i² = 1`, `(s_i s_{i+1})³ = 1` and `(s_i s_j)² = 1` for `|i-j| > 1`.
    pub fn satisfies_coxeter_relations(&self) -> bool {
        let id = Matrix::identity(self.dimension());
        let g: Vec<&Matrix> = self.generators.iter().map(|(_, m)| m).collect();
        for i in 0..g.len() {
            if g[i].mul(g[i]) != id {
                return false;
            }
            for j in i + 1..g.len() {
                let p = g[i].mul(g[j]);
                let order = if j == i + 1 { 3 } else { 2 };
                let mut acc = Matrix::identity(self.dimension());
                for _ in 0..order {
                    acc = acc.mul(&p);
                }
                if acc != id {
                    return false;
                }
            }
        }
        true
    }

    /// Trace of the model on a permutation (cross-check for characters).
    pub fn trace(&self, g: &Permutation) -> Q {
        let space = RhoSpace::standard(self.m, self.d);
        let mat = space.wedge_action_matrix(g, &self.basis);
        (0..mat.rows()).fold(Q::zero(), |s, i| s + mat.get(i, i))
    }
}

/// `Σ_{g ∈ S_m} ∧^q(g)` on `∧^q(ρ_m^{⊕d})`, as an integer matrix `[target][source]`.
pub fn reynolds_sum(m: usize, d: usize, q: usize) -> Vec<Vec<i64>> {
    let space = RhoSpace::standard(m, d);
    let basis = WedgeBasis::new(space.dim(), q);
    let n = basis.len();
    let mut r = vec![vec![0i64; n]; n];
    for g in Permutation::all(m) {
        let cols = space.permutation_columns_i64(&g, &space);
        for (src, &mask) in basis.masks().iter().enumerate() {
            for (tm, x) in exterior_apply_basis(&cols, mask) {
                let t = basis.index_of(tm).expect("permutation preserves wedge degree");
                r[t][src] += x;
            }
        }
    }
    r
}

/// The Reynolds projector `(1/|G|) Σ_g g` of the model.
pub fn reynolds_projector(rep: &MatrixRep) -> Matrix {
    let r = reynolds_sum(rep.m, rep.d, rep.q);
    let order = qi(factorial(rep.m as u64) as i64);
    let rows: Vec<Vec<Q>> = r.iter().map(|row| row.iter().map(|&x| qi(x) / &order).collect()).collect();
    if rows.is_empty() {
        return Matrix::zeros(0, 0);
    }
    Matrix::from_rows(&rows)
}

/// Basis (RREF rows) of the invariant subspace of `∧^q(ρ_m^{⊕d})`.
pub fn invariant_span(m: usize, d: usize, q: usize) -> EchelonSpan {
    let r = reynolds_sum(m, d, q);
    let n = r.len();
    let mut span = EchelonSpan::new(n);
    for src in 0..n {
        let col: Vec<Q> = r.iter().map(|row| qi(row[src])).collect();
        if col.iter().any(|x| !x.is_zero()) {
            span.insert(col);
        }
    }
    span
}

/// Same span as [`invariant_span`], found degree by degree.
///
/// The invariants split by the multidegree `(q_1, …, q_d)` counting factors
/// from each copy of `ρ_m`. For every multidegree the expected dimension comes
/// from characters, and orbit sums of basis wedges are added until it is reached.
pub fn invariant_span_graded(m: usize, d: usize, q: usize) -> Result<EchelonSpan> {
    let space = RhoSpace::standard(m, d);
    if space.dim() > crate::wedge::MAX_WEDGE_DIM {
        return Err(Error::Bound(alloc::format!("(m-1)d = {} too large for the matrix model", space.dim())));
    }
    let basis = WedgeBasis::new(space.dim(), q);
    let mut span = EchelonSpan::new(basis.len());
    if m < 2 {
        if q == 0 {
            span.insert(vec![Q::one()]);
        }
        return Ok(span);
    }
    let w = m - 1;
    let rho = character_standard(m)?;
    let multidegree = |mask: crate::wedge::Mask| -> Vec<usize> {
        (0..d).map(|t| ((mask >> (t * w)) & ((1 << w) - 1)).count_ones() as usize).collect()
    };
    let mut by_degree: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (i, &mask) in basis.masks().iter().enumerate() {
        by_degree.entry(multidegree(mask)).or_default().push(i);
    }
    let group: Vec<Vec<Vec<(usize, i64)>>> =
        Permutation::all(m).iter().map(|g| space.permutation_columns_i64(g, &space)).collect();
    for (deg, members) in by_degree {
        let mut chi = ClassFunction::trivial(m)?;
        for &k in &deg {
            chi = chi.tensor(&exterior_power_character(&rho, k)?);
        }
        let target = span.rank() + invariant_dimension(&chi)? as usize;
        for i in members {
            if span.rank() == target {
                break;
            }
            let mut acc: BTreeMap<crate::wedge::Mask, i64> = BTreeMap::new();
            for cols in &group {
                for (tm, x) in exterior_apply_basis(cols, basis.mask(i)) {
                    *acc.entry(tm).or_insert(0) += x;
                }
            }
            let mut v = vec![Q::zero(); basis.len()];
            for (tm, x) in acc {
                if x != 0 {
                    v[basis.index_of(tm).expect("degree preserved")] = qi(x);
                }
            }
            span.insert(v);
        }
        if span.rank() != target {
            return Err(Error::Internal(alloc::format!("orbit sums fall short of the invariant dimension (m={m}, d={d}, q={q})")));
        }
    }
    Ok(span)
}

pub fn reynolds_invariants(rep: &MatrixRep) -> Vec<Vec<Q>> {
    invariant_span(rep.m, rep.d, rep.q).rows().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_classes() {
        let c = conjugacy_classes(3).unwrap();
        let got: Vec<(Vec<usize>, u64)> = c.iter().map(|(t, s)| (t.parts().to_vec(), *s)).collect();
        assert_eq!(got, vec![(vec![1, 1, 1], 1), (vec![2, 1], 3), (vec![3], 2)]);
    }

    #[test]
    fn class_sizes_match_enumeration() {
        for m in 1..=6 {
            let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
            for g in Permutation::all(m) {
                *counts.entry(g.cycle_type()).or_default() += 1;
            }
            for (c, s) in conjugacy_classes(m).unwrap() {
                assert_eq!(counts[&c], s, "m={m} class {c:?}");
            }
        }
    }

    #[test]
    fn power_map() {
        let c = CycleType::new(vec![4, 2]);
        assert_eq!(c.power(2).parts(), &[2, 2, 1, 1]);
        let g = c.representative();
        assert_eq!(g.pow(2).cycle_type(), c.power(2));
        assert_eq!(g.pow(3).cycle_type(), c.power(3));
    }
}
