//! The invariant series `Λ*_m` of a `d`-dimensional variety, recorded as a
//! graded multiplicity: shift degree and canonical-bundle exponent.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{internal_err, param_err, Result};
use crate::permgroup::{invariant_dimension, invariant_span, wedge_standard_character};

/// Exponent of `ω_X` attached to an entry.
///
/// Above dimension two the invariant pieces are not line bundles, so only the
/// accumulated offset is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmegaTag {
    Tagged(i64),
    Untagged { offset: i64 },
}

impl OmegaTag {
    pub fn exponent(&self) -> Option<i64> {
        match self {
            OmegaTag::Tagged(e) => Some(*e),
            OmegaTag::Untagged { .. } => None,
        }
    }

    fn shifted(self, by: i64) -> OmegaTag {
        match self {
            OmegaTag::Tagged(e) => OmegaTag::Tagged(e + by),
            OmegaTag::Untagged { offset } => OmegaTag::Untagged { offset: offset + by },
        }
    }

    fn combine(self, other: OmegaTag) -> OmegaTag {
        match (self, other) {
            (OmegaTag::Tagged(a), OmegaTag::Tagged(b)) => OmegaTag::Tagged(a + b),
            (a, b) => OmegaTag::Untagged { offset: a.raw() + b.raw() },
        }
    }

    fn raw(self) -> i64 {
        match self {
            OmegaTag::Tagged(e) => e,
            OmegaTag::Untagged { offset } => offset,
        }
    }
}

impl fmt::Display for OmegaTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaTag::Tagged(e) => write!(f, "{e}"),
            OmegaTag::Untagged { offset: 0 } => write!(f, "untagged"),
            OmegaTag::Untagged { offset } => write!(f, "untagged{offset:+}"),
        }
    }
}

/// Finitely supported map `(shift degree, ω tag) → multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedMultiplicity {
    entries: BTreeMap<(i64, OmegaTag), u64>,
}

impl GradedMultiplicity {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::single(0, OmegaTag::Tagged(0), 1)
    }

    pub fn single(h: i64, tag: OmegaTag, mult: u64) -> Self {
        let mut g = Self::zero();
        g.insert(h, tag, mult);
        g
    }

    pub fn insert(&mut self, h: i64, tag: OmegaTag, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.entries.entry((h, tag)).or_insert(0) += mult;
    }

    pub fn get(&self, h: i64, tag: OmegaTag) -> u64 {
        self.entries.get(&(h, tag)).copied().unwrap_or(0)
    }

    /// Total multiplicity in shift degree `h`, over all tags.
    pub fn at_degree(&self, h: i64) -> u64 {
        self.entries.iter().filter(|((d, _), _)| *d == h).map(|(_, m)| m).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, OmegaTag, u64)> + '_ {
        self.entries.iter().map(|(&(h, t), &m)| (h, t, m))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_tagged(&self) -> bool {
        self.entries.keys().all(|(_, t)| matches!(t, OmegaTag::Tagged(_)))
    }

    pub fn add(&self, other: &GradedMultiplicity) -> GradedMultiplicity {
        let mut out = self.clone();
        for (h, t, m) in other.entries() {
            out.insert(h, t, m);
        }
        out
    }

    /// Convolution: degrees and tags add, multiplicities multiply.
    pub fn tensor(&self, other: &GradedMultiplicity) -> GradedMultiplicity {
        let mut out = GradedMultiplicity::zero();
        for (h1, t1, m1) in self.entries() {
            for (h2, t2, m2) in other.entries() {
                out.insert(h1 + h2, t1.combine(t2), m1 * m2);
            }
        }
        out
    }

    /// Translates every entry by the rule's shift and ω offset.
    pub fn omega_tag(&self, rule: TwistRule) -> GradedMultiplicity {
        let mut out = GradedMultiplicity::zero();
        for (h, t, m) in self.entries() {
            out.insert(h + rule.shift, t.shifted(rule.omega_offset), m);
        }
        out
    }

    /// Same multiplicity at degree `h` and at `top - h`.
    pub fn is_palindromic(&self, top: i64) -> bool {
        let degrees: Vec<i64> = self.entries.keys().map(|(h, _)| *h).collect();
        degrees.iter().all(|&h| self.at_degree(h) == self.at_degree(top - h))
    }
}

/// Global shift and ω offset of a summand: `(k-j)·d` and `-(k-j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwistRule {
    pub shift: i64,
    pub omega_offset: i64,
}

impl TwistRule {
    pub fn new(shift: i64, omega_offset: i64) -> Self {
        TwistRule { shift, omega_offset }
    }

    pub fn summand(k: usize, j: usize, d: usize) -> Self {
        let e = k as i64 - j as i64;
        TwistRule { shift: e * d as i64, omega_offset: -e }
    }
}

/// Tag of the invariant piece in degree `q` of `∧(ρ ⊗ Q^d)`: the `T`-factors
/// contribute `ω^{-1}` per `d` degrees.
fn degree_tag(q: usize, d: usize) -> Result<OmegaTag> {
    if d >= 3 {
        return Ok(OmegaTag::Untagged { offset: 0 });
    }
    if !q.is_multiple_of(d) {
        return Err(internal_err!("invariants in degree {q} for d = {d} carry no line-bundle tag"));
    }
    Ok(OmegaTag::Tagged(-((q / d) as i64)))
}

fn build(m: usize, d: usize, dim: impl Fn(usize) -> Result<u64>) -> Result<GradedMultiplicity> {
    if d == 0 {
        return Err(param_err!("fiber dimension d must be positive"));
    }
    if m <= 1 {
        return Ok(GradedMultiplicity::unit());
    }
    let mut out = GradedMultiplicity::zero();
    for q in 0..=(m - 1) * d {
        let k = dim(q)?;
        if k > 0 {
            out.insert(q as i64, degree_tag(q, d)?, k);
        }
    }
    Ok(out)
}

/// `Λ*_m` for fiber dimension `d`, from the character inner products.
///
/// `Λ_0` and `Λ_1` are the unit.
pub fn lambda_series(m: usize, d: usize) -> Result<GradedMultiplicity> {
    build(m, d, |q| invariant_dimension(&wedge_standard_character(m, d, q)?))
}

/// Largest `m` accepted by the matrix oracle.
pub const MATRIX_ORACLE_MAX_M: usize = 6;

/// `Λ*_m` from the rank of the Reynolds operator on explicit matrices.
pub fn lambda_series_matrix(m: usize, d: usize) -> Result<GradedMultiplicity> {
    if m > MATRIX_ORACLE_MAX_M || (m.saturating_sub(1)) * d > crate::wedge::MAX_WEDGE_DIM {
        return Err(crate::error::Error::Bound(alloc::format!("matrix oracle limited to m <= {MATRIX_ORACLE_MAX_M}")));
    }
    build(m, d, |q| Ok(invariant_span(m, d, q).rank() as u64))
}

/// The curve and surface closed forms: the unit, and `Σ_{r<m} ω^{-r}[-2r]`.
pub fn expected_low_dimension(m: usize, d: usize) -> Option<GradedMultiplicity> {
    match d {
        1 => Some(GradedMultiplicity::unit()),
        2 => {
            let mut g = GradedMultiplicity::zero();
            for r in 0..m.max(1) as i64 {
                g.insert(2 * r, OmegaTag::Tagged(-r), 1);
            }
            Some(g)
        }
        _ => None,
    }
}

/// One row of the lambda table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaRow {
    pub m: usize,
    pub d: usize,
    pub degree: i64,
    pub omega: OmegaTag,
    pub multiplicity: u64,
}

pub fn table_rows(m_max: usize, d: usize) -> Result<Vec<LambdaRow>> {
    let mut rows = Vec::new();
    for m in 1..=m_max {
        for (degree, omega, multiplicity) in lambda_series(m, d)?.entries() {
            rows.push(LambdaRow { m, d, degree, omega, multiplicity });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twist_translation() {
        let l2 = lambda_series(2, 2).unwrap();
        let t = l2.omega_tag(TwistRule::new(2, -1));
        let mut want = GradedMultiplicity::zero();
        want.insert(2, OmegaTag::Tagged(-1), 1);
        want.insert(4, OmegaTag::Tagged(-2), 1);
        assert_eq!(t, want);
    }

    #[test]
    fn untagged_offsets_accumulate() {
        let g = lambda_series(2, 3).unwrap().omega_tag(TwistRule::summand(1, 0, 3));
        assert_eq!(g.get(3, OmegaTag::Untagged { offset: -1 }), 1);
        assert_eq!(g.get(5, OmegaTag::Untagged { offset: -1 }), 3);
    }
}
