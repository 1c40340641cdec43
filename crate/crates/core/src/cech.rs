//! The combinatorial Čech complexes `Č_k`, `Ĉ_k = Č_k ⊗ a_k` of
//! `S_k`-representations and their stupid truncations.
//!
//! Degree `i` has basis `e_I` for `I ⊂ [k]` with `|I| = i`; the differential is
//! `e_I ↦ Σ_{b ∉ I} ε_{I,b} e_{I ∪ b}` and `g` acts by `sgn(g|_I) e_{g(I)}`,
//! twisted by `sgn(g)` on `Ĉ_k`.

use alloc::vec::Vec;

use crate::diagcomb::{epsilon, subsets};
use crate::error::{param_err, Result};
use crate::linalg::{binomial, complex_cohomology, factorial, qi, Matrix};
use crate::permgroup::{conjugacy_classes, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Check,
    Hat,
}

/// Largest `k` for which complexes are built.
pub const MAX_K: usize = 12;

#[derive(Clone, Debug)]
pub struct RepComplex {
    pub k: usize,
    pub variant: Variant,
    pub bases: Vec<Vec<Vec<usize>>>,
    pub differentials: Vec<Matrix>,
}

impl RepComplex {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.differentials.iter().map(Matrix::rank).collect()
    }

    pub fn squares_to_zero(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn cohomology(&self) -> Result<Vec<usize>> {
        complex_cohomology(&self.dims(), &self.differentials)
            .map_err(|p| crate::error::internal_err!("d∘d ≠ 0 at degree {p} of the Čech complex"))
    }

    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.cohomology()?.iter().all(|&h| h == 0))
    }

    /// Matrix of `g` on the degree-`i` term.
    pub fn action(&self, g: &Permutation, i: usize) -> Matrix {
        let basis = &self.bases[i];
        let mut m = Matrix::zeros(basis.len(), basis.len());
        let twist = if self.variant == Variant::Hat { g.sign() } else { 1 };
        for (src, set) in basis.iter().enumerate() {
            let (img, s) = image_with_sign(g, set);
            let tgt = basis.iter().position(|b| *b == img).expect("g permutes subsets of a fixed size");
            m.set(tgt, src, qi(s * twist));
        }
        m
    }

    /// The differentials commute with the adjacent transpositions.
    pub fn is_equivariant(&self) -> bool {
        (0..self.k.saturating_sub(1)).all(|t| {
            let g = Permutation::adjacent(self.k, t);
            self.differentials
                .iter()
                .enumerate()
                .all(|(i, d)| d.mul(&self.action(&g, i)) == self.action(&g, i + 1).mul(d))
        })
    }
}

/// `g(I)` sorted, together with the sign of `g` restricted to `I`.
fn image_with_sign(g: &Permutation, set: &[usize]) -> (Vec<usize>, i64) {
    let img: Vec<usize> = set.iter().map(|&x| g.apply(x - 1) + 1).collect();
    let mut inversions = 0;
    for a in 0..img.len() {
        for b in a + 1..img.len() {
            if img[a] > img[b] {
                inversions += 1;
            }
        }
    }
    let mut sorted = img;
    sorted.sort_unstable();
    (sorted, if inversions % 2 == 0 { 1 } else { -1 })
}

pub fn cech_complex(k: usize, variant: Variant) -> Result<RepComplex> {
    if k > MAX_K {
        return Err(crate::error::Error::Bound(alloc::format!("Čech complexes are built for k <= {MAX_K}")));
    }
    let bases: Vec<Vec<Vec<usize>>> = (0..=k).map(|i| subsets(k, i)).collect();
    let mut differentials = Vec::new();
    for i in 0..k {
        let (src, tgt) = (&bases[i], &bases[i + 1]);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (c, set) in src.iter().enumerate() {
            for b in 1..=k {
                if set.contains(&b) {
                    continue;
                }
                let mut up = set.clone();
                up.push(b);
                up.sort_unstable();
                let r = tgt.iter().position(|t| *t == up).expect("subset of the next size");
                m.set(r, c, qi(epsilon(set, b)));
            }
        }
        differentials.push(m);
    }
    Ok(RepComplex { k, variant, bases, differentials })
}

/// Character of degree `i` at a permutation: the sum of `sgn(g|_I)` over
/// `g`-stable `I` of size `i`, times `sgn(g)` for `Ĉ_k`.
fn term_character(g: &Permutation, i: usize, variant: Variant) -> i64 {
    let k = g.degree();
    let twist = if variant == Variant::Hat { g.sign() } else { 1 };
    subsets(k, i)
        .iter()
        .filter_map(|set| {
            let (img, s) = image_with_sign(g, set);
            (img == *set).then_some(s)
        })
        .sum::<i64>()
        * twist
}

/// `dim Hom_{S_k}(C^i, C^{i+1})` by the character inner product.
pub fn hom_dimension(k: usize, i: usize, variant: Variant) -> Result<u64> {
    if i >= k {
        return Err(param_err!("need 0 <= i < k (k={k}, i={i})"));
    }
    if k > MAX_K {
        return Err(crate::error::Error::Bound(alloc::format!("Čech complexes are built for k <= {MAX_K}")));
    }
    let mut total: i64 = 0;
    for (ct, size) in conjugacy_classes(k)? {
        let g = ct.representative();
        total += size as i64 * term_character(&g, i, variant) * term_character(&g, i + 1, variant);
    }
    let order = factorial(k as u64) as i64;
    if total % order != 0 || total < 0 {
        return Err(crate::error::internal_err!("character inner product {total}/{order} is not a dimension"));
    }
    Ok((total / order) as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationCokernel {
    pub k: usize,
    pub i: usize,
    /// cohomological degree `k - i` of the truncated complex
    pub degree: usize,
    pub term_dimension: usize,
    pub incoming_rank: usize,
    pub dimension: usize,
}

/// `T(i,k)`: top cohomology of `σ^{≤ k-i} Č_k`, i.e. the cokernel of
/// `d^{k-i-1}`.
pub fn truncation_cokernel(k: usize, i: usize) -> Result<TruncationCokernel> {
    if i > k {
        return Err(param_err!("need 0 <= i <= k (k={k}, i={i})"));
    }
    let c = cech_complex(k, Variant::Check)?;
    let degree = k - i;
    let term_dimension = binomial(k as u64, degree as u64) as usize;
    let incoming_rank = if degree == 0 { 0 } else { c.differentials[degree - 1].rank() };
    Ok(TruncationCokernel { k, i, degree, term_dimension, incoming_rank, dimension: term_dimension - incoming_rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_matrices() {
        let c = cech_complex(2, Variant::Check).unwrap();
        assert_eq!(c.dims(), [1, 2, 1]);
        assert_eq!(c.ranks(), [1, 1]);
        assert!(c.is_exact().unwrap());
    }

    #[test]
    fn k0_is_unit() {
        let c = cech_complex(0, Variant::Hat).unwrap();
        assert_eq!(c.dims(), [1]);
        assert_eq!(c.cohomology().unwrap(), [1]);
    }
}
