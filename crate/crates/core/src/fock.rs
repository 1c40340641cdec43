//! Heisenberg algebra on the polynomial Fock space of a graded Frobenius
//! algebra, and the Euler pairing used for the Grothendieck-level identities.
//!
//! A monomial is a multiset of generators `p_{n,i}` (weight `n ≥ 1`, basis
//! index `i`). `q_n(α)` multiplies by `Σ α_i p_{n,i}` for `n > 0`; for `n < 0`
//! it is `-|n| Σ α_i G_{ij} ∂/∂p_{|n|,j}`, which gives
//! `[q_n(α), q_{n'}(β)] = n·δ_{n,-n'}·⟨α, β⟩`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{param_err, Result};
use crate::linalg::{qi, Matrix, Q};

/// Basis degrees and the pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelCohomology {
    pub degrees: Vec<i64>,
    pub pairing: Matrix,
}

impl ModelCohomology {
    pub fn new(degrees: Vec<i64>, pairing: Matrix) -> Result<Self> {
        let r = degrees.len();
        if r == 0 || pairing.rows() != r || pairing.cols() != r {
            return Err(param_err!("pairing must be a {r}×{r} matrix"));
        }
        if pairing.transpose() != pairing {
            return Err(param_err!("pairing is not symmetric"));
        }
        if pairing.rank() != r {
            return Err(param_err!("pairing is degenerate"));
        }
        let top = degrees.iter().min().unwrap() + degrees.iter().max().unwrap();
        for a in 0..r {
            for b in 0..r {
                if !pairing.get(a, b).is_zero() && degrees[a] + degrees[b] != top {
                    return Err(param_err!("pairing of basis {a} and {b} ignores the degrees"));
                }
            }
        }
        Ok(ModelCohomology { degrees, pairing })
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn point() -> Self {
        Self::new(vec![0], Matrix::from_i64(&[&[1]])).expect("valid model")
    }

    /// Degrees `0, 2, 2, 4` with a hyperbolic middle.
    pub fn rank_four() -> Self {
        let g = Matrix::from_i64(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
        Self::new(vec![0, 2, 2, 4], g).expect("valid model")
    }

    pub fn pair(&self, a: &[Q], b: &[Q]) -> Q {
        let gb = self.pairing.apply(b);
        a.iter().zip(gb.iter()).map(|(x, y)| x * y).sum()
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.rank()];
        v[i] = Q::one();
        v
    }
}

/// Sorted multiset of `(weight, basis index)`.
pub type Monomial = Vec<(usize, usize)>;

pub fn weight(m: &Monomial) -> usize {
    m.iter().map(|&(n, _)| n).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVector {
    pub terms: BTreeMap<Monomial, Q>,
    pub truncation: usize,
    /// some term was dropped for exceeding the truncation
    pub overflow: bool,
}

impl FockVector {
    pub fn zero(truncation: usize) -> Self {
        FockVector { terms: BTreeMap::new(), truncation, overflow: false }
    }

    pub fn vacuum(truncation: usize) -> Self {
        Self::monomial(Vec::new(), truncation)
    }

    pub fn monomial(mut m: Monomial, truncation: usize) -> Self {
        m.sort_unstable();
        let mut v = Self::zero(truncation);
        v.add_term(m, Q::one());
        v
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        if weight(&m) > self.truncation {
            self.overflow = true;
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            let key: Vec<_> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.overflow |= other.overflow;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Q) -> FockVector {
        let mut out = FockVector { terms: BTreeMap::new(), truncation: self.truncation, overflow: self.overflow };
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        self.add(&other.scale(&qi(-1)))
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }
}

/// Multiplication by `Σ α_i p_{n,i}`.
pub fn create(n: usize, alpha: &[Q], v: &FockVector) -> FockVector {
    let mut out = FockVector { terms: BTreeMap::new(), truncation: v.truncation, overflow: v.overflow };
    for (m, c) in &v.terms {
        for (i, a) in alpha.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut grown = m.clone();
            grown.push((n, i));
            grown.sort_unstable();
            out.add_term(grown, c * a);
        }
    }
    out
}

/// `n Σ α_i G_{ij} ∂/∂p_{n,j}`.
pub fn annihilate(model: &ModelCohomology, n: usize, alpha: &[Q], v: &FockVector) -> FockVector {
    let ga: Vec<Q> = model.pairing.transpose().apply(alpha);
    let mut out = FockVector { terms: BTreeMap::new(), truncation: v.truncation, overflow: v.overflow };
    for (m, c) in &v.terms {
        let mut seen = Vec::new();
        for (pos, &(w, j)) in m.iter().enumerate() {
            if w != n || ga[j].is_zero() || seen.contains(&j) {
                continue;
            }
            seen.push(j);
            let mult = m.iter().filter(|&&g| g == (w, j)).count() as i64;
            let mut rest = m.clone();
            rest.remove(pos);
            out.add_term(rest, c * &ga[j] * qi(mult * n as i64));
        }
    }
    out
}

/// `q_n(α)` for `n ≠ 0`.
pub fn heisenberg(model: &ModelCohomology, n: i64, alpha: &[Q], v: &FockVector) -> FockVector {
    if n > 0 {
        create(n as usize, alpha, v)
    } else {
        annihilate(model, n.unsigned_abs() as usize, alpha, v).scale(&qi(-1))
    }
}

/// All monomials of weight at most `w` over a basis of the given rank.
pub fn monomials(rank: usize, w: usize) -> Vec<Monomial> {
    let gens: Vec<(usize, usize)> = (1..=w).flat_map(|n| (0..rank).map(move |i| (n, i))).collect();
    fn rec(gens: &[(usize, usize)], start: usize, left: usize, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        out.push(cur.clone());
        for g in start..gens.len() {
            if gens[g].0 <= left {
                cur.push(gens[g]);
                rec(gens, g, left - gens[g].0, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&gens, 0, w, &mut Vec::new(), &mut out);
    for m in out.iter_mut() {
        m.sort_unstable();
    }
    out.sort();
    out
}

/// `[q_n(α), q_{n'}(β)] - n·δ_{n,-n'}·⟨α,β⟩` kills every monomial of weight at
/// most `N - max(|n|, |n'|)`.
pub fn commutator_check(model: &ModelCohomology, n: i64, n_prime: i64, alpha: &[Q], beta: &[Q], truncation: usize) -> Result<bool> {
    if n == 0 || n_prime == 0 {
        return Err(param_err!("Heisenberg operators are indexed by nonzero integers"));
    }
    let reach = n.unsigned_abs().max(n_prime.unsigned_abs()) as usize;
    if reach > truncation {
        return Err(param_err!("|n| and |n'| must not exceed the truncation {truncation}"));
    }
    let central = if n == -n_prime { qi(n) * model.pair(alpha, beta) } else { Q::zero() };
    for m in monomials(model.rank(), truncation - reach) {
        let v = FockVector::monomial(m, truncation);
        let ab = heisenberg(model, n, alpha, &heisenberg(model, n_prime, beta, &v));
        let ba = heisenberg(model, n_prime, beta, &heisenberg(model, n, alpha, &v));
        if !ab.sub(&ba).sub(&v.scale(&central)).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `⟨u, w⟩` defined by peeling generators off `u` with the annihilators.
pub fn fock_pairing(model: &ModelCohomology, u: &FockVector, w: &FockVector) -> Q {
    let mut total = Q::zero();
    for (m, c) in &u.terms {
        let mut cur = w.clone();
        for &(n, i) in m {
            cur = annihilate(model, n, &model.unit_vector(i), &cur);
        }
        total += c * cur.coefficient(&Vec::new());
    }
    total
}

/// `⟨create(n, e_i) u, w⟩ = ⟨u, annihilate(n, e_i) w⟩` on all monomials with
/// `weight(u) + n = weight(w) ≤ N`.
pub fn adjointness_check(model: &ModelCohomology, truncation: usize) -> bool {
    let all = monomials(model.rank(), truncation);
    for n in 1..=truncation {
        for i in 0..model.rank() {
            let e = model.unit_vector(i);
            for mu in all.iter().filter(|m| weight(m) + n <= truncation) {
                let u = FockVector::monomial(mu.clone(), truncation);
                for mw in all.iter().filter(|m| weight(m) == weight(mu) + n) {
                    let w = FockVector::monomial(mw.clone(), truncation);
                    if fock_pairing(model, &create(n, &e, &u), &w) != fock_pairing(model, &u, &annihilate(model, n, &e, &w)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A bilinear Euler form on K-classes with the action of `⊗ ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerPairing {
    pub chi: Matrix,
    pub omega: Matrix,
    omega_inv: Matrix,
}

impl EulerPairing {
    pub fn new(chi: Matrix, omega: Matrix) -> Result<Self> {
        if chi.rows() != chi.cols() || omega.rows() != chi.rows() || omega.cols() != chi.cols() {
            return Err(param_err!("χ and the ω action must be square of the same size"));
        }
        let omega_inv = omega.inverse().ok_or_else(|| param_err!("the ω action is not invertible"))?;
        Ok(EulerPairing { chi, omega, omega_inv })
    }

    /// `ω` acting trivially.
    pub fn with_trivial_canonical_class(chi: Matrix) -> Result<Self> {
        let r = chi.rows();
        Self::new(chi, Matrix::identity(r))
    }

    pub fn rank(&self) -> usize {
        self.chi.rows()
    }

    pub fn has_trivial_canonical_class(&self) -> bool {
        self.omega == Matrix::identity(self.rank())
    }

    pub fn chi(&self, e: &[Q], f: &[Q]) -> Result<Q> {
        if e.len() != self.rank() || f.len() != self.rank() {
            return Err(param_err!("classes must have {} coordinates", self.rank()));
        }
        Ok(e.iter().zip(self.chi.apply(f).iter()).map(|(x, y)| x * y).sum())
    }

    /// `F ⊗ ω^k`.
    pub fn twist(&self, f: &[Q], k: i64) -> Result<Vec<Q>> {
        if f.len() != self.rank() {
            return Err(param_err!("classes must have {} coordinates", self.rank()));
        }
        let step = if k >= 0 { &self.omega } else { &self.omega_inv };
        let mut v = f.to_vec();
        for _ in 0..k.unsigned_abs() {
            v = step.apply(&v);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_killed() {
        let m = ModelCohomology::point();
        let v = FockVector::vacuum(4);
        assert!(annihilate(&m, 1, &[qi(1)], &v).is_zero());
    }
}
