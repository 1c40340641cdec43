//! Labels of partial-diagonal supports, their composition, the `S_{n+ℓ}` action on
//! pairs of labels, and the signs of the kernel differential.
//!
//! All labels are 1-based: `[v] = {1, …, v}`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{param_err, Result};
use crate::linalg::{binomial, factorial};
use crate::permgroup::Permutation;

/// Subsets of `[total]` of the given size, lexicographic.
pub fn subsets(total: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, total: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..=total {
            if total - x + 1 < left {
                break;
            }
            cur.push(x);
            rec(x + 1, total, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= total {
        rec(1, total, size, &mut Vec::new(), &mut out);
    }
    out
}

pub fn complement(set: &[usize], total: usize) -> Vec<usize> {
    (1..=total).filter(|x| !set.contains(x)).collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Support label `(I, J, μ)` of a summand of `P_{ℓ,n}`: `I ⊂ [ℓ]`, `J ⊂ [n+ℓ]`
/// with `|J| = n + |I|`, and `μ` a bijection from `[ℓ] \ I` onto `[n+ℓ] \ J`,
/// stored as the images of the sorted complement of `I`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagLabel {
    pub ell: usize,
    pub n: usize,
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
    pub mu: Vec<usize>,
}

impl DiagLabel {
    pub fn new(ell: usize, n: usize, i_set: Vec<usize>, j_set: Vec<usize>, mu: Vec<usize>) -> Result<Self> {
        let l = DiagLabel { ell, n, i_set: sorted(i_set), j_set: sorted(j_set), mu };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        let big = self.big_n();
        if self.i_set.iter().any(|&c| c == 0 || c > self.ell) || self.j_set.iter().any(|&y| y == 0 || y > big) {
            return Err(param_err!("label entries out of range: {:?}", self));
        }
        if self.i_set.windows(2).any(|w| w[0] == w[1]) || self.j_set.windows(2).any(|w| w[0] == w[1]) {
            return Err(param_err!("repeated entries: {:?}", self));
        }
        if self.j_set.len() != self.n + self.i_set.len() {
            return Err(param_err!("|J| must equal n + |I|: {:?}", self));
        }
        let mut img = self.mu.clone();
        img.sort_unstable();
        if img != complement(&self.j_set, big) {
            return Err(param_err!("mu is not a bijection of complements: {:?}", self));
        }
        Ok(())
    }

    pub fn big_n(&self) -> usize {
        self.n + self.ell
    }

    /// Complex degree `|I|`.
    pub fn degree(&self) -> usize {
        self.i_set.len()
    }

    pub fn i_complement(&self) -> Vec<usize> {
        complement(&self.i_set, self.ell)
    }

    pub fn mu_of(&self, c: usize) -> Option<usize> {
        self.i_complement().iter().position(|&x| x == c).map(|p| self.mu[p])
    }

    pub fn mu_pairs(&self) -> Vec<(usize, usize)> {
        self.i_complement().into_iter().zip(self.mu.iter().copied()).collect()
    }

    pub fn mu_inverse(&self, y: usize) -> Option<usize> {
        self.mu_pairs().into_iter().find(|&(_, m)| m == y).map(|(c, _)| c)
    }

    /// The action of `S_{n+ℓ}` through `f` (1-based).
    pub fn act_middle(&self, f: &dyn Fn(usize) -> usize) -> DiagLabel {
        DiagLabel {
            ell: self.ell,
            n: self.n,
            i_set: self.i_set.clone(),
            j_set: sorted(self.j_set.iter().map(|&y| f(y)).collect()),
            mu: self.mu.iter().map(|&y| f(y)).collect(),
        }
    }

    /// The action of `S_ℓ` through `f` (1-based): `I ↦ f(I)`, `μ ↦ μ ∘ f^{-1}`.
    pub fn act_outer(&self, f: &dyn Fn(usize) -> usize) -> DiagLabel {
        let i_set = sorted(self.i_set.iter().map(|&c| f(c)).collect());
        let mut pairs: Vec<(usize, usize)> = self.mu_pairs().into_iter().map(|(c, y)| (f(c), y)).collect();
        pairs.sort_unstable();
        DiagLabel { ell: self.ell, n: self.n, i_set, j_set: self.j_set.clone(), mu: pairs.into_iter().map(|p| p.1).collect() }
    }

    /// Target of the differential component adding `c ∈ Ī`.
    pub fn extend(&self, c: usize) -> Option<DiagLabel> {
        let y = self.mu_of(c)?;
        let mut i_set = self.i_set.clone();
        i_set.push(c);
        let mut j_set = self.j_set.clone();
        j_set.push(y);
        let mu = self.mu_pairs().into_iter().filter(|&(x, _)| x != c).map(|p| p.1).collect();
        Some(DiagLabel { ell: self.ell, n: self.n, i_set: sorted(i_set), j_set: sorted(j_set), mu })
    }

    /// Sources of differential components into `self`: remove `c ∈ I` and send it
    /// to `y ∈ J`.
    pub fn retract(&self, c: usize, y: usize) -> Option<DiagLabel> {
        if !self.i_set.contains(&c) || !self.j_set.contains(&y) {
            return None;
        }
        let i_set: Vec<usize> = self.i_set.iter().copied().filter(|&x| x != c).collect();
        let j_set: Vec<usize> = self.j_set.iter().copied().filter(|&x| x != y).collect();
        let mut pairs = self.mu_pairs();
        pairs.push((c, y));
        pairs.sort_unstable();
        Some(DiagLabel { ell: self.ell, n: self.n, i_set, j_set, mu: pairs.into_iter().map(|p| p.1).collect() })
    }
}

/// `|Index(i)| = C(ℓ,i)·C(n+ℓ,n+i)·(ℓ-i)!`.
pub fn index_count(ell: usize, n: usize, i: usize) -> u64 {
    binomial(ell as u64, i as u64) * binomial((n + ell) as u64, (n + i) as u64) * factorial((ell - i) as u64)
}

pub fn enum_index(ell: usize, n: usize, i: usize) -> Result<Vec<DiagLabel>> {
    if i > ell || n == 0 {
        return Err(param_err!("need 0 <= i <= ell and n >= 1 (ell={ell}, n={n}, i={i})"));
    }
    let big = n + ell;
    let mut out = Vec::new();
    for i_set in subsets(ell, i) {
        for j_set in subsets(big, n + i) {
            let jc = complement(&j_set, big);
            for p in Permutation::all(jc.len()) {
                let mu = p.images().iter().map(|&x| jc[x]).collect();
                out.push(DiagLabel { ell, n, i_set: i_set.clone(), j_set: j_set.clone(), mu });
            }
        }
    }
    Ok(out)
}

/// `ε_{J,b} = (-1)^{#{a ∈ J : a < b}}`.
pub fn sign_epsilon(j_set: &[usize], b: usize) -> Result<i64> {
    if j_set.contains(&b) {
        return Err(param_err!("{b} already lies in {:?}", j_set));
    }
    Ok(epsilon(j_set, b))
}

pub(crate) fn epsilon(set: &[usize], b: usize) -> i64 {
    if set.iter().filter(|&&a| a < b).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: DiagLabel,
    pub target: DiagLabel,
    pub sign: i64,
}

/// Components of the differential `P^i → P^{i+1}`.
pub fn differential_arrows(ell: usize, n: usize, i: usize) -> Result<Vec<Arrow>> {
    if i >= ell {
        return Err(param_err!("differential out of P^{i} needs i < ell = {ell}"));
    }
    let mut out = Vec::new();
    for src in enum_index(ell, n, i)? {
        for c in src.i_complement() {
            let y = src.mu_of(c).expect("c lies in the complement");
            let sign = epsilon(&src.j_set, y);
            let target = src.extend(c).expect("extension exists");
            out.push(Arrow { source: src.clone(), target, sign });
        }
    }
    Ok(out)
}

/// Path-sum audit: for every pair of labels two degrees apart the signed number
/// of length-two paths vanishes.
pub fn differential_squares_to_zero(ell: usize, n: usize) -> Result<bool> {
    for i in 0..ell.saturating_sub(1) {
        let first = differential_arrows(ell, n, i)?;
        let second = differential_arrows(ell, n, i + 1)?;
        let mut out_of: BTreeMap<&DiagLabel, Vec<&Arrow>> = BTreeMap::new();
        for a in &second {
            out_of.entry(&a.source).or_default().push(a);
        }
        let mut sums: BTreeMap<(&DiagLabel, &DiagLabel), i64> = BTreeMap::new();
        for a in &first {
            for b in out_of.get(&a.target).map(Vec::as_slice).unwrap_or(&[]) {
                *sums.entry((&a.source, &b.target)).or_default() += a.sign * b.sign;
            }
        }
        if sums.values().any(|&s| s != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Support label `(K1, K2, μ)` of a summand of a composed kernel.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairLabel {
    pub ell: usize,
    pub ell_prime: usize,
    pub k1: Vec<usize>,
    pub k2: Vec<usize>,
    /// pairs `(c, μ(c))` for `c ∈ [ℓ] \ K1`
    pub mu: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub pair: PairLabel,
    pub k: usize,
    pub overlap: usize,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// Composes the label `a` of `P^j` (on `X × X^ℓ × X^{n+ℓ}`) with the label `b`
/// of `P^{iR}` (on `X^{n+ℓ} × X × X^{ℓ'}`).
pub fn compose_labels(a: &DiagLabel, b: &DiagLabel) -> Result<Composition> {
    if a.big_n() != b.big_n() {
        return Err(param_err!("labels live over different middle factors"));
    }
    let mut k1: Vec<usize> = a.i_set.clone();
    for (c, y) in a.mu_pairs() {
        if b.j_set.contains(&y) {
            k1.push(c);
        }
    }
    let mut k2: Vec<usize> = b.i_set.clone();
    for (c, y) in b.mu_pairs() {
        if a.j_set.contains(&y) {
            k2.push(c);
        }
    }
    let k1 = sorted(k1);
    let k2 = sorted(k2);
    let mut mu = Vec::new();
    for (c, y) in a.mu_pairs() {
        if !k1.contains(&c) {
            let c2 = b.mu_inverse(y).expect("y outside J2 is a value of mu2");
            mu.push((c, c2));
        }
    }
    let overlap = intersect(&a.j_set, &b.j_set).len();
    let k = k1.len();
    Ok(Composition {
        pair: PairLabel { ell: a.ell, ell_prime: b.ell, k1, k2, mu },
        k,
        overlap,
        i1: a.i_set.clone(),
        i2: b.i_set.clone(),
    })
}

/// An element `(I1 ⊂ K1, I2 ⊂ K2, μ)` of `Index(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexEntry {
    pub i1: Vec<usize>,
    pub k1: Vec<usize>,
    pub i2: Vec<usize>,
    pub k2: Vec<usize>,
    pub mu: Vec<(usize, usize)>,
}

impl IndexEntry {
    pub fn from_composition(c: &Composition) -> Self {
        IndexEntry { i1: c.i1.clone(), k1: c.pair.k1.clone(), i2: c.i2.clone(), k2: c.pair.k2.clone(), mu: c.pair.mu.clone() }
    }
}

/// Parameters of one side of a composition: `P_{ℓ,n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Side {
    pub ell: usize,
    pub n: usize,
}

impl Side {
    pub fn new(ell: usize, n: usize) -> Self {
        Side { ell, n }
    }

    pub fn big_n(&self) -> usize {
        self.ell + self.n
    }
}

/// `Index(i,j)` by the closed description: `|K2| = |K1| + n - n'`, `I1 ⊂ K1` of
/// size `j`, `I2 ⊂ K2` of size `i`, `μ` a bijection of complements, and the
/// overlap `n' + i + j - |K1|` non-negative.
pub fn index_ij(a: Side, b: Side, i: usize, j: usize) -> Vec<IndexEntry> {
    let mut out = Vec::new();
    for k1 in 0..=a.ell {
        let Some(k2) = (k1 + a.n).checked_sub(b.n) else { continue };
        if k2 > b.ell || j > k1 || i > k2 || b.n + i + j < k1 {
            continue;
        }
        for k1s in subsets(a.ell, k1) {
            for k2s in subsets(b.ell, k2) {
                let c1 = complement(&k1s, a.ell);
                let c2 = complement(&k2s, b.ell);
                for p in Permutation::all(c1.len()) {
                    let mu: Vec<(usize, usize)> = c1.iter().enumerate().map(|(t, &c)| (c, c2[p.apply(t)])).collect();
                    for i1 in subsets(k1, j) {
                        let i1: Vec<usize> = i1.iter().map(|&x| k1s[x - 1]).collect();
                        for i2 in subsets(k2, i) {
                            let i2: Vec<usize> = i2.iter().map(|&x| k2s[x - 1]).collect();
                            out.push(IndexEntry { i1: i1.clone(), k1: k1s.clone(), i2, k2: k2s.clone(), mu: mu.clone() });
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Canonical representative of the `S_{n+ℓ}`-orbit of `(a, b)`.
///
/// Middle labels are renumbered by sorting on `(role in a, role in b, label)`,
/// where the role of `y` is `0` for `y ∈ J` and `c` for `y = μ(c)`. Only labels
/// in `J1 ∩ J2` share both roles, and those are permuted by the stabiliser.
/// Returns the representative and `g` (1-based, `g[r-1]` = original label of
/// representative label `r`), so that `(a, b) = g · rep`.
pub fn canonical_pair(a: &DiagLabel, b: &DiagLabel) -> (DiagLabel, DiagLabel, Vec<usize>) {
    let big = a.big_n();
    let mut role_a = vec![0usize; big + 1];
    let mut role_b = vec![0usize; big + 1];
    for (c, y) in a.mu_pairs() {
        role_a[y] = c;
    }
    for (c, y) in b.mu_pairs() {
        role_b[y] = c;
    }
    let mut ys: Vec<usize> = (1..=big).collect();
    ys.sort_by_key(|&y| (role_a[y], role_b[y], y));
    let mut new_of = vec![0usize; big + 1];
    for (pos, &y) in ys.iter().enumerate() {
        new_of[y] = pos + 1;
    }
    let f = |y: usize| new_of[y];
    (a.act_middle(&f), b.act_middle(&f), ys)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rep_a: DiagLabel,
    pub rep_b: DiagLabel,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    pub entry: IndexEntry,
    pub overlap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub a: Side,
    pub b: Side,
    pub i: usize,
    pub j: usize,
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    pub fn total_pairs(&self) -> u64 {
        self.orbits.iter().map(|o| o.orbit_size).sum()
    }

    /// `|orbit| · |stabiliser| = (n+ℓ)!` for every orbit.
    pub fn orbit_stabilizer_holds(&self) -> bool {
        let order = factorial(self.a.big_n() as u64);
        self.orbits.iter().all(|o| o.orbit_size * o.stabilizer_order == order)
    }

    /// The orbit entries are exactly `Index(i, j)`, each hit once.
    pub fn bijects_with_index(&self) -> bool {
        let mut got: Vec<IndexEntry> = self.orbits.iter().map(|o| o.entry.clone()).collect();
        got.sort();
        let len = got.len();
        got.dedup();
        got.len() == len && got == index_ij(self.a, self.b, self.i, self.j)
    }

    /// Outer `S_ℓ × S_ℓ'` orbits: the entries grouped by `|K1|`.
    pub fn blocks(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for o in &self.orbits {
            *out.entry(o.entry.k1.len()).or_insert(0) += 1;
        }
        out
    }
}

/// `S_{n+ℓ}`-orbits on `Index(j) × Index'(i)` (first factor from `P^j`).
pub fn orbit_decompose_sides(a: Side, b: Side, i: usize, j: usize) -> Result<OrbitDecomposition> {
    if a.big_n() != b.big_n() {
        return Err(param_err!("n + ell must agree on both sides"));
    }
    let la = enum_index(a.ell, a.n, j)?;
    let lb = enum_index(b.ell, b.n, i)?;
    let mut found: BTreeMap<(DiagLabel, DiagLabel), u64> = BTreeMap::new();
    for x in &la {
        for y in &lb {
            let (ra, rb, _) = canonical_pair(x, y);
            *found.entry((ra, rb)).or_insert(0) += 1;
        }
    }
    let mut orbits = Vec::new();
    for ((ra, rb), size) in found {
        let comp = compose_labels(&ra, &rb)?;
        orbits.push(Orbit {
            stabilizer_order: factorial(comp.overlap as u64),
            entry: IndexEntry::from_composition(&comp),
            overlap: comp.overlap,
            rep_a: ra,
            rep_b: rb,
            orbit_size: size,
        });
    }
    Ok(OrbitDecomposition { a, b, i, j, orbits })
}

pub fn orbit_decompose(ell: usize, n: usize, i: usize, j: usize) -> Result<OrbitDecomposition> {
    if i > ell || j > ell {
        return Err(param_err!("need i, j <= ell"));
    }
    orbit_decompose_sides(Side::new(ell, n), Side::new(ell, n), i, j)
}

/// Largest `n + ℓ` for which the brute-force group action is run.
pub const BRUTE_FORCE_MAX_N: usize = 6;

/// Orbits computed by letting every element of `S_{n+ℓ}` act; returns sorted
/// `(orbit size, stabiliser order)` pairs.
pub fn brute_force_orbits(a: Side, b: Side, i: usize, j: usize) -> Result<Vec<(u64, u64)>> {
    let big = a.big_n();
    if big > BRUTE_FORCE_MAX_N {
        return Err(crate::error::Error::Bound(alloc::format!("brute force limited to n+ell <= {BRUTE_FORCE_MAX_N}")));
    }
    let la = enum_index(a.ell, a.n, j)?;
    let lb = enum_index(b.ell, b.n, i)?;
    let group = Permutation::all(big);
    let mut seen: BTreeMap<(DiagLabel, DiagLabel), bool> = BTreeMap::new();
    for x in &la {
        for y in &lb {
            seen.insert((x.clone(), y.clone()), false);
        }
    }
    let mut out = Vec::new();
    let keys: Vec<(DiagLabel, DiagLabel)> = seen.keys().cloned().collect();
    for key in keys {
        if seen[&key] {
            continue;
        }
        let mut size = 0u64;
        let mut stab = 0u64;
        for g in &group {
            let f = |y: usize| g.apply(y - 1) + 1;
            let img = (key.0.act_middle(&f), key.1.act_middle(&f));
            if img == key {
                stab += 1;
            }
            let flag = seen.get_mut(&img).expect("action preserves the index sets");
            if !*flag {
                *flag = true;
                size += 1;
            }
        }
        out.push((size, stab));
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enum_index(0, 3, 0).unwrap().len(), 1);
        assert_eq!(enum_index(1, 2, 0).unwrap().len(), 3);
        assert_eq!(enum_index(2, 2, 1).unwrap().len(), 8);
    }

    #[test]
    fn retract_inverts_extend() {
        for l in enum_index(2, 3, 0).unwrap() {
            for c in l.i_complement() {
                let y = l.mu_of(c).unwrap();
                let t = l.extend(c).unwrap();
                assert_eq!(t.retract(c, y).unwrap(), l);
            }
        }
    }
}
