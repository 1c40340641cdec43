//! Exterior algebra on coordinate spaces.
//!
//! A basis wedge `e_{s1} ∧ … ∧ e_{sq}` with `s1 < … < sq` is stored as a bit mask.
//! Bases of `∧^q Q^n` are ordered lexicographically by index tuples.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Neg;

use num_traits::{Num, Zero};

pub type Mask = u32;

/// Largest ambient dimension representable by a `Mask`.
pub const MAX_WEDGE_DIM: usize = 31;

pub type Sparse<T> = BTreeMap<Mask, T>;

#[derive(Clone, Debug)]
pub struct WedgeBasis {
    n: usize,
    q: usize,
    masks: Vec<Mask>,
    index: BTreeMap<Mask, usize>,
}

impl WedgeBasis {
    pub fn new(n: usize, q: usize) -> Self {
        assert!(n <= MAX_WEDGE_DIM, "wedge dimension too large");
        let mut masks = Vec::new();
        if q <= n {
            let mut tuple: Vec<usize> = (0..q).collect();
            loop {
                masks.push(tuple.iter().fold(0, |m, &s| m | (1 << s)));
                // next combination in lexicographic order
                let mut i = q;
                loop {
                    if i == 0 {
                        let index = masks.iter().enumerate().map(|(k, &m)| (m, k)).collect();
                        return WedgeBasis { n, q, masks, index };
                    }
                    i -= 1;
                    if tuple[i] < n - q + i {
                        tuple[i] += 1;
                        for j in i + 1..q {
                            tuple[j] = tuple[j - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
        WedgeBasis { n, q, masks, index: BTreeMap::new() }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn mask(&self, i: usize) -> Mask {
        self.masks[i]
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn index_of(&self, m: Mask) -> Option<usize> {
        self.index.get(&m).copied()
    }

    /// Dense coordinates of a sparse wedge.
    pub fn to_dense<T: Clone + Zero>(&self, v: &Sparse<T>) -> Vec<T> {
        let mut out = alloc::vec![T::zero(); self.len()];
        for (m, x) in v {
            let i = self.index_of(*m).expect("wedge of wrong degree or ambient dimension");
            out[i] = x.clone();
        }
        out
    }

    pub fn to_sparse<T: Clone + Zero>(&self, v: &[T]) -> Sparse<T> {
        v.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (self.masks[i], x.clone()))
            .collect()
    }
}

pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| m & (1 << i) != 0)
}

/// Sign of `e_m ∧ e_t` relative to the sorted wedge: odd iff an odd number of
/// indices in `m` exceed `t`.
fn append_is_odd(m: Mask, t: usize) -> bool {
    let above = if t >= 31 { 0 } else { m >> (t + 1) };
    above.count_ones() % 2 == 1
}

fn add_into<T: Clone + Num>(acc: &mut Sparse<T>, m: Mask, v: T) {
    let entry = acc.entry(m).or_insert_with(T::zero);
    *entry = entry.clone() + v;
    if entry.is_zero() {
        acc.remove(&m);
    }
}

/// `x ∧ y` for sparse wedges.
pub fn wedge<T: Clone + Num + Neg<Output = T>>(x: &Sparse<T>, y: &Sparse<T>) -> Sparse<T> {
    let mut out = Sparse::new();
    for (m1, a) in x {
        for (m2, b) in y {
            if m1 & m2 != 0 {
                continue;
            }
            let odd = bits(*m2).filter(|&t| append_is_odd(*m1, t)).count() % 2 == 1;
            let c = a.clone() * b.clone();
            add_into(&mut out, m1 | m2, if odd { -c } else { c });
        }
    }
    out
}

/// A degree-one element as a sparse wedge.
pub fn vector<T: Clone + Num>(coords: &[(usize, T)]) -> Sparse<T> {
    let mut out = Sparse::new();
    for (i, x) in coords {
        add_into(&mut out, 1 << i, x.clone());
    }
    out
}

pub fn unit<T: Clone + Num>() -> Sparse<T> {
    let mut out = Sparse::new();
    out.insert(0, T::one());
    out
}

/// Image of the basis wedge `e_mask` under `∧L`, where `cols[s]` is the sparse
/// image `L(e_s)`.
pub fn exterior_apply_basis<T: Clone + Num + Neg<Output = T>>(cols: &[Vec<(usize, T)>], mask: Mask) -> Sparse<T> {
    let mut cur = unit::<T>();
    for s in bits(mask) {
        let mut next = Sparse::new();
        for (m, c) in &cur {
            for (t, v) in &cols[s] {
                if m & (1 << t) != 0 || v.is_zero() {
                    continue;
                }
                let x = c.clone() * v.clone();
                add_into(&mut next, m | (1 << t), if append_is_odd(*m, *t) { -x } else { x });
            }
        }
        cur = next;
        if cur.is_empty() {
            break;
        }
    }
    cur
}

/// Image of an arbitrary sparse wedge under `∧L`.
pub fn exterior_apply<T: Clone + Num + Neg<Output = T>>(cols: &[Vec<(usize, T)>], v: &Sparse<T>) -> Sparse<T> {
    let mut out = Sparse::new();
    for (m, c) in v {
        for (m2, x) in exterior_apply_basis(cols, *m) {
            add_into(&mut out, m2, c.clone() * x);
        }
    }
    out
}

pub fn scale<T: Clone + Num>(v: &Sparse<T>, s: &T) -> Sparse<T> {
    if s.is_zero() {
        return Sparse::new();
    }
    v.iter().map(|(m, x)| (*m, x.clone() * s.clone())).collect()
}

pub fn add_assign<T: Clone + Num>(acc: &mut Sparse<T>, v: &Sparse<T>) {
    for (m, x) in v {
        add_into(acc, *m, x.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_basis() {
        let b = WedgeBasis::new(4, 2);
        let tuples: Vec<Vec<usize>> = b.masks().iter().map(|&m| bits(m).collect()).collect();
        assert_eq!(tuples, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]);
        assert_eq!(WedgeBasis::new(3, 0).len(), 1);
        assert_eq!(WedgeBasis::new(2, 3).len(), 0);
    }

    #[test]
    fn anticommutation() {
        let e0: Sparse<i64> = vector(&[(0, 1)]);
        let e1: Sparse<i64> = vector(&[(1, 1)]);
        let a = wedge(&e0, &e1);
        let b = wedge(&e1, &e0);
        assert_eq!(a.get(&0b11), Some(&1));
        assert_eq!(b.get(&0b11), Some(&-1));
        assert!(wedge(&e0, &e0).is_empty());
    }

    #[test]
    fn determinant_of_top_power() {
        // L = [[2,1],[1,3]] has det 5
        let cols = alloc::vec![alloc::vec![(0, 2i64), (1, 1)], alloc::vec![(0, 1), (1, 3)]];
        let img = exterior_apply_basis(&cols, 0b11);
        assert_eq!(img.get(&0b11), Some(&5));
    }
}
