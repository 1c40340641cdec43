//! Supports of composed summands as set partitions of the outer coordinates.
//!
//! Coordinates of `X × X^ℓ × X × X^{ℓ'}` are numbered `x = 0`, `x_c = c`,
//! `z = ℓ+1`, `z_c = ℓ+1+c`. A support is the partition recording which
//! coordinates are forced equal; its blocks are sorted, the block of `x` first.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diagcomb::{DiagLabel, Side};
use crate::permgroup::Permutation;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.blocks)
    }
}

impl Partition {
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Self {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, c: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&c)).expect("coordinate outside the partition")
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| other.blocks.iter().any(|o| b.iter().all(|c| o.contains(c))))
    }

    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> Partition {
        Partition::from_blocks(self.blocks.iter().map(|b| b.iter().map(|&c| f(c)).collect()).collect())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = a;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn partition(&mut self, keep: usize) -> Partition {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..keep {
            let r = self.find(c);
            by_root.entry(r).or_default().push(c);
        }
        Partition::from_blocks(by_root.into_values().collect())
    }
}

/// Coordinate layout of a composition of an `a`-side and a `b`-side kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub ell: usize,
    pub ell_prime: usize,
    pub big_n: usize,
}

impl Layout {
    pub fn new(a: Side, b: Side) -> Self {
        Layout { ell: a.ell, ell_prime: b.ell, big_n: a.big_n() }
    }

    pub fn x(&self) -> usize {
        0
    }

    pub fn xc(&self, c: usize) -> usize {
        c
    }

    pub fn z(&self) -> usize {
        self.ell + 1
    }

    pub fn zc(&self, c: usize) -> usize {
        self.ell + 1 + c
    }

    /// Number of outer coordinates.
    pub fn outer(&self) -> usize {
        2 + self.ell + self.ell_prime
    }

    fn y(&self, b: usize) -> usize {
        self.outer() + b - 1
    }

    pub fn is_z_side(&self, c: usize) -> bool {
        c > self.ell
    }

    /// The support of the summand of `(a, b)`: glue both diagonals on outer and
    /// middle coordinates, then restrict to the outer ones.
    pub fn support(&self, a: &DiagLabel, b: &DiagLabel) -> Partition {
        let mut uf = UnionFind::new(self.outer() + self.big_n);
        self.glue_a(&mut uf, a);
        self.glue_b(&mut uf, b);
        uf.partition(self.outer())
    }

    fn glue_a(&self, uf: &mut UnionFind, a: &DiagLabel) {
        for &c in &a.i_set {
            uf.union(self.x(), self.xc(c));
        }
        for &y in &a.j_set {
            uf.union(self.x(), self.y(y));
        }
        for (c, y) in a.mu_pairs() {
            uf.union(self.xc(c), self.y(y));
        }
    }

    fn glue_b(&self, uf: &mut UnionFind, b: &DiagLabel) {
        for &c in &b.i_set {
            uf.union(self.z(), self.zc(c));
        }
        for &y in &b.j_set {
            uf.union(self.z(), self.y(y));
        }
        for (c, y) in b.mu_pairs() {
            uf.union(self.zc(c), self.y(y));
        }
    }

    /// Blocks of `Γ_a × X × X^{ℓ'}` (all coordinates) and of `X^{1+ℓ} × Γ_b`.
    pub fn side_block_counts(&self, a: &DiagLabel, b: &DiagLabel) -> (usize, usize) {
        let total = self.outer() + self.big_n;
        let mut ua = UnionFind::new(total);
        self.glue_a(&mut ua, a);
        let mut ub = UnionFind::new(total);
        self.glue_b(&mut ub, b);
        (ua.partition(total).len(), ub.partition(total).len())
    }

    /// For every block of the support: the number of blocks of `Γ_a × X × X^{ℓ'}`
    /// it contains, counted on outer and middle coordinates together.
    pub fn a_blocks_inside(&self, a: &DiagLabel, b: &DiagLabel, support: &Partition) -> Vec<usize> {
        let total = self.outer() + self.big_n;
        let mut ua = UnionFind::new(total);
        self.glue_a(&mut ua, a);
        let mut uab = UnionFind::new(total);
        self.glue_a(&mut uab, a);
        self.glue_b(&mut uab, b);
        let full_a = ua.partition(total);
        let mut counts = vec![0usize; support.len()];
        for block in full_a.blocks() {
            let root = uab.find(block[0]);
            // every middle coordinate is glued to an outer one
            let rep = (0..self.outer()).find(|&c| uab.find(c) == root).expect("block meets an outer coordinate");
            counts[support.block_of(rep)] += 1;
        }
        counts
    }

    pub fn z_coords_inside(&self, support: &Partition) -> Vec<usize> {
        support.blocks().iter().map(|b| b.iter().filter(|&&c| self.is_z_side(c)).count()).collect()
    }

    /// Images of a partition under all of `S_ℓ × S_{ℓ'}`.
    pub fn outer_images(&self, p: &Partition) -> Vec<Partition> {
        let mut out = Vec::new();
        for s in Permutation::all(self.ell) {
            for t in Permutation::all(self.ell_prime) {
                let ell = self.ell;
                let f = |c: usize| {
                    if c == 0 || c == ell + 1 {
                        c
                    } else if c <= ell {
                        s.apply(c - 1) + 1
                    } else {
                        ell + 2 + t.apply(c - ell - 2)
                    }
                };
                out.push(p.relabel(&f));
            }
        }
        out
    }

    /// Lexicographically least image under `S_ℓ × S_{ℓ'}`.
    pub fn class_rep(&self, p: &Partition) -> Partition {
        self.outer_images(p).into_iter().min().expect("the group is non-empty")
    }

    pub fn identity_support(&self) -> Option<Partition> {
        if self.ell != self.ell_prime {
            return None;
        }
        let mut blocks = vec![vec![self.x(), self.z()]];
        for c in 1..=self.ell {
            blocks.push(vec![self.xc(c), self.zc(c)]);
        }
        Some(Partition::from_blocks(blocks))
    }

    /// Describes a support in terms of `K1`, `K2` and the pairing `μ`.
    pub fn describe(&self, p: &Partition) -> SupportClass {
        let xb = p.block_of(self.x());
        let zb = p.block_of(self.z());
        let in_main = |c: usize| {
            let b = p.block_of(c);
            b == xb || b == zb
        };
        let k1: Vec<usize> = (1..=self.ell).filter(|&c| in_main(self.xc(c))).collect();
        let k2: Vec<usize> = (1..=self.ell_prime).filter(|&c| in_main(self.zc(c))).collect();
        let mut mu = Vec::new();
        for (bi, block) in p.blocks().iter().enumerate() {
            if bi == xb || bi == zb {
                continue;
            }
            let xs: Vec<usize> = block.iter().copied().filter(|&c| !self.is_z_side(c)).collect();
            let zs: Vec<usize> = block.iter().copied().filter(|&c| self.is_z_side(c)).map(|c| c - self.ell - 1).collect();
            if let ([x], [z]) = (xs.as_slice(), zs.as_slice()) {
                mu.push((*x, *z));
            }
        }
        SupportClass { partition: p.clone(), k1, k2, mu, split: xb != zb }
    }

    /// Renders a coordinate as `x`, `x3`, `z`, `z1`.
    pub fn coordinate_name(&self, c: usize) -> alloc::string::String {
        if c == 0 {
            "x".into()
        } else if c <= self.ell {
            alloc::format!("x{c}")
        } else if c == self.ell + 1 {
            "z".into()
        } else {
            alloc::format!("z{}", c - self.ell - 1)
        }
    }
}

/// A support class with its `(K1, K2, μ)` description.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportClass {
    pub partition: Partition,
    pub k1: Vec<usize>,
    pub k2: Vec<usize>,
    pub mu: Vec<(usize, usize)>,
    /// `x` and `z` lie in different blocks
    pub split: bool,
}

/// Memoised class representatives.
#[derive(Default)]
pub struct ClassCache {
    reps: BTreeMap<Partition, Partition>,
}

impl ClassCache {
    pub fn rep(&mut self, layout: &Layout, p: &Partition) -> Partition {
        if let Some(r) = self.reps.get(p) {
            return r.clone();
        }
        let r = layout.class_rep(p);
        self.reps.insert(p.clone(), r.clone());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_support_for_two_two() {
        let l = Layout::new(Side::new(2, 2), Side::new(2, 2));
        let a = DiagLabel::new(2, 2, alloc::vec![], alloc::vec![1, 2], alloc::vec![3, 4]).unwrap();
        let b = DiagLabel::new(2, 2, alloc::vec![], alloc::vec![3, 4], alloc::vec![1, 2]).unwrap();
        let s = l.support(&a, &b);
        assert_eq!(s.blocks(), &[alloc::vec![0, 4, 5], alloc::vec![1, 2, 3]]);
        assert_eq!(l.a_blocks_inside(&a, &b, &s), [3, 3]);
        assert!(l.describe(&s).split);
    }
}
