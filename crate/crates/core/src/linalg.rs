//! Dense exact linear algebra over `Q`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Render as `p/q` (integers render as `p/1`).
pub fn fmt_q(x: &Q) -> alloc::string::String {
    alloc::format!("{}/{}", x.numer(), x.denom())
}

/// Convert an integral rational to `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<_> = (0..self.cols).map(|c| fmt_q(self.get(r, c))).collect();
            writeln!(f, "  {:?}", row)?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        Self::from_rows(&v)
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Q) {
        let x = &mut self.data[r * self.cols + c];
        *x += v;
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x *= s;
        }
        m
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut span = EchelonSpan::new(self.cols);
        for r in 0..self.rows {
            let row: Vec<Q> = (0..self.cols).map(|c| self.get(r, c).clone()).collect();
            span.insert(row);
            if span.rank() == self.cols {
                break;
            }
        }
        span.rank()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch in sum");
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(other.data.iter()) {
            *x += y;
        }
        m
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            for c in 0..n {
                a.data.swap(pivot * n + c, col * n + c);
                inv.data.swap(pivot * n + c, col * n + c);
            }
            let p = a.get(col, col).recip();
            for c in 0..n {
                let x = a.get(col, c) * &p;
                a.set(col, c, x);
                let y = inv.get(col, c) * &p;
                inv.set(col, c, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let x = a.get(r, c) - &f * a.get(col, c);
                    a.set(r, c, x);
                    let y = inv.get(r, c) - &f * inv.get(col, c);
                    inv.set(r, c, y);
                }
            }
        }
        Some(inv)
    }

    /// Basis of the null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let mut span = EchelonSpan::new(self.cols);
        for r in 0..self.rows {
            span.insert((0..self.cols).map(|c| self.get(r, c).clone()).collect());
        }
        let pivots: Vec<usize> = span.pivots().to_vec();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (row, &p) in span.rows().iter().zip(pivots.iter()) {
                v[p] = -row[free].clone();
            }
            out.push(v);
        }
        out
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of `Q^dim`.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(dim: usize) -> Self {
        EchelonSpan { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, v: &mut [Q]) {
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row.iter()) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Q>) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(v.iter()) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        // keep pivots sorted so that the basis is a genuine RREF
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let c: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (row, coef) in self.rows.iter().zip(c.iter()) {
            if coef.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row.iter()) {
                if !r.is_zero() {
                    *x -= coef * r;
                }
            }
        }
        if w.iter().all(Zero::is_zero) {
            Some(c)
        } else {
            None
        }
    }
}

/// Dimensions of the cohomology of a cochain complex given by consecutive
/// differentials `d[p]: C^p -> C^{p+1}` and term dimensions `dims`.
///
/// Fails if consecutive differentials do not compose to zero.
pub fn complex_cohomology(dims: &[usize], d: &[Matrix]) -> core::result::Result<Vec<usize>, usize> {
    assert_eq!(d.len() + 1, dims.len().max(1));
    for (p, m) in d.iter().enumerate() {
        assert_eq!(m.cols(), dims[p]);
        assert_eq!(m.rows(), dims[p + 1]);
    }
    for p in 1..d.len() {
        if !d[p].mul(&d[p - 1]).is_zero() {
            return Err(p);
        }
    }
    let ranks: Vec<usize> = d.iter().map(Matrix::rank).collect();
    Ok((0..dims.len())
        .map(|p| {
            let out = if p < ranks.len() { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            dims[p] - out - inc
        })
        .collect())
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    num_integer::binomial(n, k)
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn is_nonnegative_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn coordinates_in_span() {
        let mut s = EchelonSpan::new(3);
        assert!(s.insert(vec![qi(1), qi(1), qi(0)]));
        assert!(s.insert(vec![qi(0), qi(2), qi(2)]));
        assert!(!s.insert(vec![qi(1), qi(3), qi(2)]));
        let v = vec![qi(2), qi(5), qi(3)];
        let c = s.coordinates(&v).unwrap();
        let mut back = vec![Q::zero(); 3];
        for (row, x) in s.rows().iter().zip(c.iter()) {
            for (b, r) in back.iter_mut().zip(row.iter()) {
                *b += x * r;
            }
        }
        assert_eq!(back, v);
        assert!(s.coordinates(&[qi(0), qi(0), qi(1)]).is_none());
    }

    #[test]
    fn two_step_complex() {
        let d0 = Matrix::from_i64(&[&[1], &[-1]]);
        let d1 = Matrix::from_i64(&[&[1, 1]]);
        assert_eq!(complex_cohomology(&[1, 2, 1], &[d0, d1]).unwrap(), vec![0, 0, 0]);
    }
}
