//! Sparse exact row reduction.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalars::Scalar;

/// Exact field operations needed by elimination.
pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Caller guarantees nonzero.
    fn inv(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        Scalar::inv(self).expect("pivot is nonzero")
    }
}

/// Sparse vector: column -> nonzero entry.
pub type SparseVec<F> = BTreeMap<usize, F>;

/// `v += c * w`, dropping cancelled entries.
pub fn axpy<F: Field>(v: &mut SparseVec<F>, c: &F, w: &SparseVec<F>) {
    if c.is_zero() {
        return;
    }
    for (col, x) in w {
        let add = c.mul(x);
        match v.entry(*col) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(add);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&add);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

/// A subspace kept in fully reduced row echelon form. The pivot of each row
/// is its smallest column, so callers choose which columns get eliminated
/// first by numbering them.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<F: Field> {
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec<F>)> + '_ {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec<F>> {
        self.rows.get(&pivot)
    }

    /// Remainder of `v` after eliminating all pivot columns; zero iff `v` is
    /// in the span.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let mut v = v.clone();
        let hits: Vec<(usize, F)> = v
            .iter()
            .filter(|(c, _)| self.rows.contains_key(c))
            .map(|(c, x)| (*c, x.clone()))
            .collect();
        for (c, x) in hits {
            axpy(&mut v, &x.neg(), &self.rows[&c]);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns the new pivot if the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> Option<usize> {
        let mut r = self.reduce(v);
        let (&p, lead) = r.iter().next()?;
        let inv = lead.inv();
        for x in r.values_mut() {
            *x = x.mul(&inv);
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &c.neg(), &r);
            }
        }
        self.rows.insert(p, r);
        Some(p)
    }

    pub fn span_of<'a, I: IntoIterator<Item = &'a SparseVec<F>>>(vs: I) -> Self
    where
        F: 'a,
    {
        let mut e = Self::new();
        for v in vs {
            e.insert(v);
        }
        e
    }

    /// True iff every row of `other` lies in this span.
    pub fn contains_space(&self, other: &Echelon<F>) -> bool {
        other.rows.values().all(|r| self.contains(r))
    }

    /// Basis of the intersection with `other`.
    pub fn intersect(&self, other: &Echelon<F>) -> Echelon<F> {
        // Zassenhaus: rows (u | u) for u in self, (w | 0) for w in other;
        // the rows whose left half vanishes span the intersection.
        let shift = self
            .rows
            .values()
            .chain(other.rows.values())
            .filter_map(|r| r.keys().next_back())
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        let mut big = Echelon::new();
        for u in self.rows.values() {
            let mut row = u.clone();
            for (c, x) in u {
                row.insert(c + shift, x.clone());
            }
            big.insert(&row);
        }
        for w in other.rows.values() {
            big.insert(w);
        }
        let mut out = Echelon::new();
        for (p, r) in &big.rows {
            if *p >= shift {
                let v: SparseVec<F> = r.iter().map(|(c, x)| (c - shift, x.clone())).collect();
                out.insert(&v);
            }
        }
        out
    }
}

/// Vectors spanning the kernel of the map sending unit vector `i` to
/// `images[i]`.
pub fn kernel<F: Field>(images: &[SparseVec<F>]) -> Vec<SparseVec<F>> {
    let shift = images
        .iter()
        .filter_map(|r| r.keys().next_back())
        .max()
        .map(|m| m + 1)
        .unwrap_or(0);
    let mut e = Echelon::new();
    for (i, img) in images.iter().enumerate() {
        let mut row = img.clone();
        row.insert(shift + i, F::one());
        e.insert(&row);
    }
    e.rows
        .iter()
        .filter(|(p, _)| **p >= shift)
        .map(|(_, r)| r.iter().map(|(c, x)| (c - shift, x.clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn v(entries: &[(usize, i64)]) -> SparseVec<BigRational> {
        entries.iter().map(|(c, x)| (*c, q(*x))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 1)])).is_some());
        assert!(e.insert(&v(&[(0, 2), (1, 2)])).is_none());
        assert!(e.insert(&v(&[(1, 1), (2, 3)])).is_some());
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 1), (2, -3)])));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn intersection() {
        let a = Echelon::span_of(&[v(&[(0, 1)]), v(&[(1, 1)])]);
        let b = Echelon::span_of(&[v(&[(1, 1), (2, 1)]), v(&[(0, 1), (1, 1)])]);
        let i = a.intersect(&b);
        assert_eq!(i.rank(), 1);
        assert!(i.contains(&v(&[(0, 1), (1, 1)])));
    }

    #[test]
    fn kernel_of_projection() {
        let k = kernel(&[v(&[(0, 1)]), v(&[(0, 1)]), v(&[])]);
        let ks = Echelon::span_of(&k);
        assert_eq!(ks.rank(), 2);
        assert!(ks.contains(&v(&[(0, 1), (1, -1)])));
        assert!(ks.contains(&v(&[(2, 1)])));
    }
}
