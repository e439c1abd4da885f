//! Exact row reduction over a field: spans, ranks, membership and coordinates.

use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::FieldScalar;

/// Field element usable by [`Echelon`].
pub trait Exact: Clone + PartialEq {
    fn is_zero_elem(&self) -> bool;
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self;
    fn div_by(&self, other: &Self) -> Self;
}

impl Exact for BigRational {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        self - factor * other
    }
    fn div_by(&self, other: &Self) -> Self {
        self / other
    }
}

impl Exact for FieldScalar {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        self - &(factor * other)
    }
    fn div_by(&self, other: &Self) -> Self {
        self / other
    }
}

/// Reduced row echelon basis of a span. Every row has a leading 1 in its
/// pivot column and zeros in the other rows' pivot columns, so the basis is
/// canonical for the span.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon<T> {
    width: usize,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Exact> Echelon<T> {
    pub fn empty(width: usize) -> Self {
        Echelon { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<T>>>(width: usize, rows: I) -> Self {
        let mut e = Self::empty(width);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remove the components of `v` along the pivot columns.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.width, "vector width");
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero_elem() {
                continue;
            }
            let f = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero_elem() {
                    *o = o.sub_mul(&f, r);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(Exact::is_zero_elem)
    }

    /// Coordinates of `v` in the echelon rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Add `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        let mut r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero_elem()) else {
            return false;
        };
        let lead = r[p].clone();
        for x in r.iter_mut() {
            if !x.is_zero_elem() {
                *x = x.div_by(&lead);
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero_elem() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero_elem() {
                    *x = x.sub_mul(&f, y);
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }
}

pub type Vector = Vec<FieldScalar>;

pub fn vsub(a: &[FieldScalar], b: &[FieldScalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vadd(a: &[FieldScalar], b: &[FieldScalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vscale(s: &FieldScalar, a: &[FieldScalar]) -> Vector {
    a.iter().map(|x| s * x).collect()
}

pub fn vneg(a: &[FieldScalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero_vec(a: &[FieldScalar]) -> bool {
    a.iter().all(FieldScalar::is_zero)
}

/// Flatten a field vector into its rational coordinates over the monomial basis.
pub fn flatten(v: &[FieldScalar]) -> Vec<BigRational> {
    v.iter().flat_map(|s| s.coeffs().iter().cloned()).collect()
}
