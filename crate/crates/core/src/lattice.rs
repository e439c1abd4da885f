//! Integer lattices: row-style Hermite normal form and exact membership.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::common_denominator;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result has no zero rows; pivots strictly increase, are positive, and
/// the entries above each pivot lie in `[0, pivot)`. Two generating sets span
/// the same lattice iff their normal forms are equal.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(width) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..width {
        // Euclid on the column until at most one row has a nonzero entry.
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in m.iter().enumerate() {
                if !r[col].is_zero() && best.map_or(true, |b| r[col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            let pivot_row = m[b].clone();
            let mut others = false;
            for (i, r) in m.iter_mut().enumerate() {
                if i == b || r[col].is_zero() {
                    continue;
                }
                let q = r[col].div_floor(&pivot_row[col]);
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !r[col].is_zero() {
                    others = true;
                }
            }
            if !others {
                let mut row = m.swap_remove(b);
                if row[col].is_negative() {
                    for x in row.iter_mut() {
                        *x = -&*x;
                    }
                }
                out.push(row);
                break;
            }
        }
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // Reduce entries above each pivot.
    for i in 0..out.len() {
        let p = out[i].iter().position(|x| !x.is_zero()).expect("nonzero row");
        let pivot = out[i].clone();
        for row in out.iter_mut().take(i) {
            let q = row[p].div_floor(&pivot[p]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

/// A full-precision rational lattice `(1/den) · Z⟨hnf rows⟩` in `Q^width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalLattice {
    width: usize,
    den: BigInt,
    hnf: Vec<Vec<BigInt>>,
}

impl RationalLattice {
    pub fn from_generators(width: usize, gens: &[Vec<BigRational>]) -> Self {
        let den = common_denominator(gens.iter().flatten());
        let int_rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| g.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect())
            .collect();
        let hnf = if int_rows.is_empty() { Vec::new() } else { hermite_normal_form(&int_rows) };
        // Normalise the common denominator so equal lattices compare equal.
        let content = hnf.iter().flatten().fold(den.clone(), |acc, x| acc.gcd(x));
        let (den, hnf) = if content.is_one() || content.is_zero() {
            (den, hnf)
        } else {
            (&den / &content, hnf.into_iter().map(|r| r.into_iter().map(|x| x / &content).collect()).collect())
        };
        RationalLattice { width, den, hnf }
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    /// Basis vectors as rationals.
    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        self.hnf
            .iter()
            .map(|r| r.iter().map(|x| BigRational::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    /// Integer coordinates of `v` in the basis, if `v` is a lattice vector.
    pub fn coordinates(&self, v: &[BigRational]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.width);
        let scaled: Vec<BigRational> = v.iter().map(|q| q * BigRational::from_integer(self.den.clone())).collect();
        if scaled.iter().any(|q| !q.is_integer()) {
            return None;
        }
        let mut w: Vec<BigInt> = scaled.into_iter().map(|q| q.to_integer()).collect();
        let mut coords = Vec::with_capacity(self.hnf.len());
        for row in &self.hnf {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let (c, r) = w[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in w.iter_mut().zip(row) {
                *x -= &c * y;
            }
            coords.push(c);
        }
        w.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.coordinates(v).is_some()
    }
}
