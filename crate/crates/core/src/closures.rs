//! Closures of finitely generated subgroups of `R*` (multiplicative) and of
//! `R^n` (additive).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{hermite_normal_form, RationalLattice};
use crate::linalg::{flatten, is_zero_vec, Echelon, Vector};
use crate::scalar::{rational_to_f64, FieldContext, FieldScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("ratio {0} is not rational; multiplicative closure cannot be decided exactly")]
    NonRationalRatio(String),
    #[error("ratio must be nonzero")]
    ZeroRatio,
    #[error("ratio {0} has a numerator or denominator beyond 64 bits")]
    RatioTooLarge(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("closure is unresolved (real rank {real_rank}, rational rank {rational_rank})")]
    UnresolvedClosure { real_rank: usize, rational_rank: usize },
}

/// Closed subgroups of `R*` that arise as closures of finitely generated groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MulVariant {
    /// `{1}`
    TrivialOne,
    /// `{±1}`
    PlusMinusOne,
    /// `ρ^Z`
    CyclicPos(BigRational),
    /// `±ρ^Z`
    CyclicWithSign(BigRational),
    /// `(−ρ)^Z`
    CyclicTwisted(BigRational),
    /// closure is `[0, ∞)`
    DensePos,
    /// closure is `R`
    DenseAll,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulClosure {
    pub variant: MulVariant,
    pub zero_in_closure: bool,
}

impl MulClosure {
    pub fn rho(&self) -> Option<&BigRational> {
        match &self.variant {
            MulVariant::CyclicPos(r) | MulVariant::CyclicWithSign(r) | MulVariant::CyclicTwisted(r) => Some(r),
            _ => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match self.variant {
            MulVariant::TrivialOne => "TrivialOne",
            MulVariant::PlusMinusOne => "PlusMinusOne",
            MulVariant::CyclicPos(_) => "CyclicPos",
            MulVariant::CyclicWithSign(_) => "CyclicWithSign",
            MulVariant::CyclicTwisted(_) => "CyclicTwisted",
            MulVariant::DensePos => "DensePos",
            MulVariant::DenseAll => "DenseAll",
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.variant, MulVariant::DensePos | MulVariant::DenseAll)
    }

    pub fn is_cyclic(&self) -> bool {
        self.rho().is_some()
    }

    /// Whether the closure is all of `R`.
    pub fn is_everything(&self) -> bool {
        self.variant == MulVariant::DenseAll
    }

    /// Membership of `t` in the closure, viewed as a subset of `R`.
    pub fn contains(&self, t: &FieldScalar) -> bool {
        mul_member(self, t)
    }

    /// Candidate elements near `t` (used by float distance code): for cyclic
    /// variants the signed powers `±ρ^k` bracketing `|t|`.
    pub fn nearby_elements_f64(&self, t: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if self.zero_in_closure {
            out.push(0.0);
        }
        match &self.variant {
            MulVariant::TrivialOne => out.push(1.0),
            MulVariant::PlusMinusOne => out.extend([1.0, -1.0]),
            MulVariant::DenseAll => out.push(t),
            MulVariant::DensePos => out.push(t.max(0.0)),
            MulVariant::CyclicPos(r) | MulVariant::CyclicWithSign(r) | MulVariant::CyclicTwisted(r) => {
                let rho = rational_to_f64(r);
                let k0 = if t == 0.0 { 0 } else { (t.abs().ln() / rho.ln()).round() as i64 };
                for k in (k0 - 2)..=(k0 + 2) {
                    let m = rho.powi(k as i32);
                    match self.variant {
                        MulVariant::CyclicPos(_) => out.push(m),
                        MulVariant::CyclicWithSign(_) => out.extend([m, -m]),
                        _ => out.push(if k.rem_euclid(2) == 0 { m } else { -m }),
                    }
                }
            }
        }
        out
    }
}

fn factor_u64(mut m: u64, primes: &mut Vec<(u64, i64)>, sign: i64) {
    let mut add = |p: u64, e: i64| {
        if let Some(entry) = primes.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += sign * e;
        } else {
            primes.push((p, sign * e));
        }
    };
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            add(p, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        add(m, 1);
    }
}

/// Prime exponent vector of `|q|`.
fn prime_exponents(q: &BigRational, original: &FieldScalar) -> Result<Vec<(u64, i64)>, ClosureError> {
    let num = q.numer().abs().to_u64().ok_or_else(|| ClosureError::RatioTooLarge(original.to_string()))?;
    let den = q.denom().to_u64().ok_or_else(|| ClosureError::RatioTooLarge(original.to_string()))?;
    let mut v = Vec::new();
    factor_u64(num, &mut v, 1);
    factor_u64(den, &mut v, -1);
    v.retain(|&(_, e)| e != 0);
    Ok(v)
}

/// Classify the closure of the subgroup of `R*` generated by `ratios`.
///
/// Signs and prime exponent vectors of the magnitudes decide the answer: the
/// rank of the exponent lattice separates discrete from dense, and in the
/// rank-one case the induced map `Z → Z/2` (or its failure to exist) decides
/// which cyclic variant appears.
pub fn classify_mul_subgroup(ratios: &[FieldScalar]) -> Result<MulClosure, ClosureError> {
    let mut signs = Vec::with_capacity(ratios.len());
    let mut factored = Vec::with_capacity(ratios.len());
    for r in ratios {
        if r.is_zero() {
            return Err(ClosureError::ZeroRatio);
        }
        let q = r.as_rational().ok_or_else(|| ClosureError::NonRationalRatio(r.to_string()))?;
        signs.push(q.is_negative());
        factored.push(prime_exponents(q, r)?);
    }
    let mut primes: Vec<u64> = factored.iter().flatten().map(|&(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let rows: Vec<Vec<BigInt>> = factored
        .iter()
        .map(|f| {
            primes
                .iter()
                .map(|p| BigInt::from(f.iter().find(|(q, _)| q == p).map_or(0, |&(_, e)| e)))
                .collect()
        })
        .collect();
    let hnf = if primes.is_empty() { Vec::new() } else { hermite_normal_form(&rows) };
    let any_negative = signs.iter().any(|&s| s);
    let variant = match hnf.len() {
        0 => {
            if any_negative {
                MulVariant::PlusMinusOne
            } else {
                MulVariant::TrivialOne
            }
        }
        1 => {
            let g = &hnf[0];
            // every exponent row is m_i · g
            let pivot = g.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let ms: Vec<BigInt> = rows.iter().map(|r| &r[pivot] / &g[pivot]).collect();
            let mut rho = BigRational::one();
            for (p, e) in primes.iter().zip(g) {
                let pe = BigRational::from_integer(BigInt::from(*p)).pow(e.to_i32().expect("small exponent"));
                rho *= pe;
            }
            let mut ms = ms;
            if rho < BigRational::one() {
                rho = rho.recip();
                ms.iter_mut().for_each(|m| *m = -&*m);
            }
            // Bezout coefficients c with Σ c_i m_i = 1 give the image σ of ρ in Z/2.
            let coeffs = bezout(&ms);
            let sigma = coeffs
                .iter()
                .zip(&signs)
                .filter(|(_, &s)| s)
                .fold(BigInt::zero(), |acc, (c, _)| acc + c)
                .is_odd();
            let minus_one_present = ms.iter().zip(&signs).any(|(m, &s)| s != (sigma && m.is_odd()));
            if minus_one_present {
                MulVariant::CyclicWithSign(rho)
            } else if sigma {
                MulVariant::CyclicTwisted(rho)
            } else {
                MulVariant::CyclicPos(rho)
            }
        }
        _ => {
            if any_negative {
                MulVariant::DenseAll
            } else {
                MulVariant::DensePos
            }
        }
    };
    Ok(MulClosure { variant, zero_in_closure: !hnf.is_empty() })
}

/// Integers `c` with `Σ c_i m_i = gcd(m)`.
fn bezout(ms: &[BigInt]) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); ms.len()];
    let mut g = BigInt::zero();
    for (i, m) in ms.iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = m.clone();
            coeffs[i] = BigInt::one();
            continue;
        }
        let e = g.extended_gcd(m);
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
    }
    if g.is_negative() {
        coeffs.iter_mut().for_each(|c| *c = -&*c);
    }
    coeffs
}

/// Exact membership of `t` in the closure of the multiplicative group.
pub fn mul_member(c: &MulClosure, t: &FieldScalar) -> bool {
    if t.is_zero() {
        return c.zero_in_closure;
    }
    match &c.variant {
        MulVariant::DenseAll => true,
        MulVariant::DensePos => t.signum() > 0,
        MulVariant::TrivialOne => t.is_one(),
        MulVariant::PlusMinusOne => t.is_one() || (-t).is_one(),
        MulVariant::CyclicPos(rho) | MulVariant::CyclicWithSign(rho) | MulVariant::CyclicTwisted(rho) => {
            let Some(q) = t.as_rational() else {
                return false;
            };
            let Some(k) = integer_log(rho, &q.abs()) else {
                return false;
            };
            match c.variant {
                MulVariant::CyclicPos(_) => q.is_positive(),
                MulVariant::CyclicWithSign(_) => true,
                _ => q.is_positive() == (k.rem_euclid(2) == 0),
            }
        }
    }
}

/// `k` with `rho^k = m`, if one exists.
fn integer_log(rho: &BigRational, m: &BigRational) -> Option<i64> {
    // log|m| estimate from bit lengths keeps this exact for huge values
    let lm = ln_rational(m);
    let lr = ln_rational(rho);
    let guess = (lm / lr).round() as i64;
    (guess - 1..=guess + 1).find(|&k| k.unsigned_abs() < 1 << 20 && &rho.pow(k as i32) == m)
}

fn ln_rational(q: &BigRational) -> f64 {
    let ln_int = |n: &BigInt| {
        let bits = n.bits();
        if bits > 1000 {
            let shift = bits - 64;
            rational_to_f64(&BigRational::from_integer(n >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
        } else {
            rational_to_f64(&BigRational::from_integer(n.clone())).ln()
        }
    };
    ln_int(q.numer()) - ln_int(q.denom())
}

/// Classification of a closed subgroup of `R^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddClosure {
    /// The integer span of `basis` (in Hermite normal form over the flattened
    /// rational coordinates).
    Lattice { basis: Vec<Vector> },
    /// The full line `R·direction`.
    DenseLine { direction: Vector },
    /// Dense part of dimension ≥ 2 mixed with a discrete part; not decided.
    Unresolved { real_rank: usize, rational_rank: usize, notes: String },
}

impl AddClosure {
    pub fn variant_name(&self) -> &'static str {
        match self {
            AddClosure::Lattice { .. } => "Lattice",
            AddClosure::DenseLine { .. } => "DenseLine",
            AddClosure::Unresolved { .. } => "Unresolved",
        }
    }

    pub fn is_resolved(&self) -> bool {
        !matches!(self, AddClosure::Unresolved { .. })
    }

    /// Whether the closure is all of `R^n`.
    pub fn is_everything(&self, n: usize) -> bool {
        matches!(self, AddClosure::DenseLine { .. }) && n == 1
    }

    pub fn contains(&self, v: &[FieldScalar]) -> Result<bool, ClosureError> {
        add_member(self, v)
    }
}

/// Classify the closure of the additive subgroup of `R^n` generated by `vectors`.
pub fn classify_add_subgroup(vectors: &[Vector], n: usize) -> Result<AddClosure, ClosureError> {
    for v in vectors {
        if v.len() != n {
            return Err(ClosureError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let nonzero: Vec<&Vector> = vectors.iter().filter(|v| !is_zero_vec(v)).collect();
    if nonzero.is_empty() {
        return Ok(AddClosure::Lattice { basis: Vec::new() });
    }
    let ctx = nonzero[0][0].context().clone();
    let real = Echelon::from_rows(n, nonzero.iter().map(|v| (*v).clone()));
    let flat: Vec<Vec<BigRational>> = nonzero.iter().map(|v| flatten(v)).collect();
    let width = flat[0].len();
    let rational = Echelon::from_rows(width, flat.iter().cloned());
    let (r, s) = (real.rank(), rational.rank());
    if s == r {
        let lattice = RationalLattice::from_generators(width, &flat);
        let basis = lattice.basis().iter().map(|row| unflatten(row, n, &ctx)).collect();
        Ok(AddClosure::Lattice { basis })
    } else if r == 1 {
        Ok(AddClosure::DenseLine { direction: nonzero[0].clone() })
    } else {
        Ok(AddClosure::Unresolved {
            real_rank: r,
            rational_rank: s,
            notes: format!(
                "{} generators span a real subspace of dimension {r} but have rational rank {s}; \
                 the closure contains a dense part whose dimension is not decided",
                nonzero.len()
            ),
        })
    }
}

fn unflatten(row: &[BigRational], n: usize, ctx: &std::sync::Arc<FieldContext>) -> Vector {
    let m = ctx.num_monomials();
    (0..n).map(|i| FieldScalar::from_coeffs(ctx, row[i * m..(i + 1) * m].to_vec())).collect()
}

/// Exact membership of `v` in a resolved additive closure.
pub fn add_member(c: &AddClosure, v: &[FieldScalar]) -> Result<bool, ClosureError> {
    match c {
        AddClosure::Lattice { basis } => {
            if basis.is_empty() {
                return Ok(is_zero_vec(v));
            }
            if basis[0].len() != v.len() {
                return Err(ClosureError::DimensionMismatch { expected: basis[0].len(), got: v.len() });
            }
            let flat: Vec<Vec<BigRational>> = basis.iter().map(|b| flatten(b)).collect();
            let width = flat[0].len();
            let lattice = RationalLattice::from_generators(width, &flat);
            Ok(lattice.contains(&flatten(v)))
        }
        AddClosure::DenseLine { direction } => {
            if direction.len() != v.len() {
                return Err(ClosureError::DimensionMismatch { expected: direction.len(), got: v.len() });
            }
            let mut line = Echelon::from_rows(v.len(), [direction.clone()]);
            Ok(!line.insert(v.to_vec()))
        }
        AddClosure::Unresolved { real_rank, rational_rank, .. } => {
            Err(ClosureError::UnresolvedClosure { real_rank: *real_rank, rational_rank: *rational_rank })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldContext;
    use std::sync::Arc;

    fn q() -> Arc<FieldContext> {
        FieldContext::new(vec![2]).unwrap()
    }

    fn s(ctx: &Arc<FieldContext>, t: &str) -> FieldScalar {
        FieldScalar::parse(t, ctx).unwrap()
    }

    fn ratios(ctx: &Arc<FieldContext>, ts: &[&str]) -> Vec<FieldScalar> {
        ts.iter().map(|t| s(ctx, t)).collect()
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn mul_examples() {
        let c = q();
        let cl = |ts: &[&str]| classify_mul_subgroup(&ratios(&c, ts)).unwrap().variant;
        assert_eq!(cl(&["2", "3"]), MulVariant::DensePos);
        assert_eq!(cl(&["-2"]), MulVariant::CyclicTwisted(r(2)));
        assert_eq!(cl(&["4", "8"]), MulVariant::CyclicPos(r(2)));
        assert_eq!(cl(&["2", "-1"]), MulVariant::CyclicWithSign(r(2)));
        assert_eq!(cl(&["-2", "-3"]), MulVariant::DenseAll);
        assert_eq!(cl(&["1"]), MulVariant::TrivialOne);
        assert_eq!(cl(&["-1", "1"]), MulVariant::PlusMinusOne);
        assert_eq!(cl(&["2", "1/2"]), MulVariant::CyclicPos(r(2)));
        assert_eq!(cl(&["2/3"]), MulVariant::CyclicPos(BigRational::new(3.into(), 2.into())));
        // (-4)^Z and 2: -4 = -(2^2), 2 = 2 → -1 = -4 / 2^2 present
        assert_eq!(cl(&["-4", "2"]), MulVariant::CyclicWithSign(r(2)));
        // (-8) and 4: ρ = 2, m = 3 (odd, −), m = 2 (even, +): consistent twist
        assert_eq!(cl(&["-8", "4"]), MulVariant::CyclicTwisted(r(2)));
        // (-8) and -4: m=3 odd −, m=2 even − → inconsistent → ±2^Z
        assert_eq!(cl(&["-8", "-4"]), MulVariant::CyclicWithSign(r(2)));
        assert!(!classify_mul_subgroup(&ratios(&c, &["1", "-1"])).unwrap().zero_in_closure);
        assert!(classify_mul_subgroup(&ratios(&c, &["1", "3"])).unwrap().zero_in_closure);
    }

    #[test]
    fn mul_exhaustive_oracle_two_three() {
        // no 2^p = 3^q with 0 < |p|, |q| ≤ 20
        for p in -20i32..=20 {
            for qq in -20i32..=20 {
                if p != 0 && qq != 0 {
                    assert_ne!(r(2).pow(p), r(3).pow(qq));
                }
            }
        }
    }

    #[test]
    fn mul_errors() {
        let c = q();
        assert!(matches!(
            classify_mul_subgroup(&ratios(&c, &["sqrt2"])),
            Err(ClosureError::NonRationalRatio(_))
        ));
        assert_eq!(classify_mul_subgroup(&ratios(&c, &["0"])), Err(ClosureError::ZeroRatio));
        assert!(matches!(
            classify_mul_subgroup(&ratios(&c, &["36893488147419103232"])),
            Err(ClosureError::RatioTooLarge(_))
        ));
    }

    #[test]
    fn mul_member_examples() {
        let c = q();
        let dense = MulClosure { variant: MulVariant::DensePos, zero_in_closure: true };
        assert!(mul_member(&dense, &s(&c, "sqrt2")));
        assert!(!mul_member(&dense, &s(&c, "-sqrt2")));
        let cyc = MulClosure { variant: MulVariant::CyclicPos(r(2)), zero_in_closure: true };
        assert!(mul_member(&cyc, &s(&c, "1/8")));
        assert!(!mul_member(&cyc, &s(&c, "3")));
        assert!(!mul_member(&cyc, &s(&c, "-2")));
        assert!(mul_member(&cyc, &s(&c, "0")));
        let tw = MulClosure { variant: MulVariant::CyclicTwisted(r(2)), zero_in_closure: true };
        assert!(mul_member(&tw, &s(&c, "4")));
        assert!(!mul_member(&tw, &s(&c, "-4")));
        assert!(mul_member(&tw, &s(&c, "-1/2")));
        assert!(!mul_member(&tw, &s(&c, "1/2")));
        let triv = MulClosure { variant: MulVariant::TrivialOne, zero_in_closure: false };
        assert!(!mul_member(&triv, &s(&c, "0")));
        assert!(mul_member(&triv, &s(&c, "1")));
    }

    #[test]
    fn add_examples() {
        let c = q();
        let v = |xs: &[&str]| -> Vector { xs.iter().map(|t| s(&c, t)).collect() };
        let lat = classify_add_subgroup(&[v(&["1", "0"]), v(&["0", "1"])], 2).unwrap();
        assert_eq!(lat, AddClosure::Lattice { basis: vec![v(&["1", "0"]), v(&["0", "1"])] });
        let line = classify_add_subgroup(&[v(&["1", "0"]), v(&["sqrt2", "0"])], 2).unwrap();
        assert_eq!(line, AddClosure::DenseLine { direction: v(&["1", "0"]) });
        let sixth = classify_add_subgroup(&[v(&["1/2"]), v(&["1/3"])], 1).unwrap();
        assert_eq!(sixth, AddClosure::Lattice { basis: vec![v(&["1/6"])] });
        assert_eq!(classify_add_subgroup(&[v(&["0", "0"])], 2).unwrap(), AddClosure::Lattice { basis: vec![] });
        let unres = classify_add_subgroup(&[v(&["1", "0"]), v(&["sqrt2", "0"]), v(&["0", "1"])], 2).unwrap();
        assert!(matches!(unres, AddClosure::Unresolved { real_rank: 2, rational_rank: 3, .. }));
        assert!(matches!(
            classify_add_subgroup(&[v(&["1"])], 2),
            Err(ClosureError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn add_lattice_with_irrational_direction_is_discrete() {
        let c = q();
        let v = |xs: &[&str]| -> Vector { xs.iter().map(|t| s(&c, t)).collect() };
        let lat = classify_add_subgroup(&[v(&["sqrt2", "1"]), v(&["2*sqrt2", "2"])], 2).unwrap();
        assert_eq!(lat, AddClosure::Lattice { basis: vec![v(&["sqrt2", "1"])] });
        assert!(add_member(&lat, &v(&["-3*sqrt2", "-3"])).unwrap());
        assert!(!add_member(&lat, &v(&["1/2*sqrt2", "1/2"])).unwrap());
    }

    #[test]
    fn add_member_examples() {
        let c = q();
        let v = |xs: &[&str]| -> Vector { xs.iter().map(|t| s(&c, t)).collect() };
        let sixth = AddClosure::Lattice { basis: vec![v(&["1/6"])] };
        assert!(add_member(&sixth, &v(&["5/6"])).unwrap());
        let line = AddClosure::DenseLine { direction: v(&["1", "0"]) };
        assert!(add_member(&line, &v(&["sqrt2", "0"])).unwrap());
        assert!(!add_member(&line, &v(&["0", "1"])).unwrap());
        let z2 = AddClosure::Lattice { basis: vec![v(&["1", "0"]), v(&["0", "1"])] };
        assert!(!add_member(&z2, &v(&["1/2", "0"])).unwrap());
        let unres = AddClosure::Unresolved { real_rank: 2, rational_rank: 3, notes: String::new() };
        assert!(matches!(add_member(&unres, &v(&["0", "0"])), Err(ClosureError::UnresolvedClosure { .. })));
    }
}
