//! Exact arithmetic in a real multi-quadratic field `Q(√d_1, …, √d_k)`.
//!
//! A [`FieldScalar`] is a vector of rational coefficients over the monomial
//! basis `{∏_{i∈S} √d_i : S ⊆ {1..k}}`, indexed by the bitmask of `S`. With
//! radicands that are multiplicatively independent modulo squares this basis
//! is Q-linearly independent, so zero testing is a coefficient check and the
//! sign of a nonzero element is found by refining rational enclosures of the
//! square roots.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest number of radicands a context may carry.
pub const MAX_RADICANDS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("syntax error in scalar literal {text:?} at byte {pos}: {msg}")]
    Syntax { text: String, pos: usize, msg: String },
    #[error("radicand {0} is not expressible in this field")]
    UnknownRadicand(u64),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars belong to different fields")]
    ContextMismatch,
    #[error("invalid field: {0}")]
    InvalidContext(String),
}

/// The field `Q(√d_1, …, √d_k)` with `k ≤ 3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldContext {
    radicands: Vec<u64>,
    /// `∏_{i∈mask} d_i` for every mask.
    products: Vec<u64>,
    /// Square-free kernel of each product, with the square root of the cofactor.
    kernels: Vec<(u64, u64)>,
}

fn square_free_split(mut m: u64) -> (u64, u64) {
    // m = root^2 * kernel
    let mut root = 1u64;
    let mut kernel = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            kernel *= p;
        }
        p += 1;
    }
    kernel *= m;
    (kernel, root)
}

impl FieldContext {
    pub fn new(radicands: Vec<u64>) -> Result<Arc<Self>, ScalarError> {
        if radicands.len() > MAX_RADICANDS {
            return Err(ScalarError::InvalidContext(format!(
                "at most {MAX_RADICANDS} radicands are supported, got {}",
                radicands.len()
            )));
        }
        for (i, &d) in radicands.iter().enumerate() {
            if d < 2 {
                return Err(ScalarError::InvalidContext(format!("radicand {d} must be >= 2")));
            }
            if square_free_split(d).1 != 1 {
                return Err(ScalarError::InvalidContext(format!("radicand {d} is not square-free")));
            }
            if i > 0 && radicands[i - 1] >= d {
                return Err(ScalarError::InvalidContext(
                    "radicands must be strictly increasing".into(),
                ));
            }
        }
        let size = 1usize << radicands.len();
        let mut products = Vec::with_capacity(size);
        let mut kernels = Vec::with_capacity(size);
        for mask in 0..size {
            let mut p: u64 = 1;
            for (i, &d) in radicands.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p = p.checked_mul(d).ok_or_else(|| {
                        ScalarError::InvalidContext("radicand product overflows u64".into())
                    })?;
                }
            }
            let split = square_free_split(p);
            if mask != 0 && split.0 == 1 {
                return Err(ScalarError::InvalidContext(format!(
                    "radicands {radicands:?} are not independent modulo squares"
                )));
            }
            products.push(p);
            kernels.push(split);
        }
        Ok(Arc::new(FieldContext { radicands, products, kernels }))
    }

    /// The field of rationals.
    pub fn rationals() -> Arc<Self> {
        Self::new(Vec::new()).expect("empty context is valid")
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    pub fn num_monomials(&self) -> usize {
        self.products.len()
    }

    /// Value under the square root for monomial `mask`.
    pub fn monomial_product(&self, mask: usize) -> u64 {
        self.products[mask]
    }

    /// Express `√m` in the monomial basis, if possible.
    fn sqrt_of(&self, m: u64) -> Result<(usize, BigRational), ScalarError> {
        if m == 0 {
            return Ok((0, BigRational::zero()));
        }
        let (kernel, root) = square_free_split(m);
        for (mask, &(k, r)) in self.kernels.iter().enumerate() {
            if k == kernel {
                // √m = root √kernel and √P_mask = r √kernel
                return Ok((mask, BigRational::new(BigInt::from(root), BigInt::from(r))));
            }
        }
        Err(ScalarError::UnknownRadicand(m))
    }
}

/// An exact element of a [`FieldContext`].
#[derive(Clone, Debug)]
pub struct FieldScalar {
    ctx: Arc<FieldContext>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for FieldScalar {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldScalar {}

impl Hash for FieldScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldScalar {
    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        FieldScalar { ctx: ctx.clone(), coeffs: vec![BigRational::zero(); ctx.num_monomials()] }
    }

    pub fn one(ctx: &Arc<FieldContext>) -> Self {
        Self::from_rational(ctx, BigRational::one())
    }

    pub fn from_rational(ctx: &Arc<FieldContext>, q: BigRational) -> Self {
        let mut s = Self::zero(ctx);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(ctx: &Arc<FieldContext>, n: i64) -> Self {
        Self::from_rational(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(ctx: &Arc<FieldContext>, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(ctx, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√m`, when it lies in the field.
    pub fn sqrt(ctx: &Arc<FieldContext>, m: u64) -> Result<Self, ScalarError> {
        let (mask, c) = ctx.sqrt_of(m)?;
        let mut s = Self::zero(ctx);
        s.coeffs[mask] = c;
        Ok(s)
    }

    pub fn from_coeffs(ctx: &Arc<FieldContext>, coeffs: Vec<BigRational>) -> Self {
        assert_eq!(coeffs.len(), ctx.num_monomials(), "coefficient vector length");
        FieldScalar { ctx: ctx.clone(), coeffs }
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the scalar has no irrational part.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    pub fn try_arith(&self, other: &Self, op: ArithOp) -> Result<Self, ScalarError> {
        if !self.same_context(other) {
            return Err(ScalarError::ContextMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add_unchecked(other),
            ArithOp::Sub => self.sub_unchecked(other),
            ArithOp::Mul => self.mul_unchecked(other),
            ArithOp::Div => self.mul_unchecked(&other.inverse()?),
        })
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        FieldScalar { ctx: self.ctx.clone(), coeffs }
    }

    fn sub_unchecked(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        FieldScalar { ctx: self.ctx.clone(), coeffs }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.coeffs.len() == 1 {
            return FieldScalar { ctx: self.ctx.clone(), coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] };
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len()];
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // √P_s √P_t = P_{s∧t} √P_{s⊕t}
                let common = self.ctx.products[s & t];
                let term = a * b * BigRational::from_integer(BigInt::from(common));
                out[s ^ t] += term;
            }
        }
        FieldScalar { ctx: self.ctx.clone(), coeffs: out }
    }

    /// Flip the sign of every monomial containing radicand `i`.
    fn conjugate(&self, i: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| if mask & (1 << i) != 0 { -c } else { c.clone() })
            .collect();
        FieldScalar { ctx: self.ctx.clone(), coeffs }
    }

    /// Multiplicative inverse by successive conjugation over each radicand.
    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let mut norm = self.clone();
        let mut acc = FieldScalar::one(&self.ctx);
        for i in 0..self.ctx.radicands.len() {
            let c = norm.conjugate(i);
            acc = acc.mul_unchecked(&c);
            norm = norm.mul_unchecked(&c);
        }
        debug_assert!(norm.is_rational());
        let n = norm.coeffs[0].clone();
        let coeffs = acc.coeffs.into_iter().map(|c| c / &n).collect();
        Ok(FieldScalar { ctx: self.ctx.clone(), coeffs })
    }

    pub fn pow(&self, e: i64) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut result = FieldScalar::one(&self.ctx);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        Ok(result)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Rational enclosure `[lo, hi]` of the real value, using `bits` bits of
    /// each square root.
    fn enclose(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let mut root_lo = Vec::with_capacity(self.ctx.radicands.len());
        let mut root_hi = Vec::with_capacity(self.ctx.radicands.len());
        for &d in &self.ctx.radicands {
            let s = (BigInt::from(d) << (2 * bits)).sqrt();
            root_lo.push(BigRational::new(s.clone(), scale.clone()));
            root_hi.push(BigRational::new(s + 1, scale.clone()));
        }
        let mut lo = BigRational::zero();
        let mut hi = BigRational::zero();
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut mlo = BigRational::one();
            let mut mhi = BigRational::one();
            for i in 0..root_lo.len() {
                if mask & (1 << i) != 0 {
                    mlo *= &root_lo[i];
                    mhi *= &root_hi[i];
                }
            }
            if c.is_positive() {
                lo += c * &mlo;
                hi += c * &mhi;
            } else {
                lo += c * &mhi;
                hi += c * &mlo;
            }
        }
        (lo, hi)
    }

    /// Exact sign of the real embedding: -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return if self.coeffs[0].is_positive() { 1 } else { -1 };
        }
        let mut bits = 16;
        loop {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return rational_to_f64(&self.coeffs[0]);
        }
        if self.is_zero() {
            return 0.0;
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.enclose(bits);
            let width = &hi - &lo;
            let mid: BigRational = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            let tol = mid.abs() / BigRational::from_integer(BigInt::one() << 62u32);
            if lo.signum() == hi.signum() && width <= tol {
                return rational_to_f64(&mid);
            }
            bits *= 2;
        }
    }

    /// Parse a scalar literal in `ctx`.
    ///
    /// Grammar: `expr := term (('+'|'-') term)*`, `term := rational ('*' root)? | root`,
    /// `root := 'sqrt' integer`, `rational := int ('/' int)?`. A leading sign is
    /// accepted and whitespace is ignored.
    pub fn parse(text: &str, ctx: &Arc<FieldContext>) -> Result<Self, ScalarError> {
        Parser { text, bytes: text.as_bytes(), pos: 0, ctx }.expr()
    }

    fn monomial_name(&self, mask: usize) -> String {
        format!("sqrt{}", self.ctx.products[mask])
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldScalar {
    /// Canonical literal: monomials in basis order, zeros omitted, e.g. `1 - 1/2*sqrt2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if mask == 0 {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&self.monomial_name(mask))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), self.monomial_name(mask))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    ctx: &'a Arc<FieldContext>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Syntax { text: self.text.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(mut self) -> Result<FieldScalar, ScalarError> {
        let mut acc = FieldScalar::zero(self.ctx);
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            None => return Err(self.err("empty literal")),
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub_unchecked(&t) } else { acc.add_unchecked(&t) };
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<FieldScalar, ScalarError> {
        if self.peek_keyword() {
            return self.root();
        }
        let q = self.rational()?;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            if !self.peek_keyword() {
                return Err(self.err("expected 'sqrt' after '*'"));
            }
            let r = self.root()?;
            Ok(r.mul_unchecked(&FieldScalar::from_rational(self.ctx, q)))
        } else {
            Ok(FieldScalar::from_rational(self.ctx, q))
        }
    }

    fn peek_keyword(&mut self) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with("sqrt")
    }

    fn root(&mut self) -> Result<FieldScalar, ScalarError> {
        self.pos += 4;
        let m = self.integer()?;
        let m: u64 = m.try_into().map_err(|_| self.err("radicand out of range"))?;
        FieldScalar::sqrt(self.ctx, m)
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.text[start..self.pos].parse().expect("digits parse"))
    }

    fn rational(&mut self) -> Result<BigRational, ScalarError> {
        let num = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den.is_zero() {
                return Err(ScalarError::ZeroDenominator);
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }
}

pub fn arith(a: &FieldScalar, b: &FieldScalar, op: ArithOp) -> Result<FieldScalar, ScalarError> {
    a.try_arith(b, op)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&FieldScalar> for &FieldScalar {
            type Output = FieldScalar;
            /// Panics if the operands live in different fields (or on division by zero).
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                self.try_arith(rhs, $op).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldScalar> for FieldScalar {
            type Output = FieldScalar;
            fn $method(self, rhs: &FieldScalar) -> FieldScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);
forward_binop!(Div, div, ArithOp::Div);

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        FieldScalar { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

impl PartialOrd for FieldScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if !self.same_context(other) {
            return None;
        }
        Some(match self.sub_unchecked(other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }
}

/// Least common multiple of the denominators of `qs`.
pub(crate) fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
