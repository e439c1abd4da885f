//! Affine maps `x ↦ λx + b` with scalar linear part, and the groups they generate.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{is_zero_vec, vadd, vscale, Vector};
use crate::scalar::{FieldContext, FieldScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ratio must be nonzero")]
    ZeroRatio,
    #[error("maps belong to different fields")]
    ContextMismatch,
    #[error("group needs at least one generator")]
    NoGenerators,
    #[error("generator index {0} out of range")]
    InvalidIndex(usize),
    #[error("word letters must have nonzero exponents")]
    ZeroExponent,
    #[error("a homothety center needs a ratio different from 1")]
    CenterOfTranslation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Translation,
    Symmetry,
    Homothety,
}

/// The fixed point set of an affine map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedSet {
    Empty,
    Point(Vector),
    AllSpace,
}

/// `x ↦ ratio·x + translation`, stored in translation form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    ratio: FieldScalar,
    translation: Vector,
}

impl AffineMap {
    pub fn new(ratio: FieldScalar, translation: Vector) -> Result<Self, AffineError> {
        if ratio.is_zero() {
            return Err(AffineError::ZeroRatio);
        }
        if translation.iter().any(|t| !t.same_context(&ratio)) {
            return Err(AffineError::ContextMismatch);
        }
        Ok(AffineMap { ratio, translation })
    }

    /// The homothety `(center, ratio)`: `x ↦ ratio(x − center) + center`.
    pub fn homothety(center: Vector, ratio: FieldScalar) -> Result<Self, AffineError> {
        if ratio.is_one() {
            return Err(AffineError::CenterOfTranslation);
        }
        let one = FieldScalar::one(ratio.context());
        let b = vscale(&(&one - &ratio), &center);
        Self::new(ratio, b)
    }

    pub fn translation_by(v: Vector, ctx: &Arc<FieldContext>) -> Self {
        AffineMap { ratio: FieldScalar::one(ctx), translation: v }
    }

    /// The symmetry `x ↦ −x + b`.
    pub fn symmetry(b: Vector, ctx: &Arc<FieldContext>) -> Self {
        AffineMap { ratio: FieldScalar::from_int(ctx, -1), translation: b }
    }

    pub fn identity(n: usize, ctx: &Arc<FieldContext>) -> Self {
        AffineMap { ratio: FieldScalar::one(ctx), translation: vec![FieldScalar::zero(ctx); n] }
    }

    pub fn ratio(&self) -> &FieldScalar {
        &self.ratio
    }

    pub fn translation(&self) -> &[FieldScalar] {
        &self.translation
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        self.ratio.context()
    }

    pub fn kind(&self) -> MapKind {
        if self.ratio.is_one() {
            MapKind::Translation
        } else if (-&self.ratio).is_one() {
            MapKind::Symmetry
        } else {
            MapKind::Homothety
        }
    }

    pub fn is_identity(&self) -> bool {
        self.ratio.is_one() && is_zero_vec(&self.translation)
    }

    /// Whether the map lies in the symmetry group `S_n` (ratio ±1).
    pub fn in_symmetry_group(&self) -> bool {
        self.kind() != MapKind::Homothety
    }

    /// `b / (1 − λ)` for λ ≠ 1.
    pub fn center(&self) -> Option<Vector> {
        if self.ratio.is_one() {
            return None;
        }
        let one = FieldScalar::one(self.context());
        let s = (&one - &self.ratio).inverse().expect("ratio != 1");
        Some(vscale(&s, &self.translation))
    }

    fn check_dim(&self, n: usize) -> Result<(), AffineError> {
        if n != self.dim() {
            return Err(AffineError::DimensionMismatch { expected: self.dim(), got: n });
        }
        Ok(())
    }

    pub fn apply(&self, x: &[FieldScalar]) -> Result<Vector, AffineError> {
        self.check_dim(x.len())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &[FieldScalar]) -> Vector {
        x.iter().zip(&self.translation).map(|(xi, bi)| &(&self.ratio * xi) + bi).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap, AffineError> {
        self.check_dim(other.dim())?;
        if !self.ratio.same_context(&other.ratio) {
            return Err(AffineError::ContextMismatch);
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            ratio: &self.ratio * &other.ratio,
            translation: vadd(&vscale(&self.ratio, &other.translation), &self.translation),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.ratio.inverse().expect("ratio is nonzero");
        let translation = self.translation.iter().map(|b| -&(&inv * b)).collect();
        AffineMap { ratio: inv, translation }
    }

    /// `self^m`.
    pub fn power(&self, m: i64) -> AffineMap {
        let ratio = self.ratio.pow(m).expect("ratio is nonzero");
        // translation of f^m is (1 + λ + … + λ^{m−1}) b, i.e. (1 − λ^m) a for λ ≠ 1
        let translation = if self.ratio.is_one() {
            vscale(&FieldScalar::from_int(self.context(), m), &self.translation)
        } else {
            let one = FieldScalar::one(self.context());
            let center = self.center().expect("ratio != 1");
            vscale(&(&one - &ratio), &center)
        };
        AffineMap { ratio, translation }
    }

    pub fn fixed_set(&self) -> FixedSet {
        match self.center() {
            Some(c) => FixedSet::Point(c),
            None if is_zero_vec(&self.translation) => FixedSet::AllSpace,
            None => FixedSet::Empty,
        }
    }

    /// Exact commutation test via `(λ_f − 1) b_g = (λ_g − 1) b_f`.
    pub fn commutes(&self, other: &AffineMap) -> bool {
        let one = FieldScalar::one(self.context());
        let lf = &self.ratio - &one;
        let lg = &other.ratio - &one;
        self.translation.iter().zip(&other.translation).all(|(bf, bg)| &lf * bg == &lg * bf)
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &AffineMap) -> AffineMap {
        g.compose_unchecked(self).compose_unchecked(&g.inverse())
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> ({})x + [", self.ratio)?;
        for (i, b) in self.translation.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("]")
    }
}

/// A named generator of a [`GroupSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub map: AffineMap,
}

/// A finitely generated subgroup of `H(n, R)` given by its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    dim: usize,
    ctx: Arc<FieldContext>,
    generators: Vec<Generator>,
}

impl GroupSpec {
    pub fn new(dim: usize, ctx: Arc<FieldContext>, generators: Vec<Generator>) -> Result<Self, AffineError> {
        if dim == 0 {
            return Err(AffineError::DimensionMismatch { expected: 1, got: 0 });
        }
        if generators.is_empty() {
            return Err(AffineError::NoGenerators);
        }
        for g in &generators {
            if g.map.dim() != dim {
                return Err(AffineError::DimensionMismatch { expected: dim, got: g.map.dim() });
            }
            if g.map.context().as_ref() != ctx.as_ref() {
                return Err(AffineError::ContextMismatch);
            }
        }
        Ok(GroupSpec { dim, ctx, generators })
    }

    /// Generators named `g0, g1, …`.
    pub fn from_maps(dim: usize, ctx: Arc<FieldContext>, maps: Vec<AffineMap>) -> Result<Self, AffineError> {
        let generators =
            maps.into_iter().enumerate().map(|(i, map)| Generator { name: format!("g{i}"), map }).collect();
        Self::new(dim, ctx, generators)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn maps(&self) -> impl Iterator<Item = &AffineMap> {
        self.generators.iter().map(|g| &g.map)
    }

    pub fn identity(&self) -> AffineMap {
        AffineMap::identity(self.dim, &self.ctx)
    }

    /// Whether every generator (hence the whole group) has ratio ±1.
    pub fn in_symmetry_group(&self) -> bool {
        self.maps().all(AffineMap::in_symmetry_group)
    }

    /// Pairwise commutation of generators.
    pub fn is_abelian(&self) -> bool {
        let maps: Vec<_> = self.maps().collect();
        maps.iter().enumerate().all(|(i, f)| maps[i + 1..].iter().all(|g| f.commutes(g)))
    }

    /// Conjugate the whole group by `T_c`: every generator `f` becomes `T_c ∘ f ∘ T_{−c}`.
    pub fn translated(&self, c: &[FieldScalar]) -> GroupSpec {
        let t = AffineMap::translation_by(c.to_vec(), &self.ctx);
        let generators = self
            .generators
            .iter()
            .map(|g| Generator { name: g.name.clone(), map: g.map.conjugate_by(&t) })
            .collect();
        GroupSpec { dim: self.dim, ctx: self.ctx.clone(), generators }
    }

    pub fn evaluate_word(&self, w: &Word) -> Result<AffineMap, AffineError> {
        evaluate_word(self, w)
    }
}

/// A group word `f_{i_1}^{n_1} ∘ … ∘ f_{i_q}^{n_q}` with nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, i64)>) -> Result<Self, AffineError> {
        if letters.iter().any(|&(_, e)| e == 0) {
            return Err(AffineError::ZeroExponent);
        }
        Ok(Word { letters })
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    /// Number of unit letters (sum of |exponents|).
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    /// `self ∘ letter^sign`, merging with the last letter when possible.
    pub fn then(&self, gen: usize, sign: i64) -> Word {
        let mut letters = self.letters.clone();
        match letters.last_mut() {
            Some((g, e)) if *g == gen => {
                *e += sign;
                if *e == 0 {
                    letters.pop();
                }
            }
            _ => letters.push((gen, sign)),
        }
        Word { letters }
    }

    /// Expand to unit letters `(gen, ±1)`.
    pub fn expand(&self) -> Vec<(usize, i64)> {
        self.letters
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat((g, e.signum())).take(e.unsigned_abs() as usize))
            .collect()
    }
}

/// Evaluate a word with the closed form
/// `λ = ∏ λ_k`, `b = Σ_k (λ_1 ⋯ λ_{k−1}) c_k`, where `(λ_k, c_k)` is the
/// `k`-th letter power. For homothety letters `c_k = (1 − λ_k) a_k`, which
/// gives `b = Σ_{k<q} Λ_k a_{k+1} − Σ_{k≤q} Λ_k a_k + a_1` with `Λ_k` the
/// partial ratio products.
pub fn evaluate_word(spec: &GroupSpec, w: &Word) -> Result<AffineMap, AffineError> {
    let ctx = spec.context();
    let n = spec.dim();
    let mut partial = FieldScalar::one(ctx);
    let mut b = vec![FieldScalar::zero(ctx); n];
    for &(i, m) in w.letters() {
        let gen = &spec.generators().get(i).ok_or(AffineError::InvalidIndex(i))?.map;
        if m == 0 {
            return Err(AffineError::ZeroExponent);
        }
        let letter = gen.power(m);
        b = vadd(&b, &vscale(&partial, letter.translation()));
        partial = &partial * letter.ratio();
    }
    Ok(AffineMap { ratio: partial, translation: b })
}

/// Left fold of [`AffineMap::compose`] over the expanded letters.
pub fn evaluate_word_by_folding(spec: &GroupSpec, w: &Word) -> Result<AffineMap, AffineError> {
    let mut acc = spec.identity();
    for (i, e) in w.expand() {
        let gen = &spec.generators().get(i).ok_or(AffineError::InvalidIndex(i))?.map;
        let letter = if e > 0 { gen.clone() } else { gen.inverse() };
        acc = acc.compose_unchecked(&letter);
    }
    Ok(acc)
}
