//! Invariant objects of a group: the minimal invariant affine subspace, the
//! ratio generators, the translation subgroup of a symmetry group, and a
//! brute-force enumeration of group elements.

use indexmap::IndexMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::affine::{AffineMap, GroupSpec, MapKind, Word};
use crate::linalg::{vadd, vsub, Echelon, Vector};
use crate::scalar::FieldScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("the group is abelian")]
    AbelianGroup,
    #[error("every generator has ratio ±1; use the symmetry-group pipeline")]
    GroupInsideSn,
    #[error("some generator has ratio outside {{-1, 1}}")]
    NotInSn,
    #[error("no generator has ratio -1")]
    NoSymmetryGenerator,
    #[error("affine hull of an empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("word enumeration exceeded the budget of {0} elements")]
    BudgetExceeded(usize),
    #[error("word length {0} exceeds the supported maximum of {MAX_WORD_LEN}")]
    WordLengthTooLarge(usize),
}

pub const MAX_WORD_LEN: usize = 12;
pub const DEFAULT_ELEMENT_BUDGET: usize = 200_000;

/// `base + span(directions)`, with the directions kept in reduced echelon form.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSubspace {
    base: Vector,
    directions: Echelon<FieldScalar>,
}

impl AffineSubspace {
    pub fn point(p: Vector) -> Self {
        let n = p.len();
        AffineSubspace { base: p, directions: Echelon::empty(n) }
    }

    pub fn base(&self) -> &[FieldScalar] {
        &self.base
    }

    pub fn directions(&self) -> &[Vector] {
        self.directions.rows()
    }

    pub(crate) fn direction_space(&self) -> &Echelon<FieldScalar> {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.directions.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    pub fn is_everything(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn contains(&self, y: &[FieldScalar]) -> bool {
        y.len() == self.base.len() && self.directions.contains(&vsub(y, &self.base))
    }

    pub fn contains_direction(&self, v: &[FieldScalar]) -> bool {
        self.directions.contains(v)
    }

    /// Add a point; returns whether the dimension grew.
    pub fn extend(&mut self, y: &[FieldScalar]) -> bool {
        self.directions.insert(vsub(y, &self.base))
    }

    /// Same point set (bases may differ).
    pub fn same_set(&self, other: &AffineSubspace) -> bool {
        self.directions == other.directions && self.contains(&other.base)
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &AffineSubspace) -> bool {
        other.contains(&self.base) && self.directions.rows().iter().all(|d| other.contains_direction(d))
    }

    /// Images of the base point and of base + each direction under `g`.
    fn image_points(&self, g: &AffineMap) -> Vec<Vector> {
        let mut pts = vec![g.apply_unchecked(&self.base)];
        for d in self.directions.rows() {
            pts.push(g.apply_unchecked(&vadd(&self.base, d)));
        }
        pts
    }

    pub fn is_invariant_under(&self, g: &AffineMap) -> bool {
        self.image_points(g).iter().all(|p| self.contains(p))
    }

    pub fn translated(&self, c: &[FieldScalar]) -> AffineSubspace {
        AffineSubspace { base: vadd(&self.base, c), directions: self.directions.clone() }
    }
}

/// The smallest affine subspace containing `points`, based at the first point.
pub fn affine_hull(points: &[Vector]) -> Result<AffineSubspace, InvariantError> {
    let first = points.first().ok_or(InvariantError::EmptyPointSet)?;
    let mut a = AffineSubspace::point(first.clone());
    for p in &points[1..] {
        if p.len() != first.len() {
            return Err(InvariantError::DimensionMismatch { expected: first.len(), got: p.len() });
        }
        a.extend(p);
    }
    Ok(a)
}

fn ratio_is_unimodular(f: &AffineMap) -> bool {
    f.in_symmetry_group()
}

/// The smallest `G`-invariant affine subspace containing the centers of the
/// generators with ratio `|λ| ≠ 1`.
///
/// That subspace contains every center of every non-symmetry element of `G`
/// (the iterates of any point under such an element converge to its center),
/// so it is the affine hull of `Γ_G`. For groups generated by homotheties
/// alone it is the affine hull of the generator centers.
pub fn compute_eg(spec: &GroupSpec) -> Result<AffineSubspace, InvariantError> {
    if spec.is_abelian() {
        return Err(InvariantError::AbelianGroup);
    }
    if spec.in_symmetry_group() {
        return Err(InvariantError::GroupInsideSn);
    }
    let seeds: Vec<Vector> = spec.maps().filter(|f| !ratio_is_unimodular(f)).filter_map(AffineMap::center).collect();
    let mut a = affine_hull(&seeds)?;
    let maps: Vec<AffineMap> = spec.maps().flat_map(|g| [g.clone(), g.inverse()]).collect();
    loop {
        let mut grew = false;
        for g in &maps {
            for p in a.image_points(g) {
                grew |= a.extend(&p);
            }
        }
        if !grew {
            return Ok(a);
        }
    }
}

/// Ratios of the generators; they generate `Λ_G`.
pub fn lambda_generators(spec: &GroupSpec) -> Vec<FieldScalar> {
    spec.maps().map(|f| f.ratio().clone()).collect()
}

/// Generators of the additive group `H_G = G_1(0)` for a non-abelian group inside `S_n`.
///
/// The even-sign subgroup has index two with transversal `{id, g_1}` where
/// `g_1` is the first generator of ratio −1; its translation parts are
/// generated by `b_i` for translations and `b_1 − b_j` for symmetries.
pub fn translation_subgroup_generators(spec: &GroupSpec) -> Result<Vec<Vector>, InvariantError> {
    if !spec.in_symmetry_group() {
        return Err(InvariantError::NotInSn);
    }
    if spec.is_abelian() {
        return Err(InvariantError::AbelianGroup);
    }
    let first = delta_base_point(spec)?;
    let mut out = Vec::new();
    for f in spec.maps() {
        match f.kind() {
            MapKind::Translation => out.push(f.translation().to_vec()),
            MapKind::Symmetry => out.push(vsub(&first, f.translation())),
            MapKind::Homothety => unreachable!("checked in_symmetry_group"),
        }
    }
    Ok(out)
}

/// `g(0)` for the first generator `g` of ratio −1; a point of `δ_G`.
pub fn delta_base_point(spec: &GroupSpec) -> Result<Vector, InvariantError> {
    spec.maps()
        .find(|f| f.kind() == MapKind::Symmetry)
        .map(|f| f.translation().to_vec())
        .ok_or(InvariantError::NoSymmetryGenerator)
}

/// A value found by enumeration together with the word that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Witnessed<T> {
    pub value: T,
    pub witness: Word,
}

/// Group elements reachable by words of bounded length, bucketed by type.
#[derive(Debug, Clone)]
pub struct OmegaSample {
    pub max_word_len: usize,
    /// Every distinct element found, with a shortest word.
    pub elements: IndexMap<AffineMap, Word>,
    /// Centers of elements with `|λ| ≠ 1` (points of `Γ_G`).
    pub gamma_centers: IndexMap<Vector, Word>,
    /// `f(0)` for elements with ratio ±1 (points of `γ_G`).
    pub gamma0_points: IndexMap<Vector, Word>,
    /// `f(0)` for elements with ratio −1 (points of `δ_G`).
    pub delta_points: IndexMap<Vector, Word>,
    /// `f(0)` for translations (points of `G_1(0) = H_G`).
    pub translation_points: IndexMap<Vector, Word>,
    /// Distinct ratios (elements of `Λ_G`).
    pub ratios: IndexMap<FieldScalar, Word>,
}

impl OmegaSample {
    /// Points of `Ω_G = Γ_G ∪ γ_G` found so far.
    pub fn omega_points(&self) -> impl Iterator<Item = &Vector> {
        self.gamma_centers.keys().chain(self.gamma0_points.keys())
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }
}

/// Enumerate every group element given by a word of length ≤ `max_len` over
/// the generators and their inverses (breadth first, deduplicated by map).
pub fn enumerate_words(spec: &GroupSpec, max_len: usize) -> Result<OmegaSample, InvariantError> {
    enumerate_words_with_budget(spec, max_len, DEFAULT_ELEMENT_BUDGET)
}

pub fn enumerate_words_with_budget(
    spec: &GroupSpec,
    max_len: usize,
    budget: usize,
) -> Result<OmegaSample, InvariantError> {
    if max_len > MAX_WORD_LEN {
        return Err(InvariantError::WordLengthTooLarge(max_len));
    }
    let letters: Vec<(usize, i64, AffineMap)> = spec
        .maps()
        .enumerate()
        .flat_map(|(i, g)| [(i, 1, g.clone()), (i, -1, g.inverse())])
        .collect();
    let mut elements: IndexMap<AffineMap, Word> = IndexMap::new();
    elements.insert(spec.identity(), Word::empty());
    let mut frontier: Vec<(AffineMap, Word)> = vec![(spec.identity(), Word::empty())];
    for _ in 0..max_len {
        let children: Vec<Vec<(AffineMap, Word)>> = frontier
            .par_iter()
            .map(|(f, w)| {
                letters
                    .iter()
                    .map(|(i, e, g)| (f.compose_unchecked(g), w.then(*i, *e)))
                    .filter(|(h, _)| !elements.contains_key(h))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (h, w) in children.into_iter().flatten() {
            if elements.contains_key(&h) {
                continue;
            }
            if elements.len() >= budget {
                return Err(InvariantError::BudgetExceeded(budget));
            }
            elements.insert(h.clone(), w.clone());
            next.push((h, w));
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut sample = OmegaSample {
        max_word_len: max_len,
        elements: IndexMap::new(),
        gamma_centers: IndexMap::new(),
        gamma0_points: IndexMap::new(),
        delta_points: IndexMap::new(),
        translation_points: IndexMap::new(),
        ratios: IndexMap::new(),
    };
    for (f, w) in &elements {
        sample.ratios.entry(f.ratio().clone()).or_insert_with(|| w.clone());
        let image0 = f.translation().to_vec();
        match f.kind() {
            MapKind::Homothety => {
                let c = f.center().expect("homothety has a center");
                sample.gamma_centers.entry(c).or_insert_with(|| w.clone());
            }
            MapKind::Symmetry => {
                sample.gamma0_points.entry(image0.clone()).or_insert_with(|| w.clone());
                sample.delta_points.entry(image0).or_insert_with(|| w.clone());
            }
            MapKind::Translation => {
                sample.gamma0_points.entry(image0.clone()).or_insert_with(|| w.clone());
                sample.translation_points.entry(image0).or_insert_with(|| w.clone());
            }
        }
    }
    sample.elements = elements;
    Ok(sample)
}
