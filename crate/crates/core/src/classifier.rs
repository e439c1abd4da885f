//! Case decision, orbit-closure descriptions, exact membership and the
//! derived predicates (density, minimality, periodicity, connectedness).

use thiserror::Error;

use crate::affine::{AffineError, GroupSpec};
use crate::closures::{
    add_member, classify_add_subgroup, classify_mul_subgroup, mul_member, AddClosure, ClosureError, MulClosure,
    MulVariant,
};
use crate::invariant::{
    compute_eg, delta_base_point, lambda_generators, translation_subgroup_generators, AffineSubspace, InvariantError,
};
use crate::linalg::{is_zero_vec, vadd, vscale, vsub, Vector};
use crate::scalar::FieldScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("the group is abelian")]
    AbelianGroup,
    #[error("closure of the ratio group is not available: {0}")]
    NonRationalRatio(String),
    #[error("closure of the translation subgroup is unresolved (real rank {real_rank}, rational rank {rational_rank})")]
    UnresolvedClosure { real_rank: usize, rational_rank: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation needs a one-dimensional group, got dimension {0}")]
    NotOneDimensional(usize),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

impl ClassifyError {
    fn from_closure(e: ClosureError) -> Self {
        match e {
            ClosureError::UnresolvedClosure { real_rank, rational_rank } => {
                ClassifyError::UnresolvedClosure { real_rank, rational_rank }
            }
            ClosureError::NonRationalRatio(s) | ClosureError::RatioTooLarge(s) => ClassifyError::NonRationalRatio(s),
            other => ClassifyError::Closure(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Some element has ratio outside `{-1, 1}`.
    One,
    /// Every element is `x ↦ ±x + b`.
    Two,
}

/// `None` marks a predicate that could not be decided exactly (see the
/// report warnings).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicates {
    pub has_dense_orbit: Option<bool>,
    /// Case one only.
    pub every_u_orbit_minimal_in_u: Option<bool>,
    /// Case two only.
    pub every_orbit_minimal: Option<bool>,
    pub has_periodic_orbit: bool,
    pub dim_e: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub case: Case,
    pub dim: usize,
    pub e: Option<AffineSubspace>,
    pub lambda: Option<MulClosure>,
    pub h: Option<AddClosure>,
    /// Base point: `E.base` in case one, a point of `δ_G` in case two.
    pub a: Vector,
    pub predicates: Predicates,
    pub warnings: Vec<String>,
}

/// Point-set description of an orbit closure.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitClosureDescription {
    AffineSet { e: AffineSubspace },
    /// `⋃_{t ∈ closure(Λ) ∪ {0}} t·direction + E`, with `direction = x − base`.
    ScaledFamily { base: Vector, direction: Vector, lambda: MulClosure, e: AffineSubspace },
    /// `(x + H̄) ∪ (−x + a + H̄)`.
    CosetPair { x: Vector, a: Vector, h: AddClosure },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentCount {
    Finite(usize),
    CountablyInfinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineDichotomy {
    /// Case one on the line: every orbit is dense.
    CaseOneDense,
    /// Case two with `H̄ = R`.
    AllDense,
    /// Case two with `H` discrete: every orbit is closed and discrete.
    AllClosedDiscrete,
}

pub fn classify_group(spec: &GroupSpec) -> Result<ClassificationReport, ClassifyError> {
    if spec.is_abelian() {
        return Err(ClassifyError::AbelianGroup);
    }
    let n = spec.dim();
    let mut warnings = Vec::new();
    if !spec.in_symmetry_group() {
        let e = compute_eg(spec)?;
        let lambda = match classify_mul_subgroup(&lambda_generators(spec)) {
            Ok(l) => Some(l),
            Err(err @ (ClosureError::NonRationalRatio(_) | ClosureError::RatioTooLarge(_))) => {
                warnings.push(format!("NonRationalRatio: {err}"));
                None
            }
            Err(other) => return Err(other.into()),
        };
        let dim_e = e.dim();
        let has_dense_orbit = if e.is_everything() {
            Some(true)
        } else if dim_e + 1 < n {
            Some(false)
        } else {
            lambda.as_ref().map(MulClosure::is_everything)
        };
        if has_dense_orbit.is_none() {
            warnings.push("has_dense_orbit undecided: needs the closure of the ratio group".to_string());
        }
        let a = e.base().to_vec();
        Ok(ClassificationReport {
            case: Case::One,
            dim: n,
            e: Some(e),
            lambda,
            h: None,
            a,
            predicates: Predicates {
                has_dense_orbit,
                every_u_orbit_minimal_in_u: Some(true),
                every_orbit_minimal: None,
                has_periodic_orbit: false,
                dim_e: Some(dim_e),
            },
            warnings,
        })
    } else {
        let gens = translation_subgroup_generators(spec)?;
        let h = classify_add_subgroup(&gens, n)?;
        let a = delta_base_point(spec)?;
        let has_dense_orbit = match &h {
            AddClosure::Lattice { .. } => Some(false),
            AddClosure::DenseLine { .. } => Some(n == 1),
            AddClosure::Unresolved { real_rank, notes, .. } => {
                warnings.push(format!("Unresolved: {notes}"));
                if *real_rank < n {
                    Some(false)
                } else {
                    None
                }
            }
        };
        let trivial_h = matches!(&h, AddClosure::Lattice { basis } if basis.is_empty());
        Ok(ClassificationReport {
            case: Case::Two,
            dim: n,
            e: None,
            lambda: None,
            h: Some(h),
            a,
            predicates: Predicates {
                has_dense_orbit,
                every_u_orbit_minimal_in_u: None,
                every_orbit_minimal: Some(true),
                has_periodic_orbit: trivial_h,
                dim_e: None,
            },
            warnings,
        })
    }
}

impl ClassificationReport {
    pub fn orbit_closure(&self, x: &[FieldScalar]) -> Result<OrbitClosureDescription, ClassifyError> {
        if x.len() != self.dim {
            return Err(ClassifyError::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        match self.case {
            Case::One => {
                let e = self.e.clone().expect("case one has E");
                if e.contains(x) {
                    return Ok(OrbitClosureDescription::AffineSet { e });
                }
                let lambda = self.lambda.clone().ok_or_else(|| {
                    ClassifyError::NonRationalRatio("ratio group closure needed for points outside E".into())
                })?;
                Ok(OrbitClosureDescription::ScaledFamily {
                    base: self.a.clone(),
                    direction: vsub(x, &self.a),
                    lambda,
                    e,
                })
            }
            Case::Two => Ok(OrbitClosureDescription::CosetPair {
                x: x.to_vec(),
                a: self.a.clone(),
                h: self.h.clone().expect("case two has H"),
            }),
        }
    }
}

pub fn orbit_closure(spec: &GroupSpec, x: &[FieldScalar]) -> Result<OrbitClosureDescription, ClassifyError> {
    classify_group(spec)?.orbit_closure(x)
}

/// `(t, e)` with `y − base = t·direction + e` and `e` in the direction space of `E`.
fn scaled_decomposition(
    base: &[FieldScalar],
    direction: &[FieldScalar],
    e: &AffineSubspace,
    y: &[FieldScalar],
) -> Option<FieldScalar> {
    let dirs = e.direction_space();
    let ru = dirs.reduce(direction);
    let rd = dirs.reduce(&vsub(y, base));
    let p = ru.iter().position(|c| !c.is_zero())?;
    let t = &rd[p] / &ru[p];
    is_zero_vec(&vsub(&rd, &vscale(&t, &ru))).then_some(t)
}

impl OrbitClosureDescription {
    pub fn ambient_dim(&self) -> usize {
        match self {
            OrbitClosureDescription::AffineSet { e } => e.ambient_dim(),
            OrbitClosureDescription::ScaledFamily { base, .. } => base.len(),
            OrbitClosureDescription::CosetPair { x, .. } => x.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            OrbitClosureDescription::AffineSet { .. } => "AffineSet",
            OrbitClosureDescription::ScaledFamily { .. } => "ScaledFamily",
            OrbitClosureDescription::CosetPair { .. } => "CosetPair",
        }
    }

    /// Exact membership of `y` in the described set.
    pub fn member(&self, y: &[FieldScalar]) -> Result<bool, ClassifyError> {
        if y.len() != self.ambient_dim() {
            return Err(ClassifyError::DimensionMismatch { expected: self.ambient_dim(), got: y.len() });
        }
        match self {
            OrbitClosureDescription::AffineSet { e } => Ok(e.contains(y)),
            OrbitClosureDescription::ScaledFamily { base, direction, lambda, e } => {
                Ok(match scaled_decomposition(base, direction, e, y) {
                    Some(t) => t.is_zero() || mul_member(lambda, &t),
                    None => false,
                })
            }
            OrbitClosureDescription::CosetPair { x, a, h } => {
                if add_member(h, &vsub(y, x)).map_err(ClassifyError::from_closure)? {
                    return Ok(true);
                }
                add_member(h, &vsub(&vadd(y, x), a)).map_err(ClassifyError::from_closure)
            }
        }
    }

    /// Whether the two cosets of a pair coincide as sets.
    pub fn cosets_coincide(&self) -> Result<Option<bool>, ClassifyError> {
        match self {
            OrbitClosureDescription::CosetPair { x, a, h } => {
                let two_x = vadd(x, x);
                add_member(h, &vsub(&two_x, a)).map(Some).map_err(ClassifyError::from_closure)
            }
            _ => Ok(None),
        }
    }

    pub fn connected_components(&self) -> Result<ComponentCount, ClassifyError> {
        match self {
            OrbitClosureDescription::AffineSet { .. } => Ok(ComponentCount::Finite(1)),
            OrbitClosureDescription::ScaledFamily { lambda, .. } => Ok(match &lambda.variant {
                MulVariant::DenseAll | MulVariant::DensePos => ComponentCount::Finite(1),
                MulVariant::TrivialOne => ComponentCount::Finite(if lambda.zero_in_closure { 2 } else { 1 }),
                MulVariant::PlusMinusOne => ComponentCount::Finite(if lambda.zero_in_closure { 3 } else { 2 }),
                _ => ComponentCount::CountablyInfinite,
            }),
            OrbitClosureDescription::CosetPair { x, h, .. } => {
                if h.is_everything(x.len()) {
                    return Ok(ComponentCount::Finite(1));
                }
                let coincide = self.cosets_coincide()?.expect("coset pair");
                match h {
                    AddClosure::Lattice { basis } if !basis.is_empty() => Ok(ComponentCount::CountablyInfinite),
                    AddClosure::Unresolved { real_rank, rational_rank, .. } => Err(ClassifyError::UnresolvedClosure {
                        real_rank: *real_rank,
                        rational_rank: *rational_rank,
                    }),
                    _ => Ok(ComponentCount::Finite(if coincide { 1 } else { 2 })),
                }
            }
        }
    }
}

/// Topological comparison of two closures by their component counts. Only a
/// certificate of difference is ever given.
pub fn homeomorphy_note(a: ComponentCount, b: ComponentCount) -> &'static str {
    if a != b {
        "not homeomorphic"
    } else {
        "undetermined (same number of connected components)"
    }
}

pub fn dichotomy_line(spec: &GroupSpec) -> Result<LineDichotomy, ClassifyError> {
    if spec.dim() != 1 {
        return Err(ClassifyError::NotOneDimensional(spec.dim()));
    }
    let report = classify_group(spec)?;
    Ok(match (report.case, report.h) {
        (Case::One, _) => LineDichotomy::CaseOneDense,
        (Case::Two, Some(AddClosure::DenseLine { .. })) => LineDichotomy::AllDense,
        _ => LineDichotomy::AllClosedDiscrete,
    })
}
