//! Group-spec files and JSON renderings of reports, descriptions and
//! enumeration samples. Scalars travel as literal strings so nothing is
//! rounded on the way in or out.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{AffineMap, Generator, GroupSpec, Word};
use crate::classifier::{Case, ClassificationReport, ComponentCount, OrbitClosureDescription};
use crate::closures::{AddClosure, MulClosure};
use crate::invariant::{AffineSubspace, OmegaSample};
use crate::linalg::Vector;
use crate::scalar::{FieldContext, FieldScalar, ScalarError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed spec file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad scalar literal in {location}: {source}")]
    Literal { location: String, source: ScalarError },
    #[error("{0}")]
    Semantic(String),
}

impl SpecError {
    /// Whether the problem is syntactic (as opposed to a well-formed but invalid spec).
    pub fn is_syntax(&self) -> bool {
        match self {
            SpecError::Json(e) => !e.is_data(),
            SpecError::Literal { source, .. } => {
                matches!(source, ScalarError::Syntax { .. } | ScalarError::ZeroDenominator)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub radicands: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ratio: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<String>>,
}

fn parse_literal(text: &str, ctx: &Arc<FieldContext>, location: impl Fn() -> String) -> Result<FieldScalar, SpecError> {
    FieldScalar::parse(text, ctx).map_err(|source| SpecError::Literal { location: location(), source })
}

fn parse_vector(
    items: &[String],
    n: usize,
    ctx: &Arc<FieldContext>,
    what: &str,
) -> Result<Vector, SpecError> {
    if items.len() != n {
        return Err(SpecError::Semantic(format!("{what} has {} entries, expected {n}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_literal(s, ctx, || format!("{what}[{i}]")))
        .collect()
}

impl SpecFile {
    pub fn to_group(&self) -> Result<GroupSpec, SpecError> {
        let n = self.dimension;
        if n == 0 {
            return Err(SpecError::Semantic("dimension must be at least 1".into()));
        }
        if self.generators.is_empty() {
            return Err(SpecError::Semantic("at least one generator is required".into()));
        }
        let radicands = self.field.as_ref().map(|f| f.radicands.clone()).unwrap_or_default();
        let ctx = FieldContext::new(radicands).map_err(|e| SpecError::Semantic(format!("field: {e}")))?;
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            let name = g.name.clone().unwrap_or_else(|| format!("g{i}"));
            let ratio = parse_literal(&g.ratio, &ctx, || format!("{name}.ratio"))?;
            if ratio.is_zero() {
                return Err(SpecError::Semantic(format!("{name}: ratio must be nonzero")));
            }
            let map = match (&g.translation, &g.center) {
                (Some(b), None) => {
                    let b = parse_vector(b, n, &ctx, &format!("{name}.translation"))?;
                    AffineMap::new(ratio, b)
                }
                (None, Some(c)) => {
                    if ratio.is_one() {
                        return Err(SpecError::Semantic(format!("{name}: a center needs a ratio different from 1")));
                    }
                    let c = parse_vector(c, n, &ctx, &format!("{name}.center"))?;
                    AffineMap::homothety(c, ratio)
                }
                (Some(_), Some(_)) => {
                    return Err(SpecError::Semantic(format!("{name}: give either translation or center, not both")))
                }
                (None, None) => return Err(SpecError::Semantic(format!("{name}: missing translation or center"))),
            }
            .map_err(|e| SpecError::Semantic(format!("{name}: {e}")))?;
            gens.push(Generator { name, map });
        }
        GroupSpec::new(n, ctx, gens).map_err(|e| SpecError::Semantic(e.to_string()))
    }

    /// Canonical file for a group: translation form, canonical literals.
    pub fn from_group(spec: &GroupSpec) -> SpecFile {
        let radicands = spec.context().radicands().to_vec();
        SpecFile {
            dimension: spec.dim(),
            field: (!radicands.is_empty()).then_some(FieldSpec { radicands }),
            generators: spec
                .generators()
                .iter()
                .map(|g| GeneratorSpec {
                    name: Some(g.name.clone()),
                    ratio: g.map.ratio().to_string(),
                    translation: Some(render_vector(g.map.translation())),
                    center: None,
                })
                .collect(),
        }
    }
}

pub fn parse_spec(text: &str) -> Result<GroupSpec, SpecError> {
    serde_json::from_str::<SpecFile>(text)?.to_group()
}

pub fn load_spec(path: &Path) -> Result<GroupSpec, SpecError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| SpecError::Read { path: path.display().to_string(), source })?;
    parse_spec(&text)
}

pub fn render_spec(spec: &GroupSpec) -> String {
    serde_json::to_string_pretty(&SpecFile::from_group(spec)).expect("spec serializes")
}

#[derive(Debug, Error)]
pub enum PointError {
    #[error("bad point literal: {0}")]
    Literal(#[from] ScalarError),
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
}

/// Parse `"a, b, c"` into a point of the spec's field.
pub fn parse_point(text: &str, ctx: &Arc<FieldContext>, n: usize) -> Result<Vector, PointError> {
    let coords: Vector = text.split(',').map(|s| FieldScalar::parse(s, ctx)).collect::<Result<_, _>>()?;
    if coords.len() != n {
        return Err(PointError::Dimension { expected: n, got: coords.len() });
    }
    Ok(coords)
}

pub fn render_vector(v: &[FieldScalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn render_word(spec: &GroupSpec, w: &Word) -> String {
    if w.letters().is_empty() {
        return "id".into();
    }
    w.letters()
        .iter()
        .map(|&(g, e)| {
            let name = &spec.generators()[g].name;
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub base: Vec<String>,
    pub directions: Vec<Vec<String>>,
    pub dim: usize,
}

impl From<&AffineSubspace> for SubspaceJson {
    fn from(e: &AffineSubspace) -> Self {
        SubspaceJson {
            base: render_vector(e.base()),
            directions: e.directions().iter().map(|d| render_vector(d)).collect(),
            dim: e.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaJson {
    pub variant: String,
    pub rho: Option<String>,
    pub zero_in_closure: bool,
}

impl From<&MulClosure> for LambdaJson {
    fn from(m: &MulClosure) -> Self {
        LambdaJson {
            variant: m.variant_name().into(),
            rho: m.rho().map(ToString::to_string),
            zero_in_closure: m.zero_in_closure,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HJson {
    pub variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub real_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl From<&AddClosure> for HJson {
    fn from(h: &AddClosure) -> Self {
        let mut out = HJson {
            variant: h.variant_name().into(),
            basis: None,
            direction: None,
            real_rank: None,
            rational_rank: None,
            notes: None,
        };
        match h {
            AddClosure::Lattice { basis } => out.basis = Some(basis.iter().map(|b| render_vector(b)).collect()),
            AddClosure::DenseLine { direction } => out.direction = Some(render_vector(direction)),
            AddClosure::Unresolved { real_rank, rational_rank, notes } => {
                out.real_rank = Some(*real_rank);
                out.rational_rank = Some(*rational_rank);
                out.notes = Some(notes.clone());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicatesJson {
    pub has_dense_orbit: Option<bool>,
    #[serde(rename = "every_U_orbit_minimal_in_U", skip_serializing_if = "Option::is_none")]
    pub every_u_orbit_minimal_in_u: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub every_orbit_minimal: Option<bool>,
    pub has_periodic_orbit: bool,
    #[serde(rename = "dim_E", skip_serializing_if = "Option::is_none")]
    pub dim_e: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub case: String,
    pub abelian: bool,
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub e: Option<SubspaceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaJson>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    pub h: Option<HJson>,
    pub a: Vec<String>,
    pub predicates: PredicatesJson,
    pub warnings: Vec<String>,
}

impl From<&ClassificationReport> for ReportJson {
    fn from(r: &ClassificationReport) -> Self {
        ReportJson {
            case: match r.case {
                Case::One => "one",
                Case::Two => "two",
            }
            .into(),
            abelian: false,
            e: r.e.as_ref().map(Into::into),
            lambda: r.lambda.as_ref().map(Into::into),
            h: r.h.as_ref().map(Into::into),
            a: render_vector(&r.a),
            predicates: PredicatesJson {
                has_dense_orbit: r.predicates.has_dense_orbit,
                every_u_orbit_minimal_in_u: r.predicates.every_u_orbit_minimal_in_u,
                every_orbit_minimal: r.predicates.every_orbit_minimal,
                has_periodic_orbit: r.predicates.has_periodic_orbit,
                dim_e: r.predicates.dim_e,
            },
            warnings: r.warnings.clone(),
        }
    }
}

pub fn component_label(c: ComponentCount) -> serde_json::Value {
    match c {
        ComponentCount::Finite(k) => k.into(),
        ComponentCount::CountablyInfinite => "countably-infinite".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DescriptionJson {
    AffineSet {
        #[serde(rename = "E")]
        e: SubspaceJson,
    },
    ScaledFamily {
        base: Vec<String>,
        direction: Vec<String>,
        lambda: LambdaJson,
        #[serde(rename = "E")]
        e: SubspaceJson,
    },
    CosetPair {
        x: Vec<String>,
        a: Vec<String>,
        #[serde(rename = "H")]
        h: HJson,
    },
}

impl From<&OrbitClosureDescription> for DescriptionJson {
    fn from(d: &OrbitClosureDescription) -> Self {
        match d {
            OrbitClosureDescription::AffineSet { e } => DescriptionJson::AffineSet { e: e.into() },
            OrbitClosureDescription::ScaledFamily { base, direction, lambda, e } => DescriptionJson::ScaledFamily {
                base: render_vector(base),
                direction: render_vector(direction),
                lambda: lambda.into(),
                e: e.into(),
            },
            OrbitClosureDescription::CosetPair { x, a, h } => {
                DescriptionJson::CosetPair { x: render_vector(x), a: render_vector(a), h: h.into() }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessedPoint {
    pub point: Vec<String>,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessedRatio {
    pub value: String,
    pub word: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaJson {
    pub max_word_len: usize,
    pub element_count: usize,
    pub gamma_centers: Vec<WitnessedPoint>,
    pub gamma0_points: Vec<WitnessedPoint>,
    pub delta_points: Vec<WitnessedPoint>,
    pub translation_points: Vec<WitnessedPoint>,
    pub ratios: Vec<WitnessedRatio>,
}

impl OmegaJson {
    pub fn new(spec: &GroupSpec, s: &OmegaSample) -> Self {
        let points = |m: &indexmap::IndexMap<Vector, Word>| {
            m.iter().map(|(p, w)| WitnessedPoint { point: render_vector(p), word: render_word(spec, w) }).collect()
        };
        OmegaJson {
            max_word_len: s.max_word_len,
            element_count: s.element_count(),
            gamma_centers: points(&s.gamma_centers),
            gamma0_points: points(&s.gamma0_points),
            delta_points: points(&s.delta_points),
            translation_points: points(&s.translation_points),
            ratios: s
                .ratios
                .iter()
                .map(|(r, w)| WitnessedRatio { value: r.to_string(), word: render_word(spec, w) })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify_group;

    const REFLECTION_INCOMMENSURABLE: &str = r#"{
        "dimension": 2,
        "field": {"radicands": [2]},
        "generators": [
            {"name": "f", "ratio": "1", "translation": ["1", "0"]},
            {"name": "g", "ratio": "-1", "translation": ["1", "0"]},
            {"name": "h", "ratio": "1", "translation": ["sqrt2", "0"]}
        ]
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let g = parse_spec(REFLECTION_INCOMMENSURABLE).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.generators()[2].map.translation()[0].to_string(), "sqrt2");
        let again = parse_spec(&render_spec(&g)).unwrap();
        assert_eq!(again, g);
        assert_eq!(render_spec(&again), render_spec(&g));
    }

    #[test]
    fn center_form() {
        let text = r#"{"dimension": 1, "generators": [
            {"ratio": "3", "center": ["1/2"]}, {"ratio": "-1/2", "translation": ["0"]}]}"#;
        let g = parse_spec(text).unwrap();
        assert_eq!(g.generators()[0].name, "g0");
        // b = (1 - 3) * 1/2
        assert_eq!(g.generators()[0].map.translation()[0].to_string(), "-1");
    }

    #[test]
    fn errors_split_into_syntax_and_semantic() {
        let cases = [
            ("{", true),
            (r#"{"dimension": 1, "generators": [{"ratio": "2+", "translation": ["0"]}]}"#, true),
            (r#"{"dimension": 1, "generators": [{"ratio": "1", "center": ["0"]}]}"#, false),
            (r#"{"dimension": 1, "generators": [{"ratio": "0", "translation": ["0"]}]}"#, false),
            (r#"{"dimension": 2, "generators": [{"ratio": "2", "translation": ["0"]}]}"#, false),
            (r#"{"dimension": 1, "generators": []}"#, false),
            (r#"{"dimension": 1, "field": {"radicands": [4]}, "generators": [{"ratio": "2", "translation": ["0"]}]}"#, false),
            (r#"{"dimension": 1, "generators": [{"ratio": "2", "translation": ["sqrt5"]}]}"#, false),
            (r#"{"dimension": 1, "generators": [{"ratio": 2, "translation": ["0"]}]}"#, false),
        ];
        for (text, syntax) in cases {
            let e = parse_spec(text).unwrap_err();
            assert_eq!(e.is_syntax(), syntax, "{text}: {e}");
        }
    }

    #[test]
    fn points() {
        let ctx = FieldContext::new(vec![2]).unwrap();
        let p = parse_point("sqrt2, -1/2", &ctx, 2).unwrap();
        assert_eq!(render_vector(&p), vec!["sqrt2", "-1/2"]);
        assert!(matches!(parse_point("1", &ctx, 2), Err(PointError::Dimension { .. })));
        assert!(matches!(parse_point("1,x", &ctx, 2), Err(PointError::Literal(_))));
    }

    #[test]
    fn report_schema() {
        let g = parse_spec(REFLECTION_INCOMMENSURABLE).unwrap();
        let r = classify_group(&g).unwrap();
        let v = serde_json::to_value(ReportJson::from(&r)).unwrap();
        assert_eq!(v["case"], "two");
        assert_eq!(v["H"]["variant"], "DenseLine");
        assert_eq!(v["a"], serde_json::json!(["1", "0"]));
        assert_eq!(v["predicates"]["every_orbit_minimal"], true);
        assert!(v.get("E").is_none());
        let d = r.orbit_closure(&parse_point("0,1", g.context(), 2).unwrap()).unwrap();
        let dj = serde_json::to_value(DescriptionJson::from(&d)).unwrap();
        assert_eq!(dj["kind"], "CosetPair");
    }

    #[test]
    fn words_render_with_names() {
        let g = parse_spec(REFLECTION_INCOMMENSURABLE).unwrap();
        let w = Word::new(vec![(0, 2), (1, -1)]).unwrap();
        assert_eq!(render_word(&g, &w), "f^2 g^-1");
        assert_eq!(render_word(&g, &Word::empty()), "id");
    }
}
