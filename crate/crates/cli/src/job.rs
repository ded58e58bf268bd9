use std::sync::Arc;

use serde::{Deserialize, Serialize};
use vf_core::closure::{Method, DEFAULT_DEPTH};
use vf_core::parse::{parse_element, parse_param_poly};
use vf_core::variety::{BuildOptions, TruncatedAlgebra, VarietyJson, VarietyPresentation};
use vf_core::verbal::{VerbalJson, VerbalSystem};
use vf_core::{Element, Error, FieldSpec, GeneratorSet, Monomial, ParamPoly, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobCommand {
    Basis,
    Expand,
    Op2,
    Inner,
    Falsify,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub transcendentals: usize,
}

impl Default for FieldJson {
    fn default() -> Self {
        FieldJson { transcendentals: 2 }
    }
}

fn two() -> usize {
    2
}

/// A job file: one JSON document describing a single computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: JobCommand,
    #[serde(default)]
    pub field: FieldJson,
    pub variety: VarietyJson,
    #[serde(default = "two")]
    pub generators: usize,
    pub degree_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<VerbalJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    /// Ideal generators for the equation-ideal method, or elements to expand.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<usize>,
    /// Generator of the verbal ideal for the smallest-closed method.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity_generator: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub target: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hints: Vec<String>,
    /// Elements whose leading monomials the basis should prefer, in order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub preferred_basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

/// A job with every string parsed and checked against its context.
pub struct Resolved {
    pub spec: JobSpec,
    pub field: FieldSpec,
    pub theta: VarietyPresentation,
    pub gens: GeneratorSet,
    pub system: Option<VerbalSystem>,
    pub ideal: Vec<Element<Scalar>>,
    pub identity_generator: Option<Element<Scalar>>,
    pub target: Vec<Element<Scalar>>,
    pub hints: Vec<ParamPoly>,
    pub preferred: Vec<Monomial>,
}

impl JobSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: format!("job spec line {}: {e}", e.line()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job spec serializes")
    }

    pub fn resolve(&self) -> Result<Resolved> {
        let field = FieldSpec::new(self.field.transcendentals);
        let theta = VarietyPresentation::from_json(&self.variety)?;
        if self.generators == 0 {
            return Err(Error::Precondition("at least one generator".into()));
        }
        let gens = GeneratorSet::new(self.generators);
        let system = self.system.as_ref().map(VerbalSystem::from_json).transpose()?;
        if let Some(w) = &system {
            if !w.phi().is_defined_on(&field) {
                return Err(Error::Field(format!(
                    "automorphism `{}` moves transcendentals outside the field",
                    w.phi().spec_string()
                )));
            }
            for s in [w.a(), w.b()] {
                check_scalar(&field, s)?;
            }
        }
        let element = |s: &String| -> Result<Element<Scalar>> {
            let e = parse_element(s)?;
            gens.check(&e)?;
            for (_, c) in e.terms() {
                check_scalar(&field, c)?;
            }
            Ok(e)
        };
        let ideal = self.ideal.iter().map(element).collect::<Result<_>>()?;
        let identity_generator = self.identity_generator.as_ref().map(element).transpose()?;
        let target = self.target.iter().map(element).collect::<Result<_>>()?;
        let hints = self.hints.iter().map(|s| parse_param_poly(s)).collect::<Result<_>>()?;
        let preferred_src = if self.preferred_basis.is_empty() {
            default_preferred(&theta, self.generators)
        } else {
            self.preferred_basis.clone()
        };
        let preferred = preferred_src
            .iter()
            .map(|s| {
                let e = element(s)?;
                let lead = e.terms().next().map(|(m, _)| m.clone());
                lead.ok_or_else(|| Error::Precondition(format!("preferred basis entry `{s}` is zero")))
            })
            .collect::<Result<_>>()?;
        Ok(Resolved {
            spec: self.clone(),
            field,
            theta,
            gens,
            system,
            ideal,
            identity_generator,
            target,
            hints,
            preferred,
        })
    }
}

/// Right-normed bracketings of the two-generator free Lie algebra up to
/// degree 5, one per basis element.
pub const LIE_HALL_2: [&str; 14] = [
    "x1",
    "x2",
    "[x1, x2]",
    "[x1, [x1, x2]]",
    "[[x1, x2], x2]",
    "[x1, [x1, [x1, x2]]]",
    "[x1, [[x1, x2], x2]]",
    "[[[x1, x2], x2], x2]",
    "[x1, [x1, [x1, [x1, x2]]]]",
    "[x1, [x1, [[x1, x2], x2]]]",
    "[x1, [[[x1, x2], x2], x2]]",
    "[[x1, [x1, x2]], [x1, x2]]",
    "[[x1, x2], [[x1, x2], x2]]",
    "[[[[x1, x2], x2], x2], x2]",
];

/// Basis preferences used when a job gives none: the bracket basis above
/// for the two-generator Lie algebra, nothing otherwise.
pub fn default_preferred(theta: &VarietyPresentation, ngens: usize) -> Vec<String> {
    if theta.builtin_kind() == Some(vf_core::variety::Builtin::Lie) && ngens == 2 {
        LIE_HALL_2.iter().map(|s| s.to_string()).collect()
    } else {
        vec![]
    }
}

fn check_scalar(field: &FieldSpec, s: &Scalar) -> Result<()> {
    if field.contains(s) {
        Ok(())
    } else {
        Err(Error::Field(format!(
            "scalar `{s}` uses transcendentals beyond the declared {}",
            field.transcendental_count()
        )))
    }
}

impl Resolved {
    pub fn algebra(&self) -> Result<Arc<TruncatedAlgebra>> {
        let opts = BuildOptions {
            preferred: self.preferred.clone(),
        };
        Ok(Arc::new(TruncatedAlgebra::build_with(
            &self.theta,
            &self.gens,
            self.spec.degree_bound,
            &opts,
        )?))
    }

    pub fn system(&self) -> Result<&VerbalSystem> {
        self.system
            .as_ref()
            .ok_or_else(|| Error::Precondition("a verbal system in the job spec".into()))
    }

    pub fn depth(&self) -> usize {
        self.spec.depth.unwrap_or(DEFAULT_DEPTH)
    }
}
