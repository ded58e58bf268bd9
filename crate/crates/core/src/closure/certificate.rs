use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::constraints::{gen_constraints, generic_apply, render_monomial};
use super::ideal::{sf_image, TruncatedIdeal};
use super::solver::{solve_cases, Branch, BranchNode, BranchStatus};
use crate::error::{Error, Result};
use crate::freealg::{Element, GeneratorSet};
use crate::linalg::Echelon;
use crate::scalars::{ParamMonomial, ParamPoly, Scalar};
use crate::variety::{Coords, TruncatedAlgebra, VarietyJson, VarietyPresentation};
use crate::verbal::{check_op2_in, VerbalJson, VerbalSystem};

/// Default depth bound for the case split.
pub const DEFAULT_DEPTH: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotGeometricallyEquivalent,
    Inconclusive,
    NoFalsification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    EquationIdeal,
    SmallestClosed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealSummary {
    pub generators: Vec<String>,
    pub tail: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintLine {
    pub basis: String,
    pub equation: ParamPoly,
}

/// Machine-checkable record of a falsification attempt.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub method: Method,
    pub variety: VarietyJson,
    pub generators: usize,
    pub degree_bound: usize,
    pub system: VerbalJson,
    pub ideal: IdealSummary,
    pub image: IdealSummary,
    pub target: Vec<String>,
    #[serde(default)]
    pub hints: Vec<ParamPoly>,
    #[serde(default)]
    pub constraints: Vec<ConstraintLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<BranchNode>,
    pub witness: Option<String>,
    pub verdict: Verdict,
    /// Whether `s_F` was assumed to come from an automorphism.
    pub automorphic_equivalence: String,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })
    }
}

fn summarize(ideal: &TruncatedIdeal) -> IdealSummary {
    let alg = ideal.algebra();
    IdealSummary {
        generators: ideal.generators().iter().map(|g| alg.generators().render(g)).collect(),
        tail: ideal.tail(),
        dimension: ideal.dim(),
    }
}

/// Checks `α(v) ∈ T` for every `α` satisfying the branch hypotheses and every
/// `v` in `target`. Infeasible branches hold vacuously.
pub fn kernel_contains(ideal: &TruncatedIdeal, branch: &Branch, target: &[Element<Scalar>]) -> Result<bool> {
    match branch.status {
        BranchStatus::Infeasible => return Ok(true),
        BranchStatus::Stuck => {
            return Err(Error::StuckBranch(
                "depth bound reached before the branch closed".into(),
            ))
        }
        BranchStatus::Open | BranchStatus::Closed => {}
    }
    let alg = ideal.algebra();
    for v in target {
        let vc = alg.coords(v)?;
        let nf = alg.element(&vc);
        if !nf.is_homogeneous() || (!nf.is_zero() && nf.min_degree() + 1 < ideal.tail()) {
            return Err(Error::Precondition(format!(
                "target `{}` must be homogeneous of degree at least {}",
                alg.generators().render(v),
                ideal.tail().saturating_sub(1)
            )));
        }
        let rem = ideal.reduce_coords(&generic_apply(alg, &vc));
        for c in rem.values() {
            if !c.reduce(&branch.substitutions, &branch.vanishing)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Falsifies geometric equivalence through `T = ⟨t, F^m⟩`: shows that every
/// linear `α` with `α(s_F(T)) ⊆ T` also maps `V` into `T`, while some element
/// of `V` lies outside `s_F(T)`.
pub fn falsify_equation_ideal(
    ideal: &TruncatedIdeal,
    w: &VerbalSystem,
    target: &[Element<Scalar>],
    hints: &[ParamPoly],
    depth_bound: usize,
) -> Result<Certificate> {
    let alg = ideal.algebra();
    let image = sf_image(w, ideal)?;
    let cs = gen_constraints(ideal, w)?;
    let mut tree = solve_cases(&cs, hints, depth_bound)?;
    let mut undecided = false;
    let mut all_verified = true;
    for leaf in tree.leaves_mut() {
        let ok = match leaf.branch.status {
            BranchStatus::Stuck | BranchStatus::Open => {
                undecided = true;
                false
            }
            _ => kernel_contains(ideal, &leaf.branch, target)?,
        };
        leaf.kernel_verified = Some(ok);
        all_verified &= ok;
    }
    let mut witness = None;
    for v in target {
        if !image.contains(v)? {
            witness = Some(alg.generators().render(&alg.normal_form(v)?));
            break;
        }
    }
    // a decided branch whose kernel misses V refutes the method, not the claim
    let verdict = match (undecided, all_verified, &witness) {
        (true, _, _) => Verdict::Inconclusive,
        (false, true, Some(_)) => Verdict::NotGeometricallyEquivalent,
        _ => Verdict::NoFalsification,
    };
    Ok(Certificate {
        method: Method::EquationIdeal,
        variety: alg.presentation().to_json(),
        generators: alg.ngens(),
        degree_bound: alg.max_degree(),
        system: w.to_json(),
        ideal: summarize(ideal),
        image: summarize(&image),
        target: target.iter().map(|v| alg.generators().render(v)).collect(),
        hints: hints.to_vec(),
        constraints: cs
            .equations
            .iter()
            .map(|c| ConstraintLine {
                basis: c.basis.clone(),
                equation: c.equation.clone(),
            })
            .collect(),
        branches: Some(tree),
        witness,
        verdict,
        automorphic_equivalence: "assumed".into(),
    })
}

/// The `k`-span of the degree-`d` parts of `α(gen)` as `α` ranges over linear
/// endomorphisms: the coefficient vectors of each `a`-monomial.
pub fn linear_orbit_span(alg: &TruncatedAlgebra, gen: &Element<Scalar>) -> Result<Echelon<Scalar>> {
    let image = generic_apply(alg, &alg.coords(gen)?);
    let mut patterns: BTreeMap<ParamMonomial, Coords<Scalar>> = BTreeMap::new();
    for (i, p) in &image {
        for (m, c) in p.terms() {
            patterns.entry(m.clone()).or_default().insert(*i, c.clone());
        }
    }
    Ok(Echelon::span_of(patterns.values()))
}

/// Falsifies geometric equivalence with the smallest closed set containing
/// `gen`: within degree `window`, closure under linear endomorphisms is the
/// span `V` of the linear orbit, and `σ(gen) ∉ V` separates the closures.
pub fn falsify_smallest_closed(
    theta: &VarietyPresentation,
    w: &VerbalSystem,
    gen: &Element<Scalar>,
    window: usize,
) -> Result<Certificate> {
    if gen.is_zero() || !gen.is_homogeneous() {
        return Err(Error::Precondition(
            "the generator must be nonzero and homogeneous".into(),
        ));
    }
    let d = gen.max_degree();
    if window != d {
        return Err(Error::Precondition(format!(
            "the window must equal the generator degree {d} (got {window})"
        )));
    }
    let ngens = gen.generator_bound().max(2);
    let alg = Arc::new(TruncatedAlgebra::build(theta, &GeneratorSet::new(ngens), window)?);
    let report = check_op2_in(&alg, w);
    if !report.pass {
        return Err(Error::Op2Failure(format!(
            "W fails Op2 in `{}`",
            alg.presentation().name()
        )));
    }
    let gc = alg.coords(gen)?;
    if gc.is_empty() {
        return Err(Error::Precondition("the generator vanishes in the variety".into()));
    }
    let span = linear_orbit_span(&alg, gen)?;
    let sigma = w.sigma_coords(&alg, &gc);
    let inside = span.contains(&sigma);
    let ideal = TruncatedIdeal::build(alg.clone(), &[alg.element(&gc)], window + 1)?;
    let image = TruncatedIdeal::build(alg.clone(), &[alg.element(&sigma)], window + 1)?;
    let target: Vec<String> = span
        .rows()
        .map(|(_, r)| alg.generators().render(&alg.element(r)))
        .collect();
    Ok(Certificate {
        method: Method::SmallestClosed,
        variety: theta.to_json(),
        generators: ngens,
        degree_bound: window,
        system: w.to_json(),
        ideal: summarize(&ideal),
        image: summarize(&image),
        target,
        hints: vec![],
        constraints: vec![],
        branches: None,
        witness: (!inside).then(|| alg.generators().render(&alg.element(&sigma))),
        verdict: if inside {
            Verdict::NoFalsification
        } else {
            Verdict::NotGeometricallyEquivalent
        },
        automorphic_equivalence: "assumed".into(),
    })
}

/// Basis labels of degree `d`, for display.
pub fn basis_labels(alg: &TruncatedAlgebra, d: usize) -> Vec<String> {
    alg.degree_range(d)
        .map(|i| render_monomial(alg, alg.basis_monomial(i)))
        .collect()
}
