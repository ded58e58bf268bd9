use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use vf_core::closure::{
    falsify_equation_ideal, falsify_smallest_closed, generic_apply, BranchNode, BranchStatus, Certificate, Method,
    TruncatedIdeal, Verdict,
};
use vf_core::variety::{Coords, TruncatedAlgebra, VarietyJson};
use vf_core::verbal::{check_op2, inner_witness, InnerResult, Op2Report, VerbalJson};
use vf_core::{Element, Error, ParamPoly, Result, Scalar};

use crate::job::Resolved;

pub(crate) fn label(alg: &TruncatedAlgebra, i: usize) -> String {
    alg.generators()
        .render(&Element::<Scalar>::monomial(alg.basis_monomial(i).clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisReport {
    pub variety: VarietyJson,
    pub generators: usize,
    pub max_degree: usize,
    pub dims: Vec<usize>,
    pub total: usize,
    pub basis: Vec<Vec<String>>,
}

pub fn basis(res: &Resolved) -> Result<BasisReport> {
    let alg = res.algebra()?;
    let dims = alg.component_dims();
    Ok(BasisReport {
        variety: alg.presentation().to_json(),
        generators: alg.ngens(),
        max_degree: alg.max_degree(),
        total: dims.iter().sum(),
        basis: (1..=alg.max_degree())
            .map(|d| alg.degree_range(d).map(|i| label(&alg, i)).collect())
            .collect(),
        dims,
    })
}

impl BasisReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = self.variety.name.as_deref().unwrap_or("custom");
        let _ = writeln!(
            out,
            "{name}: {} generators, degree <= {}",
            self.generators, self.max_degree
        );
        for (d, row) in self.basis.iter().enumerate() {
            let _ = writeln!(out, "  degree {} ({}): {}", d + 1, row.len(), row.join(", "));
        }
        let _ = writeln!(out, "  dims {:?}, total {}", self.dims, self.total);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientLine {
    pub basis: String,
    pub coefficient: ParamPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub element: String,
    /// Whether `σ_F` was applied before the generic endomorphism.
    pub twisted: bool,
    pub image: Vec<CoefficientLine>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpandReport {
    pub variety: VarietyJson,
    pub generators: usize,
    pub degree_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<VerbalJson>,
    pub expansions: Vec<Expansion>,
}

/// Image of `σ(e)` (or `e` without a system) under the generic linear endomorphism.
pub(crate) fn generic_image(res: &Resolved, alg: &TruncatedAlgebra, e: &Element<Scalar>) -> Result<Coords<ParamPoly>> {
    let c = alg.coords(e)?;
    let c = match &res.system {
        Some(w) => w.sigma_coords(alg, &c),
        None => c,
    };
    Ok(generic_apply(alg, &c))
}

fn expand_inputs(res: &Resolved) -> Vec<Element<Scalar>> {
    let mut v = res.ideal.clone();
    v.extend(res.identity_generator.iter().cloned());
    v
}

pub fn expand(res: &Resolved) -> Result<ExpandReport> {
    let alg = res.algebra()?;
    let inputs = expand_inputs(res);
    if inputs.is_empty() {
        return Err(Error::Precondition(
            "`ideal` or `identity_generator` entries to expand".into(),
        ));
    }
    let expansions = inputs
        .iter()
        .map(|e| {
            let image = generic_image(res, &alg, e)?;
            Ok(Expansion {
                element: alg.generators().render(e),
                twisted: res.system.is_some(),
                image: image
                    .into_iter()
                    .map(|(i, p)| CoefficientLine {
                        basis: label(&alg, i),
                        coefficient: p,
                    })
                    .collect(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ExpandReport {
        variety: alg.presentation().to_json(),
        generators: alg.ngens(),
        degree_bound: alg.max_degree(),
        system: res.system.as_ref().map(|w| w.to_json()),
        expansions,
    })
}

impl ExpandReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.expansions {
            let head = if e.twisted { "alpha(s_F(t))" } else { "alpha(t)" };
            let _ = writeln!(out, "{head} for t = {}", e.element);
            for l in &e.image {
                let _ = writeln!(out, "  {}: {}", l.basis, l.coefficient);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Op2Output {
    pub variety: VarietyJson,
    pub system: VerbalJson,
    pub degree_bound: usize,
    pub report: Op2Report,
}

pub fn op2(res: &Resolved) -> Result<Op2Output> {
    let w = res.system()?;
    let report = check_op2(&res.theta, w, res.spec.degree_bound, &res.gens)?;
    Ok(Op2Output {
        variety: res.theta.to_json(),
        system: w.to_json(),
        degree_bound: res.spec.degree_bound,
        report,
    })
}

impl Op2Output {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} with w = {}*x1x2 + {}*x2x1, phi = {}: Op2 {}\n",
            self.variety.name.as_deref().unwrap_or("custom"),
            self.system.a,
            self.system.b,
            self.system.phi,
            if self.report.pass { "holds" } else { "fails" }
        );
        if self.report.noncanonical_word {
            out.push_str("  w is not in canonical form for this variety\n");
        }
        if let Some(id) = &self.report.failed_identity {
            let _ = writeln!(out, "  identity fails: {id}");
            if let Some(wit) = &self.report.witness {
                let _ = writeln!(out, "  at {}", wit.join(", "));
            }
        }
        for (md, ok) in &self.report.sigma_invertible {
            if !ok {
                let _ = writeln!(out, "  sigma singular on multidegree {md:?}");
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerOutput {
    pub variety: VarietyJson,
    pub system: VerbalJson,
    pub result: InnerResult,
}

pub fn inner(res: &Resolved) -> Result<InnerOutput> {
    let w = res.system()?;
    Ok(InnerOutput {
        variety: res.theta.to_json(),
        system: w.to_json(),
        result: inner_witness(&res.theta, w, res.spec.degree_bound)?,
    })
}

impl InnerOutput {
    pub fn to_text(&self) -> String {
        let head = format!(
            "{} with w = {}*x1x2 + {}*x2x1, phi = {}",
            self.variety.name.as_deref().unwrap_or("custom"),
            self.system.a,
            self.system.b,
            self.system.phi
        );
        match &self.result {
            InnerResult::Witness { mu } => format!("{head}: inner, c(x) = ({mu}) x\n"),
            InnerResult::Refuted { reason } => format!("{head}: not inner ({reason})\n"),
            InnerResult::Unknown { reason } => format!("{head}: unknown ({reason})\n"),
        }
    }
}

pub fn falsify(res: &Resolved) -> Result<Certificate> {
    let w = res.system()?;
    match res.spec.method.unwrap_or(Method::EquationIdeal) {
        Method::EquationIdeal => {
            let alg: Arc<TruncatedAlgebra> = res.algebra()?;
            let tail = res
                .spec
                .tail
                .ok_or_else(|| Error::Precondition("`tail` for the equation-ideal method".into()))?;
            let ideal = TruncatedIdeal::build(alg, &res.ideal, tail)?;
            falsify_equation_ideal(&ideal, w, &res.target, &res.hints, res.depth())
        }
        Method::SmallestClosed => {
            let gen = res
                .identity_generator
                .as_ref()
                .ok_or_else(|| Error::Precondition("`identity_generator` for the smallest-closed method".into()))?;
            falsify_smallest_closed(&res.theta, w, gen, res.spec.degree_bound)
        }
    }
}

fn leaf_lines(node: &BranchNode, path: &mut Vec<String>, out: &mut String) {
    let depth = path.len();
    path.extend(node.assumptions.iter().cloned());
    if node.is_leaf() {
        let hyp = if path.is_empty() {
            "(no split)".to_string()
        } else {
            path.join("; ")
        };
        let _ = writeln!(out, "    [{:?}] {hyp}", node.branch.status);
    }
    for c in &node.children {
        leaf_lines(c, path, out);
    }
    path.truncate(depth);
}

pub fn certificate_text(c: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} over {} generators, degree <= {}",
        c.variety.name.as_deref().unwrap_or("custom"),
        c.generators,
        c.degree_bound
    );
    let _ = writeln!(
        out,
        "  T = <{}> + F^{} (dim {}), s_F(T) dim {}",
        c.ideal.generators.join(", "),
        c.ideal.tail,
        c.ideal.dimension,
        c.image.dimension
    );
    if !c.constraints.is_empty() {
        out.push_str("  constraints:\n");
        for l in &c.constraints {
            let _ = writeln!(out, "    {}: {} = 0", l.basis, l.equation);
        }
    }
    if let Some(tree) = &c.branches {
        let _ = writeln!(
            out,
            "  branches: {} closed, {} infeasible, {} stuck, {} open",
            tree.count(BranchStatus::Closed),
            tree.count(BranchStatus::Infeasible),
            tree.count(BranchStatus::Stuck),
            tree.count(BranchStatus::Open)
        );
        leaf_lines(tree, &mut vec![], &mut out);
    } else {
        let _ = writeln!(out, "  V = span of {} elements", c.target.len());
    }
    if let Some(w) = &c.witness {
        let _ = writeln!(out, "  witness outside s_F(T): {w}");
    }
    let verdict = match c.verdict {
        Verdict::NotGeometricallyEquivalent => "not_geometrically_equivalent",
        Verdict::Inconclusive => "inconclusive",
        Verdict::NoFalsification => "no_falsification",
    };
    let _ = writeln!(out, "  verdict: {verdict}");
    out
}
