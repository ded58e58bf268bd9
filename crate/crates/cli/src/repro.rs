use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use vf_core::closure::{gen_constraints, BranchStatus, Certificate, TruncatedIdeal, Verdict};
use vf_core::parse::{parse_element, parse_param_poly};
use vf_core::variety::{Builtin, TruncatedAlgebra, VarietyPresentation};
use vf_core::verbal::{check_op2, inner_witness, InnerResult, VerbalSystem};
use vf_core::{Error, FieldAutomorphism, GeneratorSet, ParamPoly, Result, Scalar};

use crate::commands::{falsify, generic_image};
use crate::job::{JobSpec, Resolved};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
pub enum ExampleId {
    #[serde(rename = "aut_1_3_4")]
    #[value(name = "aut_1_3_4")]
    Aut134,
    #[serde(rename = "aut_2_5")]
    #[value(name = "aut_2_5")]
    Aut25,
    #[serde(rename = "aut_6")]
    #[value(name = "aut_6")]
    Aut6,
    #[serde(rename = "s_1_3")]
    #[value(name = "s_1_3")]
    S13,
    #[serde(rename = "s_4")]
    #[value(name = "s_4")]
    S4,
    #[serde(rename = "op2_table")]
    #[value(name = "op2_table")]
    Op2Table,
    #[serde(rename = "inner_table")]
    #[value(name = "inner_table")]
    InnerTable,
}

impl ExampleId {
    pub const ALL: [ExampleId; 7] = [
        ExampleId::Aut134,
        ExampleId::Aut25,
        ExampleId::Aut6,
        ExampleId::S13,
        ExampleId::S4,
        ExampleId::Op2Table,
        ExampleId::InnerTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Aut134 => "aut_1_3_4",
            ExampleId::Aut25 => "aut_2_5",
            ExampleId::Aut6 => "aut_6",
            ExampleId::S13 => "s_1_3",
            ExampleId::S4 => "s_4",
            ExampleId::Op2Table => "op2_table",
            ExampleId::InnerTable => "inner_table",
        }
    }

    /// The pinned job spec, for the falsification examples.
    pub fn job(self) -> Option<&'static str> {
        Some(match self {
            ExampleId::Aut134 => include_str!("../../../specs/aut_1_3_4.json"),
            ExampleId::Aut25 => include_str!("../../../specs/aut_2_5.json"),
            ExampleId::Aut6 => include_str!("../../../specs/aut_6.json"),
            ExampleId::S13 => include_str!("../../../specs/s_1_3.json"),
            ExampleId::S4 => include_str!("../../../specs/s_4.json"),
            ExampleId::Op2Table | ExampleId::InnerTable => return None,
        })
    }
}

/// Expected values for one falsification example. Element keys may be any
/// element equal to `±1` times a basis monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub dims: Vec<usize>,
    /// Coefficients of `α(σ(t))`, listed exhaustively.
    pub image: Vec<(String, String)>,
    /// Constraint polynomials, listed exhaustively.
    pub constraints: Vec<(String, String)>,
    pub verdict: Verdict,
    pub witness: Option<String>,
    pub target_dim: Option<usize>,
}

fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
    v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

pub type Expectations = BTreeMap<ExampleId, Expected>;

/// The values shipped with the binary.
pub fn embedded_expectations() -> Expectations {
    let mut m = BTreeMap::new();
    m.insert(
        ExampleId::Aut134,
        Expected {
            dims: vec![2, 4],
            image: pairs(&[
                ("(x1 x1)", "(t2 + 1)*a11*a12"),
                ("(x1 x2)", "t2*a11*a22 + a12*a21"),
                ("(x2 x1)", "a11*a22 + t2*a12*a21"),
                ("(x2 x2)", "(t2 + 1)*a21*a22"),
            ]),
            constraints: pairs(&[
                ("(x1 x1)", "(t2 + 1)*a11*a12"),
                ("(x1 x2)", "t2*a11*a22 + a12*a21 - t1*rho"),
                ("(x2 x1)", "a11*a22 + t2*a12*a21 - rho"),
                ("(x2 x2)", "(t2 + 1)*a21*a22"),
            ]),
            verdict: Verdict::NotGeometricallyEquivalent,
            witness: Some("(x1 x2)".into()),
            target_dim: None,
        },
    );
    let comm_image = [
        ("(x1 (x1 x1))", "(t2 + 1)*a11^2*a12"),
        ("(x1 (x1 x2))", "t2*a11^2*a22 + (t2 + 2)*a11*a12*a21"),
        ("(x1 (x2 x2))", "t2*a11*a21*a22 + a12*a21^2"),
        ("(x2 (x1 x1))", "t2*a11*a12*a21 + a11^2*a22"),
        ("(x2 (x1 x2))", "t2*a12*a21^2 + (t2 + 2)*a11*a21*a22"),
        ("(x2 (x2 x2))", "(t2 + 1)*a21^2*a22"),
    ];
    m.insert(
        ExampleId::Aut25,
        Expected {
            dims: vec![2, 3, 6],
            image: pairs(&comm_image),
            constraints: pairs(&[
                comm_image[0],
                ("(x1 (x1 x2))", "t2*a11^2*a22 + (t2 + 2)*a11*a12*a21 - t1*rho"),
                comm_image[2],
                ("(x2 (x1 x1))", "t2*a11*a12*a21 + a11^2*a22 - rho"),
                comm_image[4],
                comm_image[5],
            ]),
            verdict: Verdict::NotGeometricallyEquivalent,
            witness: Some("(x1 (x1 x2))".into()),
            target_dim: None,
        },
    );
    let e = [
        "[x1, [x1, [x1, [x1, x2]]]]",
        "[x1, [x1, [[x1, x2], x2]]]",
        "[x1, [[[x1, x2], x2], x2]]",
        "[[x1, [x1, x2]], [x1, x2]]",
        "[[x1, x2], [[x1, x2], x2]]",
        "[[[[x1, x2], x2], x2], x2]",
    ];
    let alpha = [
        "-t2*a11^2*a12*(a11*a22 - a12*a21)",
        "t2*a11*(a11*a22 - a12*a21)*(a11*a22 + 2*a12*a21)",
        "-t2*a21*(a11*a22 - a12*a21)*(2*a11*a22 + a12*a21)",
        "-a11*(a11*a22 - a12*a21)*(t2*a12*a21 - a11*a22 + a12*a21)",
        "a21*(a11*a22 - a12*a21)*(-t2*(a12*a21 + a11*a22) + (a11*a22 - a12*a21))",
        "t2*a21^2*a22*(a11*a22 - a12*a21)",
    ];
    let alpha10 = format!("{} - t1*rho", alpha[1]);
    let alpha12 = format!("{} - rho", alpha[3]);
    m.insert(
        ExampleId::Aut6,
        Expected {
            dims: vec![2, 1, 2, 3, 6],
            image: e
                .iter()
                .zip(alpha)
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            constraints: pairs(&[
                (e[0], alpha[0]),
                (e[1], &alpha10),
                (e[2], alpha[2]),
                (e[3], &alpha12),
                (e[4], alpha[4]),
                (e[5], alpha[5]),
            ]),
            verdict: Verdict::NotGeometricallyEquivalent,
            witness: Some(e[0].into()),
            target_dim: None,
        },
    );
    m.insert(
        ExampleId::S13,
        Expected {
            dims: vec![2, 4, 16],
            image: vec![],
            constraints: vec![],
            verdict: Verdict::NotGeometricallyEquivalent,
            witness: Some("3 * ((x1 x1) x2) + 6 * (x2 (x1 x1))".into()),
            target_dim: Some(6),
        },
    );
    m.insert(
        ExampleId::S4,
        Expected {
            dims: vec![2, 4, 8],
            image: vec![],
            constraints: vec![],
            verdict: Verdict::NotGeometricallyEquivalent,
            witness: Some("((x2 x2) x1)".into()),
            target_dim: Some(6),
        },
    );
    m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub item: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub example: ExampleId,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub pass: bool,
    pub examples: Vec<ExampleReport>,
}

impl ReproReport {
    pub fn first_mismatch(&self) -> Option<(ExampleId, &Check)> {
        self.examples
            .iter()
            .find_map(|e| e.checks.iter().find(|c| !c.pass).map(|c| (e.example, c)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.examples {
            for line in &e.table {
                let _ = writeln!(out, "{line}");
            }
            let failed: Vec<&Check> = e.checks.iter().filter(|c| !c.pass).collect();
            let _ = writeln!(
                out,
                "{}: {} ({} of {} checks match)",
                e.example.name(),
                if e.pass { "ok" } else { "MISMATCH" },
                e.checks.len() - failed.len(),
                e.checks.len()
            );
            for c in failed {
                let _ = writeln!(out, "  {}: expected {}, got {}", c.item, c.expected, c.actual);
            }
        }
        out
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, item: impl Into<String>, expected: impl ToString, actual: impl ToString, pass: bool) {
        self.0.push(Check {
            item: item.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        });
    }

    fn eq<T: PartialEq + ToString>(&mut self, item: impl Into<String>, expected: T, actual: T) {
        let pass = expected == actual;
        self.push(item, expected.to_string(), actual.to_string(), pass);
    }
}

/// Basis index and sign of an element equal to `±1` times a basis monomial.
fn basis_key(alg: &TruncatedAlgebra, s: &str) -> Result<(usize, Scalar)> {
    let c = alg.coords(&parse_element(s)?)?;
    match c.into_iter().collect::<Vec<_>>().as_slice() {
        [(i, x)] if x.is_one() || (-x).is_one() => Ok((*i, x.clone())),
        _ => Err(Error::Precondition(format!("`{s}` is not a signed basis element"))),
    }
}

fn compare_polys(
    checks: &mut Checks,
    what: &str,
    alg: &TruncatedAlgebra,
    expected: &[(String, String)],
    actual: &BTreeMap<usize, ParamPoly>,
) -> Result<()> {
    let mut seen = Vec::new();
    for (key, poly) in expected {
        let (i, sign) = basis_key(alg, key)?;
        seen.push(i);
        let want = parse_param_poly(poly)?;
        let got = actual.get(&i).cloned().unwrap_or_else(ParamPoly::zero).scale(&sign);
        let pass = want == got;
        checks.push(format!("{what} at {key}"), want, got, pass);
    }
    let extra: Vec<String> = actual
        .keys()
        .filter(|i| !seen.contains(i))
        .map(|i| crate::commands::label(alg, *i))
        .collect();
    checks.push(format!("{what} support"), "[]", format!("{extra:?}"), extra.is_empty());
    Ok(())
}

fn same_element(alg: &TruncatedAlgebra, a: &str, b: &str) -> bool {
    let coords = |s: &str| parse_element(s).and_then(|e| alg.coords(&e));
    matches!((coords(a), coords(b)), (Ok(x), Ok(y)) if x == y)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::NotGeometricallyEquivalent => "not_geometrically_equivalent",
        Verdict::Inconclusive => "inconclusive",
        Verdict::NoFalsification => "no_falsification",
    }
}

/// Runs a pinned falsification example and compares it with `exp`.
pub fn run_falsification(id: ExampleId, exp: &Expected) -> Result<(Certificate, Vec<Check>)> {
    let job = JobSpec::from_json(id.job().expect("falsification example"))?;
    let res: Resolved = job.resolve()?;
    let w = res.system()?;
    let alg = res.algebra()?;
    let mut checks = Checks(vec![]);
    checks.eq("dims", format!("{:?}", exp.dims), format!("{:?}", alg.component_dims()));

    if let Some(t) = res.ideal.first() {
        let image = generic_image(&res, &alg, t)?;
        compare_polys(&mut checks, "image", &alg, &exp.image, &image)?;
        let ideal = TruncatedIdeal::build(alg.clone(), &res.ideal, res.spec.tail.unwrap_or(0))?;
        let cs = gen_constraints(&ideal, w)?;
        let eqs = cs
            .equations
            .iter()
            .map(|c| (c.basis_index, c.equation.clone()))
            .collect();
        compare_polys(&mut checks, "constraint", &alg, &exp.constraints, &eqs)?;
    }

    let cert = falsify(&res)?;
    checks.eq("verdict", verdict_name(exp.verdict), verdict_name(cert.verdict));
    let wit_ok = match (&exp.witness, &cert.witness) {
        (Some(a), Some(b)) => same_element(&alg, a, b),
        (None, None) => true,
        _ => false,
    };
    checks.push(
        "witness",
        exp.witness.as_deref().unwrap_or("none"),
        cert.witness.as_deref().unwrap_or("none"),
        wit_ok,
    );
    if let Some(tree) = &cert.branches {
        let stuck = tree.count(BranchStatus::Stuck) + tree.count(BranchStatus::Open);
        checks.eq("undecided branches", 0, stuck);
        let unverified = tree.leaves().iter().filter(|l| l.kernel_verified != Some(true)).count();
        checks.eq("branches without kernel proof", 0, unverified);
    }
    if let Some(d) = exp.target_dim {
        checks.eq("dim V", d, cert.target.len());
    }
    Ok((cert, checks.0))
}

/// Rows of the summary table of `𝔄/𝔜` by variety.
pub const GROUP_TABLE: [(&str, &str); 6] = [
    ("linear algebras", "k* ⋉ Aut k"),
    ("commutative algebras", "Aut k"),
    ("power associative algebras", "k* ⋉ Aut k"),
    ("alternative algebras", "S₂ × Aut k"),
    ("Jordan algebras", "Aut k"),
    ("anticommutative subvarieties over Z", "Aut k"),
];

const TABLE_VARIETIES: [Builtin; 6] = [
    Builtin::AllLinear,
    Builtin::Commutative,
    Builtin::PowerAssociative,
    Builtin::Alternative,
    Builtin::Jordan,
    Builtin::Lie,
];

const GRID: [(i64, i64); 9] = [(1, 0), (2, 0), (0, 1), (0, 3), (1, 1), (1, -1), (2, 1), (1, 2), (3, -1)];

/// Admissible words `a·x1x2 + b·x2x1` by variety.
fn op2_expected(b: Builtin, (x, y): (i64, i64)) -> bool {
    match b {
        Builtin::AllLinear | Builtin::PowerAssociative => x != y && x != -y,
        Builtin::Alternative => (x == 0) != (y == 0),
        Builtin::Commutative | Builtin::Jordan | Builtin::Lie | Builtin::Anticommutative => x != 0 && y == 0,
    }
}

fn word(phi: FieldAutomorphism, a: Scalar, b: Scalar) -> VerbalSystem {
    VerbalSystem::new(phi, a, b).expect("nonzero word")
}

fn op2_table() -> Result<ExampleReport> {
    let mut checks = Checks(vec![]);
    let mut table = vec!["variety | A/Y | admissible (a, b) on the grid".to_string()];
    for (row, b) in GROUP_TABLE.iter().zip(TABLE_VARIETIES) {
        let theta = VarietyPresentation::builtin(b);
        let mut ok = Vec::new();
        for p in GRID {
            let w = word(
                FieldAutomorphism::identity(),
                Scalar::from_int(p.0),
                Scalar::from_int(p.1),
            );
            let r = check_op2(&theta, &w, 3, &GeneratorSet::new(2))?;
            checks.eq(format!("{} Op2 at {:?}", b.name(), p), op2_expected(b, p), r.pass);
            if r.pass {
                ok.push(format!("({},{})", p.0, p.1));
            }
        }
        table.push(format!("{} | {} | {}", row.0, row.1, ok.join(" ")));
    }
    Ok(report(ExampleId::Op2Table, checks, table))
}

fn inner_table() -> Result<ExampleReport> {
    let mut checks = Checks(vec![]);
    let mut table = vec!["variety | phi | a | b | inner".to_string()];
    let swap = FieldAutomorphism::swap(1, 2)?;
    let t1 = Scalar::transcendental(0);
    for b in TABLE_VARIETIES {
        let theta = VarietyPresentation::builtin(b);
        let mut probes = vec![
            (FieldAutomorphism::identity(), Scalar::one(), Scalar::zero()),
            (FieldAutomorphism::identity(), Scalar::from_int(2), Scalar::zero()),
            (FieldAutomorphism::identity(), t1.clone(), Scalar::zero()),
            (swap.clone(), Scalar::one(), Scalar::zero()),
        ];
        match b {
            Builtin::AllLinear | Builtin::PowerAssociative => {
                probes.push((FieldAutomorphism::identity(), Scalar::from_int(2), Scalar::one()));
            }
            Builtin::Alternative => {
                probes.push((FieldAutomorphism::identity(), Scalar::zero(), Scalar::one()));
            }
            _ => {}
        }
        for (phi, a, bb) in probes {
            let inner_expected = phi.is_identity() && bb.is_zero();
            let w = word(phi.clone(), a.clone(), bb.clone());
            let got = inner_witness(&theta, &w, 3)?;
            let (expected, actual, pass) = match (&got, inner_expected) {
                (InnerResult::Witness { mu }, true) => {
                    let want = a.inv()?;
                    (
                        format!("witness mu = {want}"),
                        format!("witness mu = {mu}"),
                        *mu == want,
                    )
                }
                (InnerResult::Refuted { .. }, false) => ("refuted".into(), "refuted".into(), true),
                (r, e) => (
                    if e {
                        "witness".to_string()
                    } else {
                        "refuted".to_string()
                    },
                    format!("{r:?}"),
                    false,
                ),
            };
            table.push(format!("{} | {} | {a} | {bb} | {actual}", b.name(), phi.spec_string()));
            checks.push(
                format!("{} inner for ({}, {a}, {bb})", b.name(), phi.spec_string()),
                expected,
                actual,
                pass,
            );
        }
    }
    Ok(report(ExampleId::InnerTable, checks, table))
}

fn report(id: ExampleId, checks: Checks, table: Vec<String>) -> ExampleReport {
    ExampleReport {
        example: id,
        pass: checks.0.iter().all(|c| c.pass),
        checks: checks.0,
        table,
    }
}

pub fn run_example(id: ExampleId, expectations: &Expectations) -> Result<ExampleReport> {
    match id {
        ExampleId::Op2Table => op2_table(),
        ExampleId::InnerTable => inner_table(),
        _ => {
            let exp = expectations
                .get(&id)
                .ok_or_else(|| Error::Precondition(format!("expectations for `{}`", id.name())))?;
            let (_, checks) = run_falsification(id, exp)?;
            Ok(report(id, Checks(checks), vec![]))
        }
    }
}

pub fn repro(ids: &[ExampleId], expectations: &Expectations) -> Result<ReproReport> {
    let examples = ids
        .iter()
        .map(|&id| run_example(id, expectations))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReproReport {
        pass: examples.iter().all(|e| e.pass),
        examples,
    })
}
