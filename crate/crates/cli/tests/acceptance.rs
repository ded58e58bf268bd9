//! The acceptance criteria, one test each. Run with `--nocapture` to see the
//! summary lines.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vf_cli::commands::{BasisReport, ExpandReport};
use vf_cli::{run, Env, JobSpec};
use vf_core::closure::{closure_sampled, gen_constraints, BranchStatus, Certificate, TruncatedIdeal, Verdict};
use vf_core::freealg::{enumerate_monomials, linear_indeterminate, substitute, symbolic_substitute};
use vf_core::parse::{parse_element, parse_param_poly, parse_scalar};
use vf_core::variety::{Builtin, TruncatedAlgebra, VarietyPresentation};
use vf_core::verbal::{check_op2, inner_witness, word_transform, InnerResult, VerbalSystem};
use vf_core::{
    Element, Endomorphism, FieldAutomorphism, GeneratorSet, Indeterminate, ParamPoly, Scalar, SymbolicEndomorphism,
};

fn report(n: usize, name: &str, started: Instant) {
    println!("criterion {n:>2} {name}: PASS ({:.2?})", started.elapsed());
}

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn vf(args: &[&str]) -> vf_cli::Outcome {
    let out = run(args.iter().copied(), &Env::default());
    assert_eq!(out.code, 0, "vf {args:?}: {}", out.stderr);
    out
}

fn job(name: &str) -> JobSpec {
    JobSpec::from_json(&std::fs::read_to_string(spec(name)).unwrap()).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational(r: &mut impl Rng) -> Scalar {
    Scalar::from_ratio(r.gen_range(-9..=9), r.gen_range(1..=5))
}

fn nonzero(r: &mut impl Rng) -> Scalar {
    loop {
        let s = rational(r);
        if !s.is_zero() {
            return s;
        }
    }
}

const LIE_E: [&str; 14] = [
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

/// The six displayed coefficients with `φ(λ)` written as `t2`.
const ALPHA: [&str; 6] = [
    "-t2*a11^2*a12*(a11*a22 - a12*a21)",
    "t2*a11*(a11*a22 - a12*a21)*(a11*a22 + 2*a12*a21)",
    "-t2*a21*(a11*a22 - a12*a21)*(2*a11*a22 + a12*a21)",
    "-a11*(a11*a22 - a12*a21)*(t2*a12*a21 - a11*a22 + a12*a21)",
    "a21*(a11*a22 - a12*a21)*(-t2*(a12*a21 + a11*a22) + (a11*a22 - a12*a21))",
    "t2*a21^2*a22*(a11*a22 - a12*a21)",
];

#[test]
fn criterion_01_lie_basis() {
    let t = Instant::now();
    let out = vf(&["basis", "--variety", "lie", "--gens", "2", "--max-deg", "5", "--json"]);
    let r: BasisReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.dims, vec![2, 1, 2, 3, 6]);
    assert_eq!(r.total, 14);

    // the reported basis is the bracket basis
    let res = JobSpec::from_json(r#"{"command": "basis", "variety": {"builtin": "lie"}, "degree_bound": 5}"#)
        .unwrap()
        .resolve()
        .unwrap();
    let alg = res.algebra().unwrap();
    let labels: Vec<String> = (0..alg.dim())
        .map(|i| {
            alg.generators()
                .render(&Element::<Scalar>::monomial(alg.basis_monomial(i).clone()))
        })
        .collect();
    assert_eq!(r.basis.concat(), labels);
    let mut seen = BTreeSet::new();
    for e in LIE_E {
        let c = alg.coords(&parse_element(e).unwrap()).unwrap();
        assert_eq!(c.len(), 1, "{e}");
        let (i, x) = c.into_iter().next().unwrap();
        assert!(x.is_one() || (-&x).is_one(), "{e}: coefficient {x}");
        assert!(seen.insert(i), "{e} repeats a basis element");
    }
    assert_eq!(seen.len(), 14);
    assert!(t.elapsed() < Duration::from_secs(10));
    report(1, "Lie basis", t);
}

#[test]
fn criterion_02_degree_five_image() {
    let t = Instant::now();
    let out = vf(&["expand", "--spec", &spec("aut_6.json"), "--json"]);
    let r: ExpandReport = serde_json::from_str(&out.stdout).unwrap();
    let image: BTreeMap<&str, &ParamPoly> = r.expansions[0]
        .image
        .iter()
        .map(|l| (l.basis.as_str(), &l.coefficient))
        .collect();
    assert_eq!(image.len(), 6);
    let res = job("aut_6.json").resolve().unwrap();
    let alg = res.algebra().unwrap();
    for (e, a) in LIE_E[8..].iter().zip(ALPHA) {
        let c = alg.coords(&parse_element(e).unwrap()).unwrap();
        let (i, sign) = c.into_iter().next().unwrap();
        let label = alg
            .generators()
            .render(&Element::<Scalar>::monomial(alg.basis_monomial(i).clone()));
        let got = image[label.as_str()].scale(&sign);
        assert_eq!(got, parse_param_poly(a).unwrap(), "{e}");
    }
    assert!(t.elapsed() < Duration::from_secs(30));
    report(2, "degree-five image", t);
}

#[test]
fn criterion_03_constraint_displays() {
    let t = Instant::now();
    let out = vf(&["falsify", "--spec", &spec("aut_1_3_4.json"), "--json"]);
    let cert = Certificate::from_json(&out.stdout).unwrap();
    let lines: Vec<(String, String)> = cert
        .constraints
        .iter()
        .map(|c| (c.basis.clone(), c.equation.to_string()))
        .collect();
    let expected = [
        ("(x1 x1)", "(t2 + 1)*a11*a12"),
        ("(x1 x2)", "t2*a11*a22 + a12*a21 - t1*rho"),
        ("(x2 x1)", "a11*a22 + t2*a12*a21 - rho"),
        ("(x2 x2)", "(t2 + 1)*a21*a22"),
    ];
    assert_eq!(lines.len(), 4);
    for ((b, e), (xb, xe)) in lines.iter().zip(expected) {
        assert_eq!((b.as_str(), e.as_str()), (xb, xe));
    }

    let out = vf(&["expand", "--spec", &spec("aut_2_5.json"), "--json"]);
    let r: ExpandReport = serde_json::from_str(&out.stdout).unwrap();
    let display = [
        ("(x1 (x1 x1))", "(t2 + 1)*a11^2*a12"),
        ("(x1 (x1 x2))", "t2*a11^2*a22 + (t2 + 2)*a11*a12*a21"),
        ("(x1 (x2 x2))", "t2*a11*a21*a22 + a12*a21^2"),
        ("(x2 (x1 x1))", "t2*a11*a12*a21 + a11^2*a22"),
        ("(x2 (x1 x2))", "t2*a12*a21^2 + (t2 + 2)*a11*a21*a22"),
        ("(x2 (x2 x2))", "(t2 + 1)*a21^2*a22"),
    ];
    let got: Vec<(String, String)> = r.expansions[0]
        .image
        .iter()
        .map(|l| (l.basis.clone(), l.coefficient.to_string()))
        .collect();
    assert_eq!(got.len(), 6);
    for ((b, e), (xb, xe)) in got.iter().zip(display) {
        assert_eq!(b, xb);
        assert_eq!(parse_param_poly(e).unwrap(), parse_param_poly(xe).unwrap(), "{b}");
    }
    report(3, "constraint displays", t);
}

#[test]
fn criterion_04_falsifier_verdicts() {
    let t = Instant::now();
    for name in ["aut_1_3_4", "aut_2_5", "aut_6", "s_4", "s_1_3"] {
        let j = job(&format!("{name}.json"));
        let w = j.system.as_ref().unwrap();
        assert_eq!(w.phi, "swap:1,2", "{name}");
        if name == "s_1_3" {
            assert!(!w.b.is_zero());
        }
        let out = vf(&["falsify", "--spec", &spec(&format!("{name}.json")), "--json"]);
        let cert = Certificate::from_json(&out.stdout).unwrap();
        assert_eq!(cert.verdict, Verdict::NotGeometricallyEquivalent, "{name}");
        assert!(cert.witness.is_some());
        if let Some(tree) = &cert.branches {
            assert_eq!(tree.count(BranchStatus::Stuck), 0, "{name}");
            assert_eq!(tree.count(BranchStatus::Open), 0, "{name}");
            assert!(tree.leaves().iter().all(|l| l.kernel_verified == Some(true)), "{name}");
        }
    }
    assert_eq!(vf(&["repro", "--all"]).code, 0);
    assert!(t.elapsed() < Duration::from_secs(120));
    report(4, "falsifier verdicts", t);
}

fn admissible(b: Builtin, (x, y): (i64, i64)) -> bool {
    match b {
        Builtin::AllLinear | Builtin::PowerAssociative => x != y && x != -y,
        Builtin::Alternative => (x == 0) != (y == 0),
        _ => x != 0 && y == 0,
    }
}

#[test]
fn criterion_05_op2_grid() {
    let t = Instant::now();
    let grid = [
        (1, 0),
        (2, 0),
        (-1, 0),
        (0, 1),
        (0, -2),
        (1, 1),
        (1, -1),
        (2, 1),
        (1, 2),
        (3, -1),
        (-2, -2),
    ];
    for b in [
        Builtin::PowerAssociative,
        Builtin::Alternative,
        Builtin::Commutative,
        Builtin::Jordan,
        Builtin::Lie,
        Builtin::AllLinear,
    ] {
        let theta = VarietyPresentation::builtin(b);
        for p in grid {
            let w = VerbalSystem::new(
                FieldAutomorphism::identity(),
                Scalar::from_int(p.0),
                Scalar::from_int(p.1),
            )
            .unwrap();
            let r = check_op2(&theta, &w, 3, &GeneratorSet::new(2)).unwrap();
            assert_eq!(r.pass, admissible(b, p), "{} at {p:?}", b.name());
        }
    }
    assert_eq!(vf(&["repro", "--example", "op2_table"]).code, 0);
    report(5, "Op2 grid", t);
}

#[test]
fn criterion_06_scaling_lemma() {
    let t = Instant::now();
    let sym = |a: &str, b: &str| {
        VerbalSystem::new(
            FieldAutomorphism::identity(),
            parse_scalar(a).unwrap(),
            parse_scalar(b).unwrap(),
        )
        .unwrap()
    };
    let cases = [
        (
            VarietyPresentation::power_associative(),
            1,
            sym("t1", "t2"),
            parse_scalar("t1 + t2").unwrap(),
        ),
        (
            VarietyPresentation::lie(),
            2,
            sym("t1", "0"),
            parse_scalar("t1").unwrap(),
        ),
    ];
    let mut count = 0;
    for (theta, ngens, w, c) in cases {
        let alg = TruncatedAlgebra::build(&theta, &GeneratorSet::new(ngens), 5).unwrap();
        for d in 1..=5 {
            for m in enumerate_monomials(ngens, d) {
                let lhs = word_transform(&w, &m, &alg).unwrap();
                let u = alg.normal_form(&Element::monomial(m.clone())).unwrap();
                assert_eq!(lhs, u.scale(&c.pow(d as i32 - 1).unwrap()), "{} {m}", theta.name());
                count += 1;
            }
        }
    }
    assert!(count > 100);
    report(6, "scaling lemma", t);
}

fn random_ideal(r: &mut impl Rng) -> TruncatedIdeal {
    let b = [
        Builtin::AllLinear,
        Builtin::Commutative,
        Builtin::Lie,
        Builtin::Jordan,
        Builtin::Alternative,
        Builtin::PowerAssociative,
    ][r.gen_range(0..6)];
    let ngens = r.gen_range(1..=2);
    let n = r.gen_range(2..=4);
    let alg =
        Arc::new(TruncatedAlgebra::build(&VarietyPresentation::builtin(b), &GeneratorSet::new(ngens), n).unwrap());
    let m = r.gen_range(2..=n + 1);
    let blocks: Vec<Vec<usize>> = alg
        .multidegree_blocks()
        .into_iter()
        .filter(|(md, _)| md.iter().sum::<usize>() < m)
        .map(|(_, b)| b)
        .collect();
    let gens: Vec<Element<Scalar>> = (0..r.gen_range(1..=2))
        .map(|_| {
            let block = &blocks[r.gen_range(0..blocks.len())];
            let coords = block
                .iter()
                .map(|&i| (i, Scalar::from_int(r.gen_range(-2..=2))))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            alg.element(&coords)
        })
        .collect();
    TruncatedIdeal::build(alg, &gens, m).unwrap()
}

/// Endomorphisms mapping every multihomogeneous ideal into itself.
fn admissible_maps(ideal: &TruncatedIdeal, r: &mut impl Rng) -> Vec<Endomorphism<Scalar>> {
    let alg = ideal.algebra();
    let k = alg.ngens();
    let mut out = vec![Endomorphism::identity(k)];
    out.push(Endomorphism::new((0..k).map(|i| Element::generator(i).scale(&nonzero(r))).collect()).unwrap());
    let m = ideal.tail();
    let deep: Vec<Element<Scalar>> = (0..k)
        .map(|_| {
            if m > alg.max_degree() {
                return Element::zero();
            }
            let range = alg.degree_range(m);
            if range.is_empty() {
                return Element::zero();
            }
            let i = r.gen_range(range.start..range.end);
            alg.element(&BTreeMap::from([(i, nonzero(r))]))
        })
        .collect();
    out.push(Endomorphism::new(deep).unwrap());
    out
}

#[test]
fn criterion_07_closure_of_t() {
    let t = Instant::now();
    let mut r = rng(7);
    for _ in 0..25 {
        let ideal = random_ideal(&mut r);
        let maps = admissible_maps(&ideal, &mut r);
        let closure = closure_sampled(&ideal, &maps).unwrap();
        assert_eq!(closure, ideal.subspace());
        assert_eq!(closure.rank(), ideal.dim());
    }
    report(7, "closure of T", t);
}

fn mobius(n: usize) -> i64 {
    let (mut n, mut k, mut p) = (n, 0, 2);
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn witt(n: usize, d: usize) -> usize {
    let s: i64 = (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| mobius(e) * (n as i64).pow((d / e) as u32))
        .sum();
    (s / d as i64) as usize
}

fn linear_vars(k: usize) -> Vec<Indeterminate> {
    (0..k)
        .flat_map(|i| (0..k).map(move |j| linear_indeterminate(j, i)))
        .collect()
}

fn sparse_entry(r: &mut impl Rng) -> Scalar {
    match r.gen_range(0..6) {
        0 | 1 => Scalar::zero(),
        2 => Scalar::one(),
        _ => rational(r),
    }
}

#[test]
fn criterion_08_oracles() {
    let t = Instant::now();
    let examples = ["aut_1_3_4.json", "aut_2_5.json", "aut_6.json"];
    let sym = SymbolicEndomorphism::generic_linear(2);
    let mut r = rng(8);
    // (i) symbolic against concrete substitution in the free algebra
    for name in examples {
        let res = job(name).resolve().unwrap();
        let e = &res.ideal[0];
        let n = res.spec.degree_bound;
        let symbolic = symbolic_substitute(&sym, e, n);
        for _ in 0..100 {
            let vals: BTreeMap<Indeterminate, Scalar> = linear_vars(2)
                .into_iter()
                .map(|v| {
                    let x = Scalar::from_poly(parse_scalar("t1").unwrap().numerator().clone());
                    let s = if r.gen_bool(0.3) {
                        x.scale_rational(&rational(&mut r).as_rational().unwrap())
                    } else {
                        rational(&mut r)
                    };
                    (v, s)
                })
                .collect();
            let concrete = substitute(&sym.specialize(&vals).unwrap(), e, n);
            let evaluated = Element::from_terms(
                symbolic
                    .terms()
                    .map(|(m, p)| (m.clone(), p.evaluate(&vals).unwrap()))
                    .filter(|(_, x)| !x.is_zero()),
            );
            assert_eq!(evaluated, concrete, "{name}");
        }
    }
    // (ii) Lie dimensions against the Witt formula
    let alg = TruncatedAlgebra::build(&VarietyPresentation::lie(), &GeneratorSet::new(2), 6).unwrap();
    assert_eq!(alg.component_dims(), (1..=6).map(|d| witt(2, d)).collect::<Vec<_>>());
    let alg = TruncatedAlgebra::build(&VarietyPresentation::lie(), &GeneratorSet::new(3), 5).unwrap();
    assert_eq!(alg.component_dims(), (1..=5).map(|d| witt(3, d)).collect::<Vec<_>>());
    // (iii) constraint satisfaction against ideal membership
    let rho = Indeterminate::new("rho");
    for name in examples {
        let res = job(name).resolve().unwrap();
        let alg = res.algebra().unwrap();
        let w = res.system.as_ref().unwrap();
        let ideal = TruncatedIdeal::build(alg.clone(), &res.ideal, res.spec.tail.unwrap()).unwrap();
        let cs = gen_constraints(&ideal, w).unwrap();
        let st = w.sigma_coords(&alg, &alg.coords(&res.ideal[0]).unwrap());
        let mut hits = 0;
        for _ in 0..100 {
            let mut vals: BTreeMap<Indeterminate, Scalar> =
                linear_vars(2).into_iter().map(|v| (v, sparse_entry(&mut r))).collect();
            let images: Vec<_> = sym
                .specialize(&vals)
                .unwrap()
                .images()
                .iter()
                .map(|x| alg.coords(x).unwrap())
                .collect();
            let member = ideal.contains_coords(&alg.substitute(&images, &st));
            // each equation is affine in rho
            vals.insert(rho.clone(), Scalar::zero());
            let at0: Vec<Scalar> = cs
                .equations
                .iter()
                .map(|c| c.equation.evaluate(&vals).unwrap())
                .collect();
            vals.insert(rho.clone(), Scalar::one());
            let at1: Vec<Scalar> = cs
                .equations
                .iter()
                .map(|c| c.equation.evaluate(&vals).unwrap())
                .collect();
            let rho_val = at0
                .iter()
                .zip(&at1)
                .find(|(a, b)| *a != *b)
                .map(|(a, b)| a.div(&(a - b)).unwrap())
                .unwrap_or_else(Scalar::zero);
            vals.insert(rho.clone(), rho_val);
            let satisfied = cs
                .equations
                .iter()
                .all(|c| c.equation.evaluate(&vals).unwrap().is_zero());
            assert_eq!(satisfied, member, "{name}");
            hits += member as usize;
        }
        assert!(hits > 0, "{name}");
    }
    report(8, "oracles", t);
}

#[test]
fn criterion_09_inner_witness() {
    let t = Instant::now();
    let t1 = Scalar::transcendental(0);
    let swap = FieldAutomorphism::swap(1, 2).unwrap();
    for b in [
        Builtin::AllLinear,
        Builtin::Commutative,
        Builtin::Jordan,
        Builtin::Lie,
        Builtin::Alternative,
        Builtin::PowerAssociative,
    ] {
        let theta = VarietyPresentation::builtin(b);
        for a in [Scalar::one(), Scalar::from_int(2), t1.clone()] {
            let w = VerbalSystem::new(FieldAutomorphism::identity(), a.clone(), Scalar::zero()).unwrap();
            match inner_witness(&theta, &w, 3).unwrap() {
                InnerResult::Witness { mu } => assert_eq!(mu, a.inv().unwrap(), "{} a={a}", b.name()),
                other => panic!("{} a={a}: {other:?}", b.name()),
            }
        }
        let w = VerbalSystem::new(swap.clone(), Scalar::one(), Scalar::zero()).unwrap();
        assert!(
            matches!(inner_witness(&theta, &w, 3).unwrap(), InnerResult::Refuted { .. }),
            "{}",
            b.name()
        );
    }
    for (b, x, y) in [
        (Builtin::AllLinear, 2, 1),
        (Builtin::AllLinear, 0, 1),
        (Builtin::PowerAssociative, 2, 1),
        (Builtin::Alternative, 0, 1),
    ] {
        let w = VerbalSystem::new(FieldAutomorphism::identity(), Scalar::from_int(x), Scalar::from_int(y)).unwrap();
        let r = inner_witness(&VarietyPresentation::builtin(b), &w, 3).unwrap();
        assert!(
            matches!(r, InnerResult::Refuted { .. }),
            "{} ({x},{y}): {r:?}",
            b.name()
        );
    }
    assert_eq!(vf(&["repro", "--example", "inner_table"]).code, 0);
    report(9, "inner witness", t);
}

#[test]
fn criterion_10_invariant_basis_number() {
    let t = Instant::now();
    let mut built = 0;
    for b in Builtin::ALL {
        for ngens in 1..=3 {
            for n in 1..=5 {
                let alg =
                    TruncatedAlgebra::build(&VarietyPresentation::builtin(b), &GeneratorSet::new(ngens), n).unwrap();
                assert_eq!(alg.component_dims()[0], ngens, "{} |X|={ngens} N={n}", b.name());
                built += 1;
            }
        }
    }
    assert_eq!(built, 7 * 3 * 5);
    report(10, "invariant basis number", t);
}
