use std::path::PathBuf;
use std::process::Command;

use vf_cli::commands::{BasisReport, ExpandReport, InnerOutput, Op2Output};
use vf_cli::{embedded_expectations, repro_outcome, run, Env, ExampleId, JobSpec, ReproReport};
use vf_core::closure::{Certificate, Verdict};
use vf_core::verbal::InnerResult;

fn spec(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn vf(args: &[&str]) -> vf_cli::Outcome {
    run(args.iter().copied(), &Env::default())
}

#[test]
fn basis_json_reports_lie_dimensions() {
    let out = vf(&["basis", "--variety", "lie", "--gens", "2", "--max-deg", "5", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: BasisReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.dims, vec![2, 1, 2, 3, 6]);
    assert_eq!(r.total, 14);
    assert_eq!(r.basis[1], vec!["(x1 x2)"]);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["basis", "--variety", "nosuch", "--gens", "2", "--max-deg", "5"][..],
        &["basis", "--gens", "2"],
        &["basis", "--variety", "lie", "--colour"],
        &["frobnicate"],
        &["repro"],
        &["repro", "--example", "aut_7"],
        &["op2", "--variety", "lie", "--phi", "rotate"],
        &["falsify", "--spec", "/nonexistent/job.json"],
    ] {
        let out = vf(args);
        assert_eq!(out.code, 2, "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn degree_cap_is_enforced() {
    let out = vf(&["basis", "--variety", "lie", "--max-deg", "9"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("VF_MAX_DEG"));
    let out = run(["basis", "--variety", "lie", "--max-deg", "6"], &Env { max_deg_cap: 5 });
    assert_eq!(out.code, 2);
    let out = run(["basis", "--variety", "lie", "--max-deg", "6"], &Env { max_deg_cap: 6 });
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("dims [2, 1, 2, 3, 6, 9]"));
    let out = run(["expand", "--spec", &spec("aut_6.json")], &Env { max_deg_cap: 4 });
    assert_eq!(out.code, 2);
}

#[test]
fn help_exits_zero() {
    let out = vf(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("repro"));
}

#[test]
fn expand_prints_the_degree_five_image() {
    let out = vf(&["expand", "--spec", &spec("aut_6.json"), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: ExpandReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.expansions.len(), 1);
    assert_eq!(r.expansions[0].image.len(), 6);
    let text = vf(&["expand", "--spec", &spec("aut_6.json")]).stdout;
    assert!(text.contains("(x1 (x1 (x1 (x1 x2)))): -t2*a11^3*a12*a22 + t2*a11^2*a12^2*a21"));
}

#[test]
fn op2_and_inner_from_flags() {
    let out = vf(&[
        "op2",
        "--variety",
        "power_associative",
        "--a",
        "2",
        "--b",
        "1",
        "--json",
    ]);
    assert_eq!(out.code, 0);
    let r: Op2Output = serde_json::from_str(&out.stdout).unwrap();
    assert!(r.report.pass);
    let out = vf(&["op2", "--variety", "all_linear", "--a", "1", "--b", "-1", "--json"]);
    let r: Op2Output = serde_json::from_str(&out.stdout).unwrap();
    assert!(!r.report.pass);

    let out = vf(&["inner", "--variety", "jordan", "--a", "t1", "--json"]);
    assert_eq!(out.code, 0);
    let r: InnerOutput = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(
        r.result,
        InnerResult::Witness {
            mu: "1/t1".parse().unwrap()
        }
    );
    let out = vf(&["inner", "--variety", "jordan", "--phi", "swap:1,2", "--json"]);
    let r: InnerOutput = serde_json::from_str(&out.stdout).unwrap();
    assert!(matches!(r.result, InnerResult::Refuted { .. }));
}

#[test]
fn falsify_emits_parsable_certificates() {
    for name in ["aut_1_3_4", "aut_2_5", "aut_6", "s_1_3", "s_4"] {
        let out = vf(&["falsify", "--spec", &spec(&format!("{name}.json")), "--json"]);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        let cert = Certificate::from_json(&out.stdout).unwrap();
        assert_eq!(cert.verdict, Verdict::NotGeometricallyEquivalent, "{name}");
        let again = serde_json::to_string_pretty(&cert).unwrap();
        assert_eq!(again.trim_end(), out.stdout.trim_end(), "{name}");
    }
}

#[test]
fn inconclusive_exits_one() {
    let mut job = JobSpec::from_json(&std::fs::read_to_string(spec("aut_1_3_4.json")).unwrap()).unwrap();
    job.depth = Some(0);
    let dir = std::env::temp_dir().join(format!("vf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("shallow.json");
    std::fs::write(&path, job.to_json()).unwrap();
    let out = vf(&["falsify", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("verdict: inconclusive"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_job_specs_are_rejected() {
    let dir = std::env::temp_dir().join(format!("vf-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let base = std::fs::read_to_string(spec("aut_1_3_4.json")).unwrap();
    let cases = [
        base.replace("\"tail\": 3", "\"tial\": 3"),
        base.replace("t1 * (x1 x2)", "t3 * (x1 x2)"),
        base.replace("(x2 x1)\"]", "(x2 x3)\"]"),
        base.replace("all_linear", "semigroup"),
        base.replace("swap:1,2", "swap:1,5"),
        "{".to_string(),
    ];
    for (k, text) in cases.iter().enumerate() {
        let path = dir.join(format!("bad{k}.json"));
        std::fs::write(&path, text).unwrap();
        let out = vf(&["falsify", "--spec", path.to_str().unwrap()]);
        assert_eq!(out.code, 2, "case {k}");
        assert!(out.stderr.starts_with("error:"), "case {k}: {}", out.stderr);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn job_spec_round_trips() {
    for name in ["aut_1_3_4", "aut_2_5", "aut_6", "s_1_3", "s_4"] {
        let job = JobSpec::from_json(&std::fs::read_to_string(spec(&format!("{name}.json"))).unwrap()).unwrap();
        assert_eq!(JobSpec::from_json(&job.to_json()).unwrap(), job);
        assert!(job.resolve().is_ok());
    }
}

#[test]
fn repro_all_is_deterministic_and_passes() {
    let a = vf(&["repro", "--all", "--json"]);
    let b = vf(&["repro", "--all", "--json"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let r: ReproReport = serde_json::from_str(&a.stdout).unwrap();
    assert!(r.pass);
    assert_eq!(r.examples.len(), ExampleId::ALL.len());
    let text = vf(&["repro", "--example", "aut_1_3_4"]);
    assert_eq!(text.code, 0);
    assert!(text.stdout.starts_with("aut_1_3_4: ok"));
}

#[test]
fn repro_detects_a_corrupted_coefficient() {
    let mut exp = embedded_expectations();
    let e = exp.get_mut(&ExampleId::Aut6).unwrap();
    e.constraints[1].1 = e.constraints[1].1.replace("2*a12*a21", "3*a12*a21");
    let out = repro_outcome(&ExampleId::ALL, &exp, false);
    assert_ne!(out.code, 0);
    assert!(out.stderr.contains("aut_6"), "{}", out.stderr);
    assert!(
        out.stderr.contains("constraint at [x1, [x1, [[x1, x2], x2]]]"),
        "{}",
        out.stderr
    );
    assert!(out.stdout.contains("aut_6: MISMATCH"));

    let mut exp = embedded_expectations();
    exp.get_mut(&ExampleId::S4).unwrap().witness = Some("(x1 (x2 x2))".into());
    let out = repro_outcome(&[ExampleId::S4], &exp, true);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("witness"));
}

#[test]
fn binary_follows_the_exit_code_contract() {
    let bin = env!("CARGO_BIN_EXE_vf");
    let ok = Command::new(bin).args(["repro", "--example", "s_4"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("s_4: ok"));
    let bad = Command::new(bin)
        .args(["basis", "--variety", "nosuch"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    let capped = Command::new(bin)
        .args(["basis", "--variety", "lie", "--max-deg", "9"])
        .env("VF_MAX_DEG", "9")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(0));
    let capped = Command::new(bin)
        .args(["basis", "--variety", "lie", "--max-deg", "4"])
        .env("VF_MAX_DEG", "3")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}
