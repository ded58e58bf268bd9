//! Command-line front end for `vf-core`: bases, symbolic expansions, Op2 and
//! innerness checks, falsification certificates and the example regression
//! suite.

pub mod commands;
pub mod job;
pub mod repro;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use vf_core::closure::Verdict;
use vf_core::variety::{Builtin, VarietyJson};
use vf_core::verbal::{InnerResult, VerbalJson};
use vf_core::{Error, FieldAutomorphism, Scalar};

pub use job::{JobCommand, JobSpec};
pub use repro::{embedded_expectations, ExampleId, Expectations, Expected, ReproReport};

pub const DEFAULT_MAX_DEG_CAP: usize = 8;

/// Process environment relevant to the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Env {
    pub max_deg_cap: usize,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            max_deg_cap: DEFAULT_MAX_DEG_CAP,
        }
    }
}

impl Env {
    /// Reads `VF_MAX_DEG`; unset or unparsable values give the default cap.
    pub fn from_process() -> Self {
        let cap = std::env::var("VF_MAX_DEG")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DEG_CAP);
        Env { max_deg_cap: cap }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String, code: i32) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "vf", version, about = "Verbal operations on truncated free algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Basis of the truncated relatively free algebra.
    Basis(AlgebraArgs),
    /// Coefficients of generic linear images of the job's elements.
    Expand(SpecArgs),
    /// Check axiom Op2 for a word system.
    Op2(SystemArgs),
    /// Search for an inner witness `x -> mu x`.
    Inner(SystemArgs),
    /// Run a falsification job and print its certificate.
    Falsify(SpecArgs),
    /// Reproduce the built-in examples.
    Repro(ReproArgs),
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[arg(long)]
    variety: Option<String>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long = "max-deg")]
    max_deg: Option<usize>,
    /// Job spec file; flags override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[command(flatten)]
    alg: AlgebraArgs,
    /// Field automorphism: `id` or `swap:i,j`.
    #[arg(long)]
    phi: Option<String>,
    #[arg(long = "a", allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long = "b", allow_hyphen_values = true)]
    b: Option<String>,
}

#[derive(Args, Debug)]
struct SpecArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["example", "all"])))]
struct ReproArgs {
    #[arg(long, value_enum)]
    example: Option<ExampleId>,
    #[arg(long)]
    all: bool,
    #[arg(long)]
    json: bool,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn load_spec(path: &PathBuf) -> Result<JobSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    JobSpec::from_json(&text).map_err(|e| e.to_string())
}

fn job_from_flags(args: &AlgebraArgs, command: JobCommand, env: &Env) -> Result<JobSpec, String> {
    let mut job = match &args.spec {
        Some(p) => load_spec(p)?,
        None => {
            let name = args.variety.as_ref().ok_or("either --variety or --spec is required")?;
            JobSpec {
                command,
                field: Default::default(),
                variety: VarietyJson {
                    name: None,
                    identities: vec![],
                    builtin: None,
                },
                generators: 2,
                degree_bound: 5,
                system: None,
                method: None,
                ideal: vec![],
                tail: None,
                identity_generator: None,
                target: vec![],
                hints: vec![],
                preferred_basis: vec![],
                depth: None,
            }
            .with_variety(name)?
        }
    };
    if let (Some(name), Some(_)) = (&args.variety, &args.spec) {
        job = job.with_variety(name)?;
    }
    if let Some(g) = args.gens {
        job.generators = g;
    }
    if let Some(d) = args.max_deg {
        job.degree_bound = d;
    }
    check_cap(&job, env)?;
    Ok(job)
}

fn check_cap(job: &JobSpec, env: &Env) -> Result<(), String> {
    if job.degree_bound > env.max_deg_cap {
        return Err(format!(
            "degree bound {} exceeds the cap {} (set VF_MAX_DEG to raise it)",
            job.degree_bound, env.max_deg_cap
        ));
    }
    Ok(())
}

impl JobSpec {
    fn with_variety(mut self, name: &str) -> Result<Self, String> {
        let b: Builtin = name.parse().map_err(|e: Error| e.to_string())?;
        self.variety = VarietyJson {
            name: None,
            identities: vec![],
            builtin: Some(b.name().to_string()),
        };
        Ok(self)
    }
}

fn system_from_flags(args: &SystemArgs, job: &mut JobSpec) -> Result<(), String> {
    if args.phi.is_none() && args.a.is_none() && args.b.is_none() && job.system.is_some() {
        return Ok(());
    }
    let base = job.system.clone();
    let phi = match &args.phi {
        Some(p) => FieldAutomorphism::parse_spec(p)
            .map_err(|e| e.to_string())?
            .spec_string(),
        None => base.as_ref().map(|s| s.phi.clone()).unwrap_or_else(|| "id".into()),
    };
    let scalar = |flag: &Option<String>, fallback: Option<Scalar>, default: i64| -> Result<Scalar, String> {
        match flag {
            Some(s) => s.parse::<Scalar>().map_err(|e| e.to_string()),
            None => Ok(fallback.unwrap_or_else(|| Scalar::from_int(default))),
        }
    };
    let a = scalar(&args.a, base.as_ref().map(|s| s.a.clone()), 1)?;
    let b = scalar(&args.b, base.as_ref().map(|s| s.b.clone()), 0)?;
    job.system = Some(VerbalJson { phi, a, b });
    Ok(())
}

fn exit_for(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Inconclusive => 1,
        _ => 0,
    }
}

/// Runs one command line (without the program name) and returns its output.
pub fn run<I, T>(args: I, env: &Env) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("vf")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text, 0),
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command, env) {
        Ok(o) => o,
        Err(msg) => Outcome::usage(msg),
    }
}

fn dispatch(cmd: Cmd, env: &Env) -> Result<Outcome, String> {
    let err = |e: Error| e.to_string();
    match cmd {
        Cmd::Basis(args) => {
            let job = job_from_flags(&args, JobCommand::Basis, env)?;
            let r = commands::basis(&job.resolve().map_err(err)?).map_err(err)?;
            Ok(Outcome::ok(if args.json { to_json(&r) } else { r.to_text() }, 0))
        }
        Cmd::Expand(args) => {
            let job = load_spec(&args.spec)?;
            check_cap(&job, env)?;
            let r = commands::expand(&job.resolve().map_err(err)?).map_err(err)?;
            Ok(Outcome::ok(if args.json { to_json(&r) } else { r.to_text() }, 0))
        }
        Cmd::Op2(args) => {
            let mut job = job_from_flags(&args.alg, JobCommand::Op2, env)?;
            if args.alg.spec.is_none() && args.alg.max_deg.is_none() {
                job.degree_bound = 3;
            }
            system_from_flags(&args, &mut job)?;
            let r = commands::op2(&job.resolve().map_err(err)?).map_err(err)?;
            Ok(Outcome::ok(if args.alg.json { to_json(&r) } else { r.to_text() }, 0))
        }
        Cmd::Inner(args) => {
            let mut job = job_from_flags(&args.alg, JobCommand::Inner, env)?;
            if args.alg.spec.is_none() && args.alg.max_deg.is_none() {
                job.degree_bound = 3;
            }
            system_from_flags(&args, &mut job)?;
            let r = commands::inner(&job.resolve().map_err(err)?).map_err(err)?;
            let code = matches!(r.result, InnerResult::Unknown { .. }) as i32;
            Ok(Outcome::ok(if args.alg.json { to_json(&r) } else { r.to_text() }, code))
        }
        Cmd::Falsify(args) => {
            let job = load_spec(&args.spec)?;
            check_cap(&job, env)?;
            let cert = commands::falsify(&job.resolve().map_err(err)?).map_err(err)?;
            let out = if args.json {
                let mut s = cert.to_json();
                s.push('\n');
                s
            } else {
                commands::certificate_text(&cert)
            };
            Ok(Outcome::ok(out, exit_for(cert.verdict)))
        }
        Cmd::Repro(args) => {
            let ids: Vec<ExampleId> = match args.example {
                Some(id) => vec![id],
                None => ExampleId::ALL.to_vec(),
            };
            Ok(repro_outcome(&ids, &embedded_expectations(), args.json))
        }
    }
}

/// `repro` against the given expectations; exit 0 iff everything matches.
pub fn repro_outcome(ids: &[ExampleId], expectations: &Expectations, json: bool) -> Outcome {
    match repro::repro(ids, expectations) {
        Ok(r) => {
            let stdout = if json { to_json(&r) } else { r.to_text() };
            let stderr = match r.first_mismatch() {
                Some((id, c)) => format!(
                    "first mismatch in {}: {}: expected {}, got {}\n",
                    id.name(),
                    c.item,
                    c.expected,
                    c.actual
                ),
                None => String::new(),
            };
            Outcome {
                code: if r.pass { 0 } else { 1 },
                stdout,
                stderr,
            }
        }
        Err(e) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
