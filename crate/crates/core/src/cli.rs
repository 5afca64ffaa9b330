//! Command-line front end: `build`, `verify`, `classify`, and `tree`.
//!
//! Exit codes: 0 when every selected check passes, 1 when one fails, 2 for
//! configuration errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, DivisorSequence};
use crate::config::{random_top, Arithmetic, WeightDocument, Weights};
use crate::decomposition::{aligned_max_length, verify_theorem};
use crate::error::{Error, Result};
use crate::fock::{check_ct_relations, MatrixExport, TruncatedFockSpace};
use crate::periodicity::{default_containment_depth, export_tree, verify_containment};
use crate::scalar::to_f64;
use crate::shift::{build_shift, check_factorization};

pub const SEED_VAR: &str = "FOCKSHIFT_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "fockshift",
    version,
    about = "Periodic weighted shifts on truncated Fock space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the matrices of T_1, …, T_N.
    Build(RunArgs),
    /// Run relation, factorization, theorem, or containment checks.
    Verify(RunArgs),
    /// Compare two divisor sequences.
    Classify(RunArgs),
    /// Emit the weighted Fock tree.
    Tree(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Relations,
    Factorization,
    Theorem,
    Containment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Weight document (TOML or JSON).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Alphabet size.
    #[arg(short = 'N', long = "n")]
    pub n: Option<usize>,
    /// Period.
    #[arg(long)]
    pub k: Option<usize>,
    /// Block level; the theorem check runs at L = k(m+1) - 1.
    #[arg(long)]
    pub m: Option<usize>,
    /// Truncation level for build, scan depth for containment, tree depth.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<Check>,
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[arg(long)]
    pub seq_a: Option<String>,
    #[arg(long)]
    pub seq_b: Option<String>,
    #[arg(long, value_enum)]
    pub arithmetic: Option<Arithmetic>,
    /// Output file, or a directory for `build`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// What a command produced: text for stdout, files to write, and whether all
/// checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub passed: bool,
}

impl Outcome {
    fn text(stdout: String, passed: bool) -> Self {
        Outcome {
            stdout,
            files: Vec::new(),
            passed,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

struct Context {
    args: RunArgs,
    doc: WeightDocument,
    seed: Option<u64>,
}

impl Context {
    fn new(args: RunArgs, seed: Option<String>) -> Result<Self> {
        let doc = match &args.config {
            Some(path) => WeightDocument::load(path)?,
            None => WeightDocument::default(),
        };
        let seed = seed
            .map(|s| {
                s.trim().parse::<u64>().map_err(|_| {
                    Error::Config(format!("{SEED_VAR} must be a decimal integer, got {s:?}"))
                })
            })
            .transpose()?;
        Ok(Context { args, doc, seed })
    }

    fn alphabet_size(&self) -> Option<usize> {
        self.args.n.or(self.doc.alphabet_size)
    }

    fn arithmetic(&self) -> Arithmetic {
        self.args.arithmetic.unwrap_or(self.doc.arithmetic)
    }

    fn weights(&self) -> Result<Weights> {
        if self.args.config.is_some() {
            let weights = self.doc.weights()?;
            if let Some(n) = self.args.n.filter(|&n| n != weights.alphabet_size()) {
                return Err(Error::Config(format!(
                    "--n {n} disagrees with N = {} in the config",
                    weights.alphabet_size()
                )));
            }
            return Ok(weights);
        }
        let Some(seed) = self.seed else {
            return Err(Error::Config(format!(
                "no weights: pass --config or set {SEED_VAR}"
            )));
        };
        let n = self.args.n.unwrap_or(2);
        let k = self.args.k.unwrap_or(2);
        random_top(n, k, seed).map(Weights::Periodic)
    }

    fn level(&self) -> usize {
        self.args.m.or(self.doc.m).unwrap_or(1)
    }

    /// Truncation level for `build` and the relation checks.
    fn max_length(&self, weights: &Weights) -> Result<usize> {
        if let Some(l) = self.args.depth.or(self.doc.max_length) {
            return Ok(l);
        }
        match (weights.period(), self.args.m.or(self.doc.m)) {
            (Some(k), Some(m)) => Ok(aligned_max_length(k, m)),
            (Some(k), None) => Ok(k),
            (None, _) => Ok(weights.as_function().coverage().scan_depth() + 1),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn to_compact_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn export_csv(export: &MatrixExport) -> String {
    let mut out = String::from("row,col,value\n");
    for (r, c, v) in &export.entries {
        let _ = writeln!(out, "{r},{c},{v}");
    }
    out
}

fn reject_format(command: &str, format: Format) -> Error {
    Error::Config(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn cmd_build(ctx: &Context) -> Result<Outcome> {
    let weights = ctx.weights()?;
    let l = ctx.max_length(&weights)?;
    let space = TruncatedFockSpace::new(weights.alphabet_size(), l)?;
    let function = weights.as_function();
    let exports: Vec<MatrixExport> = match ctx.arithmetic() {
        Arithmetic::Exact => build_shift(function.as_ref(), space)?
            .iter()
            .map(|t| t.export())
            .collect(),
        Arithmetic::Float => build_shift(function.as_ref(), space)?
            .iter()
            .map(|t| {
                let float =
                    crate::fock::TruncatedOperator::from_matrix(space, t.matrix().map(to_f64))?;
                Ok(float.export())
            })
            .collect::<Result<_>>()?,
    };
    let format = ctx.args.format.unwrap_or(Format::Json);
    let render = |e: &MatrixExport| match format {
        Format::Csv => Ok(export_csv(e)),
        Format::Json => Ok(to_compact_json(e)),
        Format::Dot => Err(reject_format("build", format)),
    };
    match &ctx.args.out {
        Some(dir) => {
            let ext = if format == Format::Csv { "csv" } else { "json" };
            let mut files = Vec::new();
            let mut stdout = String::new();
            for (idx, e) in exports.iter().enumerate() {
                let path = dir.join(format!("T_{}.{ext}", idx + 1));
                let _ = writeln!(stdout, "{}", path.display());
                files.push((path, render(e)?));
            }
            Ok(Outcome {
                stdout,
                files,
                passed: true,
            })
        }
        None => {
            let stdout = match format {
                Format::Json => exports.iter().map(to_compact_json).collect(),
                _ => {
                    let mut out = String::new();
                    for (idx, e) in exports.iter().enumerate() {
                        let _ = writeln!(out, "# T_{}", idx + 1);
                        out.push_str(&render(e)?);
                    }
                    out
                }
            };
            Ok(Outcome::text(stdout, true))
        }
    }
}

#[derive(Serialize)]
struct CheckResult {
    check: Check,
    passed: bool,
    report: Value,
}

fn run_check(ctx: &Context, weights: &Weights, check: Check) -> Result<CheckResult> {
    let report = |passed: bool, report: Value| CheckResult {
        check,
        passed,
        report,
    };
    match check {
        Check::Relations | Check::Factorization => {
            let space = TruncatedFockSpace::new(weights.alphabet_size(), ctx.max_length(weights)?)?;
            let shifts = build_shift(weights.as_function().as_ref(), space)?;
            if check == Check::Relations {
                let r = check_ct_relations(&shifts)?;
                Ok(report(r.passed, json!(r)))
            } else {
                let r = check_factorization(&shifts)?;
                Ok(report(r.passed, json!(r)))
            }
        }
        Check::Theorem => {
            let top = weights.top().ok_or_else(|| {
                Error::Config("the theorem check needs a periodic weight table".into())
            })?;
            let r = verify_theorem(top, ctx.level())?;
            Ok(report(r.passed, json!(r)))
        }
        Check::Containment => {
            let top = weights.top().ok_or_else(|| {
                Error::Config("the containment check needs a periodic weight table".into())
            })?;
            if let Some(n1) = ctx.args.n1.filter(|&n1| n1 != top.period()) {
                return Err(Error::Config(format!(
                    "--n1 {n1} differs from the period k = {} of the weight table",
                    top.period()
                )));
            }
            let n2 = ctx
                .args
                .n2
                .ok_or_else(|| Error::Config("the containment check needs --n2".into()))?;
            let depth = ctx
                .args
                .depth
                .unwrap_or_else(|| default_containment_depth(n2));
            let r = verify_containment(top, n2, depth)?;
            Ok(report(r.holds, json!(r)))
        }
    }
}

fn cmd_verify(ctx: &Context) -> Result<Outcome> {
    let weights = ctx.weights()?;
    let checks = if ctx.args.check.is_empty() {
        let mut default = vec![Check::Factorization];
        if weights.top().is_some() {
            default.push(Check::Theorem);
        }
        default
    } else {
        ctx.args.check.clone()
    };
    let results = checks
        .iter()
        .map(|&c| run_check(ctx, &weights, c))
        .collect::<Result<Vec<_>>>()?;
    let passed = results.iter().all(|r| r.passed);
    let stdout = match ctx.args.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&json!({ "passed": passed, "checks": results })),
        Format::Csv => {
            let mut out = String::from("check,passed\n");
            for r in &results {
                let name = serde_json::to_value(r.check).expect("serializable");
                let _ = writeln!(out, "{},{}", name.as_str().unwrap_or_default(), r.passed);
            }
            out
        }
        other => return Err(reject_format("verify", other)),
    };
    Ok(Outcome::text(stdout, passed))
}

fn cmd_classify(ctx: &Context) -> Result<Outcome> {
    let (doc_a, doc_b) = ctx.doc.sequences()?;
    let flag = |name: &str, s: &Option<String>| -> Result<Option<DivisorSequence>> {
        s.as_deref()
            .map(|s| {
                s.parse()
                    .map_err(|e| Error::Config(format!("--{name}: {e}")))
            })
            .transpose()
    };
    let a = flag("seq-a", &ctx.args.seq_a)?.or(doc_a);
    let b = flag("seq-b", &ctx.args.seq_b)?.or(doc_b);
    let (Some(a), Some(b)) = (a, b) else {
        return Err(Error::Config(
            "classify needs two sequences (--seq-a and --seq-b)".into(),
        ));
    };
    let n = ctx.alphabet_size().unwrap_or(2) as u64;
    let report = classify(n, &a, &b)?;
    let stdout = match ctx.args.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut value = json!(report);
            value["verdict"] = Value::String(report.verdict());
            to_json(&value)
        }
        Format::Csv => format!(
            "a,b,supernatural_a,supernatural_b,supernatural_equal,k0_isomorphic,agree\n{:?},{:?},{},{},{},{},{}\n",
            report.a,
            report.b,
            report.supernatural_a,
            report.supernatural_b,
            report.supernatural_equal,
            report.k0_isomorphic,
            report.agree
        ),
        other => return Err(reject_format("classify", other)),
    };
    Ok(Outcome::text(stdout, report.agree))
}

fn cmd_tree(ctx: &Context) -> Result<Outcome> {
    let weights = ctx.weights()?;
    let depth = ctx.args.depth.or(ctx.doc.max_length).unwrap_or(3);
    let tree = export_tree(weights.as_function().as_ref(), depth)?;
    let text = match ctx.args.format.unwrap_or(Format::Dot) {
        Format::Dot => tree.to_dot(),
        Format::Json => {
            let edges: Vec<Value> = tree
                .edges
                .iter()
                .map(|e| json!({ "from": e.from.to_string(), "to": e.to.to_string(), "letter": e.letter, "weight": e.weight.to_string() }))
                .collect();
            let vertices: Vec<String> = tree.vertices.iter().map(ToString::to_string).collect();
            to_json(
                &json!({ "N": tree.alphabet_size, "depth": tree.depth, "vertices": vertices, "edges": edges }),
            )
        }
        Format::Csv => {
            let mut out = String::from("from,to,letter,weight\n");
            for e in &tree.edges {
                let _ = writeln!(out, "{},{},{},{}", e.from, e.to, e.letter, e.weight);
            }
            out
        }
    };
    Ok(match &ctx.args.out {
        Some(path) => Outcome {
            stdout: format!("{}\n", path.display()),
            files: vec![(path.clone(), text)],
            passed: true,
        },
        None => Outcome::text(text, true),
    })
}

/// Runs a parsed command. `seed` is the value of `FOCKSHIFT_SEED`, if set.
pub fn run(cli: Cli, seed: Option<String>) -> Result<Outcome> {
    let (args, command): (RunArgs, fn(&Context) -> Result<Outcome>) = match cli.command {
        Command::Build(a) => (a, cmd_build),
        Command::Verify(a) => (a, cmd_verify),
        Command::Classify(a) => (a, cmd_classify),
        Command::Tree(a) => (a, cmd_tree),
    };
    command(&Context::new(args, seed)?)
}

fn write_files(outcome: &Outcome) -> Result<()> {
    for (path, contents) in &outcome.files {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", parent.display())))?;
        }
        std::fs::write(path, contents)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = std::env::var(SEED_VAR).ok();
    match run(cli, seed).and_then(|outcome| write_files(&outcome).map(|_| outcome)) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
