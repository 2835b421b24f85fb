//! The `dmbetti` command line: every pipeline with JSON in and JSON out.
//!
//! Exit codes: 0 on success, 1 on domain errors (the error and its
//! certificate go to standard error as JSON), 2 on usage errors, including
//! unreadable or malformed input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::betti::{flatten, BettiTable, BettiVector};
use crate::dm::{self, FreeDM};
use crate::error::Error;
use crate::kt::{self, Barcode};
use crate::pairing;
use crate::polyhedra::{self, ConeV};
use crate::pure;
use crate::random::{self, RandomKtParams};
use crate::rational::{self, Rational};
use crate::sheaf::{self, SheafSpec};

#[derive(Debug, Parser)]
#[command(name = "dmbetti", version, about = "Exact Betti vectors of graded differential modules")]
pub struct Cli {
    /// Input: a file path, inline JSON, or `-` for standard input (the default).
    #[arg(long = "in", global = true, value_name = "PATH|JSON")]
    pub input: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree-`a` flattening of a Betti table.
    Flatten {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
    },
    /// Flattened pure Betti vectors over a window.
    Pure {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true, required = true)]
        window: Vec<i64>,
        /// Keep every pure vector whose flattening lies in the window,
        /// rather than degree sequences inside the window.
        #[arg(long)]
        supported_in: bool,
    },
    /// Check homogeneity and that the differential squares to zero.
    Validate,
    /// Cancel unit entries; prints the minimal module and its Betti vector.
    Minimalize,
    /// Betti vector of the minimalized module.
    Betti,
    /// Homology barcode of a degree-zero module over k[t].
    Barcode,
    /// Chain decomposition of a vector into pure pairs.
    Decompose,
    /// Facet inequalities of a cone given by generators.
    ConeFacets,
    /// Membership of a vector in a cone, with a certificate.
    ConeMember,
    /// Absolute Hilbert function of a sheaf spec over a window.
    Gamma {
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true, required = true)]
        window: Vec<i64>,
    },
    /// Pair a Betti vector with a sheaf spec.
    Pair,
    /// Match the facets of the pure cone against induced functionals.
    Audit {
        #[arg(long)]
        n: usize,
        #[arg(long, num_args = 2, value_names = ["P", "Q"], allow_negative_numbers = true, required = true)]
        window: Vec<i64>,
        #[arg(long, default_value_t = 8)]
        radius: i64,
    },
    /// Seeded random finite-length modules over k[t] with their barcodes.
    RandomDm {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn window(v: &[i64]) -> Outcome<(i64, i64)> {
    match v {
        [p, q] if p <= q => Ok((*p, *q)),
        [p, q] => Err(Failure::Domain(Error::InvalidWindow { p: *p, q: *q })),
        _ => Err(Failure::Usage("--window takes two integers".into())),
    }
}

fn read_input(spec: Option<&str>, stdin: &mut dyn Read) -> Outcome<String> {
    match spec {
        None | Some("-") => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading standard input: {e}")))?;
            Ok(s)
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => Ok(s.to_string()),
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}"))),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Outcome<T> {
    serde_json::from_str(text).map_err(|e| Failure::Usage(format!("invalid input: {e}")))
}

/// Accepts `{"entries": {...}}` or a bare `{"<degree>": value}` map.
fn parse_vector(text: &str) -> Outcome<BettiVector> {
    if let Ok(v) = serde_json::from_str::<BettiVector>(text) {
        return Ok(v);
    }
    #[derive(Deserialize)]
    struct Bare(#[serde(with = "rational::q_map")] BTreeMap<i64, Rational>);
    let bare: Bare = parse(text)?;
    Ok(BettiVector::from_entries(bare.0))
}

#[derive(Deserialize)]
struct MemberInput {
    #[serde(with = "rational::q_vec")]
    vector: Vec<Rational>,
    #[serde(flatten)]
    cone: ConeV,
}

#[derive(Deserialize)]
struct PairInput {
    betti: Value,
    spec: SheafSpec,
}

#[derive(Serialize)]
struct RandomSample {
    module: FreeDM,
    barcode: Barcode,
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Outcome<Value> {
    let input = |stdin: &mut dyn Read| read_input(cli.input.as_deref(), stdin);
    let module = |stdin: &mut dyn Read| -> Outcome<FreeDM> { parse(&input(stdin)?) };
    Ok(match &cli.command {
        Command::Flatten { a } => {
            let t: BettiTable = parse(&input(stdin)?)?;
            to_json(&flatten(&t, *a))
        }
        Command::Pure { n, a, window: w, supported_in } => {
            if *n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let w = window(w)?;
            let list = if *supported_in {
                pure::pure_vectors_supported_in(*n, *a, w)?
            } else {
                pure::enumerate_pure_vectors(*n, *a, w)?
            };
            to_json(&list)
        }
        Command::Validate => {
            let d = module(stdin)?;
            d.validate()?;
            json!({"valid": true})
        }
        Command::Minimalize => {
            let m = dm::minimalize(&module(stdin)?)?;
            json!({"module": to_json(&m), "betti": to_json(&dm::betti_vector(&m)?)})
        }
        Command::Betti => to_json(&dm::minimal_betti_vector(&module(stdin)?)?),
        Command::Barcode => {
            let b = kt::barcode(&module(stdin)?)?;
            json!({"barcode": to_json(&b), "betti": to_json(&kt::betti_from_barcode(&b))})
        }
        Command::Decompose => {
            let v = parse_vector(&input(stdin)?)?;
            let pairs = kt::decompose(&v)?;
            json!({"pairs": to_json(&pairs), "chain": kt::is_chain(&pairs)})
        }
        Command::ConeFacets => {
            let c: ConeV = parse(&input(stdin)?)?;
            let c = ConeV::new(c.window, c.generators)?;
            to_json(&polyhedra::v_to_h(&c)?)
        }
        Command::ConeMember => {
            let m: MemberInput = parse(&input(stdin)?)?;
            let c = ConeV::new(m.cone.window, m.cone.generators)?;
            to_json(&polyhedra::membership(&m.vector, &c)?)
        }
        Command::Gamma { window: w } => {
            let spec: SheafSpec = parse(&input(stdin)?)?;
            to_json(&sheaf::gamma_window(&spec, window(w)?)?)
        }
        Command::Pair => {
            let p: PairInput = parse(&input(stdin)?)?;
            let beta = parse_vector(&p.betti.to_string())?;
            to_json(&pairing::phi_vector(&beta, &p.spec))
        }
        Command::Audit { n, window: w, radius } => to_json(&pairing::audit_conjecture(*n, window(w)?, *radius)?),
        Command::RandomDm { seed, count } => {
            let samples = random::random_kt_batch(*seed, *count, &RandomKtParams::default())?;
            to_json(
                &samples
                    .into_iter()
                    .map(|s| RandomSample { module: s.dm, barcode: s.barcode })
                    .collect::<Vec<_>>(),
            )
        }
    })
}

/// JSON report for a domain error, with the certificate where there is one.
pub fn error_report(e: &Error) -> Value {
    let details = match e {
        Error::NotInCone(v) => to_json(v),
        Error::NotHomogeneous { row, col, expected } => json!({"row": row, "col": col, "expected": expected}),
        Error::NotSquareZero { row, col } | Error::NotMinimal { row, col } => json!({"row": row, "col": col}),
        Error::PivotOnDiagonal { index } => json!({"index": index}),
        Error::NonzeroDegree(a) => json!({"a": a}),
        Error::WindowTooSmall { p, q, len } => json!({"window": [p, q], "length": len}),
        Error::InvalidWindow { p, q } => json!({"window": [p, q]}),
        _ => Value::Null,
    };
    let mut report = json!({"error": e.kind(), "message": e.to_string()});
    if !details.is_null() {
        report["certificate"] = details;
    }
    report
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(value) => {
            let mut text = serde_json::to_string_pretty(&value).expect("json output");
            text.push('\n');
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(stderr, "{}", json!({"error": "Io", "message": msg}));
                    2
                }
            }
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "{}", error_report(&e));
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "{}", json!({"error": "Usage", "message": msg}));
            2
        }
    }
}
