//! Command-line front end for `greenmat`.
//!
//! [`run`] holds the whole program so it can be driven from tests; exit
//! codes are 0 on success, 1 when a suite fails and 2 on any usage, parse or
//! validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use greenmat::linear_maps::{classify_linear, ClassifyOutcome, LinearMap};
use greenmat::verify::{eggbox, format_report, run_suite, EggBoxFormat, ReportFormat, Suite, SuiteParams};
use greenmat::{factor_rank, relate_with_witness, Error, GreenRelation, Matrix, SemifieldId};

pub const DEFAULT_TRIALS: u64 = 1000;

#[derive(Parser, Debug)]
#[command(name = "greenmat", version, about = "Green's relations and linear preservers for boolean and tropical matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether two matrices are related.
    Relate {
        /// One of leqL, leqR, leqJ, L, R, H, D, J.
        #[arg(long)]
        rel: GreenRelation,
        /// Include the multipliers that realise the relation.
        #[arg(long)]
        witness: bool,
        a: PathBuf,
        b: PathBuf,
    },
    /// Factor rank of a matrix.
    Rank { a: PathBuf },
    /// Classify a bijective linear map given by its unit images.
    Classify { map: PathBuf },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        semifield: String,
        #[arg(long)]
        n: usize,
        /// Required for randomized runs.
        #[arg(long)]
        seed: Option<u64>,
        /// Pairs per check in randomized runs.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value = "json")]
        format: String,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Egg-box diagram of all boolean n×n matrices.
    Eggbox {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        workers: Option<usize>,
    },
}

enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// A suite ran and failed: exit 1.
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Json) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

/// Suites that have no exhaustive form for these parameters.
fn needs_seed(suite: Suite, sf: SemifieldId, n: usize) -> bool {
    !sf.is_boolean() || (matches!(suite, Suite::T1 | Suite::HTheorem) && n > 2)
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--workers must be at least 1".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let text = match cli.command {
        Command::Relate { rel, witness, a, b } => {
            let a: Matrix = read_json(&a)?;
            let b: Matrix = read_json(&b)?;
            let found = relate_with_witness(&a, &b, rel)?;
            let mut v = json!({ "related": found.is_some() });
            if witness {
                v["witness"] = serde_json::to_value(&found).expect("witnesses serialize");
            }
            pretty(&v)
        }
        Command::Rank { a } => {
            let a: Matrix = read_json(&a)?;
            let v = match factor_rank(&a) {
                Ok(r) => json!({ "rank": r.value, "method": r.method }),
                Err(Error::RankUndetermined(_)) => json!({ "rank": "undetermined" }),
                Err(e) => return Err(e.into()),
            };
            pretty(&v)
        }
        Command::Classify { map } => {
            let t: LinearMap = read_json(&map)?;
            let head = json!({ "semifield": t.semifield(), "n": t.n() });
            let mut v = head;
            match classify_linear(&t) {
                ClassifyOutcome::Canonical(c) => v["canonical"] = serde_json::to_value(&c).expect("forms serialize"),
                ClassifyOutcome::NonCanonical(r) => v["non_canonical"] = json!(r),
            }
            pretty(&v)
        }
        Command::Verify { suite, semifield, n, seed, trials, format, workers } => {
            let suite: Suite = suite.parse()?;
            let sf = SemifieldId::from_name(&semifield)?;
            let style: ReportFormat = format.parse()?;
            let params = match (seed, trials) {
                (Some(seed), trials) => SuiteParams::randomized(sf, n, seed, trials.unwrap_or(DEFAULT_TRIALS)),
                (None, Some(_)) => return Err(Failure::Usage("--trials needs --seed".into())),
                (None, None) if needs_seed(suite, sf, n) => {
                    return Err(Failure::Usage(format!(
                        "{suite} over {sf} with n = {n} is randomized and needs an explicit --seed"
                    )))
                }
                (None, None) => SuiteParams::exhaustive(sf, n),
            };
            let report = with_workers(workers, || run_suite(suite, &params))??;
            out.write_all(format_report(&report, style).as_bytes())
                .map_err(|e| Failure::Usage(e.to_string()))?;
            return if report.pass { Ok(()) } else { Err(Failure::Suite) };
        }
        Command::Eggbox { n, format, workers } => {
            let style: EggBoxFormat = format.parse()?;
            with_workers(workers, || eggbox(n))??.render(style)
        }
    };
    out.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
}

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(Failure::Suite) => 1,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}
