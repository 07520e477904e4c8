//! The `heegner` command line: analyze, embed, oracle-verify, batch.

pub mod batch;
pub mod request;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::embedtables::{cartan_exists, division_exists, eichler_exists, EmbeddingVerdict};
use crate::engine::{Mode, Verdict};
use crate::padic_oracle::verify::{verify_table, TableCase};
use crate::padic_oracle::OracleOptions;
use crate::quadarith::{LocalQuadExt, SplittingType};
use request::{factor_n, parse_override, parse_sigma, AnalyzeRequest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "heegner",
    version,
    about = "Heegner points on Shimura curves of HPS orders"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide existence of Heegner points for (E, K, chi).
    Analyze(AnalyzeArgs),
    /// Query one row of the local optimal-embedding tables.
    Embed(EmbedArgs),
    /// Compare a table against the p-adic brute-force oracle.
    OracleVerify(VerifyArgs),
    /// Analyze every row of a curve table.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Elliptic,
    Abelian,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Elliptic => Mode::EllipticFixedConductor,
            ModeArg::Abelian => Mode::AbelianAdjustable,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// JSON request file, `-` for stdin.
    #[arg(long, conflicts_with_all = ["n", "disc"])]
    pub request: Option<PathBuf>,
    #[arg(long = "N", id = "n", required_unless_present = "request")]
    pub n: Option<u64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "request")]
    pub disc: Option<i64>,
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    /// Finite part of Σ, comma separated (`none` for the empty set).
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long, value_enum, default_value = "elliptic")]
    pub mode: ModeArg,
    /// Local type override `p:kind:params`, repeatable.
    #[arg(long = "rep")]
    pub reps: Vec<String>,
    #[arg(long)]
    pub primitive: bool,
    #[arg(long)]
    pub two_minimal: bool,
    #[arg(long)]
    pub l_prime_nonzero: bool,
    #[arg(long)]
    pub no_cm: bool,
    /// Compact JSON instead of pretty-printed.
    #[arg(long)]
    pub compact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmbedCase {
    Eichler,
    Cartan,
    Division,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, value_enum)]
    pub case: EmbedCase,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: u32,
    /// Class of K_p (`inert`, `ramified`, `split`, or a class name such as `ram-unit`).
    #[arg(long = "K-class")]
    pub k_class: Option<String>,
    #[arg(long = "L-class")]
    pub l_class: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, value_enum)]
    pub case: TableCase,
    #[arg(long, default_value_t = 2)]
    pub max_m: u32,
    #[arg(long, default_value_t = 3)]
    pub max_n: u32,
    /// Fixed precision k; defaults to the per-cell policy.
    #[arg(long)]
    pub precision: Option<u32>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub disc: i64,
    #[arg(long, default_value_t = 1)]
    pub c: u64,
    #[arg(long, value_enum, default_value = "elliptic")]
    pub mode: ModeArg,
    #[arg(long)]
    pub two_minimal: bool,
}

#[derive(Serialize)]
struct ErrorOutput<'a> {
    schema_version: &'a str,
    error: String,
}

fn emit_error(out: &mut dyn Write, err: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    let e = ErrorOutput {
        schema_version: crate::engine::SCHEMA_VERSION,
        error: msg.to_string(),
    };
    let _ = writeln!(out, "{}", serde_json::to_string(&e).unwrap());
    EXIT_ERROR
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a, out, err),
        Command::Embed(a) => cmd_embed(a, out, err),
        Command::OracleVerify(a) => cmd_oracle_verify(a, out, err),
        Command::Batch(a) => batch::cmd_batch(a, out, err),
    }
}

pub fn main() -> ! {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code)
}

fn read_request(path: &PathBuf) -> Result<AnalyzeRequest, String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| e.to_string())?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    serde_json::from_str(&text).map_err(|e| format!("invalid request: {e}"))
}

pub fn request_from_args(a: &AnalyzeArgs) -> Result<AnalyzeRequest, String> {
    if let Some(path) = &a.request {
        return read_request(path);
    }
    let n = factor_n(a.n.expect("clap requires N"))?;
    let mut req = AnalyzeRequest::new(n, a.disc.expect("clap requires disc"), a.c);
    req.mode = a.mode.into();
    req.flags.primitive = a.primitive;
    req.flags.two_minimal = a.two_minimal;
    req.assertions.l_prime_nonzero = a.l_prime_nonzero;
    req.assertions.no_cm = a.no_cm;
    if let Some(s) = &a.sigma {
        req.sigma = Some(parse_sigma(s)?);
    }
    for r in &a.reps {
        for piece in r.split(';').filter(|t| !t.trim().is_empty()) {
            req.apply_override(parse_override(piece)?)?;
        }
    }
    Ok(req)
}

pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Exists => EXIT_OK,
        Verdict::Blocked => EXIT_UNDETERMINED,
        Verdict::NoEmbedding => EXIT_ERROR,
    }
}

fn cmd_analyze(a: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let req = match request_from_args(&a) {
        Ok(r) => r,
        Err(e) => return emit_error(out, err, &e),
    };
    let output = match req.run() {
        Ok(o) => o,
        Err(e) => return emit_error(out, err, &e.to_string()),
    };
    let json = if a.compact {
        serde_json::to_string(&output)
    } else {
        serde_json::to_string_pretty(&output)
    };
    let _ = writeln!(out, "{}", json.unwrap());
    let r = &output.report;
    let _ = match r.verdict {
        Verdict::Exists => writeln!(
            err,
            "Heegner points of conductor {} exist on X_R, R of level {}; rational over {}",
            r.c_prime.unwrap_or(r.c),
            r.level.unwrap_or(0),
            r.rationality_field.as_deref().unwrap_or("?")
        ),
        Verdict::Blocked => writeln!(
            err,
            "undetermined: Σ unknown at {:?}",
            r.sigma.undetermined_primes()
        ),
        Verdict::NoEmbedding => writeln!(err, "no Heegner points at conductor {}", r.c),
    };
    for d in &r.diagnostics {
        let _ = writeln!(err, "  {d}");
    }
    if !output.defaulted_ambiguous.is_empty() {
        let _ = writeln!(
            err,
            "  default local type guessed at {:?}; pass --rep to fix it",
            output.defaulted_ambiguous
        );
    }
    exit_code(r.verdict)
}

fn parse_splitting(s: &str) -> Option<SplittingType> {
    match s.to_ascii_lowercase().as_str() {
        "split" => Some(SplittingType::Split),
        "inert" => Some(SplittingType::Inert),
        "ramified" | "ram" => Some(SplittingType::Ramified),
        other => LocalQuadExt::parse(other).map(LocalQuadExt::splitting),
    }
}

fn embed_verdict(a: &EmbedArgs) -> Result<EmbeddingVerdict, String> {
    let need = |o: &Option<String>, what: &str| {
        o.clone()
            .ok_or_else(|| format!("--{what} is required for this case"))
    };
    Ok(match a.case {
        EmbedCase::Eichler => {
            let k = need(&a.k_class, "K-class")?;
            let s = parse_splitting(&k).ok_or_else(|| format!("unknown K class {k:?}"))?;
            eichler_exists(a.m, a.n, s)
        }
        EmbedCase::Cartan => cartan_exists(a.m, a.n),
        EmbedCase::Division => {
            let class = |o: &Option<String>, what: &str| -> Result<LocalQuadExt, String> {
                let s = need(o, what)?;
                let l = LocalQuadExt::parse(&s).ok_or_else(|| format!("unknown class {s:?}"))?;
                if !l.valid_at(a.p) {
                    return Err(format!(
                        "{l} is not a class of quadratic extensions of Q_{}",
                        a.p
                    ));
                }
                Ok(l)
            };
            division_exists(
                a.p,
                a.m,
                a.n,
                class(&a.k_class, "K-class")?,
                class(&a.l_class, "L-class")?,
            )
        }
    })
}

fn cmd_embed(a: EmbedArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if !crate::quadarith::is_prime(a.p) {
        return emit_error(out, err, &format!("{} is not prime", a.p));
    }
    match embed_verdict(&a) {
        Ok(v) => {
            let _ = writeln!(out, "{}", serde_json::to_string(&v).unwrap());
            if v.exists {
                EXIT_OK
            } else {
                EXIT_ERROR
            }
        }
        Err(e) => emit_error(out, err, &e),
    }
}

fn cmd_oracle_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let opts = OracleOptions::default();
    match verify_table(a.p, a.case, a.max_m, a.max_n, a.precision, &opts) {
        Ok(rep) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&rep).unwrap());
            let _ = writeln!(
                err,
                "p = {} {:?}: {} match, {} mismatch, {} without a table row",
                rep.p, rep.case, rep.matches, rep.mismatches, rep.skipped
            );
            if rep.all_match() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        Err(e) => emit_error(out, err, &e.to_string()),
    }
}
