use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xic_core::adversaries::{
    fool_composition_with, fool_length, fool_modulus_with, mirror_demo, AdversaryError, BudgetedNaive, ConstantOp,
    CounterexampleReport, GridComposer, GridProbe, IdentityOnOracle, NullExtractor, PrefixPeek, SilentComposer,
    MARGIN,
};
use xic_core::catalog::{self, Entry};
use xic_core::encodings::{decode_dyadic, CapExceeded, Dyadic, Word, DEFAULT_EXHAUSTION_CAP};
use xic_core::evaluation::{evaluate, Evaluation, Schedule};
use xic_core::funcrep::{is_length_monotone, kc_to_xic, validate_xic, XicCheck};
use xic_core::reals::{real_from_dyadic, validate_real_name};
use xic_core::sopoly::IntPoly;

const CSV_HEADER: &str = "n,iterations,queries,cells_read,abstract_cost";

mod exit {
    pub const USAGE: u8 = 1;
    pub const VALIDATION: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const CAP: u8 = 4;
}

#[derive(Parser)]
#[command(name = "xic", version, about = "Evaluate, validate and attack names of continuous functions on [0,1]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f(x) to within 2^-n.
    Eval {
        /// Catalog id, pwl:<path> or bump:<center>,<height>,<slope>.
        function: String,
        /// Point as a dyadic word (e.g. 00#11) or an exactly dyadic decimal.
        x: String,
        n: u64,
        #[command(flatten)]
        opts: EvalOpts,
        /// Append a CSV row to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// CSV of evaluation costs for n = 0..=nmax.
    Sweep {
        function: String,
        x: String,
        #[arg(long, default_value_t = 40)]
        nmax: u64,
        #[command(flatten)]
        opts: EvalOpts,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run a fooling construction against a built-in candidate.
    Adversary(AdversaryArgs),
    /// Check a name against its defining conditions.
    Validate {
        kind: NameKind,
        /// Function id (xic, kc) or point (real).
        target: String,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
        /// Largest input length enumerated exhaustively.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTION_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        exhaustive: usize,
    },
}

#[derive(Args)]
struct EvalOpts {
    #[arg(long, default_value = "inc")]
    schedule: Schedule,
}

#[derive(Args)]
struct AdversaryArgs {
    kind: Kind,
    candidate: String,
    /// Budget polynomial in x; x*x by default, 2*x+2 for the length construction.
    #[arg(long)]
    p: Option<String>,
    /// Lookahead of the mirror demo.
    #[arg(long = "C", default_value_t = 2)]
    c: u64,
    /// N for the length construction.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Factor in margin·p(N) < 2^N.
    #[arg(long, default_value_t = MARGIN)]
    margin: u64,
    /// Output length of the constant candidate; cells peeked by prefix-peek.
    #[arg(long)]
    k: Option<usize>,
    /// Grid exponent of the grid composer.
    #[arg(long, default_value_t = 4)]
    grid: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Modulus,
    Composition,
    Length,
    Mirror,
}

#[derive(Clone, Copy, ValueEnum)]
enum NameKind {
    Xic,
    Kc,
    Real,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Failure {
        Failure { code: exit::USAGE, message: message.to_string() }
    }
}

impl From<AdversaryError> for Failure {
    fn from(e: AdversaryError) -> Failure {
        let code = match e {
            AdversaryError::Budget { .. } => exit::BUDGET,
            AdversaryError::Cap(_) => exit::CAP,
            _ => exit::VALIDATION,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<CapExceeded> for Failure {
    fn from(e: CapExceeded) -> Failure {
        Failure { code: exit::CAP, message: e.to_string() }
    }
}

fn parse_point(s: &str) -> Result<Dyadic, Failure> {
    if let Ok(w) = s.parse::<Word>() {
        if let Ok(d) = decode_dyadic(&w) {
            return Ok(d);
        }
    }
    Dyadic::from_decimal(s).map_err(|e| Failure::usage(format!("{s:?} is neither a dyadic word nor an exact decimal: {e}")))
}

fn unit_point(s: &str) -> Result<Dyadic, Failure> {
    let x = parse_point(s)?;
    if !x.in_unit_interval() {
        return Err(Failure::usage(format!("{s:?} is outside [0,1]")));
    }
    Ok(x)
}

fn entry(id: &str) -> Result<Entry, Failure> {
    catalog::lookup(id).map_err(Failure::usage)
}

fn run_eval(e: &Entry, x: &Dyadic, n: u64, schedule: Schedule) -> Result<Evaluation, Failure> {
    evaluate(&e.fresh_xic(), &real_from_dyadic(x), n, schedule)
        .map_err(|f| Failure { code: exit::VALIDATION, message: f.to_string() })
}

fn csv_row(n: u64, ev: &Evaluation) -> String {
    let t = &ev.trace;
    format!("{n},{},{},{},{}", ev.iterations, t.queries, t.cells_read, t.abstract_cost)
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

fn append_row(path: &Path, row: &str) -> Result<(), Failure> {
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(|e| io_failure(path, e))?;
    let empty = f.metadata().map(|m| m.len() == 0).unwrap_or(true);
    if empty {
        writeln!(f, "{CSV_HEADER}").map_err(|e| io_failure(path, e))?;
    }
    writeln!(f, "{row}").map_err(|e| io_failure(path, e))
}

fn budget_poly(s: &str) -> Result<IntPoly, Failure> {
    s.parse().map_err(|e| Failure::usage(format!("--p {s:?}: {e}")))
}

fn adversary(args: &AdversaryArgs) -> Result<CounterexampleReport, Failure> {
    let default = match args.kind {
        Kind::Length => "2*x+2",
        _ => "x*x",
    };
    let p = budget_poly(args.p.as_deref().unwrap_or(default))?;
    let unknown = || Failure::usage(format!("unknown candidate {:?} for this construction", args.candidate));
    let report = match args.kind {
        Kind::Modulus => match args.candidate.as_str() {
            "grid-probe" => fool_modulus_with(&GridProbe { budget: p.clone() }, &p, args.margin)?.report,
            "null" => fool_modulus_with(&NullExtractor, &p, args.margin)?.report,
            _ => return Err(unknown()),
        },
        Kind::Composition => match args.candidate.as_str() {
            "grid-composer" => {
                fool_composition_with(&GridComposer { grid: args.grid, budget: p.clone() }, &p, args.margin)?.report
            }
            "silent" => fool_composition_with(&SilentComposer, &p, args.margin)?.report,
            _ => return Err(unknown()),
        },
        Kind::Length => match args.candidate.as_str() {
            "identity-op" => fool_length(&IdentityOnOracle, &p, args.n)?.report,
            "constant" => fool_length(&ConstantOp(args.k.unwrap_or(3)), &p, args.n)?.report,
            _ => return Err(unknown()),
        },
        Kind::Mirror => match args.candidate.as_str() {
            "budgeted-naive" => mirror_demo(&p, args.c, &BudgetedNaive)?.report,
            "prefix-peek" => {
                let peek = args.k.unwrap_or(p.eval(args.c + 1) as usize);
                mirror_demo(&p, args.c, &PrefixPeek { peek })?.report
            }
            _ => return Err(unknown()),
        },
    };
    Ok(report)
}

fn validate(kind: NameKind, target: &str, cfg: &XicCheck) -> Result<bool, Failure> {
    match kind {
        NameKind::Xic => {
            let e = entry(target)?;
            let r = validate_xic(&e.fresh_xic(), cfg).map_err(Failure::usage)?;
            println!("xic name {}: {} condition-1 checks, {} condition-2 checks", e.id, r.condition1_checked, r.condition2_checked);
            if let Some(cap) = r.cap {
                return Err(cap.into());
            }
            for v in &r.violations {
                println!("violation: {v:?}");
            }
            Ok(r.is_clean())
        }
        NameKind::Kc => {
            let e = entry(target)?;
            let kc = e.kc();
            let monotone = is_length_monotone(&kc.name, cfg.exhaustive_n, cfg.exhaustion_cap)?;
            println!("kc name {}: length-monotone up to {}: {monotone}", e.id, cfg.exhaustive_n);
            let r = validate_xic(&kc_to_xic(&kc), cfg).map_err(Failure::usage)?;
            println!("translated: {} condition-1 checks, {} condition-2 checks", r.condition1_checked, r.condition2_checked);
            if let Some(cap) = r.cap {
                return Err(cap.into());
            }
            for v in &r.violations {
                println!("violation: {v:?}");
            }
            Ok(monotone && r.is_clean())
        }
        NameKind::Real => {
            let x = parse_point(target)?;
            let r = validate_real_name(&real_from_dyadic(&x), cfg.n_max).expect("dyadic names carry an enclosure");
            println!("real name {x}: {} precisions checked", r.checked);
            if let Some(v) = &r.first_violation {
                println!("violation: {v:?}");
            }
            Ok(r.is_clean())
        }
    }
}

/// Writes to standard output, stopping quietly if the reader has gone.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn execute(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Eval { function, x, n, opts, trace } => {
            let e = entry(&function)?;
            let ev = run_eval(&e, &unit_point(&x)?, n, opts.schedule)?;
            println!("{}", ev.word);
            if let Some(path) = trace {
                append_row(&path, &csv_row(n, &ev))?;
            }
            Ok(0)
        }
        Command::Sweep { function, x, nmax, opts, trace } => {
            let e = entry(&function)?;
            let x = unit_point(&x)?;
            let mut csv = format!("{CSV_HEADER}\n");
            for n in 0..=nmax {
                csv.push_str(&csv_row(n, &run_eval(&e, &x, n, opts.schedule)?));
                csv.push('\n');
            }
            match trace {
                Some(path) => std::fs::write(&path, csv).map_err(|e| io_failure(&path, e))?,
                None => emit(&csv),
            }
            Ok(0)
        }
        Command::Adversary(args) => {
            let report = adversary(&args)?;
            emit(&report.to_text());
            Ok(if report.fooled() { 0 } else { exit::VALIDATION })
        }
        Command::Validate { kind, target, nmax, cap, samples, exhaustive } => {
            let cfg = XicCheck { n_max: nmax, samples, exhaustive_n: exhaustive, exhaustion_cap: cap, ..Default::default() };
            let clean = validate(kind, &target, &cfg)?;
            println!("{}", if clean { "clean" } else { "violations found" });
            Ok(if clean { 0 } else { exit::VALIDATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
