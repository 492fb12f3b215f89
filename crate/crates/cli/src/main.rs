use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cuntz_core::construct::Normalization;
use cuntz_core::random::DEFAULT_SEED;
use cuntz_core::scalar::numeric::DEFAULT_PRECISION;
use cuntz_core::suites::{compare_backends, compare_expressions, eval_expression, run_suite, RunOptions, SuiteName};
use cuntz_core::{algebra, BackendKind, CheckReport};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "cuntz", version, about = "Exact verification of identities in the Cuntz algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one line per check.
    Verify(SuiteArgs),
    /// Run a verification suite and emit the report.
    Report(SuiteArgs),
    /// Parse an expression and print its normal display form.
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[command(flatten)]
        scalar: ScalarArgs,
    },
    /// Decide whether two expressions denote the same element.
    Eq {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
        #[command(flatten)]
        scalar: ScalarArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Spectral,
    CyclicFixed,
    Exchange,
    Nogo,
    AlgebraLaws,
}

impl From<SuiteArg> for SuiteName {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Spectral => SuiteName::Spectral,
            SuiteArg::CyclicFixed => SuiteName::CyclicFixed,
            SuiteArg::Exchange => SuiteName::Exchange,
            SuiteArg::Nogo => SuiteName::Nogo,
            SuiteArg::AlgebraLaws => SuiteName::AlgebraLaws,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Numeric,
}

impl From<BackendArg> for BackendKind {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => BackendKind::Exact,
            BackendArg::Numeric => BackendKind::Numeric,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    Scaled,
    Unscaled,
    Both,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Scaled => Normalization::Scaled,
            NormalizationArg::Unscaled => Normalization::Unscaled,
            NormalizationArg::Both => Normalization::Both,
        }
    }
}

#[derive(Args)]
struct ScalarArgs {
    /// Rank of the Cuntz algebra.
    #[arg(long, short)]
    n: usize,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    /// Bits of precision for the numeric backend.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Expansion guard (maximum monomials produced by an equality test).
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    /// Rank (ambient rank 2n for the exchange suite).
    #[arg(long, short)]
    n: usize,
    #[arg(long, value_enum, default_value = "exact")]
    backend: BackendArg,
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Override every per-check sample count.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long, value_enum, default_value = "both")]
    normalization: NormalizationArg,
    /// Emit the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report elapsed_ms as 0 so output is byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
    /// Run on both backends and fail on any verdict mismatch.
    #[arg(long)]
    compare_backends: bool,
}

impl SuiteArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            backend: self.backend.into(),
            precision: self.precision,
            seed: self.seed,
            samples: self.samples,
            max_terms: self.max_terms,
            normalization: self.normalization.into(),
            record_timing: !self.no_timing,
            ..RunOptions::default()
        }
    }
}

fn run_suite_command(args: &SuiteArgs, json_default: bool) -> ExitCode {
    let opts = args.options();
    let name: SuiteName = args.suite.into();
    let json = args.json || json_default;

    let (report, mismatches): (CheckReport, Vec<String>) = if args.compare_backends {
        match compare_backends(name, args.n, &opts) {
            Ok(cmp) => {
                let report = if opts.backend == BackendKind::Numeric { cmp.numeric } else { cmp.exact };
                (report, cmp.mismatches)
            }
            Err(e) => return usage(&e.to_string()),
        }
    } else {
        match run_suite(name, args.n, &opts) {
            Ok(r) => (r, Vec::new()),
            Err(e) => return usage(&e.to_string()),
        }
    };

    let text = report.to_json_string();
    if let Some(path) = &args.out {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    if json {
        println!("{text}");
    } else {
        print!("{}", report.to_text());
    }
    if args.compare_backends {
        if mismatches.is_empty() {
            eprintln!("backends agree on every verdict");
        } else {
            eprintln!("backend verdict mismatches: {}", mismatches.join(", "));
        }
    }
    if report.passed() && mismatches.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => run_suite_command(&args, false),
        Command::Report(args) => run_suite_command(&args, true),
        Command::Eval { expr, scalar } => {
            if let Some(limit) = scalar.max_terms {
                algebra::set_expansion_limit(limit);
            }
            match eval_expression(&expr, scalar.n, scalar.backend.into(), scalar.precision) {
                Ok(text) => {
                    println!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => usage(&e),
            }
        }
        Command::Eq { lhs, rhs, scalar } => {
            if let Some(limit) = scalar.max_terms {
                algebra::set_expansion_limit(limit);
            }
            match compare_expressions(&lhs, &rhs, scalar.n, scalar.backend.into(), scalar.precision) {
                Ok(true) => {
                    println!("equal");
                    ExitCode::SUCCESS
                }
                Ok(false) => {
                    println!("not equal");
                    ExitCode::from(EXIT_FAIL)
                }
                Err(e) => usage(&e),
            }
        }
    }
}
