//! Batch front end for the structure-relation pipeline.
//!
//! Exit codes: 0 when every selected check passes, 1 when some check fails
//! or is skipped on an unmet prerequisite, 2 on input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use opstruct_core::pipeline::{
    self, family_dump, parse_instance, run_pipeline, CheckKind, OutputFormat, Overrides,
};

#[derive(Parser)]
#[command(
    name = "opstruct",
    about = "Exact analysis of linear structure relations between monic orthogonal polynomial sequences",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump exact moments and recurrence coefficients of a classical family.
    Family {
        /// legendre | chebyshev_t | chebyshev_u | jacobi | laguerre | hermite
        name: String,
        /// Moment depth (moments 0..=k).
        #[arg(long, short = 'k', default_value_t = 24)]
        k: usize,
        /// Rational parameter for jacobi/laguerre, e.g. "1/2".
        #[arg(long)]
        alpha: Option<String>,
        /// Second rational parameter for jacobi.
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the full pipeline on an instance document.
    Check(RunArgs),
    /// Run only the functional-relation checks (initial conditions,
    /// determinant lemma, solver, constancy, nonvanishing, uniqueness).
    Inverse(RunArgs),
    /// Run only the orthogonality characterizations.
    Ortho(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Instance document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Override the config n_max.
    #[arg(long)]
    nmax: Option<usize>,
    /// Override the config moment horizon.
    #[arg(long)]
    horizon: Option<usize>,
    /// Write the canonical JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Stdout format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Text => OutputFormat::Text,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Family {
            name,
            k,
            alpha,
            beta,
            format,
        } => {
            let family = match pipeline::family_by_name(
                "family",
                &name,
                alpha.as_deref(),
                beta.as_deref(),
            ) {
                Ok(f) => f,
                Err(e) => return input_error(e),
            };
            match family_dump(&family, k) {
                Ok(value) => {
                    match format {
                        Format::Json => {
                            println!("{}", serde_json::to_string_pretty(&value).expect("json"))
                        }
                        Format::Text => {
                            println!("{name} through k = {k}");
                            for key in ["moments", "beta", "gamma"] {
                                let list: Vec<String> = value[key]
                                    .as_array()
                                    .expect("array")
                                    .iter()
                                    .map(|v| v.as_str().expect("string").to_string())
                                    .collect();
                                println!("{key}: {}", list.join(", "));
                            }
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => input_error(e),
            }
        }
        Command::Check(args) => run(args, None),
        Command::Inverse(args) => run(args, Some(CheckKind::INVERSE_SET.to_vec())),
        Command::Ortho(args) => run(args, Some(CheckKind::ORTHO_SET.to_vec())),
    }
}

fn run(args: RunArgs, check_set: Option<Vec<CheckKind>>) -> ExitCode {
    let started = Instant::now();
    let document = match fs::read_to_string(&args.input) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let overrides = Overrides {
        n_max: args.nmax,
        horizon: args.horizon,
        checks: check_set,
    };
    let (instance, config, summary) = match parse_instance(&document, &overrides) {
        Ok(parsed) => parsed,
        Err(e) => return input_error(e),
    };
    let report = run_pipeline(&instance, &config, summary);
    if let Some(path) = &args.report {
        if let Err(e) = fs::write(path, report.to_canonical_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    match args.format {
        Format::Json => print!("{}", report.to_canonical_json()),
        Format::Text => {
            print!("{}", report.to_text());
            println!("elapsed: {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn input_error(e: opstruct_core::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}
