use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use posinorm::{Error, Result, ToleranceConfig};
use posinorm_cli::commands::{
    cmd_analyze, cmd_family, cmd_powers, cmd_qtop, cmd_suite, GlobalOpts, ProbeOpts,
};
use posinorm_cli::exit;
use posinorm_cli::report::{emit, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "posinorm", version, about = "Posinormality laboratory for finite matrices and banded operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative cutoff for numerical rank decisions
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_rank: f64,

    /// Relative slack below zero tolerated in semidefiniteness checks
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_psd: f64,

    /// Relative residual accepted in factorization identities
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_res: f64,

    /// Seed for every randomized construction in the run
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format; csv is available for family sigma curves
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Omit the timestamp so identical runs emit identical bytes
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Property verdicts and a posinormality certificate for one operator
    Analyze {
        /// JSON matrix file to analyze
        #[arg(long)]
        input: Option<PathBuf>,
        /// Constructor spec, e.g. "ep 6 3" or "jordan 2"
        #[arg(long, num_args = 1.., value_name = "SPEC")]
        construct: Option<Vec<String>>,
    },
    /// Verdicts for A^1..A^kmax; asserts EP closure when the input is EP
    Powers {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, num_args = 1.., value_name = "SPEC")]
        construct: Option<Vec<String>>,
        /// Largest power to analyze
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    /// Sigma curves and closed-range classification across truncation sizes
    Family {
        /// Family name: example1, shift, diag-inv-k, or toeplitz
        kind: String,
        /// Doubling ladder "LO..HI" or explicit list "4,6,10"
        #[arg(long, default_value = "4..256")]
        sizes: String,
        /// Largest power whose curve is traced
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        /// Banded symbol for the toeplitz family, e.g. "U* + 2U"
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Exact banded-operator algebra: expression plus an action, either order
    Qtop {
        first: String,
        second: String,
        /// Claimed lower bound for the probe action
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Random vectors tried by the probe action
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Largest support length the probe draws
        #[arg(long, default_value_t = 512)]
        max_support: usize,
    },
    /// Named verification suites; "all" chains every suite
    Suite {
        name: String,
        /// Instance count override for the randomized suites
        #[arg(long)]
        instances: Option<usize>,
        /// Single relative tolerance overriding rank, psd, and residual cutoffs
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn execute(cli: &Cli) -> Result<bool> {
    let mut tol = ToleranceConfig::new(cli.tol_rank, cli.tol_psd, cli.tol_res)?;
    if let Command::Suite { tol: Some(t), .. } = &cli.command {
        tol = ToleranceConfig::new(*t, *t, *t)?;
    }
    let opts = GlobalOpts {
        seed: cli.seed,
        tol,
        no_timestamp: cli.no_timestamp,
    };

    let mut csv: Option<String> = None;
    let report: RunReport = match &cli.command {
        Command::Analyze { input, construct } => {
            cmd_analyze(input.as_deref(), construct.as_deref(), &opts)?
        }
        Command::Powers {
            input,
            construct,
            kmax,
        } => cmd_powers(input.as_deref(), construct.as_deref(), *kmax, &opts)?,
        Command::Family {
            kind,
            sizes,
            kmax,
            symbol,
        } => {
            let (report, curves) = cmd_family(kind, sizes, *kmax, symbol.as_deref(), &opts)?;
            csv = Some(curves);
            report
        }
        Command::Qtop {
            first,
            second,
            c,
            trials,
            max_support,
        } => {
            let probe = ProbeOpts {
                c: *c,
                trials: *trials,
                max_support: *max_support,
            };
            cmd_qtop(first, second, &probe, &opts)?
        }
        Command::Suite {
            name, instances, ..
        } => cmd_suite(name, *instances, &opts)?,
    };

    let text = match cli.format {
        Format::Json => report.to_json()?,
        Format::Csv => csv.ok_or_else(|| {
            Error::Input("csv output is only available for the family command".into())
        })?,
    };
    emit(&text, cli.out.as_deref())?;
    Ok(report.summary.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::from(exit::ALL_PASS),
        Ok(false) => ExitCode::from(exit::PROPERTY_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::for_error(&e))
        }
    }
}
