use std::path::PathBuf;
use std::process::ExitCode;

use chainrep::{Limits, Signature};
use chainrep_cli::{
    decide, growth, interp_reduce, load_formula, load_spec, mindim, monoid, normalform, oracle_check, selftest,
    witness, CliError, Format, FormulaSource, MonoidChoice, Report, RunConfig, VERSION,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Minimal reparameterizations and growth degrees of MSO formulas over
/// finite words.
///
/// Exit status: 0 success, 1 negative decision, 2 input error, 3 resource
/// limit.
#[derive(Parser)]
#[command(name = "chainrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// Comma-separated predicate names, e.g. `P1,P2`. Inferred from the
    /// formula when omitted.
    #[arg(long, global = true, value_name = "P1,P2,...")]
    sig: Option<String>,
    /// Formula text.
    #[arg(long, global = true, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long, global = true, value_name = "PATH")]
    formula_file: Option<PathBuf>,
    /// Word-length limit for oracle sweeps.
    #[arg(long, global = true, value_name = "L")]
    max_len: Option<usize>,
    /// Largest automaton size allowed during compilation.
    #[arg(long, global = true, value_name = "N")]
    budget_states: Option<usize>,
    /// Largest monoid allowed.
    #[arg(long, global = true, value_name = "N")]
    budget_monoid: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: FormatArg,
    /// Seed for the randomized parts of `selftest`.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Memory cap in MiB, folded into the automaton and monoid budgets.
    #[arg(long, global = true, env = "CHAINREP_BUDGET_MB", hide_env_values = true, value_name = "MB")]
    budget_mb: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Human,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonoidArg {
    Interval,
    Transition,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal dimension and a reparameterization realizing it.
    Mindim,
    /// Whether a reparameterization of dimension at most --dim exists.
    Decide {
        #[arg(long, value_name = "M")]
        dim: usize,
    },
    /// Growth degree, lower witnesses and the sandwich check for n = 1..=--n.
    Growth {
        #[arg(long, value_name = "N", default_value_t = 4)]
        n: usize,
    },
    /// Type-algebra dump over the formula's free variables.
    Monoid {
        #[arg(long, value_enum, default_value = "interval")]
        kind: MonoidArg,
    },
    /// Normal-form disjuncts for ascending placements of the free variables.
    Normalform,
    /// Pumping, no-decrement and growth-lower structures of size parameter --n.
    Witness {
        #[arg(long, value_name = "N")]
        n: usize,
    },
    /// Oracle verification sweep of the computed reparameterization.
    OracleCheck,
    /// Reduce an interpretation spec to the dimension of its universes.
    InterpReduce {
        /// Interpretation spec file.
        spec: PathBuf,
        /// Target dimension; defaults to the largest minimal universe dimension.
        #[arg(long, value_name = "M")]
        dim: Option<usize>,
    },
    /// Full acceptance battery.
    Selftest,
}

fn config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut c = RunConfig {
        signature: g
            .sig
            .as_deref()
            .map(Signature::parse)
            .transpose()
            .map_err(|e| CliError::input(format!("--sig: {e}")))?,
        limits: Limits::default(),
        max_len: g.max_len,
        seed: g.seed,
        format: match g.format {
            FormatArg::Human => Format::Human,
            FormatArg::Json => Format::Json,
        },
        budget_mb: None,
    };
    if let Some(n) = g.budget_states {
        c.limits.dfa.max_states = n;
    }
    if let Some(n) = g.budget_monoid {
        c.limits.monoid_elements = n;
    }
    if let Some(mb) = g.budget_mb {
        if mb == 0 {
            return Err(CliError::input("CHAINREP_BUDGET_MB must be positive"));
        }
        c.apply_memory_cap(mb);
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: &Cli, c: &RunConfig) -> Result<Report, CliError> {
    let formula = || {
        let source = match (&cli.global.formula, &cli.global.formula_file) {
            (Some(t), _) => FormulaSource::Text(t.clone()),
            (None, Some(p)) => FormulaSource::File(p.clone()),
            (None, None) => return Err(CliError::input("missing --formula or --formula-file")),
        };
        load_formula(&source, c)
    };
    match &cli.command {
        Command::Mindim => mindim(&formula()?, c),
        Command::Decide { dim } => decide(&formula()?, *dim, c),
        Command::Growth { n } => growth(&formula()?, *n, c),
        Command::Monoid { kind } => {
            let kind = match kind {
                MonoidArg::Interval => MonoidChoice::Interval,
                MonoidArg::Transition => MonoidChoice::Transition,
            };
            monoid(&formula()?, kind, c)
        }
        Command::Normalform => normalform(&formula()?, c),
        Command::Witness { n } => witness(&formula()?, *n, c),
        Command::OracleCheck => oracle_check(&formula()?, c),
        Command::InterpReduce { spec, dim } => interp_reduce(&load_spec(spec, c)?, *dim, c),
        Command::Selftest => selftest(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.global.format {
        FormatArg::Human => Format::Human,
        FormatArg::Json => Format::Json,
    };
    let result = config(&cli.global).and_then(|c| run(&cli, &c));
    match result {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(e) => {
            if format == Format::Json {
                let doc = json!({
                    "tool": "chainrep",
                    "version": VERSION,
                    "error": e.message,
                    "exit_code": e.exit_code,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("error documents serialize"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code as u8)
        }
    }
}
