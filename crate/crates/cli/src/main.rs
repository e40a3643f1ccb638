mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{WorkbenchConfig, CONFIG_ENV};

/// Exact computations with extended Drinfeld doubles of Frobenius kernels.
#[derive(Parser, Debug)]
#[command(name = "fwb", version, about)]
struct Cli {
    /// TOML config file; falls back to $FWB_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for artifacts.
    #[arg(long = "out", global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    #[arg(long, global = true)]
    max_family: Option<usize>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    field_table: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Extended,
    O,
    Double,
    Coord,
    Group,
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// Enumerate points over F_{p^e}.
    #[arg(long = "field-ext", default_value_t = 1)]
    pub field_ext: u32,
    /// β leg: whole, trivial or axis:<i>; defaults to the case's standard family.
    #[arg(long)]
    pub beta: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a catalog case and write its algebra bundle.
    Build { case: String },
    /// Support set of a module ("k", "regular" or a module file).
    Support {
        case: String,
        module: String,
        #[command(flatten)]
        family: FamilyArgs,
        /// Second module; reports the support of the tensor product.
        #[arg(long)]
        tensor: Option<String>,
        /// Compare the Hopf and group coproducts on the restrictions to O.
        #[arg(long, requires = "tensor")]
        both_coproducts: bool,
        /// Also write the points as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Jordan types of a module's pullbacks, or of one matrix.
    Jordan {
        #[arg(required_unless_present = "matrix")]
        case: Option<String>,
        #[arg(required_unless_present = "matrix")]
        module: Option<String>,
        #[command(flatten)]
        family: FamilyArgs,
        /// JSON file holding a square matrix as rows of integers mod p.
        #[arg(long, conflicts_with_all = ["case", "module"], requires = "prime")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        prime: Option<u32>,
    },
    /// Minimal resolution, Betti numbers and Carlson modules.
    Cohomology {
        case: String,
        #[arg(long, value_enum, default_value_t = Target::Extended)]
        target: Target,
        #[arg(long, default_value_t = 8)]
        length: usize,
        /// Resolve this module file instead of k.
        #[arg(long, conflicts_with = "carlson")]
        module: Option<PathBuf>,
        /// Even degree of a class ζ whose Carlson module L_ζ is written.
        #[arg(long)]
        carlson: Option<usize>,
        /// Coefficients of ζ in the generator basis; defaults to the first generator.
        #[arg(long, value_delimiter = ',', requires = "carlson")]
        class: Option<Vec<u32>>,
    },
    /// Run a verification suite, or "all".
    Verify {
        suite: String,
        /// Cases to run; defaults to the suite's catalog.
        #[arg(long = "case")]
        cases: Vec<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        field_degrees: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        carlson_degrees: Option<Vec<usize>>,
        /// Largest random triple for fp1.
        #[arg(long)]
        triple_dim: Option<usize>,
    },
    /// Summarize the suite reports in the output directory.
    Report {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// How a command finished: every check held, or a counterexample was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

fn configure(cli: &Cli) -> anyhow::Result<WorkbenchConfig> {
    let path = cli.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut c = match path {
        Some(p) => WorkbenchConfig::load(&p)?,
        None => WorkbenchConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if let Some(d) = &cli.output_dir {
        c.output_dir = d.clone();
    }
    if let Some(v) = cli.max_dim {
        c.guards.max_dim = v;
    }
    if let Some(v) = cli.max_family {
        c.guards.max_family = v;
    }
    if let Some(v) = cli.workers {
        c.guards.workers = v;
    }
    if let Some(p) = &cli.field_table {
        c.field_table = Some(p.clone());
    }
    c.validate()?;
    if c.guards.workers > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(c.guards.workers).build_global()?;
    }
    Ok(c)
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    let cfg = configure(&cli)?;
    match cli.command {
        Command::Build { case } => commands::build(&cfg, &case),
        Command::Support {
            case,
            module,
            family,
            tensor,
            both_coproducts,
            csv,
        } => commands::support(&cfg, &case, &module, &family, tensor.as_deref(), both_coproducts, csv),
        Command::Jordan {
            case,
            module,
            family,
            matrix,
            prime,
        } => match (matrix, prime) {
            (Some(m), Some(p)) => commands::jordan_matrix(&cfg, &m, p),
            _ => commands::jordan(&cfg, case.as_deref().unwrap_or(""), module.as_deref().unwrap_or(""), &family),
        },
        Command::Cohomology {
            case,
            target,
            length,
            module,
            carlson,
            class,
        } => commands::cohomology(&cfg, &case, target, length, module.as_deref(), carlson, class),
        Command::Verify {
            suite,
            cases,
            trials,
            field_degrees,
            carlson_degrees,
            triple_dim,
        } => {
            let mut params = fwb_core::suites::SuiteParams {
                seed: cfg.seed,
                ..Default::default()
            };
            if let Some(t) = trials {
                params.trials = t;
            }
            if let Some(d) = triple_dim {
                params.max_dim = d;
            }
            if let Some(f) = field_degrees {
                params.field_degrees = f;
            }
            if let Some(c) = carlson_degrees {
                params.carlson_degrees = c;
            }
            commands::verify(&cfg, &suite, &cases, &params)
        }
        Command::Report { dir } => commands::report(&cfg, dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
