use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bniso::checks::{self, DEFAULT_SEED};
use bniso::config::Config;
use bniso::enumerate::{all_graphs, catalog_n2, gsize_estimate, sample_graphs};
use bniso::nice::{find_nice_set, is_nice, missing_arc_network, nice_from_missing_arc};
use bniso::perm::{conjugate, Perm};
use bniso::sparse::verify_sparse_family;
use bniso::subset::CubeSubset;
use bniso::witness::{complete_witness, complete_witness_best_effort};
use bniso::{Error, Network};

#[derive(Parser)]
#[command(
    name = "bniso",
    version,
    about = "Interaction graphs of Boolean networks under relabeling of the configuration space"
)]
struct Cli {
    /// Seed driving every sampled quantity; identical seeds give
    /// byte-identical reports.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Force single-threaded execution.
    #[arg(long, global = true)]
    deterministic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the interaction graph of a network.
    Graph {
        /// Truth table, text or JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
        format: GraphFormat,
    },
    /// Conjugate a network by a permutation of its configuration space.
    Conjugate {
        #[arg(long)]
        input: PathBuf,
        /// Permutation JSON {"n":..,"map":[..]}.
        #[arg(long)]
        perm: PathBuf,
        #[arg(long, value_enum, default_value_t = NetworkFormat::Text)]
        format: NetworkFormat,
    },
    /// Build a verified relabeling whose interaction graph is complete.
    Witness {
        #[arg(long)]
        input: PathBuf,
        /// Try the routes even below 5 components; not finding a witness
        /// is then an answer, not an error.
        #[arg(long)]
        best_effort: bool,
    },
    /// Nice-set certificates and missing-arc constructions.
    Nice {
        #[command(subcommand)]
        command: NiceCommand,
    },
    /// The exact family of interaction graphs (up to 3 components), or a
    /// sampled subset with --trials.
    Enumerate {
        #[arg(long)]
        input: PathBuf,
        /// Sample this many conjugates instead of exhausting.
        #[arg(long)]
        trials: Option<usize>,
        /// Unlock the 4-component exhaustive run.
        #[arg(long)]
        override_large: bool,
    },
    /// Lower-bound the family size from sampled conjugates.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Exhaustively verify the two-component catalog.
    Catalog {
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Check the arc lower bound on the collapse family.
    Sparse {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random relabelings checked per sampled set.
        #[arg(long, default_value_t = 20)]
        conjugations: usize,
    },
    /// Run the verification checklist.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
    },
}

#[derive(Subcommand)]
enum NiceCommand {
    /// Find a k-nice set by descent from the full cube.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Verify a candidate set, given as a JSON array of configurations.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        set: PathBuf,
    },
    /// Build a relabeling whose graph misses the arc j -> i (1-based).
    MissingArc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Report the slab certificate when the graph misses the arc j -> i.
    FromMissingArc {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum NetworkFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    /// The nine standard checks.
    Fast,
    /// Adds the exhaustive three-component sweep.
    Full,
}

/// Exit codes: 0 success, 1 falsification or violation, 2 input error,
/// 3 precondition refusal.
struct AppError {
    code: u8,
    message: String,
}

impl AppError {
    fn violation(message: String) -> AppError {
        AppError { code: 1, message }
    }

    fn input(message: impl Into<String>) -> AppError {
        AppError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> AppError {
        let code = match &e {
            Error::Parse(_) => 2,
            Error::Precondition(_) => 3,
            Error::Invariant(_) => 1,
        };
        AppError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.deterministic);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn configure_threads(deterministic: bool) {
    let threads = if deterministic {
        Some(1)
    } else {
        std::env::var("BNISO_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&t| t > 0)
    };
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

fn read_file(path: &Path) -> Result<String, AppError> {
    fs::read_to_string(path)
        .map_err(|e| AppError::input(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<Network, AppError> {
    let content = read_file(path)?;
    let network = if content.trim_start().starts_with('{') {
        Network::from_json_str(&content)?
    } else {
        Network::from_text(&content)?
    };
    Ok(network)
}

fn load_perm(path: &Path) -> Result<Perm, AppError> {
    Ok(Perm::from_json_str(&read_file(path)?)?)
}

/// Converts a 1-based component label from the command line.
fn component_index(label: usize, n: usize) -> Result<usize, AppError> {
    if label == 0 || label > n {
        return Err(AppError::input(format!(
            "component {label} outside 1..={n}"
        )));
    }
    Ok(label - 1)
}

fn run(cli: Cli) -> Result<(), AppError> {
    let seed = cli.seed;
    match cli.command {
        Command::Graph { input, format } => {
            let g = load_network(&input)?.interaction_graph();
            match format {
                GraphFormat::Json => println!("{}", g.to_json_string()),
                GraphFormat::Dot => print!("{}", g.to_dot()),
                GraphFormat::Text => print!("{}", g.to_text()),
            }
            Ok(())
        }
        Command::Conjugate {
            input,
            perm,
            format,
        } => {
            let f = load_network(&input)?;
            let p = load_perm(&perm)?;
            let h = conjugate(&f, &p)?;
            match format {
                NetworkFormat::Json => println!("{}", h.to_json_string()),
                NetworkFormat::Text => print!("{}", h.to_text()),
            }
            Ok(())
        }
        Command::Witness { input, best_effort } => {
            let f = load_network(&input)?;
            if best_effort {
                match complete_witness_best_effort(&f)? {
                    Some(w) => println!("{}", w.to_json_string()),
                    None => println!("{}", serde_json::json!({ "found": false })),
                }
            } else {
                println!("{}", complete_witness(&f)?.to_json_string());
            }
            Ok(())
        }
        Command::Nice { command } => run_nice(command),
        Command::Enumerate {
            input,
            trials,
            override_large,
        } => {
            let f = load_network(&input)?;
            let family = match trials {
                Some(t) => sample_graphs(&f, t, seed),
                None => all_graphs(&f, override_large)?,
            };
            println!("{}", family.to_json_string());
            Ok(())
        }
        Command::Estimate { input, trials } => {
            let f = load_network(&input)?;
            let (distinct, trials) = gsize_estimate(&f, trials, seed);
            println!(
                "{}",
                serde_json::json!({ "distinct_graphs": distinct, "trials": trials })
            );
            Ok(())
        }
        Command::Catalog { format } => {
            let report = catalog_n2();
            match format {
                ReportFormat::Json => println!("{}", report.to_json_string()),
                ReportFormat::Text => {
                    for check in &report.checks {
                        println!(
                            "{}: {} ({})",
                            check.name,
                            if check.passed { "ok" } else { "FAIL" },
                            check.detail
                        );
                    }
                }
            }
            if report.passed {
                Ok(())
            } else {
                Err(AppError::violation("catalog verification failed".into()))
            }
        }
        Command::Sparse {
            n,
            trials,
            conjugations,
        } => {
            let report = verify_sparse_family(n, trials, conjugations, seed);
            println!("{}", report.to_json_string());
            if report.violations == 0 {
                Ok(())
            } else {
                Err(AppError::violation(format!(
                    "{} violations of the arc bound",
                    report.violations
                )))
            }
        }
        Command::Verify { level } => run_verify(level, seed),
    }
}

fn run_nice(command: NiceCommand) -> Result<(), AppError> {
    match command {
        NiceCommand::Find { input, k } => {
            let f = load_network(&input)?;
            println!("{}", find_nice_set(&f, k)?.to_json_string());
            Ok(())
        }
        NiceCommand::Verify { input, set } => {
            let f = load_network(&input)?;
            let values: Vec<u32> = serde_json::from_str(&read_file(&set)?)
                .map_err(|e| AppError::input(format!("bad set file: {e}")))?;
            let a = CubeSubset::from_members(f.n(), values.into_iter().map(Config))?;
            match is_nice(&f, &a)? {
                Some(report) => println!("{}", report.to_json_string()),
                None => println!("{}", serde_json::json!({ "nice": false })),
            }
            Ok(())
        }
        NiceCommand::MissingArc { input, i, j } => {
            let f = load_network(&input)?;
            let n = f.n();
            let (i, j) = (component_index(i, n)?, component_index(j, n)?);
            if n < 2 {
                return Err(AppError::input("need at least 2 components"));
            }
            let report = find_nice_set(&f, 1 << (n - 2))?;
            let (pi, h) = missing_arc_network(&f, &report, i, j)?;
            println!(
                "{}",
                serde_json::json!({
                    "i": i + 1,
                    "j": j + 1,
                    "pi": serde_json::from_str::<serde_json::Value>(&pi.to_json_string()).unwrap(),
                    "h": serde_json::from_str::<serde_json::Value>(&h.to_json_string()).unwrap(),
                })
            );
            Ok(())
        }
        NiceCommand::FromMissingArc { input, i, j } => {
            let h = load_network(&input)?;
            let n = h.n();
            let (i, j) = (component_index(i, n)?, component_index(j, n)?);
            println!("{}", nice_from_missing_arc(&h, i, j)?.to_json_string());
            Ok(())
        }
    }
}

fn run_verify(level: Level, seed: u64) -> Result<(), AppError> {
    let mut reports = checks::run_fast(seed);
    for report in &reports {
        println!("{}", report.summary_line());
        if !report.passed {
            if let Some(repro) = &report.reproducer {
                println!("  reproducer: {repro}");
            }
        }
    }
    if matches!(level, Level::Full) {
        println!("running the exhaustive three-component sweep; this takes a while");
        let progress = |done: usize, total: usize| {
            if done % (1 << 20) == 0 || done == total {
                println!("  sweep progress: {done} / {total}");
            }
        };
        let sweep = checks::full_sweep_three_components(seed, Some(&progress));
        println!("{}", sweep.summary_line());
        reports.push(sweep);
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        println!("all {} checks passed", reports.len());
        Ok(())
    } else {
        Err(AppError::violation(format!("{failed} checks failed")))
    }
}
