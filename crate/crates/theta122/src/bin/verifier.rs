use clap::{Parser, Subcommand};
use std::fs;
use std::path::PathBuf;
use theta122::runner::{self, RunnerError};
use theta122::{CheckStatus, RunConfig};

/// Numerical and symbolic verification suites for the polarized abelian
/// threefold surface family.
#[derive(Parser)]
#[command(name = "verifier", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Run {
        /// JSON run configuration; built-in defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Suite to run (repeatable); overrides the config selection.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Write the JSON report to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the deterministic sample table (CSV) to this file.
        #[arg(long = "samples-out")]
        samples_out: Option<PathBuf>,
        /// Override the seed from the config.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { config, suites, out, samples_out, seed } => {
            run_command(config, suites, out, samples_out, seed)
        }
    };
    std::process::exit(code);
}

fn run_command(
    config_path: Option<PathBuf>,
    suites: Vec<String>,
    out: Option<PathBuf>,
    samples_out: Option<PathBuf>,
    seed: Option<u64>,
) -> i32 {
    let mut config = match load_config(config_path.as_deref()) {
        Ok(c) => c,
        Err(line) => {
            eprintln!("{}", line);
            return 2;
        }
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if !suites.is_empty() {
        config.suites = suites;
    }

    let report = match runner::run(&config) {
        Ok(r) => r,
        Err(RunnerError::Config(e)) => {
            eprintln!("{}", e);
            return 2;
        }
        Err(e) => {
            eprintln!("run aborted: {}", e);
            return 2;
        }
    };

    for r in &report.results {
        let tag = match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Finding => "finding",
        };
        eprintln!(
            "[{:>7}] {}/{} (max_error {:.3e}, {} checks)",
            tag, r.suite, r.check, r.max_error, r.count
        );
    }
    eprintln!(
        "{} passed, {} failed, {} findings",
        report.passed, report.failed, report.findings
    );

    let mut json = match serde_json::to_string_pretty(&report) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("cannot serialize report: {}", e);
            return 2;
        }
    };
    json.push('\n');
    match &out {
        Some(path) => {
            if let Err(e) = fs::write(path, &json) {
                eprintln!("cannot write {}: {}", path.display(), e);
                return 2;
            }
        }
        None => print!("{}", json),
    }

    if let Some(path) = &samples_out {
        let csv = match runner::samples_csv(&config) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("sample emission failed: {}", e);
                return 2;
            }
        };
        if let Err(e) = fs::write(path, &csv) {
            eprintln!("cannot write {}: {}", path.display(), e);
            return 2;
        }
    }

    if report.has_failures() {
        1
    } else {
        0
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<RunConfig, String> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| format!("cannot read {}: {}", p.display(), e))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| format!("invalid config {}: {}", p.display(), e))
        }
    }
}
