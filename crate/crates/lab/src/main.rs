use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cesaro_lab::output::{run, write_outputs, DEFAULT_OUTPUT_DIR};
use cesaro_lab::reproduce::CASES;
use cesaro_lab::{ExperimentConfig, LabError, RunOptions, RunResult};
use clap::{Args, Parser, Subcommand};

/// Batch experiments on Cesàro-type operators.
#[derive(Debug, Parser)]
#[command(name = "cesaro-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a key-value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config's `output` key.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a bundled scenario and compare it against its expectations.
    Reproduce {
        /// Case tag; see `cesaro-lab cases`.
        case: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the bundled scenarios.
    Cases,
    /// Moments task with config fields as flags.
    Moments(Fields),
    /// Carleson task with config fields as flags.
    Carleson(Fields),
    /// Spectrum task with config fields as flags.
    Spectrum(Fields),
}

/// Config fields as flags; names match the config keys.
#[derive(Debug, Args)]
struct Fields {
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    sequence: Option<String>,
    #[arg(long)]
    series: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    #[arg(long)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long)]
    n0: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long = "J")]
    j: Option<String>,
    #[arg(long = "C")]
    c: Option<String>,
    #[arg(long = "D")]
    d: Option<String>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Fields {
    fn pairs(&self, task: &str) -> Vec<(String, String)> {
        let fields = [
            ("measure", &self.measure),
            ("sequence", &self.sequence),
            ("series", &self.series),
            ("gamma", &self.gamma),
            ("delta", &self.delta),
            ("s", &self.s),
            ("lambda", &self.lambda),
            ("n0", &self.n0),
            ("N", &self.n),
            ("J", &self.j),
            ("C", &self.c),
            ("D", &self.d),
            ("grid", &self.grid),
        ];
        let mut pairs = vec![("task".to_string(), task.to_string())];
        pairs.extend(fields.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))));
        pairs
    }
}

fn finish(result: &RunResult, dir: &Path) -> Result<ExitCode, LabError> {
    let written = write_outputs(dir, result)?;
    let body = &result.report.body;
    for f in &body.findings {
        let outcome = f.outcome.as_deref().map(|o| format!(" [{o}]")).unwrap_or_default();
        println!("{:<13} {}{outcome}", format!("{:?}", f.status).to_lowercase(), f.name);
    }
    if let Some(e) = &body.error {
        eprintln!("error: {e}");
    }
    println!("status: {} ({} files in {})", body.status, written.len(), dir.display());
    Ok(ExitCode::from(result.exit_code()))
}

fn execute(cfg: ExperimentConfig, output: Option<PathBuf>) -> Result<ExitCode, LabError> {
    let dir = output.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    let result = run(&cfg, RunOptions::from_env());
    finish(&result, &dir)
}

fn dispatch(cli: Cli) -> Result<ExitCode, LabError> {
    match cli.command {
        Command::Run { config, output } => {
            let text = std::fs::read_to_string(&config)?;
            execute(ExperimentConfig::parse(&text)?, output)
        }
        Command::Reproduce { case, p, gamma, alpha, beta, output } => {
            let mut pairs = vec![("task".to_string(), "reproduce-paper".to_string()), ("case".to_string(), case)];
            for (k, v) in [("p", p), ("gamma", gamma), ("alpha", alpha), ("beta", beta)] {
                if let Some(v) = v {
                    pairs.push((k.to_string(), v.to_string()));
                }
            }
            execute(ExperimentConfig::from_pairs(pairs)?, output)
        }
        Command::Cases => {
            for (tag, description) in CASES {
                println!("{tag:<28} {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Moments(f) => execute(ExperimentConfig::from_pairs(f.pairs("moments"))?, f.output),
        Command::Carleson(f) => execute(ExperimentConfig::from_pairs(f.pairs("carleson"))?, f.output),
        Command::Spectrum(f) => execute(ExperimentConfig::from_pairs(f.pairs("spectrum"))?, f.output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
