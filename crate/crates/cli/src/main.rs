use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use vilenkin_cli::commands::{
    cmd_diverge, cmd_lebesgue, cmd_strong, cmd_validate, failed_identities, ValidateOptions,
};
use vilenkin_cli::config::parse_phi;
use vilenkin_cli::{CliError, ExperimentConfig, Format, ResultTable};

#[derive(Debug, Parser)]
#[command(
    name = "vilenkin",
    version,
    about = "Fourier experiments on truncated Vilenkin groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lebesgue constants L_n and their averages.
    Lebesgue(Common),
    /// Divergence ledger of the strong partial-sum means.
    Diverge(Common),
    /// Strong sums, the Gat mean and log-normalized ratios.
    Strong(Common),
    /// Check every exact identity; exits 3 on failure.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long, hide = true)]
        corrupt_kernel: bool,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Truncation depth N.
    #[arg(long)]
    depth: Option<usize>,
    /// Largest n for the Lebesgue scan.
    #[arg(long)]
    nmax: Option<usize>,
    /// sqrt_log, log_over_loglog2, one or const:<value>.
    #[arg(long)]
    phi: Option<String>,
    /// Checkpoint levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<usize>>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(d) = self.depth {
            config.depth = Some(d);
        }
        if let Some(n) = self.nmax {
            config.lebesgue.n_max = Some(n);
        }
        if let Some(phi) = &self.phi {
            config.diverge.phi = parse_phi(phi)?;
        }
        if let Some(a) = &self.alphas {
            config.diverge.alphas = a.clone();
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        if let Some(f) = self.format {
            config.format = f;
        }
        Ok(config)
    }
}

fn emit(config: &ExperimentConfig, table: &ResultTable) -> Result<(), CliError> {
    match &config.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(config.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(config.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let (common, corrupt_kernel) = match &cli.command {
        Command::Lebesgue(c) | Command::Diverge(c) | Command::Strong(c) => (c, false),
        Command::Validate {
            common,
            corrupt_kernel,
        } => (common, *corrupt_kernel),
    };
    let config = common.load()?;
    let mut table = match cli.command {
        Command::Lebesgue(_) => cmd_lebesgue(&config)?,
        Command::Diverge(_) => cmd_diverge(&config)?,
        Command::Strong(_) => cmd_strong(&config)?,
        Command::Validate { .. } => cmd_validate(&config, ValidateOptions { corrupt_kernel })?,
    };
    if config.format == Format::Json {
        table.set_meta("wall_clock_seconds", started.elapsed().as_secs_f64());
    }
    emit(&config, &table)?;
    if table.meta.get("command").and_then(|c| c.as_str()) == Some("validate") {
        let failed = failed_identities(&table);
        if !failed.is_empty() {
            return Err(CliError::Validation { failed });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Config(e.to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
