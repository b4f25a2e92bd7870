//! `htpl`: runs named experiments on instance files and writes CSV curves.

mod error;
mod experiments;
mod instance;
mod output;
mod params;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use error::{CliError, CliResult};
use experiments::Experiment;
use params::Params;

#[derive(Parser)]
#[command(name = "htpl", version, about = "Distributed hypothesis testing trade-off experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV.
    Run {
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// Instance JSON with `p_suv`, `q_suv`, optional `distortion` and `labels`.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Experiment parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Check an instance file and report its diagnostics.
    Validate { instance: PathBuf },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("HTPL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("HTPL_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}

fn run(
    experiment: Experiment,
    instance: Option<PathBuf>,
    out: PathBuf,
    seed: u64,
    raw_params: &[String],
) -> CliResult<()> {
    let params = Params::parse(raw_params)?;
    let pair = match (experiment.needs_instance(), instance) {
        (true, None) => {
            return Err(CliError::Usage(format!("{} needs --instance", experiment.name())));
        }
        (false, Some(_)) => {
            return Err(CliError::Usage(format!("{} uses built-in laws and takes no --instance", experiment.name())));
        }
        (true, Some(path)) => Some(instance::load_pair(&path)?),
        (false, None) => None,
    };
    let table = experiment.run(pair.as_ref(), &params, seed)?;
    output::write_table(&table, &out)?;
    println!(
        "{}",
        serde_json::json!({
            "status": "ok",
            "experiment": experiment.name(),
            "rows": table.rows.len(),
            "out": out.display().to_string(),
        })
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string());
            eprintln!("{}", err.record());
            return err.exit_code();
        }
    };
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run {
            experiment,
            instance,
            out,
            seed,
            params,
        } => run(experiment, instance, out, seed, &params),
        Command::Validate { instance } => validate::validate(&instance),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            e.exit_code()
        }
    }
}
