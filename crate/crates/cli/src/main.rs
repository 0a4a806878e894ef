use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use condexp::examples::DEFAULT_MARKET_DIM;
use condexp_cli::{reproduce_table, run, CliError, ExperimentConfig, Format, ScaleOverrides};

#[derive(Parser)]
#[command(name = "condexp", version, about = "Certify regression estimates of conditional expectations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit and certify the regressors of a TOML experiment file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the format given in the file.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Rerun one of the six report tables at desk scale.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        table: u8,
        #[arg(long = "scale-m")]
        m: Option<u64>,
        #[arg(long = "scale-n")]
        n: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        batch_size: Option<u64>,
        /// Gradient steps per network.
        #[arg(long)]
        nn_steps: Option<u64>,
        #[arg(long)]
        nn_minibatch: Option<usize>,
        /// Number of assets for tables 4 to 6.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        strike: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        /// Also write `<path>.csv` and `<path>.json`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Show the registered examples.
    ListExamples,
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Run { config, format } => {
            let config = ExperimentConfig::load(&config)?;
            let out = run(&config)?;
            out.check_consistency()?;
            if let Some(base) = &config.output_path {
                let (csv, json) = out.write_files(base)?;
                eprintln!("wrote {} and {}", csv.display(), json.display());
            }
            print!("{}", out.render(format.unwrap_or(config.format))?);
            Ok(!out.any_failed())
        }
        Command::Reproduce { table, m, n, seed, batch_size, nn_steps, nn_minibatch, dim, strike, format, output } => {
            let scale = ScaleOverrides { m, n, seed, batch_size, nn_steps, nn_minibatch, dim, strike };
            let rep = reproduce_table(table, &scale)?;
            rep.desk.check_consistency()?;
            if let Some(base) = &output {
                let (csv, json) = rep.write_files(base)?;
                eprintln!("wrote {} and {}", csv.display(), json.display());
            }
            print!("{}", rep.render(format)?);
            Ok(!rep.desk.any_failed())
        }
        Command::ListExamples => {
            for e in condexp::list_examples() {
                let dims = if matches!(e.id, "maxcall" | "binary") {
                    format!("d = {DEFAULT_MARKET_DIM} (default), noise {DEFAULT_MARKET_DIM}")
                } else {
                    format!("d = {}, noise {}", e.input_dim, e.noise_dim)
                };
                println!("{:<9} {:<26} {}", e.id, dims, e.description);
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some rows failed; see the error column");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
