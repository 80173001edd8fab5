use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use vecnet_cli::{emit_report, presets, report, run_experiment, ExperimentConfig, OutputPaths};

#[derive(Parser)]
#[command(
    name = "vecnet",
    version,
    about = "Constructive shallow vector-valued network sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config file or a preset.
    Run {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Overrides the config's root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; without one the CSV summary goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    Presets {
        #[command(subcommand)]
        command: PresetCommand,
    },
}

#[derive(Subcommand)]
enum PresetCommand {
    List,
    /// Print a preset as a config document.
    Show {
        name: String,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Presets {
            command: PresetCommand::List,
        } => {
            for (name, about) in presets::describe() {
                writeln!(stdout, "{name:<20} {about}")?;
            }
        }
        Command::Presets {
            command: PresetCommand::Show { name },
        } => {
            writeln!(stdout, "{}", presets::preset(&name)?.to_json())?;
        }
        Command::Run {
            config,
            preset,
            seed,
            out,
            threads,
        } => {
            if let Some(n) = threads {
                if n == 0 {
                    bail!("--threads must be positive");
                }
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .context("configuring the thread pool")?;
            }
            let mut cfg = match (config, preset) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => presets::preset(&name)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let exp = run_experiment(&cfg)?;
            match out.or_else(|| cfg.output.dir.clone()) {
                Some(dir) => {
                    let paths = OutputPaths::in_dir(&dir, cfg.output.write_networks);
                    emit_report(&exp.report, &exp.networks, &paths)?;
                    eprintln!("wrote {} and {}", paths.csv.display(), paths.json.display());
                }
                None => report::write_csv(&exp.report, &mut stdout).context("writing to stdout")?,
            }
        }
    }
    Ok(())
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
