use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pmr_core::env::Split;
use pmr_core::harness::{self, RunConfig, TrainMode};

/// Positive memory retention on the symbolic GuessNumber game.
#[derive(Parser, Debug)]
#[command(name = "pmr", version)]
struct Cli {
    /// `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (`out_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extra `key=value` overrides, applied after the config file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Only print warnings and errors.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate train/val/test scripted games.
    Generate {
        #[arg(long)]
        train: Option<usize>,
        #[arg(long)]
        val: Option<usize>,
        #[arg(long)]
        test: Option<usize>,
    },
    /// Maximum-likelihood pretraining of the questioner.
    Pretrain,
    /// Plain REINFORCE from the pretrained checkpoint.
    Reinforce,
    /// REINFORCE with positive memory retention.
    Pmr,
    /// Run the ablation table.
    Ablate {
        /// Comma-separated row ids (default: all 15).
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
    },
    /// Success rate of a checkpoint on one split.
    Eval {
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value = "test")]
        split: Split,
    },
}

fn resolve(cli: &Cli) -> pmr_core::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    for kv in &cli.overrides {
        cfg.apply_override(kv)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    if let Command::Generate { train, val, test } = &cli.command {
        for (key, v) in [("n_train", train), ("n_val", val), ("n_test", test)] {
            if let Some(v) = v {
                cfg.set(key, &v.to_string())?;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> pmr_core::Result<()> {
    let cfg = resolve(cli)?;
    match &cli.command {
        Command::Generate { .. } => println!("{}", harness::cmd_generate(&cfg)?),
        Command::Pretrain => println!("{}", harness::cmd_pretrain(&cfg)?),
        Command::Reinforce => println!("{}", harness::cmd_train(&cfg, TrainMode::Reinforce)?),
        Command::Pmr => println!("{}", harness::cmd_train(&cfg, TrainMode::Pmr)?),
        Command::Ablate { rows } => {
            let rows = if rows.is_empty() {
                harness::ablation_rows()
            } else {
                harness::select_rows(rows)?
            };
            let report = harness::cmd_ablate(&cfg, &rows)?;
            println!(
                "pretrained val {:.4} test {:.4}",
                report.pretrained_val, report.pretrained_test
            );
            print!("{}", report.to_table());
        }
        Command::Eval { checkpoint, split } => {
            println!(
                "{}",
                harness::cmd_eval(&cfg, checkpoint.as_deref(), *split)?
            )
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = if cli.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
