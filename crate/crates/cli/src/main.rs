mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mqt_core::{Budget, FieldSpec};

use crate::input::UsageError;

/// Exit status of a command that ran to completion.
pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_BUDGET: u8 = 2;
/// A verifier found a broadcast, or its two refutation routes disagreed.
pub const EXIT_FALSIFIED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mqt", version, about = "Exact modal quantum theory over finite fields")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Field: a prime `p`, `p^k` with the built-in modulus, or `p^k:c0,..,ck`
    #[arg(long, global = true, default_value = "2")]
    pub field: String,
    /// Ambient dimension of the state space
    #[arg(long, global = true)]
    pub ambient: Option<usize>,
    /// Maximum number of vectors an enumeration may touch
    #[arg(long, global = true, default_value_t = Budget::DEFAULT.0)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Worker threads for the verifier; 0 uses every available core
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Write the report (or certificate) to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Show that ∨ does not distribute over ∧ for A=⟨e1⟩, B=⟨e2⟩, C=⟨e1+e2⟩
    DemoDistributivity,
    /// List diamond triples among the subspaces of the ambient space
    FindDiamonds(commands::FindDiamondsArgs),
    /// Exhaustively refute every broadcast of a null-bottom diamond
    NoBroadcastVerify(commands::VerifyArgs),
    /// Broadcast two subspaces by measuring and preparing
    BroadcastPair(commands::PairArgs),
    /// Reduce a composite subspace to one factor
    Reduce(commands::ReduceArgs),
    /// Decide whether one linear map clones a list of pure states
    CloneCheck(commands::CloneArgs),
    /// Run a fast built-in battery of checks
    Selftest,
}

/// Validated global settings.
pub struct RunConfig {
    pub field: FieldSpec,
    pub ambient: Option<usize>,
    pub budget: Budget,
    pub format: Format,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<String>,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs) -> Result<Self, UsageError> {
        let field = FieldSpec::parse(&g.field).map_err(|e| UsageError(format!("--field {:?}: {e}", g.field)))?;
        if g.budget == 0 {
            return input::usage("--budget must be at least 1");
        }
        if g.ambient == Some(0) {
            return input::usage("--ambient must be at least 1");
        }
        Ok(RunConfig {
            field,
            ambient: g.ambient,
            budget: Budget(g.budget),
            format: g.format,
            seed: g.seed,
            workers: g.workers,
            out: g.out.clone(),
        })
    }

    pub fn ambient_or(&self, default: usize) -> usize {
        self.ambient.unwrap_or(default)
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<mqt_core::Error>() {
        Some(mqt_core::Error::Budget { .. }) => EXIT_BUDGET,
        Some(mqt_core::Error::Invariant(_)) => EXIT_FALSIFIED,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = || -> anyhow::Result<u8> {
        let cfg = RunConfig::from_args(&cli.global)?;
        match &cli.command {
            Command::DemoDistributivity => commands::demo_distributivity(&cfg),
            Command::FindDiamonds(args) => commands::find_diamonds(&cfg, args),
            Command::NoBroadcastVerify(args) => commands::no_broadcast_verify(&cfg, args),
            Command::BroadcastPair(args) => commands::broadcast_pair(&cfg, args),
            Command::Reduce(args) => commands::reduce(&cfg, args),
            Command::CloneCheck(args) => commands::clone_check(&cfg, args),
            Command::Selftest => commands::selftest(&cfg),
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
