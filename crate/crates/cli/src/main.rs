//! `gst`: generate GST axiom sets, translate feature axioms into the model
//! language, and check them over the finite tagged model.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gst_core::checker::Bounds;
use gst_core::combine::OtherwisePolicy;

#[derive(Parser)]
#[command(name = "gst", version, about = "Generalized set theories as data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an axiom set from a spec file.
    Combine {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Policy::SoftTyping)]
        policy: Policy,
    },
    /// Check a generated axiom set and the translated feature axioms over
    /// the model.
    Check {
        axioms: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Parameter morphism file; the built-in ZF⁺ map by default.
        #[arg(long)]
        morphism: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a feature's translated axioms and respectfulness goals.
    Translate {
        feature: String,
        #[arg(long)]
        morphism: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the ordinal-subtraction and override examples.
    EvalExamples {
        /// Functions in the examples are defined on `0..size`.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..=64))]
        size: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the model's tiers as JSON.
    DumpModel {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Number of finite tiers to build.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    depth: u64,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest domain whose unary predicates are enumerated exhaustively.
    #[arg(long, default_value_t = Bounds::default().unary, value_parser = positive)]
    unary_bound: usize,
    /// Largest domain whose binary relations are enumerated exhaustively.
    #[arg(long, default_value_t = Bounds::default().binary, value_parser = positive)]
    binary_bound: usize,
    /// Largest operator count `n^n` enumerated exhaustively.
    #[arg(long, default_value_t = Bounds::default().op, value_parser = clap::value_parser!(u64).range(1..))]
    op_bound: u64,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            unary: self.unary_bound,
            binary: self.binary_bound,
            op: self.op_bound,
            ..Bounds::default()
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    SoftTyping,
    Never,
}

impl From<Policy> for OtherwisePolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::SoftTyping => OtherwisePolicy::SoftTyping,
            Policy::Never => OtherwisePolicy::Never,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Combine { spec, output, policy } => commands::combine(&spec, output.as_deref(), policy.into()),
        Command::Check {
            axioms,
            model,
            bounds,
            morphism,
            output,
        } => commands::check(
            &axioms,
            model.depth,
            bounds.bounds(),
            bounds.seed,
            morphism.as_deref(),
            output.as_deref(),
        ),
        Command::Translate {
            feature,
            morphism,
            output,
        } => commands::translate(&feature, morphism.as_deref(), output.as_deref()),
        Command::EvalExamples { size, output } => commands::eval_examples(size, output.as_deref()),
        Command::DumpModel { model, output } => commands::dump_model(model.depth, output.as_deref()),
    };
    match result {
        Ok(commands::Outcome::Clean) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Failures) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gst: {e}");
            ExitCode::from(2)
        }
    }
}
