use std::path::PathBuf;

use anova_core::TestKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(format!("alpha must lie in (0, 1), got {alpha}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "anova",
    version,
    about = "ANOVA tests on CSV data, with simulation checks of their null laws"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a test on a CSV file (long format, one observation per row).
    Run(RunConfig),
    /// Simulate a test's statistic under its null hypothesis and compare with the claimed F law.
    Verify(VerifyConfig),
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// t, oneway, twoway-a, twoway-b or interaction.
    #[arg(long)]
    pub test: TestKind,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Hypothesized mean; required by the t test.
    #[arg(long, allow_hyphen_values = true)]
    pub mu0: Option<f64>,
    /// CSV with a `value` column and zero, one or two factor columns.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, env = "ANOVA_FORMAT", default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyConfig {
    #[arg(long)]
    pub test: TestKind,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    pub alpha: f64,
    /// Sample size (t) or replicates per cell (two-way).
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Group sizes for the one-way test.
    #[arg(long, value_delimiter = ',', default_value = "5,5,5")]
    pub sizes: Vec<usize>,
    /// Levels of factor A (two-way).
    #[arg(long, default_value_t = 2)]
    pub a: usize,
    /// Levels of factor B (two-way).
    #[arg(long, default_value_t = 3)]
    pub b: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, value_enum, env = "ANOVA_FORMAT", default_value = "text")]
    pub format: Format,
}
