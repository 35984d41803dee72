use anova_core::{run_test, simulate_statistic, Layout, SimDocument, SimPlan, State, TestDocument, TestKind, TestSpec};

use crate::config::{Command, Format, RunConfig, VerifyConfig};
use crate::error::CliError;
use crate::ingest::ingest;

pub const EXIT_NOT_REJECTED: u8 = 0;
pub const EXIT_REJECTED: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

/// Rendered output and the exit status it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit: u8,
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Run(cfg) => run(cfg),
        Command::Verify(cfg) => verify(cfg),
    }
}

fn render(
    format: Format,
    json: impl FnOnce() -> anova_core::Result<String>,
    text: impl FnOnce() -> String,
) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => json()? + "\n",
        Format::Text => text(),
    })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = TestSpec::new(cfg.test, cfg.alpha, cfg.mu0)?;
    let input = ingest(&cfg.input)?;
    let report = run_test(&spec, &input.dataset)?;
    let mut doc = TestDocument::from_report(&report);
    if !input.levels.is_empty() {
        doc = doc.with_levels(input.levels);
    }
    Ok(Outcome {
        output: render(cfg.format, || doc.to_json(), || doc.to_text())?,
        exit: if report.reject {
            EXIT_REJECTED
        } else {
            EXIT_NOT_REJECTED
        },
    })
}

fn verify_layout(cfg: &VerifyConfig) -> Result<Layout, CliError> {
    Ok(match cfg.test {
        TestKind::MeanEqualsMu0 => Layout::single(cfg.n)?,
        TestKind::OneWayEqualMeans => Layout::one_way(cfg.sizes.clone())?,
        _ => Layout::two_way(cfg.a, cfg.b, cfg.n)?,
    })
}

/// Simulates from the all-zero mean state, which lies in every null hypothesis.
pub fn verify(cfg: &VerifyConfig) -> Result<Outcome, CliError> {
    let layout = verify_layout(cfg)?;
    let state = State::new(vec![0.0; layout.mean_count()], cfg.sigma, &layout)?;
    let mut plan = SimPlan::new(state, layout, cfg.test, cfg.reps, cfg.seed).with_alpha(cfg.alpha);
    if cfg.test == TestKind::MeanEqualsMu0 {
        plan = plan.with_mu0(0.0);
    }
    let sim = simulate_statistic(&plan)?;
    let doc = SimDocument::new(cfg.test.name(), cfg.seed, &sim);
    Ok(Outcome {
        output: render(cfg.format, || doc.to_json(), || doc.to_text())?,
        exit: EXIT_NOT_REJECTED,
    })
}
