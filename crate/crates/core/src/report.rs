//! Stable JSON and text renderings of test and simulation results.
//!
//! Floating-point fields are rounded to [`REPORT_DIGITS`] significant digits
//! so output is byte-identical across runs and platforms. The text form
//! prints the same rounded numbers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::anova::TestReport;
use crate::error::Result;
use crate::oracle::SimResult;

pub const REPORT_DIGITS: usize = 12;

/// Rounds to `digits` significant digits; non-finite values and zero pass through.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn r(x: f64) -> f64 {
    round_sig(x, REPORT_DIGITS)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsRowDoc {
    pub source: String,
    pub ss: f64,
    pub df: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalDoc {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// Serialized form of a [`TestReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestDocument {
    pub test: String,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mu0: Option<f64>,
    pub statistic: f64,
    pub df: [usize; 2],
    pub alpha_point: f64,
    pub reject: bool,
    pub eta: f64,
    pub p_value: f64,
    pub estimate: Vec<f64>,
    pub ss_table: Vec<SsRowDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ci: Option<IntervalDoc>,
    /// Factor level labels in the order used for the estimate, one list per factor.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub levels: Option<Vec<Vec<String>>>,
}

impl TestDocument {
    pub fn from_report(report: &TestReport) -> Self {
        let ss_table: Vec<SsRowDoc> = report
            .ss_table
            .rows
            .iter()
            .chain(std::iter::once(&report.ss_table.total))
            .map(|row| SsRowDoc {
                source: row.source.to_string(),
                ss: r(row.ss),
                df: row.df,
            })
            .collect();
        Self {
            test: report.test.name().to_string(),
            alpha: report.alpha,
            mu0: report.mu0,
            statistic: r(report.statistic),
            df: [report.df.0, report.df.1],
            alpha_point: r(report.alpha_point),
            reject: report.reject,
            eta: r(report.eta),
            p_value: r(report.p_value),
            estimate: report.estimate.iter().map(|&v| r(v)).collect(),
            ss_table,
            ci: report.confidence_interval.map(|ci| IntervalDoc {
                lower: r(ci.lower),
                upper: r(ci.upper),
                level: r(ci.level),
            }),
            levels: None,
        }
    }

    pub fn with_levels(mut self, levels: Vec<Vec<String>>) -> Self {
        self.levels = Some(levels);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self).expect("document serializes"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "test         {}", self.test);
        let _ = writeln!(out, "alpha        {}", self.alpha);
        if let Some(mu0) = self.mu0 {
            let _ = writeln!(out, "mu0          {mu0}");
        }
        let _ = writeln!(out, "statistic    {}", self.statistic);
        let _ = writeln!(out, "df           {} {}", self.df[0], self.df[1]);
        let _ = writeln!(out, "alpha_point  {}", self.alpha_point);
        let _ = writeln!(out, "eta          {}", self.eta);
        let _ = writeln!(out, "p_value      {}", self.p_value);
        let _ = writeln!(out, "reject       {}", self.reject);
        let estimate: Vec<String> = self.estimate.iter().map(f64::to_string).collect();
        let _ = writeln!(out, "estimate     {}", estimate.join(" "));
        if let Some(ci) = &self.ci {
            let _ = writeln!(out, "ci           {} {} level {}", ci.lower, ci.upper, ci.level);
        }
        if let Some(levels) = &self.levels {
            for (i, factor) in levels.iter().enumerate() {
                let _ = writeln!(out, "levels[{i}]    {}", factor.join(" "));
            }
        }
        let _ = writeln!(out, "source       ss  df");
        for row in &self.ss_table {
            let _ = writeln!(out, "  {:<12} {}  {}", row.source, row.ss, row.df);
        }
        out
    }
}

/// Serialized form of a [`SimResult`] with its run parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimDocument {
    pub test: String,
    pub target_law: String,
    pub seed: u64,
    pub replicates: usize,
    pub alpha: f64,
    pub alpha_point: f64,
    pub empirical_tail: f64,
    pub ks_distance: f64,
}

impl SimDocument {
    pub fn new(test: &str, seed: u64, sim: &SimResult) -> Self {
        Self {
            test: test.to_string(),
            target_law: sim.target_law.to_string(),
            seed,
            replicates: sim.replicates,
            alpha: sim.alpha,
            alpha_point: r(sim.alpha_point),
            empirical_tail: r(sim.empirical_tail),
            ks_distance: r(sim.ks_distance),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self).expect("document serializes"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "test            {}", self.test);
        let _ = writeln!(out, "target_law      {}", self.target_law);
        let _ = writeln!(out, "seed            {}", self.seed);
        let _ = writeln!(out, "replicates      {}", self.replicates);
        let _ = writeln!(out, "alpha           {}", self.alpha);
        let _ = writeln!(out, "alpha_point     {}", self.alpha_point);
        let _ = writeln!(out, "empirical_tail  {}", self.empirical_tail);
        let _ = writeln!(out, "ks_distance     {}", self.ks_distance);
        out
    }
}
