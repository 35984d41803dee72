//! The four test procedures (plus the factor-B main effect) as end-to-end
//! drivers: statistic, alpha-point, decision and the sums-of-squares table.
//!
//! Statistics are reported in mean-square-ratio form:
//!
//! | test            | statistic                                              | null law               |
//! |-----------------|--------------------------------------------------------|------------------------|
//! | mean = mu0      | `n (mu_bar - mu0)^2 / (SS / (n-1))`                    | `F(1, n-1)`            |
//! | one-way         | `[sum n_i (x_i. - x..)^2 / (a-1)] / [SS / (n-a)]`      | `F(a-1, n-a)`          |
//! | two-way main A  | `[b n sum (x_i.. - x...)^2 / (a-1)] / [SS / (ab(n-1))]`| `F(a-1, ab(n-1))`      |
//! | two-way main B  | factor A test on the transposed design                 | `F(b-1, ab(n-1))`      |
//! | interaction     | `[n sum (x_ij. - x_i.. - x_.j. + x...)^2 / ((a-1)(b-1))] / [SS / (ab(n-1))]` | `F((a-1)(b-1), ab(n-1))` |

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::distributions::{ChiSquared, DistributionModel, FDist};
use crate::error::{check_alpha, Error, Result};
use crate::measurement::{
    confidence_interval, estimator_apply, eta_threshold, null_f, summarize, ConfidenceInterval, Dataset, Layout,
};

/// Which null hypothesis is tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    /// `H_N = {mu0}` for a single normal sample.
    MeanEqualsMu0,
    /// All group means equal.
    OneWayEqualMeans,
    /// All factor-A main effects zero.
    TwoWayMainA,
    /// All factor-B main effects zero.
    TwoWayMainB,
    /// All interaction effects zero.
    TwoWayInteraction,
}

impl TestKind {
    pub const ALL: [TestKind; 5] = [
        TestKind::MeanEqualsMu0,
        TestKind::OneWayEqualMeans,
        TestKind::TwoWayMainA,
        TestKind::TwoWayMainB,
        TestKind::TwoWayInteraction,
    ];

    /// Short name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            TestKind::MeanEqualsMu0 => "t",
            TestKind::OneWayEqualMeans => "oneway",
            TestKind::TwoWayMainA => "twoway-a",
            TestKind::TwoWayMainB => "twoway-b",
            TestKind::TwoWayInteraction => "interaction",
        }
    }

    pub fn check_layout(self, layout: &Layout) -> Result<()> {
        let ok = matches!(
            (self, layout),
            (TestKind::MeanEqualsMu0, Layout::Single { .. })
                | (TestKind::OneWayEqualMeans, Layout::OneWay { .. })
                | (
                    TestKind::TwoWayMainA | TestKind::TwoWayMainB | TestKind::TwoWayInteraction,
                    Layout::TwoWay { .. }
                )
        );
        if ok {
            Ok(())
        } else {
            Err(Error::LayoutMismatch {
                test: self.name(),
                layout: layout.name(),
            })
        }
    }

    /// `(numerator, denominator)` degrees of freedom of the null F law.
    pub fn degrees_of_freedom(self, layout: &Layout) -> Result<(usize, usize)> {
        self.check_layout(layout)?;
        Ok(match (self, layout) {
            (_, Layout::Single { n }) => (1, n - 1),
            (_, Layout::OneWay { sizes }) => {
                let a = sizes.len();
                (a - 1, layout.total() - a)
            }
            (TestKind::TwoWayMainA, &Layout::TwoWay { a, b, n }) => (a - 1, a * b * (n - 1)),
            (TestKind::TwoWayMainB, &Layout::TwoWay { a, b, n }) => (b - 1, a * b * (n - 1)),
            (_, &Layout::TwoWay { a, b, n }) => ((a - 1) * (b - 1), a * b * (n - 1)),
        })
    }

    pub fn null_law(self, layout: &Layout) -> Result<FDist> {
        let (d1, d2) = self.degrees_of_freedom(layout)?;
        null_f(d1, d2)
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        TestKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown test '{s}' (expected t, oneway, twoway-a, twoway-b or interaction)"))
    }
}

/// A null hypothesis together with its significance level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestSpec {
    pub kind: TestKind,
    pub alpha: f64,
    /// Hypothesized mean; required by [`TestKind::MeanEqualsMu0`] only.
    pub mu0: Option<f64>,
}

impl TestSpec {
    pub fn new(kind: TestKind, alpha: f64, mu0: Option<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        match (kind, mu0) {
            (TestKind::MeanEqualsMu0, None) => return Err(Error::MissingMu0),
            (_, Some(m)) if !m.is_finite() => return Err(Error::Domain { what: "mu0", value: m }),
            _ => {}
        }
        Ok(Self { kind, alpha, mu0 })
    }
}

/// An F statistic with its degrees of freedom and the two sums of squares it divides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FStatistic {
    pub statistic: f64,
    pub df: (usize, usize),
    pub effect_ss: f64,
    pub residual_ss: f64,
}

/// Mean-square-ratio statistic of `spec.kind` on `x`.
pub fn f_statistic(spec: &TestSpec, x: &Dataset) -> Result<FStatistic> {
    let layout = x.layout();
    let df = spec.kind.degrees_of_freedom(layout)?;
    if spec.kind == TestKind::TwoWayMainB {
        let swapped = TestSpec {
            kind: TestKind::TwoWayMainA,
            ..spec.clone()
        };
        return f_statistic(&swapped, &x.transposed()?);
    }
    let s = summarize(x);
    s.require_nondegenerate()?;
    let effect_ss = match (spec.kind, layout) {
        (TestKind::MeanEqualsMu0, Layout::Single { n }) => {
            let mu0 = spec.mu0.ok_or(Error::MissingMu0)?;
            let dev = s.group_means[0] - mu0;
            *n as f64 * dev * dev
        }
        (TestKind::OneWayEqualMeans, Layout::OneWay { sizes }) => sizes
            .iter()
            .zip(&s.group_means)
            .map(|(&size, m)| size as f64 * (m - s.grand_mean).powi(2))
            .sum(),
        (TestKind::TwoWayMainA, &Layout::TwoWay { b, n, .. }) => {
            (b * n) as f64 * s.row_means.iter().map(|m| (m - s.grand_mean).powi(2)).sum::<f64>()
        }
        (TestKind::TwoWayInteraction, &Layout::TwoWay { n, .. }) => {
            let e = estimator_apply(x, spec.kind)?;
            n as f64 * e.iter().map(|v| v * v).sum::<f64>()
        }
        (kind, layout) => {
            return Err(Error::LayoutMismatch {
                test: kind.name(),
                layout: layout.name(),
            })
        }
    };
    let statistic = (effect_ss / df.0 as f64) / (s.residual_ss / df.1 as f64);
    Ok(FStatistic {
        statistic,
        df,
        effect_ss,
        residual_ss: s.residual_ss,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsRow {
    pub source: &'static str,
    pub ss: f64,
    pub df: usize,
}

/// Sums-of-squares decomposition. `rows` sum to `total`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsTable {
    pub rows: Vec<SsRow>,
    pub total: SsRow,
}

impl SsTable {
    pub fn row(&self, source: &str) -> Option<&SsRow> {
        self.rows.iter().find(|r| r.source == source)
    }
}

/// Decomposition of the total sum of squares about the grand mean (about
/// `mu0` for the single-sample test). Two-way tables always carry all four
/// rows.
pub fn ss_table(x: &Dataset, mu0: Option<f64>) -> Result<SsTable> {
    let s = summarize(x);
    let sq = |v: f64| v * v;
    let residual = |df| SsRow {
        source: "residual",
        ss: s.residual_ss,
        df,
    };
    Ok(match *x.layout() {
        Layout::Single { n } => {
            let mu0 = mu0.ok_or(Error::MissingMu0)?;
            SsTable {
                rows: vec![
                    SsRow {
                        source: "mean",
                        ss: n as f64 * sq(s.group_means[0] - mu0),
                        df: 1,
                    },
                    residual(n - 1),
                ],
                total: SsRow {
                    source: "total",
                    ss: x.values().iter().map(|&v| sq(v - mu0)).sum(),
                    df: n,
                },
            }
        }
        Layout::OneWay { ref sizes } => {
            let a = sizes.len();
            let n = x.layout().total();
            SsTable {
                rows: vec![
                    SsRow {
                        source: "between",
                        ss: sizes
                            .iter()
                            .zip(&s.group_means)
                            .map(|(&k, m)| k as f64 * sq(m - s.grand_mean))
                            .sum(),
                        df: a - 1,
                    },
                    SsRow {
                        source: "within",
                        ss: s.residual_ss,
                        df: n - a,
                    },
                ],
                total: SsRow {
                    source: "total",
                    ss: x.values().iter().map(|&v| sq(v - s.grand_mean)).sum(),
                    df: n - 1,
                },
            }
        }
        Layout::TwoWay { a, b, n } => {
            let g = s.grand_mean;
            let interaction = estimator_apply(x, TestKind::TwoWayInteraction)?;
            SsTable {
                rows: vec![
                    SsRow {
                        source: "factor_a",
                        ss: (b * n) as f64 * s.row_means.iter().map(|&m| sq(m - g)).sum::<f64>(),
                        df: a - 1,
                    },
                    SsRow {
                        source: "factor_b",
                        ss: (a * n) as f64 * s.col_means.iter().map(|&m| sq(m - g)).sum::<f64>(),
                        df: b - 1,
                    },
                    SsRow {
                        source: "interaction",
                        ss: n as f64 * interaction.iter().map(|&v| sq(v)).sum::<f64>(),
                        df: (a - 1) * (b - 1),
                    },
                    residual(a * b * (n - 1)),
                ],
                total: SsRow {
                    source: "total",
                    ss: x.values().iter().map(|&v| sq(v - g)).sum(),
                    df: a * b * n - 1,
                },
            }
        }
    })
}

/// Everything a test run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestReport {
    pub test: TestKind,
    pub alpha: f64,
    pub mu0: Option<f64>,
    pub statistic: f64,
    pub df: (usize, usize),
    pub alpha_point: f64,
    pub reject: bool,
    pub eta: f64,
    /// Upper-tail probability of the statistic under the null law. Not part
    /// of the rejection rule; reported for convenience.
    pub p_value: f64,
    /// The estimator value `E(x)`.
    pub estimate: Vec<f64>,
    pub ss_table: SsTable,
    pub confidence_interval: Option<ConfidenceInterval>,
}

pub fn run_test(spec: &TestSpec, x: &Dataset) -> Result<TestReport> {
    let layout = x.layout();
    spec.kind.check_layout(layout)?;
    let stat = f_statistic(spec, x)?;
    let eta = eta_threshold(spec.kind, layout, spec.alpha)?;
    let law = DistributionModel::F(spec.kind.null_law(layout)?);
    let confidence_interval = match spec.kind {
        TestKind::MeanEqualsMu0 => Some(confidence_interval(x, spec.alpha)?),
        _ => None,
    };
    Ok(TestReport {
        test: spec.kind,
        alpha: spec.alpha,
        mu0: spec.mu0,
        statistic: stat.statistic,
        df: stat.df,
        alpha_point: eta.alpha_point.value,
        reject: stat.statistic >= eta.alpha_point.value,
        eta: eta.value,
        p_value: law.upper_tail(stat.statistic)?,
        estimate: estimator_apply(x, spec.kind)?,
        ss_table: ss_table(x, spec.mu0)?,
        confidence_interval,
    })
}

/// Probability that the maximum-likelihood sigma of `n` normal draws is at
/// most `eta`: `P(chi2_{n-1} <= n eta^2 / sigma^2)`.
pub fn sigma_bar_cdf(n: usize, sigma: f64, eta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain {
            what: "n",
            value: n as f64,
        });
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain {
            what: "sigma",
            value: sigma,
        });
    }
    if eta.is_nan() || eta <= 0.0 {
        return Err(Error::Domain {
            what: "eta",
            value: eta,
        });
    }
    let law = ChiSquared::new((n - 1) as f64)?;
    let bound = n as f64 * eta * eta / (sigma * sigma);
    law.cdf(if bound.is_nan() { f64::INFINITY } else { bound })
}
