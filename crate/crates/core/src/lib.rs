//! Hypothesis tests for Gaussian means (single sample, one-way and two-way
//! layouts) expressed through an estimator, a semi-distance on parameter
//! space and a rejection threshold `eta`, plus an independent oracle that
//! checks the claimed null laws by simulation and quadrature.
//!
//! ```
//! use anova_core::{run_test, Dataset, TestKind, TestSpec};
//!
//! let x = Dataset::single(vec![1.0, 2.0, 3.0]).unwrap();
//! let spec = TestSpec::new(TestKind::MeanEqualsMu0, 0.05, Some(100.0)).unwrap();
//! assert!(run_test(&spec, &x).unwrap().reject);
//! ```

pub mod anova;
pub mod distributions;
pub mod error;
pub mod measurement;
pub mod oracle;
pub mod quadrature;
pub mod report;
pub mod special;

pub use anova::{
    f_statistic, run_test, sigma_bar_cdf, ss_table, FStatistic, SsRow, SsTable, TestKind, TestReport, TestSpec,
};
pub use distributions::{
    alpha_point, upper_tail, AlphaPoint, ChiSquared, DistributionModel, FDist, Normal, StudentT, ALPHA_POINT_TOLERANCE,
};
pub use error::{Error, Result};
pub use measurement::{
    confidence_interval, estimator_apply, eta_threshold, null_point, quantity, rejection_region, semi_distance,
    summarize, ConfidenceInterval, Dataset, EtaThreshold, Layout, RejectionRegion, SemiDistance, State, SummaryStats,
};
pub use oracle::{
    ks_distance, ks_two_sample, mean_image_check, quadrature_tail, simulate_statistic, simulate_statistics, ImageCheck,
    SimPlan, SimResult,
};
pub use report::{round_sig, SimDocument, TestDocument};
