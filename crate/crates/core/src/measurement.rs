//! Measurement layer: states of the Gaussian model, datasets drawn from it,
//! estimators into the parameter space, data-dependent semi-distances, the
//! threshold eta, and the rejection regions and confidence intervals built
//! from them.
//!
//! A test is always phrased the same way. An estimator `E` maps a dataset
//! `x` to a point of the parameter space, a quantity maps a state to the
//! same space, and the semi-distance between the two is a (weighted) contrast
//! norm divided by the square root of the residual sum of squares `SS(x)`.
//! `eta` is the smallest radius whose complement has null mass at most
//! `alpha`; a dataset is rejected when its estimate lies at semi-distance
//! `>= eta` from every state in the null hypothesis.
//!
//! Parameter-space norms are weighted by the number of observations behind
//! each coordinate: `n_i` for one-way, `b n` / `a n` for the two-way main
//! effects and `n` for the interaction cells. With these weights every
//! threshold lands exactly on an F alpha-point.

use serde::Serialize;

use crate::anova::{f_statistic, TestKind, TestSpec};
use crate::distributions::{AlphaPoint, DistributionModel, FDist};
use crate::error::{check_alpha, Error, Result};

/// Shape of a dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Layout {
    /// One sample of size `n`.
    Single { n: usize },
    /// `a = sizes.len()` groups with sizes `n_i`.
    OneWay { sizes: Vec<usize> },
    /// Balanced `a x b` design with `n` replicates per cell.
    TwoWay { a: usize, b: usize, n: usize },
}

impl Layout {
    pub fn single(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLayout(format!("single sample needs n >= 2, got {n}")));
        }
        Ok(Layout::Single { n })
    }

    pub fn one_way(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::InvalidLayout(format!(
                "one-way layout needs at least 2 groups, got {}",
                sizes.len()
            )));
        }
        if let Some(index) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::EmptyGroup { index });
        }
        if let Some((i, s)) = sizes.iter().enumerate().find(|(_, &s)| s < 2) {
            return Err(Error::InvalidLayout(format!(
                "group {i} has {s} observation(s); need >= 2"
            )));
        }
        Ok(Layout::OneWay { sizes })
    }

    pub fn two_way(a: usize, b: usize, n: usize) -> Result<Self> {
        if a < 2 || b < 2 {
            return Err(Error::InvalidLayout(format!(
                "two-way layout needs a, b >= 2, got {a} x {b}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidLayout(format!(
                "two-way layout needs n >= 2 per cell, got {n}"
            )));
        }
        Ok(Layout::TwoWay { a, b, n })
    }

    /// Total number of observations.
    pub fn total(&self) -> usize {
        match self {
            Layout::Single { n } => *n,
            Layout::OneWay { sizes } => sizes.iter().sum(),
            Layout::TwoWay { a, b, n } => a * b * n,
        }
    }

    /// Number of mean parameters in a state: 1, `a`, or `a b`.
    pub fn mean_count(&self) -> usize {
        match self {
            Layout::Single { .. } => 1,
            Layout::OneWay { sizes } => sizes.len(),
            Layout::TwoWay { a, b, .. } => a * b,
        }
    }

    /// Sizes of the groups (one-way) or cells (two-way, row-major).
    pub fn group_sizes(&self) -> Vec<usize> {
        match self {
            Layout::Single { n } => vec![*n],
            Layout::OneWay { sizes } => sizes.clone(),
            Layout::TwoWay { a, b, n } => vec![*n; a * b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Layout::Single { .. } => "single",
            Layout::OneWay { .. } => "one-way",
            Layout::TwoWay { .. } => "two-way",
        }
    }
}

/// A point of the state space: group (or cell) means and the common sigma.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct State {
    means: Vec<f64>,
    sigma: f64,
}

impl State {
    pub fn new(means: Vec<f64>, sigma: f64, layout: &Layout) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::Domain {
                what: "sigma",
                value: sigma,
            });
        }
        if means.len() != layout.mean_count() {
            return Err(Error::Dimension {
                expected: layout.mean_count(),
                got: means.len(),
            });
        }
        if let Some(index) = means.iter().position(|m| !m.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { means, sigma })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Observations stored flat: one-way groups back to back, two-way cells
/// row-major in `(i, j, k)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    layout: Layout,
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(layout: Layout, values: Vec<f64>) -> Result<Self> {
        if values.len() != layout.total() {
            return Err(Error::Dimension {
                expected: layout.total(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { layout, values })
    }

    pub fn single(values: Vec<f64>) -> Result<Self> {
        Self::new(Layout::single(values.len())?, values)
    }

    pub fn one_way<G: AsRef<[f64]>>(groups: &[G]) -> Result<Self> {
        let layout = Layout::one_way(groups.iter().map(|g| g.as_ref().len()).collect())?;
        let values = groups.iter().flat_map(|g| g.as_ref().iter().copied()).collect();
        Self::new(layout, values)
    }

    /// `cells[i][j]` holds the replicates of cell `(i, j)`.
    pub fn two_way(cells: &[Vec<Vec<f64>>]) -> Result<Self> {
        let a = cells.len();
        let b = cells.first().map_or(0, Vec::len);
        if cells.iter().any(|row| row.len() != b) {
            return Err(Error::InvalidLayout("rows have different numbers of columns".into()));
        }
        let n = cells.first().and_then(|r| r.first()).map_or(0, Vec::len);
        for (idx, cell) in cells.iter().flatten().enumerate() {
            if cell.is_empty() {
                return Err(Error::EmptyGroup { index: idx });
            }
            if cell.len() != n {
                return Err(Error::InvalidLayout(format!(
                    "unbalanced design: cell {idx} has {} observations, expected {n}",
                    cell.len()
                )));
            }
        }
        let layout = Layout::two_way(a, b, n)?;
        let values = cells.iter().flatten().flatten().copied().collect();
        Self::new(layout, values)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Groups (one-way), cells (two-way, row-major) or the whole sample.
    pub fn groups(&self) -> Vec<&[f64]> {
        let mut out = Vec::with_capacity(self.layout.mean_count());
        let mut rest = self.values.as_slice();
        for size in self.layout.group_sizes() {
            let (head, tail) = rest.split_at(size);
            out.push(head);
            rest = tail;
        }
        out
    }

    /// Swaps the roles of the two factors of a two-way dataset.
    pub fn transposed(&self) -> Result<Self> {
        let Layout::TwoWay { a, b, n } = self.layout else {
            return Err(Error::LayoutMismatch {
                test: "transpose",
                layout: self.layout.name(),
            });
        };
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..b {
            for i in 0..a {
                let start = (i * b + j) * n;
                values.extend_from_slice(&self.values[start..start + n]);
            }
        }
        Ok(Self {
            layout: Layout::TwoWay { a: b, b: a, n },
            values,
        })
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample means and residual sum of squares of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub n_total: usize,
    pub grand_mean: f64,
    /// Residual sum of squares about the group/cell means.
    pub residual_ss: f64,
    /// The sample mean (single), group means (one-way) or cell means (two-way, row-major).
    pub group_means: Vec<f64>,
    /// Two-way row (factor A) marginal means; empty otherwise.
    pub row_means: Vec<f64>,
    /// Two-way column (factor B) marginal means; empty otherwise.
    pub col_means: Vec<f64>,
}

impl SummaryStats {
    /// Maximum-likelihood sigma, `sqrt(SS / n)`.
    pub fn sigma_bar(&self) -> f64 {
        (self.residual_ss / self.n_total as f64).sqrt()
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.residual_ss > 0.0 {
            Ok(())
        } else {
            Err(Error::Degenerate)
        }
    }
}

pub fn summarize(x: &Dataset) -> SummaryStats {
    let groups = x.groups();
    let group_means: Vec<f64> = groups.iter().map(|g| mean(g)).collect();
    let residual_ss = groups
        .iter()
        .zip(&group_means)
        .map(|(g, &m)| {
            // A constant group contributes exactly zero.
            if g.iter().all(|&v| v == g[0]) {
                0.0
            } else {
                g.iter().map(|&v| (v - m) * (v - m)).sum()
            }
        })
        .sum();

    let (row_means, col_means) = match x.layout {
        Layout::TwoWay { a, b, .. } => {
            let rows = (0..a).map(|i| mean(&group_means[i * b..(i + 1) * b])).collect();
            let cols = (0..b)
                .map(|j| (0..a).map(|i| group_means[i * b + j]).sum::<f64>() / a as f64)
                .collect();
            (rows, cols)
        }
        _ => (Vec::new(), Vec::new()),
    };

    SummaryStats {
        n_total: x.values.len(),
        grand_mean: mean(&x.values),
        residual_ss,
        group_means,
        row_means,
        col_means,
    }
}

fn mismatch(kind: TestKind, layout: &Layout) -> Error {
    Error::LayoutMismatch {
        test: kind.name(),
        layout: layout.name(),
    }
}

/// The estimator `E(x)` of `kind`, a point of the parameter space.
pub fn estimator_apply(x: &Dataset, kind: TestKind) -> Result<Vec<f64>> {
    kind.check_layout(&x.layout)?;
    let s = summarize(x);
    let g = s.grand_mean;
    Ok(match (kind, &x.layout) {
        (TestKind::MeanEqualsMu0, _) => vec![s.group_means[0]],
        (TestKind::OneWayEqualMeans, _) => s.group_means.iter().map(|m| m - g).collect(),
        (TestKind::TwoWayMainA, _) => s.row_means.iter().map(|m| m - g).collect(),
        (TestKind::TwoWayMainB, _) => s.col_means.iter().map(|m| m - g).collect(),
        (TestKind::TwoWayInteraction, &Layout::TwoWay { a, b, .. }) => {
            interaction_contrasts(&s.group_means, &s.row_means, &s.col_means, g, a, b)
        }
        (kind, layout) => return Err(mismatch(kind, layout)),
    })
}

fn interaction_contrasts(cells: &[f64], rows: &[f64], cols: &[f64], grand: f64, a: usize, b: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            out.push(cells[i * b + j] - rows[i] - cols[j] + grand);
        }
    }
    out
}

/// The quantity `pi(omega)`: what the null hypothesis of `kind` constrains.
pub fn quantity(state: &State, layout: &Layout, kind: TestKind) -> Result<Vec<f64>> {
    kind.check_layout(layout)?;
    let mu = state.means();
    if mu.len() != layout.mean_count() {
        return Err(Error::Dimension {
            expected: layout.mean_count(),
            got: mu.len(),
        });
    }
    let grand = mean(mu);
    Ok(match (kind, layout) {
        (TestKind::MeanEqualsMu0, _) => vec![mu[0]],
        (TestKind::OneWayEqualMeans, _) => mu.iter().map(|m| m - grand).collect(),
        (_, &Layout::TwoWay { a, b, .. }) => {
            let rows: Vec<f64> = (0..a).map(|i| mean(&mu[i * b..(i + 1) * b])).collect();
            let cols: Vec<f64> = (0..b)
                .map(|j| (0..a).map(|i| mu[i * b + j]).sum::<f64>() / a as f64)
                .collect();
            match kind {
                TestKind::TwoWayMainA => rows.iter().map(|m| m - grand).collect(),
                TestKind::TwoWayMainB => cols.iter().map(|m| m - grand).collect(),
                _ => interaction_contrasts(mu, &rows, &cols, grand, a, b),
            }
        }
        (kind, layout) => return Err(mismatch(kind, layout)),
    })
}

/// The single point of the parameter space making up the null hypothesis.
pub fn null_point(spec: &TestSpec, layout: &Layout) -> Result<Vec<f64>> {
    spec.kind.check_layout(layout)?;
    Ok(match spec.kind {
        TestKind::MeanEqualsMu0 => vec![spec.mu0.ok_or(Error::MissingMu0)?],
        kind => vec![0.0; parameter_dimension(kind, layout)],
    })
}

fn parameter_dimension(kind: TestKind, layout: &Layout) -> usize {
    match (kind, layout) {
        (TestKind::TwoWayMainA, Layout::TwoWay { a, .. }) => *a,
        (TestKind::TwoWayMainB, Layout::TwoWay { b, .. }) => *b,
        _ => layout.mean_count(),
    }
}

/// Norm weights on the parameter space of `kind`.
fn norm_weights(kind: TestKind, layout: &Layout) -> Vec<f64> {
    match (kind, layout) {
        (TestKind::MeanEqualsMu0, _) => vec![1.0],
        (TestKind::OneWayEqualMeans, Layout::OneWay { sizes }) => sizes.iter().map(|&s| s as f64).collect(),
        (TestKind::TwoWayMainA, &Layout::TwoWay { a, b, n }) => vec![(b * n) as f64; a],
        (TestKind::TwoWayMainB, &Layout::TwoWay { a, b, n }) => vec![(a * n) as f64; b],
        (TestKind::TwoWayInteraction, &Layout::TwoWay { a, b, n }) => vec![n as f64; a * b],
        _ => Vec::new(),
    }
}

/// `statistic = scale * d^2`, where `d` is the semi-distance to the null point.
pub(crate) fn statistic_scale(kind: TestKind, layout: &Layout) -> Result<f64> {
    if let (TestKind::MeanEqualsMu0, Layout::Single { n }) = (kind, layout) {
        let n = *n as f64;
        return Ok(n * (n - 1.0));
    }
    let (d1, d2) = kind.degrees_of_freedom(layout)?;
    Ok(d2 as f64 / d1 as f64)
}

/// Data-dependent semi-distance `d^x(t1, t2) = ||t1 - t2|| / sqrt(SS(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiDistance {
    weights: Vec<f64>,
    root_ss: f64,
}

impl SemiDistance {
    pub fn for_test(kind: TestKind, x: &Dataset) -> Result<Self> {
        kind.check_layout(&x.layout)?;
        let s = summarize(x);
        s.require_nondegenerate()?;
        Ok(Self {
            weights: norm_weights(kind, &x.layout),
            root_ss: s.residual_ss.sqrt(),
        })
    }

    pub fn evaluate(&self, theta1: &[f64], theta2: &[f64]) -> Result<f64> {
        for theta in [theta1, theta2] {
            if theta.len() != self.weights.len() {
                return Err(Error::Dimension {
                    expected: self.weights.len(),
                    got: theta.len(),
                });
            }
        }
        let sq: f64 = self
            .weights
            .iter()
            .zip(theta1.iter().zip(theta2))
            .map(|(w, (p, q))| w * (p - q) * (p - q))
            .sum();
        Ok(sq.sqrt() / self.root_ss)
    }
}

pub fn semi_distance(kind: TestKind, x: &Dataset, theta1: &[f64], theta2: &[f64]) -> Result<f64> {
    SemiDistance::for_test(kind, x)?.evaluate(theta1, theta2)
}

/// The threshold eta at level alpha, with the F alpha-point it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaThreshold {
    pub value: f64,
    pub alpha: f64,
    pub alpha_point: AlphaPoint,
}

/// `eta^2 = F_alpha / scale`, so that `d >= eta` is exactly `statistic >= F_alpha`.
///
/// For the mean test this is `F(1, n-1)_alpha / (n (n-1))`; for the F tests
/// it is `F(d1, d2)_alpha * d1 / d2`.
pub fn eta_threshold(kind: TestKind, layout: &Layout, alpha: f64) -> Result<EtaThreshold> {
    check_alpha(alpha)?;
    let law = kind.null_law(layout)?;
    let alpha_point = DistributionModel::F(law).alpha_point(alpha)?;
    let scale = statistic_scale(kind, layout)?;
    Ok(EtaThreshold {
        value: (alpha_point.value / scale).sqrt(),
        alpha,
        alpha_point,
    })
}

/// Null law of the statistic as an F distribution.
pub(crate) fn null_f(d1: usize, d2: usize) -> Result<FDist> {
    FDist::new(d1 as f64, d2 as f64)
}

/// Alpha-rejection region of a null hypothesis for one layout.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionRegion {
    spec: TestSpec,
    layout: Layout,
    null_point: Vec<f64>,
    eta: EtaThreshold,
}

impl RejectionRegion {
    pub fn eta(&self) -> &EtaThreshold {
        &self.eta
    }

    pub fn alpha_point(&self) -> &AlphaPoint {
        &self.eta.alpha_point
    }

    pub fn null_point(&self) -> &[f64] {
        &self.null_point
    }

    fn check(&self, x: &Dataset) -> Result<()> {
        if x.layout != self.layout {
            return Err(Error::InvalidLayout(format!(
                "dataset layout {:?} differs from region layout {:?}",
                x.layout, self.layout
            )));
        }
        Ok(())
    }

    /// Closed form: the F statistic is at least the alpha-point.
    pub fn contains(&self, x: &Dataset) -> Result<bool> {
        self.check(x)?;
        Ok(f_statistic(&self.spec, x)?.statistic >= self.eta.alpha_point.value)
    }

    /// Defining form: the estimate is at semi-distance `>= eta` from the null point.
    pub fn contains_by_semi_distance(&self, x: &Dataset) -> Result<bool> {
        self.check(x)?;
        let estimate = estimator_apply(x, self.spec.kind)?;
        let d = semi_distance(self.spec.kind, x, &estimate, &self.null_point)?;
        Ok(d >= self.eta.value)
    }
}

pub fn rejection_region(spec: &TestSpec, layout: &Layout) -> Result<RejectionRegion> {
    let null_point = null_point(spec, layout)?;
    let eta = eta_threshold(spec.kind, layout, spec.alpha)?;
    Ok(RejectionRegion {
        spec: spec.clone(),
        layout: layout.clone(),
        null_point,
        eta,
    })
}

/// Confidence interval for the mean of a single sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    /// Open interval: a mean on the boundary is rejected.
    pub fn contains(&self, mu: f64) -> bool {
        self.lower < mu && mu < self.upper
    }
}

/// `mu_bar +- sigma_bar sqrt(F(1, n-1)_alpha / (n - 1))`, the set of means
/// that the mean test does not reject at level `alpha`.
pub fn confidence_interval(x: &Dataset, alpha: f64) -> Result<ConfidenceInterval> {
    check_alpha(alpha)?;
    let Layout::Single { n } = x.layout else {
        return Err(mismatch(TestKind::MeanEqualsMu0, &x.layout));
    };
    let s = summarize(x);
    s.require_nondegenerate()?;
    let law = null_f(1, n - 1)?;
    let f_alpha = DistributionModel::F(law).alpha_point(alpha)?.value;
    let half_width = s.sigma_bar() * (f_alpha / (n - 1) as f64).sqrt();
    let center = s.group_means[0];
    Ok(ConfidenceInterval {
        lower: center - half_width,
        upper: center + half_width,
        level: 1.0 - alpha,
    })
}
