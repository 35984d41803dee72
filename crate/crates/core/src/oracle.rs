//! Independent verification of the distributional claims behind every test.
//!
//! Two routes, neither of which touches the incomplete-function tails used
//! by the tests themselves for its primary quantity:
//!
//! * seeded Monte-Carlo draws from the Gaussian model of a layout, pushed
//!   through the test statistic and compared with the claimed null law
//!   (empirical rejection rate and Kolmogorov-Smirnov distance);
//! * adaptive quadrature of densities, compared with the closed-form tails.
//!
//! Replicates are generated in fixed-size chunks. Chunk `c` draws from a
//! ChaCha8 stream keyed by `(seed, c)`, so results do not depend on the
//! number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::anova::{f_statistic, TestKind, TestSpec};
use crate::distributions::{ChiSquared, DistributionModel, Normal};
use crate::error::{check_alpha, Error, Result};
use crate::measurement::{quantity, Dataset, Layout, State};
use crate::quadrature::integrate_to_infinity;

/// Replicates per RNG stream.
pub const CHUNK_SIZE: usize = 4_096;
/// Smallest replicate count accepted for a simulation plan.
pub const MIN_REPLICATES: usize = 1_000;

const NULL_TOLERANCE: f64 = 1e-9;
const QUADRATURE_ABS_TOL: f64 = 1e-12;

/// What to simulate: a state, a layout, a statistic and the RNG setup.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimPlan {
    pub state: State,
    pub layout: Layout,
    pub replicates: usize,
    pub seed: u64,
    pub statistic: TestKind,
    /// Level at which the empirical rejection rate is measured.
    pub alpha: f64,
    /// Hypothesized mean for the single-sample test; defaults to the state's mean.
    pub mu0: Option<f64>,
}

impl SimPlan {
    pub fn new(state: State, layout: Layout, statistic: TestKind, replicates: usize, seed: u64) -> Self {
        Self {
            state,
            layout,
            replicates,
            seed,
            statistic,
            alpha: 0.05,
            mu0: None,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_mu0(mut self, mu0: f64) -> Self {
        self.mu0 = Some(mu0);
        self
    }

    fn test_spec(&self) -> Result<TestSpec> {
        let mu0 = match self.statistic {
            TestKind::MeanEqualsMu0 => Some(self.mu0.unwrap_or(self.state.means()[0])),
            _ => None,
        };
        TestSpec::new(self.statistic, self.alpha, mu0)
    }

    /// Fails unless the state lies in the null hypothesis of the statistic.
    pub fn check_null(&self) -> Result<()> {
        let spec = self.test_spec()?;
        let pi = quantity(&self.state, &self.layout, self.statistic)?;
        let scale = self.state.means().iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let target = crate::measurement::null_point(&spec, &self.layout)?;
        let worst = pi
            .iter()
            .zip(&target)
            .map(|(p, t)| (p - t).abs())
            .fold(0.0_f64, f64::max);
        if worst > NULL_TOLERANCE * scale {
            return Err(Error::NotUnderNull(format!(
                "{} effect of size {worst:e} at state means {:?}",
                self.statistic,
                self.state.means()
            )));
        }
        Ok(())
    }
}

/// Summary of a simulation against a target law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    /// Fraction of replicates at or beyond the alpha-point of the target law.
    pub empirical_tail: f64,
    pub ks_distance: f64,
    pub replicates: usize,
    pub target_law: DistributionModel,
    pub alpha: f64,
    pub alpha_point: f64,
}

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Runs `per_replicate` over `replicates` draws, chunk-parallel, in replicate order.
fn run_chunked<T, F>(replicates: usize, seed: u64, per_replicate: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    let chunks = replicates.div_ceil(CHUNK_SIZE);
    let parts: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let count = CHUNK_SIZE.min(replicates - c * CHUNK_SIZE);
            (0..count).map(|_| per_replicate(&mut rng)).collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Raw statistic values of every replicate, in replicate order.
pub fn simulate_statistics(plan: &SimPlan) -> Result<Vec<f64>> {
    if plan.replicates < MIN_REPLICATES {
        return Err(Error::Domain {
            what: "replicates",
            value: plan.replicates as f64,
        });
    }
    let spec = plan.test_spec()?;
    plan.statistic.check_layout(&plan.layout)?;
    plan.check_null()?;
    let sizes = plan.layout.group_sizes();
    let means = plan.state.means();
    let sigma = plan.state.sigma();
    run_chunked(plan.replicates, plan.seed, |rng| {
        let mut values = Vec::with_capacity(plan.layout.total());
        for (&mean, &size) in means.iter().zip(&sizes) {
            for _ in 0..size {
                let z: f64 = StandardNormal.sample(rng);
                values.push(mean + sigma * z);
            }
        }
        let x = Dataset::new(plan.layout.clone(), values)?;
        Ok(f_statistic(&spec, &x)?.statistic)
    })
}

fn summarize_against(mut sample: Vec<f64>, law: DistributionModel, alpha: f64) -> Result<SimResult> {
    check_alpha(alpha)?;
    let alpha_point = law.alpha_point(alpha)?.value;
    let beyond = sample.iter().filter(|&&s| s >= alpha_point).count();
    sample.sort_by(f64::total_cmp);
    Ok(SimResult {
        empirical_tail: beyond as f64 / sample.len() as f64,
        ks_distance: ks_distance_sorted(&sample, &law)?,
        replicates: sample.len(),
        target_law: law,
        alpha,
        alpha_point,
    })
}

/// Simulates the statistic under the plan's (null) state and compares it
/// with the F law the test claims.
pub fn simulate_statistic(plan: &SimPlan) -> Result<SimResult> {
    let sample = simulate_statistics(plan)?;
    let law = DistributionModel::F(plan.statistic.null_law(&plan.layout)?);
    summarize_against(sample, law, plan.alpha)
}

fn ks_distance_sorted(sorted: &[f64], law: &DistributionModel) -> Result<f64> {
    let n = sorted.len() as f64;
    let mut d = 0.0_f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = law.cdf(x)?;
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// One-sample Kolmogorov-Smirnov distance against an exact CDF.
pub fn ks_distance(sample: &[f64], law: &DistributionModel) -> Result<f64> {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_distance_sorted(&sorted, law)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Tail mass `[x, inf)` by adaptive quadrature of the density.
pub fn quadrature_tail(law: &DistributionModel, x: f64) -> Result<f64> {
    if x.is_nan() || x < law.support_start() {
        return Err(Error::Domain { what: "x", value: x });
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    let pdf = |t: f64| law.pdf(t).unwrap_or(f64::NAN);
    Ok(integrate_to_infinity(pdf, x, QUADRATURE_ABS_TOL, 0.0)?.value)
}

/// Checks of the laws of the sample mean and of the maximum-likelihood sigma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImageCheck {
    /// `mu_bar` against `N(mu, sigma^2 / n)`.
    pub mean_law: SimResult,
    /// `n sigma_bar^2 / sigma^2` against `chi2(n - 1)`; absent for `n = 1`.
    pub spread_law: Option<SimResult>,
    /// Average of the simulated `mu_bar`.
    pub mean_of_mu_bar: f64,
    /// Sample correlation of `mu_bar` and `sigma_bar^2`; absent for `n = 1`.
    pub correlation: Option<f64>,
}

pub fn mean_image_check(n: usize, mu: f64, sigma: f64, seed: u64, replicates: usize) -> Result<ImageCheck> {
    if n == 0 {
        return Err(Error::Domain { what: "n", value: 0.0 });
    }
    if replicates < MIN_REPLICATES {
        return Err(Error::Domain {
            what: "replicates",
            value: replicates as f64,
        });
    }
    let mean_law = DistributionModel::Normal(Normal::new(mu, sigma / (n as f64).sqrt())?);
    let draws: Vec<(f64, f64)> = run_chunked(replicates, seed, |rng| {
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(rng);
                mu + sigma * z
            })
            .collect();
        let m = xs.iter().sum::<f64>() / n as f64;
        let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
        Ok((m, ss / (sigma * sigma)))
    })?;
    let mu_bars: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let spreads: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let mean_of_mu_bar = mu_bars.iter().sum::<f64>() / replicates as f64;

    let (spread_law, correlation) = if n >= 2 {
        let law = DistributionModel::ChiSquared(ChiSquared::new((n - 1) as f64)?);
        // sigma_bar^2 is a fixed multiple of the spread, so it has the same correlation.
        let corr = pearson(&mu_bars, &spreads);
        (Some(summarize_against(spreads, law, 0.05)?), Some(corr))
    } else {
        (None, None)
    };
    Ok(ImageCheck {
        mean_law: summarize_against(mu_bars, mean_law, 0.05)?,
        spread_law,
        mean_of_mu_bar,
        correlation,
    })
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}
