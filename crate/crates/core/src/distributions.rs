//! Densities, tail probabilities and upper-tail quantiles (alpha-points) for
//! the chi-squared, F, Student-t and normal families.
//!
//! Tails are evaluated through the regularized incomplete gamma/beta
//! functions in [`crate::special`]. Quantiles are found by bracketing and a
//! bisection-safeguarded Newton iteration on the upper tail.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{check_alpha, Error, Result};
use crate::special::{beta_inc, erfc, gamma_inc, ln_beta, ln_gamma};

/// Maximum allowed `|upper_tail(alpha_point) - alpha|`.
pub const ALPHA_POINT_TOLERANCE: f64 = 1e-10;

const MAX_BRACKET_STEPS: usize = 2_000;
const MAX_REFINE_STEPS: usize = 500;
const REL_WIDTH: f64 = 1e-12;

fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

fn nonnegative(x: f64) -> Result<()> {
    if x >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what: "x", value: x })
    }
}

/// Chi-squared law with `df` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquared {
    df: f64,
}

impl ChiSquared {
    pub fn new(df: f64) -> Result<Self> {
        Ok(Self {
            df: positive("df", df)?,
        })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    /// `x^{k/2-1} e^{-x/2} / (2^{k/2} Gamma(k/2))`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        nonnegative(x)?;
        let k = self.df;
        if x == 0.0 {
            return if k < 2.0 {
                Err(Error::Pole { x })
            } else if k == 2.0 {
                Ok(0.5)
            } else {
                Ok(0.0)
            };
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        let half = 0.5 * k;
        Ok(((half - 1.0) * x.ln() - 0.5 * x - half * std::f64::consts::LN_2 - ln_gamma(half)).exp())
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        nonnegative(x)?;
        Ok(gamma_inc(0.5 * self.df, 0.5 * x)?.0)
    }

    pub fn upper_tail(&self, x: f64) -> Result<f64> {
        nonnegative(x)?;
        Ok(gamma_inc(0.5 * self.df, 0.5 * x)?.1)
    }
}

/// Fisher-Snedecor F law with `(d1, d2)` = (numerator, denominator) degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FDist {
    d1: f64,
    d2: f64,
}

impl FDist {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        Ok(Self {
            d1: positive("d1", d1)?,
            d2: positive("d2", d2)?,
        })
    }

    pub fn d1(&self) -> f64 {
        self.d1
    }

    pub fn d2(&self) -> f64 {
        self.d2
    }

    /// `(1/B(d1/2, d2/2)) (d1/d2)^{d1/2} t^{(d1-2)/2} / (1 + d1 t/d2)^{(d1+d2)/2}`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        nonnegative(t)?;
        let (d1, d2) = (self.d1, self.d2);
        if t == 0.0 {
            if d1 < 2.0 {
                return Err(Error::Pole { x: t });
            } else if d1 > 2.0 {
                return Ok(0.0);
            }
        }
        if t.is_infinite() {
            return Ok(0.0);
        }
        let power = if d1 == 2.0 { 0.0 } else { 0.5 * (d1 - 2.0) * t.ln() };
        let log_pdf =
            -ln_beta(0.5 * d1, 0.5 * d2) + 0.5 * d1 * (d1 / d2).ln() + power - 0.5 * (d1 + d2) * (d1 * t / d2).ln_1p();
        Ok(log_pdf.exp())
    }

    // Tail = I_w(d2/2, d1/2) with w = d2 / (d2 + d1 t), evaluated without cancellation.
    fn tails(&self, t: f64) -> Result<(f64, f64)> {
        nonnegative(t)?;
        if t.is_infinite() {
            return Ok((1.0, 0.0));
        }
        let w = self.d2 / (self.d2 + self.d1 * t);
        let (upper, lower) = beta_inc(0.5 * self.d2, 0.5 * self.d1, w)?;
        Ok((lower, upper))
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(self.tails(t)?.0)
    }

    pub fn upper_tail(&self, t: f64) -> Result<f64> {
        Ok(self.tails(t)?.1)
    }
}

/// Student's t law with `df` degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudentT {
    df: f64,
}

impl StudentT {
    pub fn new(df: f64) -> Result<Self> {
        Ok(Self {
            df: positive("df", df)?,
        })
    }

    pub fn df(&self) -> f64 {
        self.df
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain { what: "x", value: x });
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        let k = self.df;
        let log_pdf =
            ln_gamma(0.5 * (k + 1.0)) - ln_gamma(0.5 * k) - 0.5 * (k * PI).ln() - 0.5 * (k + 1.0) * (x * x / k).ln_1p();
        Ok(log_pdf.exp())
    }

    fn tails(&self, x: f64) -> Result<(f64, f64)> {
        if x.is_nan() {
            return Err(Error::Domain { what: "x", value: x });
        }
        if x.is_infinite() {
            return Ok(if x > 0.0 { (1.0, 0.0) } else { (0.0, 1.0) });
        }
        let k = self.df;
        // One-sided mass beyond |x|.
        let beyond = 0.5 * beta_inc(0.5 * k, 0.5, k / (k + x * x))?.0;
        if x >= 0.0 {
            Ok((1.0 - beyond, beyond))
        } else {
            Ok((beyond, 1.0 - beyond))
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.tails(x)?.0)
    }

    pub fn upper_tail(&self, x: f64) -> Result<f64> {
        Ok(self.tails(x)?.1)
    }

    /// The point `c > 0` with `P(|T| >= c) = alpha`.
    pub fn two_sided_alpha_point(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(DistributionModel::StudentT(*self).alpha_point(0.5 * alpha)?.value)
    }
}

/// Normal law `N(mean, sd^2)`; used for the law of the sample mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normal {
    mean: f64,
    sd: f64,
}

impl Normal {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::Domain {
                what: "mean",
                value: mean,
            });
        }
        Ok(Self {
            mean,
            sd: positive("sd", sd)?,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain { what: "x", value: x });
        }
        let z = (x - self.mean) / self.sd;
        Ok((-0.5 * z * z).exp() / (self.sd * (2.0 * PI).sqrt()))
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.upper_tail(2.0 * self.mean - x)
    }

    pub fn upper_tail(&self, x: f64) -> Result<f64> {
        if x.is_nan() {
            return Err(Error::Domain { what: "x", value: x });
        }
        Ok(0.5 * erfc((x - self.mean) / (self.sd * std::f64::consts::SQRT_2)))
    }
}

/// One of the reference laws used by the tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family")]
pub enum DistributionModel {
    ChiSquared(ChiSquared),
    F(FDist),
    StudentT(StudentT),
    Normal(Normal),
}

impl From<ChiSquared> for DistributionModel {
    fn from(d: ChiSquared) -> Self {
        Self::ChiSquared(d)
    }
}

impl From<FDist> for DistributionModel {
    fn from(d: FDist) -> Self {
        Self::F(d)
    }
}

impl From<StudentT> for DistributionModel {
    fn from(d: StudentT) -> Self {
        Self::StudentT(d)
    }
}

impl From<Normal> for DistributionModel {
    fn from(d: Normal) -> Self {
        Self::Normal(d)
    }
}

impl fmt::Display for DistributionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ChiSquared(d) => write!(f, "chi2({})", d.df),
            Self::F(d) => write!(f, "F({}, {})", d.d1, d.d2),
            Self::StudentT(d) => write!(f, "t({})", d.df),
            Self::Normal(d) => write!(f, "N({}, {}^2)", d.mean, d.sd),
        }
    }
}

impl DistributionModel {
    pub fn pdf(&self, x: f64) -> Result<f64> {
        match self {
            Self::ChiSquared(d) => d.pdf(x),
            Self::F(d) => d.pdf(x),
            Self::StudentT(d) => d.pdf(x),
            Self::Normal(d) => d.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self {
            Self::ChiSquared(d) => d.cdf(x),
            Self::F(d) => d.cdf(x),
            Self::StudentT(d) => d.cdf(x),
            Self::Normal(d) => d.cdf(x),
        }
    }

    /// Mass of `[x, +inf)`. Nonincreasing in `x`.
    pub fn upper_tail(&self, x: f64) -> Result<f64> {
        match self {
            Self::ChiSquared(d) => d.upper_tail(x),
            Self::F(d) => d.upper_tail(x),
            Self::StudentT(d) => d.upper_tail(x),
            Self::Normal(d) => d.upper_tail(x),
        }
    }

    /// Lower end of the support; `-inf` for the real-line families.
    pub fn support_start(&self) -> f64 {
        match self {
            Self::ChiSquared(_) | Self::F(_) => 0.0,
            Self::StudentT(_) | Self::Normal(_) => f64::NEG_INFINITY,
        }
    }

    fn center_and_scale(&self) -> (f64, f64) {
        match self {
            Self::Normal(d) => (d.mean, d.sd),
            _ => (0.0, 1.0),
        }
    }

    /// Upper-tail quantile: the `x` with `upper_tail(x) = alpha`.
    pub fn alpha_point(&self, alpha: f64) -> Result<AlphaPoint> {
        check_alpha(alpha)?;
        let tail = |x: f64| self.upper_tail(x);
        let (mut lo, mut hi) = self.bracket(alpha)?;

        let mut x = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
        let mut converged = false;
        for _ in 0..MAX_REFINE_STEPS {
            let excess = tail(x)? - alpha;
            if excess == 0.0 {
                converged = true;
                break;
            }
            if excess > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let scale = x.abs().max(1.0);
            if hi - lo <= REL_WIDTH * scale {
                converged = true;
                break;
            }
            // d(tail)/dx = -pdf, so the Newton step is x + excess / pdf.
            let newton = match self.pdf(x) {
                Ok(density) if density > 0.0 => x + excess / density,
                _ => f64::NAN,
            };
            let next = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 1e-15 * scale {
                x = next;
                converged = true;
                break;
            }
            x = next;
        }

        let residual = (tail(x)? - alpha).abs();
        if !converged || residual > ALPHA_POINT_TOLERANCE {
            return Err(Error::Convergence {
                routine: "alpha_point",
                lo,
                hi,
                iterations: MAX_REFINE_STEPS,
            });
        }
        Ok(AlphaPoint {
            value: x,
            alpha,
            dist: *self,
        })
    }

    // Geometric expansion until upper_tail(lo) >= alpha >= upper_tail(hi).
    fn bracket(&self, alpha: f64) -> Result<(f64, f64)> {
        let (center, scale) = self.center_and_scale();
        let expand_fail = |lo, hi| Error::Convergence {
            routine: "alpha_point bracket",
            lo,
            hi,
            iterations: MAX_BRACKET_STEPS,
        };
        let mut step = scale;
        let mut lo = if self.support_start() == 0.0 {
            0.0
        } else {
            center - step
        };
        let mut hi = center + step;
        let mut steps = 0;
        while self.upper_tail(hi)? > alpha {
            lo = hi;
            step *= 2.0;
            hi = center + step;
            steps += 1;
            if steps > MAX_BRACKET_STEPS || !hi.is_finite() {
                return Err(expand_fail(lo, hi));
            }
        }
        if self.support_start() != 0.0 {
            let mut down = scale;
            while self.upper_tail(lo)? < alpha {
                hi = lo;
                down *= 2.0;
                lo = center - down;
                steps += 1;
                if steps > MAX_BRACKET_STEPS || !lo.is_finite() {
                    return Err(expand_fail(lo, hi));
                }
            }
        }
        Ok((lo, hi))
    }
}

/// An upper-tail quantile together with its level and law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaPoint {
    pub value: f64,
    pub alpha: f64,
    pub dist: DistributionModel,
}

pub fn upper_tail(dist: &DistributionModel, x: f64) -> Result<f64> {
    dist.upper_tail(x)
}

pub fn alpha_point(dist: &DistributionModel, alpha: f64) -> Result<AlphaPoint> {
    dist.alpha_point(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_to_infinity};

    fn f(d1: f64, d2: f64) -> DistributionModel {
        FDist::new(d1, d2).unwrap().into()
    }

    #[test]
    fn chi2_pdf_examples() {
        let two = ChiSquared::new(2.0).unwrap();
        assert_eq!(two.pdf(0.0).unwrap(), 0.5);
        let one = ChiSquared::new(1.0).unwrap();
        let expected = (-0.5f64).exp() / (2.0 * PI).sqrt();
        assert!((one.pdf(1.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.241_970_7).abs() < 1e-7);
        assert!(matches!(one.pdf(0.0), Err(Error::Pole { .. })));
        assert!(matches!(two.pdf(-1.0), Err(Error::Domain { .. })));
        assert!(ChiSquared::new(0.0).is_err());
    }

    #[test]
    fn f_pdf_examples() {
        let d = FDist::new(2.0, 2.0).unwrap();
        assert!((d.pdf(0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((d.pdf(1.0).unwrap() - 0.25).abs() < 1e-14);
        assert!(matches!(
            FDist::new(1.0, 5.0).unwrap().pdf(0.0),
            Err(Error::Pole { .. })
        ));
        assert_eq!(FDist::new(3.0, 5.0).unwrap().pdf(0.0).unwrap(), 0.0);
        assert!(d.pdf(-0.1).is_err());
        assert!(FDist::new(-1.0, 2.0).is_err());
    }

    #[test]
    fn t_pdf_examples() {
        let cauchy = StudentT::new(1.0).unwrap();
        assert!((cauchy.pdf(0.0).unwrap() - 1.0 / PI).abs() < 1e-15);
        let t5 = StudentT::new(5.0).unwrap();
        assert_eq!(t5.pdf(2.3).unwrap(), t5.pdf(-2.3).unwrap());
        assert!(StudentT::new(0.0).is_err());
    }

    #[test]
    fn normalization() {
        let chi5 = ChiSquared::new(5.0).unwrap();
        let mass = integrate_to_infinity(|x| chi5.pdf(x).unwrap(), 0.0, 1e-13, 0.0).unwrap();
        assert!((mass.value - 1.0).abs() < 1e-10);

        let f37 = FDist::new(3.0, 7.0).unwrap();
        let mass = integrate_to_infinity(|x| f37.pdf(x).unwrap(), 0.0, 1e-13, 0.0).unwrap();
        assert!((mass.value - 1.0).abs() < 1e-10);

        let t7 = StudentT::new(7.0).unwrap();
        let half = integrate_to_infinity(|x| t7.pdf(x).unwrap(), 0.0, 1e-13, 0.0).unwrap();
        assert!((2.0 * half.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn upper_tail_endpoints() {
        assert_eq!(f(1.0, 10.0).upper_tail(0.0).unwrap(), 1.0);
        let chi4: DistributionModel = ChiSquared::new(4.0).unwrap().into();
        assert_eq!(chi4.upper_tail(f64::INFINITY).unwrap(), 0.0);
        assert!(chi4.upper_tail(-1.0).is_err());
    }

    #[test]
    fn upper_tail_matches_closed_forms() {
        // F(2,2): 1/(1+x); chi2(2): e^{-x/2}
        let d = f(2.0, 2.0);
        for &x in &[0.1, 1.0, 3.0, 40.0] {
            assert!((d.upper_tail(x).unwrap() - 1.0 / (1.0 + x)).abs() < 1e-14);
        }
        let chi2: DistributionModel = ChiSquared::new(2.0).unwrap().into();
        for &x in &[0.1, 1.0, 3.0, 40.0] {
            assert!((chi2.upper_tail(x).unwrap() - (-0.5 * x).exp()).abs() < 1e-15);
        }
        // F(1,1): 1 - (2/pi) atan(sqrt(x))
        let f11 = f(1.0, 1.0);
        for x in [0.2_f64, 1.0, 5.0] {
            let exact = 1.0 - 2.0 / PI * x.sqrt().atan();
            assert!((f11.upper_tail(x).unwrap() - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn alpha_point_closed_form_f22() {
        let d = f(2.0, 2.0);
        assert!((d.alpha_point(0.25).unwrap().value - 3.0).abs() < 1e-10);
        assert!((d.alpha_point(0.5).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn alpha_point_round_trip_f110() {
        let d = f(1.0, 10.0);
        let p = d.alpha_point(0.05).unwrap();
        assert!((d.upper_tail(p.value).unwrap() - 0.05).abs() < 1e-9);
        // Tabulated F(1,10) 5% point.
        assert!((p.value - 4.964_602_743).abs() < 1e-6);
    }

    #[test]
    fn alpha_point_real_line_families() {
        let t: DistributionModel = StudentT::new(10.0).unwrap().into();
        let upper = t.alpha_point(0.025).unwrap().value;
        assert!((upper - 2.228_138_852).abs() < 1e-6);
        let lower = t.alpha_point(0.975).unwrap().value;
        assert!((upper + lower).abs() < 1e-9);

        let n: DistributionModel = Normal::new(3.0, 2.0).unwrap().into();
        let z = n.alpha_point(0.05).unwrap().value;
        assert!((z - (3.0 + 2.0 * 1.644_853_626_951_472_2)).abs() < 1e-9);
    }

    #[test]
    fn t_squared_is_f_1_k() {
        for &k in &[3.0, 10.0, 30.0] {
            let t = StudentT::new(k).unwrap().two_sided_alpha_point(0.05).unwrap();
            let fk = f(1.0, k).alpha_point(0.05).unwrap().value;
            assert!((t * t - fk).abs() < 1e-8, "k = {k}");
        }
    }

    #[test]
    fn t_cdf_against_quadrature() {
        let t = StudentT::new(4.0).unwrap();
        let body = integrate(|x| t.pdf(x).unwrap(), 0.0, 1.3, 1e-14, 0.0).unwrap().value;
        assert!((t.cdf(1.3).unwrap() - (0.5 + body)).abs() < 1e-12);
    }

    #[test]
    fn invalid_alpha_rejected() {
        for &a in &[0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(f(2.0, 3.0).alpha_point(a), Err(Error::InvalidAlpha(_))));
        }
    }
}
