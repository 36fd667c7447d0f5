//! Counting laws used by the thinning operator.
//!
//! Each family is parameterized so that for α ∈ (0,1) the counting variable
//! has mean exactly α; `delta(α)` is its variance. The three laws used by the
//! named processes are built in; any other power-series distribution can be
//! described with [`PowerSeriesFamily`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            expected: "a value strictly inside (0, 1)",
        });
    }
    Ok(())
}

/// Generic power-series distribution descriptor: pmf a(y)βʸ/C(β) on a range
/// of non-negative integers, with β restricted to (0, t).
#[derive(Clone)]
pub struct PowerSeriesFamily {
    name: String,
    coeff: Arc<dyn Fn(u32) -> f64 + Send + Sync>,
    series: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    beta_sup: f64,
    support_max: Option<u32>,
}

impl fmt::Debug for PowerSeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeriesFamily")
            .field("name", &self.name)
            .field("beta_sup", &self.beta_sup)
            .field("support_max", &self.support_max)
            .finish()
    }
}

impl PowerSeriesFamily {
    /// Describes a power-series family from its coefficient function a(y),
    /// series function C(β), admissible β supremum t and optional finite
    /// support bound.
    pub fn new(
        name: impl Into<String>,
        coeff: impl Fn(u32) -> f64 + Send + Sync + 'static,
        series: impl Fn(f64) -> f64 + Send + Sync + 'static,
        beta_sup: f64,
        support_max: Option<u32>,
    ) -> Result<Self> {
        if beta_sup <= 0.0 || beta_sup.is_nan() {
            return Err(Error::InvalidParameter {
                name: "beta_sup",
                value: beta_sup,
                expected: "a value > 0 (possibly infinite)",
            });
        }
        Ok(Self {
            name: name.into(),
            coeff: Arc::new(coeff),
            series: Arc::new(series),
            beta_sup,
            support_max,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn pmf_at(&self, beta: f64, y: u32) -> f64 {
        if let Some(max) = self.support_max {
            if y > max {
                return 0.0;
            }
        }
        (self.coeff)(y) * beta.powi(y as i32) / (self.series)(beta)
    }

    // Mean of the law at a given beta, by direct summation. Truncates when
    // the running pmf mass exceeds 1 - 1e-15 or the pmf falls below 1e-18
    // past the current mean estimate.
    fn mean_at(&self, beta: f64) -> f64 {
        let mut mass = 0.0;
        let mut mean = 0.0;
        let hard_cap = self.support_max.map_or(100_000, |m| m);
        for y in 0..=hard_cap {
            let p = self.pmf_at(beta, y);
            mass += p;
            mean += f64::from(y) * p;
            if mass > 1.0 - 1e-15 {
                break;
            }
            if y > 10 && p < 1e-18 {
                break;
            }
        }
        mean
    }

    /// Solves β·G'(β) = α (the mean-matching equation) by bisection on the
    /// admissible β-range, to within 1e-12.
    pub fn solve_beta(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        let hi_limit = if self.beta_sup.is_finite() {
            self.beta_sup * (1.0 - 1e-12)
        } else {
            // Grow an upper bracket for unbounded families.
            let mut hi = 1.0;
            while self.mean_at(hi) < alpha && hi < 1e12 {
                hi *= 2.0;
            }
            hi
        };
        let mut lo = hi_limit * 1e-15;
        let mut hi = hi_limit;
        if self.mean_at(hi) < alpha {
            return Err(Error::OutOfRange {
                what: format!(
                    "family `{}` cannot reach mean {alpha} on its beta-range",
                    self.name
                ),
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.mean_at(mid) < alpha {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-12 * hi.max(1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn variance_at(&self, beta: f64) -> f64 {
        let mean = self.mean_at(beta);
        let mut mass = 0.0;
        let mut second = 0.0;
        let hard_cap = self.support_max.map_or(100_000, |m| m);
        for y in 0..=hard_cap {
            let p = self.pmf_at(beta, y);
            mass += p;
            second += f64::from(y) * f64::from(y) * p;
            if mass > 1.0 - 1e-15 && y as f64 > 4.0 * (mean + 1.0) {
                break;
            }
            if y > 10 && p < 1e-18 {
                break;
            }
        }
        second - mean * mean
    }
}

/// The counting-series law of the thinning operator.
///
/// `Bernoulli`, `Geometric` and `Poisson` are the closed-form laws of the
/// binomial, negative-binomial and Poisson thinning operators; `Custom`
/// evaluates any [`PowerSeriesFamily`] through the mean-matching β.
///
/// Serializes as its name (custom families are identified by name only).
#[derive(Debug, Clone)]
pub enum ThinningFamily {
    /// P(Y=1) = α, P(Y=0) = 1−α; δ(α) = α(1−α).
    Bernoulli,
    /// P(Y=y) = αʸ/(1+α)^(y+1); δ(α) = α(1+α).
    Geometric,
    /// P(Y=y) = e^(−α)αʸ/y!; δ(α) = α.
    Poisson,
    /// Generic power-series counting law.
    Custom(PowerSeriesFamily),
}

impl serde::Serialize for ThinningFamily {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl ThinningFamily {
    pub fn name(&self) -> &str {
        match self {
            ThinningFamily::Bernoulli => "bernoulli",
            ThinningFamily::Geometric => "geometric",
            ThinningFamily::Poisson => "poisson",
            ThinningFamily::Custom(f) => f.name(),
        }
    }

    /// Upper end of the counting support, `None` when unbounded.
    pub fn support_max(&self) -> Option<u32> {
        match self {
            ThinningFamily::Bernoulli => Some(1),
            ThinningFamily::Geometric | ThinningFamily::Poisson => None,
            ThinningFamily::Custom(f) => f.support_max,
        }
    }

    /// P(Y = y) under the mean-α parameterization.
    pub fn counting_pmf(&self, alpha: f64, y: u32) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.counting_pmf_unchecked(alpha, y))
    }

    /// log P(Y = y); `-inf` outside the support.
    pub fn counting_ln_pmf(&self, alpha: f64, y: u32) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.counting_pmf_unchecked(alpha, y).ln())
    }

    pub(crate) fn counting_pmf_unchecked(&self, alpha: f64, y: u32) -> f64 {
        match self {
            ThinningFamily::Bernoulli => match y {
                0 => 1.0 - alpha,
                1 => alpha,
                _ => 0.0,
            },
            ThinningFamily::Geometric => {
                let y = f64::from(y);
                (y * alpha.ln() - (y + 1.0) * alpha.ln_1p()).exp()
            }
            ThinningFamily::Poisson => {
                let y64 = f64::from(y);
                (-alpha + y64 * alpha.ln() - ln_factorial(u64::from(y))).exp()
            }
            ThinningFamily::Custom(f) => match f.solve_beta(alpha) {
                Ok(beta) => f.pmf_at(beta, y),
                Err(_) => f64::NAN,
            },
        }
    }

    /// δ(α) = Var(Y) of the counting law.
    pub fn delta(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.delta_unchecked(alpha))
    }

    pub(crate) fn delta_unchecked(&self, alpha: f64) -> f64 {
        match self {
            ThinningFamily::Bernoulli => alpha * (1.0 - alpha),
            ThinningFamily::Geometric => alpha * (1.0 + alpha),
            ThinningFamily::Poisson => alpha,
            ThinningFamily::Custom(f) => match f.solve_beta(alpha) {
                Ok(beta) => f.variance_at(beta),
                Err(_) => f64::NAN,
            },
        }
    }
}
