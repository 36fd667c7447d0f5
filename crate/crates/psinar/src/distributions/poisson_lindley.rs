//! The Poisson-Lindley distribution.
//!
//! A one-parameter over-dispersed count distribution obtained by mixing a
//! Poisson rate over a Lindley distribution. It serves as the innovation law
//! of the INAR processes in this crate.

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Poisson-Lindley distribution PL(θ) on {0, 1, 2, ...}.
///
/// pmf: P(X = x) = θ²(x + θ + 2) / (θ + 1)^(x+3), θ > 0.
///
/// The variance always exceeds the mean, which is what makes the law useful
/// for over-dispersed count data.
///
/// # Example
///
/// ```
/// use psinar::PoissonLindley;
///
/// let pl = PoissonLindley::new(1.0).unwrap();
/// assert!((pl.pmf(0) - 0.375).abs() < 1e-15);
/// assert!(pl.variance() > pl.mean());
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonLindley {
    theta: f64,
}

impl PoissonLindley {
    /// Creates a PL(θ) distribution. Requires θ > 0 and finite.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                expected: "a finite value > 0",
            });
        }
        Ok(Self { theta })
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// P(X = x).
    pub fn pmf(&self, x: u32) -> f64 {
        self.ln_pmf(x).exp()
    }

    /// log P(X = x); the form used inside likelihoods.
    pub fn ln_pmf(&self, x: u32) -> f64 {
        let t = self.theta;
        let x = f64::from(x);
        2.0 * t.ln() + (x + t + 2.0).ln() - (x + 3.0) * t.ln_1p()
    }

    /// E(X) = (θ + 2) / (θ(θ + 1)).
    pub fn mean(&self) -> f64 {
        let t = self.theta;
        (t + 2.0) / (t * (t + 1.0))
    }

    /// Var(X) = (θ³ + 4θ² + 6θ + 2) / (θ²(θ + 1)²).
    pub fn variance(&self) -> f64 {
        let t = self.theta;
        let num = ((t + 4.0) * t + 6.0) * t + 2.0;
        num / (t * t * (t + 1.0) * (t + 1.0))
    }

    /// Probability generating function φ(t) = θ²/(1+θ) · [(1+θ−t)⁻² + (1+θ−t)⁻¹].
    ///
    /// Defined for t < 1 + θ; the pole at t = 1 + θ is rejected.
    pub fn pgf(&self, t: f64) -> Result<f64> {
        let th = self.theta;
        if t >= 1.0 + th || t.is_nan() {
            return Err(Error::InvalidParameter {
                name: "t",
                value: t,
                expected: "t < 1 + theta (pgf pole)",
            });
        }
        let d = 1.0 + th - t;
        Ok(th * th / (1.0 + th) * (1.0 / (d * d) + 1.0 / d))
    }

    /// Moment generating function M(t) = φ(eᵗ); requires eᵗ < 1 + θ.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        self.pgf(t.exp())
    }

    /// Draws one variate via the Lindley mixture: with probability θ/(θ+1)
    /// the Poisson rate is Exponential(θ), otherwise Gamma(2, rate θ).
    /// Exact and O(1); no truncation of the support.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        let t = self.theta;
        let lambda = if rng.random::<f64>() < t / (t + 1.0) {
            Exp::new(t).expect("theta > 0").sample(rng)
        } else {
            Gamma::new(2.0, 1.0 / t).expect("theta > 0").sample(rng)
        };
        if lambda <= 0.0 {
            return 0;
        }
        Poisson::new(lambda).expect("lambda > 0").sample(rng) as u32
    }
}
