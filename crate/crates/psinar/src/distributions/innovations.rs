//! Innovation laws for the INAR recursion.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

use super::poisson_lindley::PoissonLindley;

/// Poisson(λ) innovations, λ > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonInnovation {
    lambda: f64,
}

impl PoissonInnovation {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                expected: "a finite value > 0",
            });
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ln_pmf(&self, w: u32) -> f64 {
        f64::from(w) * self.lambda.ln() - self.lambda - ln_factorial(u64::from(w))
    }
}

/// Geometric(p) innovations on {0, 1, ...} in the success-probability
/// parameterization: P(W = w) = p(1−p)ʷ, mean (1−p)/p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricInnovation {
    p: f64,
}

impl GeometricInnovation {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                expected: "a value strictly inside (0, 1)",
            });
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn ln_pmf(&self, w: u32) -> f64 {
        self.p.ln() + f64::from(w) * (-self.p).ln_1p()
    }
}

/// Tag identifying an innovation law without its parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnovationKind {
    PoissonLindley,
    Poisson,
    Geometric,
}

impl InnovationKind {
    /// Name of the law's single free parameter.
    pub fn param_name(&self) -> &'static str {
        match self {
            InnovationKind::PoissonLindley => "theta",
            InnovationKind::Poisson => "lambda",
            InnovationKind::Geometric => "p",
        }
    }

    /// Builds the concrete law from a parameter value.
    pub fn with_param(&self, value: f64) -> Result<Innovation> {
        Ok(match self {
            InnovationKind::PoissonLindley => {
                Innovation::PoissonLindley(PoissonLindley::new(value)?)
            }
            InnovationKind::Poisson => Innovation::Poisson(PoissonInnovation::new(value)?),
            InnovationKind::Geometric => Innovation::Geometric(GeometricInnovation::new(value)?),
        })
    }

    /// Parameter value matching a given innovation mean: the unique
    /// mean-to-parameter inversion for each law.
    pub fn param_from_mean(&self, mean: f64) -> Result<f64> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(Error::OutOfRange {
                what: format!("innovation mean {mean} must be > 0 for inversion"),
            });
        }
        Ok(match self {
            InnovationKind::PoissonLindley => {
                // (theta+2)/(theta(theta+1)) = mean, positive root.
                let c = mean;
                ((1.0 - c) + ((c - 1.0).powi(2) + 8.0 * c).sqrt()) / (2.0 * c)
            }
            InnovationKind::Poisson => mean,
            InnovationKind::Geometric => 1.0 / (1.0 + mean),
        })
    }
}

/// The W_t law of the INAR recursion: Poisson-Lindley for the main model,
/// Poisson or geometric for the comparison baselines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Innovation {
    PoissonLindley(PoissonLindley),
    Poisson(PoissonInnovation),
    Geometric(GeometricInnovation),
}

impl Innovation {
    pub fn kind(&self) -> InnovationKind {
        match self {
            Innovation::PoissonLindley(_) => InnovationKind::PoissonLindley,
            Innovation::Poisson(_) => InnovationKind::Poisson,
            Innovation::Geometric(_) => InnovationKind::Geometric,
        }
    }

    /// The law's single parameter value (θ, λ or p).
    pub fn param(&self) -> f64 {
        match self {
            Innovation::PoissonLindley(pl) => pl.theta(),
            Innovation::Poisson(p) => p.lambda(),
            Innovation::Geometric(g) => g.p(),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Innovation::PoissonLindley(pl) => pl.mean(),
            Innovation::Poisson(p) => p.lambda,
            Innovation::Geometric(g) => (1.0 - g.p) / g.p,
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Innovation::PoissonLindley(pl) => pl.variance(),
            Innovation::Poisson(p) => p.lambda,
            Innovation::Geometric(g) => (1.0 - g.p) / (g.p * g.p),
        }
    }

    pub fn pmf(&self, w: u32) -> f64 {
        self.ln_pmf(w).exp()
    }

    pub fn ln_pmf(&self, w: u32) -> f64 {
        match self {
            Innovation::PoissonLindley(pl) => pl.ln_pmf(w),
            Innovation::Poisson(p) => p.ln_pmf(w),
            Innovation::Geometric(g) => g.ln_pmf(w),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match self {
            Innovation::PoissonLindley(pl) => pl.sample(rng),
            Innovation::Poisson(p) => {
                Poisson::new(p.lambda).expect("lambda > 0").sample(rng) as u32
            }
            Innovation::Geometric(g) => {
                // Inverse cdf: floor(ln U / ln(1-p)) has the geometric law.
                // U is mapped into (0, 1] so the logarithm stays finite.
                let u: f64 = 1.0 - rng.random::<f64>();
                (u.ln() / (-g.p).ln_1p()).floor() as u32
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameter_validation() {
        assert!(PoissonInnovation::new(0.0).is_err());
        assert!(GeometricInnovation::new(0.0).is_err());
        assert!(GeometricInnovation::new(1.0).is_err());
        assert!(InnovationKind::Poisson.with_param(-1.0).is_err());
    }

    #[test]
    fn means_and_variances() {
        let pl = InnovationKind::PoissonLindley.with_param(1.0).unwrap();
        assert_relative_eq!(pl.mean(), 1.5, epsilon = 1e-14);

        let poi = InnovationKind::Poisson.with_param(2.5).unwrap();
        assert_relative_eq!(poi.mean(), 2.5, epsilon = 1e-14);
        assert_relative_eq!(poi.variance(), 2.5, epsilon = 1e-14);

        let geo = InnovationKind::Geometric.with_param(0.25).unwrap();
        assert_relative_eq!(geo.mean(), 3.0, epsilon = 1e-14);
        assert_relative_eq!(geo.variance(), 12.0, epsilon = 1e-14);
    }

    #[test]
    fn pmfs_normalize_and_match_means() {
        let laws = [
            InnovationKind::PoissonLindley.with_param(0.8).unwrap(),
            InnovationKind::Poisson.with_param(1.7).unwrap(),
            InnovationKind::Geometric.with_param(0.4).unwrap(),
        ];
        for law in laws {
            let total: f64 = (0..=500).map(|w| law.pmf(w)).sum();
            assert!((total - 1.0).abs() < 1e-10, "{:?}", law.kind());
            let mean: f64 = (0..=500).map(|w| f64::from(w) * law.pmf(w)).sum();
            assert_relative_eq!(mean, law.mean(), epsilon = 1e-9);
        }
    }

    #[test]
    fn mean_inversion_round_trips() {
        for (kind, param) in [
            (InnovationKind::PoissonLindley, 1.3),
            (InnovationKind::Poisson, 2.2),
            (InnovationKind::Geometric, 0.35),
        ] {
            let law = kind.with_param(param).unwrap();
            let back = kind.param_from_mean(law.mean()).unwrap();
            assert_relative_eq!(back, param, epsilon = 1e-12);
        }
    }

    #[test]
    fn geometric_sampling_matches_mean() {
        let law = InnovationKind::Geometric.with_param(0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mean = (0..n).map(|_| f64::from(law.sample(&mut rng))).sum::<f64>() / n as f64;
        let tol = 3.0 * law.variance().sqrt() / (n as f64).sqrt();
        assert!((mean - law.mean()).abs() < tol, "mean = {mean}");
    }
}
