//! The INAR(1) process X_t = α∘X_{t−1} + W_t and its exact distribution
//! theory: moments, autocorrelation, Markov transition kernel, conditional
//! log-likelihood, truncated stationary distribution and simulation.

use rand::Rng;

use crate::distributions::{check_alpha, Innovation, ThinningFamily};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;
use crate::thinning::{ln_thinned_pmf, sample_thinned};

/// An observed count series x_1, ..., x_T.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSeries {
    values: Vec<u32>,
}

impl CountSeries {
    /// Wraps observations; the series must be non-empty. Estimators impose
    /// their own stronger length requirements.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { need: 1, got: 0 });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().map(|&x| f64::from(x)).sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance (denominator T − 1).
    pub fn variance(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let mean = self.mean();
        self.values
            .iter()
            .map(|&x| (f64::from(x) - mean).powi(2))
            .sum::<f64>()
            / (self.len() - 1) as f64
    }

    /// Sample autocorrelation at the given lag, normalized by the full-sample
    /// sum of squares.
    pub fn autocorrelation(&self, lag: usize) -> f64 {
        let mean = self.mean();
        let denom: f64 = self
            .values
            .iter()
            .map(|&x| (f64::from(x) - mean).powi(2))
            .sum();
        if denom == 0.0 || lag >= self.len() {
            return 0.0;
        }
        let num: f64 = (lag..self.len())
            .map(|t| (f64::from(self.values[t]) - mean) * (f64::from(self.values[t - lag]) - mean))
            .sum();
        num / denom
    }

    /// r-th raw sample moment (1/T)Σ xᵗʳ.
    pub fn raw_moment(&self, r: u32) -> f64 {
        self.values
            .iter()
            .map(|&x| f64::from(x).powi(r as i32))
            .sum::<f64>()
            / self.len() as f64
    }

    pub fn max(&self) -> u32 {
        *self.values.iter().max().expect("non-empty")
    }
}

/// One row of the transition kernel, truncated at a cap.
#[derive(Debug, Clone)]
pub struct TransitionRow {
    /// P(X_t = k | X_{t−1} = l) for k = 0..=cap.
    pub probs: Vec<f64>,
    /// Mass beyond the cap: 1 − Σ probs (clamped at zero against roundoff).
    pub tail: f64,
}

/// A fully specified INAR(1) model: thinning family, α and innovation law.
///
/// # Example
///
/// ```
/// use psinar::{InarModel, Innovation, PoissonLindley, ThinningFamily};
///
/// let innovation = Innovation::PoissonLindley(PoissonLindley::new(1.0).unwrap());
/// let model = InarModel::new(ThinningFamily::Bernoulli, 0.5, innovation).unwrap();
/// assert_eq!(model.mean(), 3.0);
/// ```
#[derive(Debug, Clone)]
pub struct InarModel {
    family: ThinningFamily,
    alpha: f64,
    innovation: Innovation,
}

impl InarModel {
    /// Builds a model; α must lie strictly inside (0, 1) for the process to
    /// be a dependent, stationary chain.
    pub fn new(family: ThinningFamily, alpha: f64, innovation: Innovation) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            family,
            alpha,
            innovation,
        })
    }

    pub fn family(&self) -> &ThinningFamily {
        &self.family
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn innovation(&self) -> &Innovation {
        &self.innovation
    }

    /// Unconditional mean μ_W / (1 − α).
    pub fn mean(&self) -> f64 {
        self.innovation.mean() / (1.0 - self.alpha)
    }

    /// Unconditional variance [δ(α)μ_W/(1−α) + σ²_W] / (1 − α²).
    pub fn variance(&self) -> f64 {
        let delta = self.family.delta_unchecked(self.alpha);
        let mu_w = self.innovation.mean();
        (delta / (1.0 - self.alpha) * mu_w + self.innovation.variance())
            / (1.0 - self.alpha * self.alpha)
    }

    /// (mean, variance) of the stationary law.
    pub fn moments(&self) -> (f64, f64) {
        (self.mean(), self.variance())
    }

    /// ρ_k = αᵏ.
    pub fn autocorrelation(&self, lag: u32) -> f64 {
        self.alpha.powi(lag as i32)
    }

    /// Conditional mean and variance of X_{t+1} given X_t = x:
    /// (αx + μ_W, δ(α)x + σ²_W).
    pub fn conditional_moments(&self, x: u32) -> (f64, f64) {
        let xf = f64::from(x);
        (
            self.alpha * xf + self.innovation.mean(),
            self.family.delta_unchecked(self.alpha) * xf + self.innovation.variance(),
        )
    }

    /// Simulates a path of the given length after discarding `burn_in` steps,
    /// starting from X_0 = 0. Deterministic for a fixed RNG state.
    pub fn simulate<R: Rng + ?Sized>(
        &self,
        length: usize,
        burn_in: usize,
        rng: &mut R,
    ) -> Result<CountSeries> {
        if length == 0 {
            return Err(Error::Config("simulation length must be >= 1".into()));
        }
        let mut state = 0u32;
        let mut values = Vec::with_capacity(length);
        for step in 0..burn_in + length {
            state =
                sample_thinned(&self.family, self.alpha, state, rng) + self.innovation.sample(rng);
            if step >= burn_in {
                values.push(state);
            }
        }
        CountSeries::new(values)
    }

    /// P(X_t = k | X_{t−1} = l).
    pub fn transition_prob(&self, l: u32, k: u32) -> f64 {
        self.ln_transition_prob(l, k).exp()
    }

    /// log P(X_t = k | X_{t−1} = l), evaluated with log-sum-exp over the
    /// thinning/innovation convolution.
    pub fn ln_transition_prob(&self, l: u32, k: u32) -> f64 {
        let mut terms = Vec::new();
        self.ln_transition_into(l, k, &mut terms)
    }

    pub(crate) fn ln_transition_into(&self, l: u32, k: u32, terms: &mut Vec<f64>) -> f64 {
        if l == 0 {
            return self.innovation.ln_pmf(k);
        }
        let m_max = match self.family.support_max() {
            Some(per_unit) => k.min(per_unit.saturating_mul(l)),
            None => k,
        };
        terms.clear();
        for m in 0..=m_max {
            terms.push(
                ln_thinned_pmf(&self.family, self.alpha, l, m) + self.innovation.ln_pmf(k - m),
            );
        }
        log_sum_exp(terms)
    }

    /// The kernel row for state l over k = 0..=cap, plus the truncated tail.
    pub fn transition_row(&self, l: u32, cap: u32) -> TransitionRow {
        let mut terms = Vec::new();
        let probs: Vec<f64> = (0..=cap)
            .map(|k| self.ln_transition_into(l, k, &mut terms).exp())
            .collect();
        let sum: f64 = probs.iter().sum();
        debug_assert!(sum <= 1.0 + 1e-12, "row mass {sum} exceeds one");
        TransitionRow {
            probs,
            tail: (1.0 - sum).max(0.0),
        }
    }

    /// Conditional log-likelihood of the series given its first value:
    /// Σ_{t≥2} log P(x_{t−1} → x_t). Requires at least two observations.
    pub fn log_likelihood(&self, series: &CountSeries) -> Result<f64> {
        if series.len() < 2 {
            return Err(Error::SeriesTooShort {
                need: 2,
                got: series.len(),
            });
        }
        Ok(self.ln_transitions_sum(series.values()))
    }

    pub(crate) fn ln_transitions_sum(&self, values: &[u32]) -> f64 {
        let mut terms = Vec::new();
        values
            .windows(2)
            .map(|w| self.ln_transition_into(w[0], w[1], &mut terms))
            .sum()
    }

    /// Joint log-pmf of the series under an explicit distribution for the
    /// first state: log π(x_1) + conditional log-likelihood.
    pub fn joint_log_pmf(&self, series: &CountSeries, initial: &[f64]) -> Result<f64> {
        let first = series.values()[0];
        if (first as usize) >= initial.len() {
            return Err(Error::UnsupportedState {
                state: first,
                max: initial.len().saturating_sub(1),
            });
        }
        Ok(initial[first as usize].ln() + self.ln_transitions_sum(series.values()))
    }

    /// Stationary distribution of the kernel truncated to {0..cap}, by power
    /// iteration on the renormalized rows; stops when successive iterates
    /// differ by less than `tol` in total variation.
    pub fn stationary_distribution(&self, cap: u32, tol: f64) -> Result<Vec<f64>> {
        let (mean, var) = self.moments();
        let needed = mean + 10.0 * var.sqrt();
        if f64::from(cap) < needed {
            return Err(Error::InvalidParameter {
                name: "cap",
                value: f64::from(cap),
                expected: "at least the unconditional mean plus ten standard deviations",
            });
        }
        if tol <= 0.0 || tol.is_nan() {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: tol,
                expected: "a value > 0",
            });
        }
        let n = cap as usize + 1;
        let mut kernel = Vec::with_capacity(n);
        for l in 0..=cap {
            let row = self.transition_row(l, cap);
            let sum: f64 = row.probs.iter().sum();
            kernel.push(row.probs.iter().map(|p| p / sum).collect::<Vec<f64>>());
        }
        let mut dist = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        let max_iter = 100_000;
        let mut residual = f64::INFINITY;
        for _ in 0..max_iter {
            for v in next.iter_mut() {
                *v = 0.0;
            }
            for (l, row) in kernel.iter().enumerate() {
                let mass = dist[l];
                if mass == 0.0 {
                    continue;
                }
                for (k, p) in row.iter().enumerate() {
                    next[k] += mass * p;
                }
            }
            let norm: f64 = next.iter().sum();
            for v in next.iter_mut() {
                *v /= norm;
            }
            residual = 0.5
                * dist
                    .iter()
                    .zip(next.iter())
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>();
            std::mem::swap(&mut dist, &mut next);
            if residual < tol {
                return Ok(dist);
            }
        }
        Err(Error::NoConvergence {
            residual,
            iterations: max_iter,
        })
    }

    /// Truncation cap covering the stationary law: mean + 10 standard
    /// deviations, never below 50.
    pub fn suggested_cap(&self) -> u32 {
        let (mean, var) = self.moments();
        ((mean + 10.0 * var.sqrt()).ceil() as u32).max(50)
    }

    /// Truncation cap for the kernel row of state l: conditional mean + 10
    /// conditional standard deviations, never below 50.
    pub fn suggested_row_cap(&self, l: u32) -> u32 {
        let (mean, var) = self.conditional_moments(l);
        ((mean + 10.0 * var.sqrt()).ceil() as u32).max(50)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{InnovationKind, PoissonLindley};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pl_model(family: ThinningFamily, alpha: f64, theta: f64) -> InarModel {
        let innovation = Innovation::PoissonLindley(PoissonLindley::new(theta).unwrap());
        InarModel::new(family, alpha, innovation).unwrap()
    }

    #[test]
    fn rejects_alpha_outside_open_unit_interval() {
        let innovation = Innovation::PoissonLindley(PoissonLindley::new(1.0).unwrap());
        assert!(InarModel::new(ThinningFamily::Bernoulli, 0.0, innovation).is_err());
        assert!(InarModel::new(ThinningFamily::Bernoulli, 1.0, innovation).is_err());
        assert!(InarModel::new(ThinningFamily::Bernoulli, 1.3, innovation).is_err());
    }

    #[test]
    fn count_series_validation() {
        assert!(CountSeries::new(vec![]).is_err());
        let s = CountSeries::new(vec![1, 2, 3]).unwrap();
        assert_eq!(s.len(), 3);
        assert_relative_eq!(s.mean(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn moments_hand_values() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let (mean, var) = model.moments();
        assert_relative_eq!(mean, 3.0, epsilon = 1e-14);
        // [ (0.25/0.5)*1.5 + 3.25 ] / 0.75
        assert_relative_eq!(var, 16.0 / 3.0, epsilon = 1e-14);
        assert!(var > mean);
    }

    #[test]
    fn moments_match_published_poisson_fit() {
        let model = pl_model(ThinningFamily::Poisson, 0.6942, 0.2878);
        // Published value 20.187 is a display rounding of 20.18559.
        assert_relative_eq!(model.mean(), 20.18559, epsilon = 1e-4);
        assert!((model.mean() - 20.187).abs() < 2e-3);
    }

    #[test]
    fn over_dispersion_holds_across_configurations() {
        for family in [
            ThinningFamily::Bernoulli,
            ThinningFamily::Geometric,
            ThinningFamily::Poisson,
        ] {
            for &(alpha, theta) in &[(0.2, 0.6), (0.5, 1.0), (0.9, 2.0)] {
                let model = pl_model(family.clone(), alpha, theta);
                let (mean, var) = model.moments();
                assert!(var > mean, "{} alpha={alpha} theta={theta}", family.name());
            }
        }
    }

    #[test]
    fn autocorrelation_is_alpha_power() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        assert_eq!(model.autocorrelation(0), 1.0);
        assert_relative_eq!(model.autocorrelation(3), 0.125, epsilon = 1e-15);
    }

    #[test]
    fn conditional_moments_hand_values() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let (m, v) = model.conditional_moments(4);
        assert_relative_eq!(m, 3.5, epsilon = 1e-14);
        assert_relative_eq!(v, 4.25, epsilon = 1e-14);
        let (m0, v0) = model.conditional_moments(0);
        assert_relative_eq!(m0, 1.5, epsilon = 1e-14);
        assert_relative_eq!(v0, 3.25, epsilon = 1e-14);
    }

    #[test]
    fn transition_reduces_to_innovation_pmf_at_zero_state() {
        for family in [
            ThinningFamily::Bernoulli,
            ThinningFamily::Geometric,
            ThinningFamily::Poisson,
        ] {
            let model = pl_model(family, 0.5, 1.0);
            for k in 0..10 {
                assert_relative_eq!(
                    model.transition_prob(0, k),
                    model.innovation().pmf(k),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn transition_hand_values() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        // (1 - alpha) * pl_pmf(0) = 0.5 * 0.375
        assert_relative_eq!(model.transition_prob(1, 0), 0.1875, epsilon = 1e-13);

        let model = pl_model(ThinningFamily::Poisson, 0.5, 1.0);
        assert_relative_eq!(
            model.transition_prob(2, 0),
            (-1.0f64).exp() * 0.375,
            epsilon = 1e-13
        );
    }

    #[test]
    fn transition_rows_are_proper_distributions() {
        for family in [
            ThinningFamily::Bernoulli,
            ThinningFamily::Geometric,
            ThinningFamily::Poisson,
        ] {
            let model = pl_model(family, 0.5, 1.0);
            for &l in &[0u32, 5, 20] {
                let cap = model.suggested_row_cap(l);
                let row = model.transition_row(l, cap);
                assert!(row.probs.iter().all(|&p| p >= 0.0));
                let total: f64 = row.probs.iter().sum::<f64>() + row.tail;
                assert!(
                    (total - 1.0).abs() < 1e-12,
                    "{} l={l}: total = {total}",
                    model.family().name()
                );
            }
        }
    }

    #[test]
    fn row_moments_match_conditional_moments() {
        for family in [
            ThinningFamily::Bernoulli,
            ThinningFamily::Geometric,
            ThinningFamily::Poisson,
        ] {
            let model = pl_model(family, 0.5, 1.0);
            for &l in &[0u32, 1, 5, 20] {
                let cap = model.suggested_row_cap(l) + 30;
                let row = model.transition_row(l, cap);
                let mean: f64 = row
                    .probs
                    .iter()
                    .enumerate()
                    .map(|(k, p)| k as f64 * p)
                    .sum();
                let second: f64 = row
                    .probs
                    .iter()
                    .enumerate()
                    .map(|(k, p)| (k as f64).powi(2) * p)
                    .sum();
                let (cm, cv) = model.conditional_moments(l);
                assert!(
                    (mean - cm).abs() < 1e-6,
                    "{} l={l}: mean {mean} vs {cm}",
                    model.family().name()
                );
                assert!(
                    (second - mean * mean - cv).abs() < 1e-5,
                    "{} l={l}: var {} vs {cv}",
                    model.family().name(),
                    second - mean * mean
                );
            }
        }
    }

    #[test]
    fn zero_row_equals_innovation_vector() {
        let model = pl_model(ThinningFamily::Geometric, 0.4, 0.9);
        let row = model.transition_row(0, 40);
        for (k, &p) in row.probs.iter().enumerate() {
            assert_relative_eq!(p, model.innovation().pmf(k as u32), epsilon = 1e-14);
        }
    }

    #[test]
    fn simulation_matches_stationary_moments() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let series = model.simulate(100_000, 500, &mut rng).unwrap();
        assert!(
            (series.mean() - 3.0).abs() < 0.05,
            "mean = {}",
            series.mean()
        );
        assert!(
            (series.variance() - 16.0 / 3.0).abs() < 0.2,
            "var = {}",
            series.variance()
        );
    }

    #[test]
    fn simulation_near_independence_limit() {
        let model = pl_model(ThinningFamily::Bernoulli, 1e-9, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let series = model.simulate(100_000, 100, &mut rng).unwrap();
        let innov = model.innovation();
        let tol = 3.0 * innov.variance().sqrt() / (series.len() as f64).sqrt();
        assert!((series.mean() - innov.mean()).abs() < tol);
    }

    #[test]
    fn simulation_is_deterministic() {
        let model = pl_model(ThinningFamily::Geometric, 0.7, 0.8);
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            model.simulate(200, 50, &mut rng).unwrap()
        };
        assert_eq!(run(123), run(123));
    }

    #[test]
    fn simulated_acf_tracks_alpha_powers() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let series = model.simulate(100_000, 500, &mut rng).unwrap();
        for lag in 1..=3u32 {
            let got = series.autocorrelation(lag as usize);
            let want = model.autocorrelation(lag);
            assert!((got - want).abs() < 0.02, "lag {lag}: {got} vs {want}");
        }
    }

    #[test]
    fn log_likelihood_hand_values() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        // Single l = 0 transition.
        let series = CountSeries::new(vec![0, 4]).unwrap();
        assert_relative_eq!(
            model.log_likelihood(&series).unwrap(),
            model.innovation().ln_pmf(4),
            epsilon = 1e-13
        );
        let series = CountSeries::new(vec![1, 0]).unwrap();
        assert_relative_eq!(
            model.log_likelihood(&series).unwrap(),
            0.1875f64.ln(),
            epsilon = 1e-13
        );
        let short = CountSeries::new(vec![5]).unwrap();
        assert!(model.log_likelihood(&short).is_err());
    }

    #[test]
    fn log_likelihood_equals_product_of_transitions() {
        let model = pl_model(ThinningFamily::Geometric, 0.6, 0.7);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let series = model.simulate(12, 100, &mut rng).unwrap();
        let direct: f64 = series
            .values()
            .windows(2)
            .map(|w| model.transition_prob(w[0], w[1]))
            .product();
        let ll = model.log_likelihood(&series).unwrap();
        assert_relative_eq!(ll.exp(), direct, max_relative = 1e-10);
    }

    #[test]
    fn stationary_distribution_matches_model_moments() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let dist = model.stationary_distribution(60, 1e-12).unwrap();
        let total: f64 = dist.iter().sum();
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        let mean: f64 = dist.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        let second: f64 = dist
            .iter()
            .enumerate()
            .map(|(k, p)| (k as f64).powi(2) * p)
            .sum();
        let (want_mean, want_var) = model.moments();
        assert!((mean - want_mean).abs() / want_mean < 0.01, "mean = {mean}");
        assert!(
            (second - mean * mean - want_var).abs() / want_var < 0.02,
            "var = {}",
            second - mean * mean
        );
    }

    #[test]
    fn stationary_distribution_is_a_fixed_point() {
        let model = pl_model(ThinningFamily::Poisson, 0.4, 1.2);
        let cap = model.suggested_cap();
        let tol = 1e-12;
        let dist = model.stationary_distribution(cap, tol).unwrap();
        let mut pushed = vec![0.0; dist.len()];
        for (l, &mass) in dist.iter().enumerate() {
            let row = model.transition_row(l as u32, cap);
            let sum: f64 = row.probs.iter().sum();
            for (k, p) in row.probs.iter().enumerate() {
                pushed[k] += mass * p / sum;
            }
        }
        let tv = 0.5
            * dist
                .iter()
                .zip(pushed.iter())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        assert!(tv < tol * 10.0, "tv = {tv}");
    }

    #[test]
    fn stationary_distribution_rejects_small_cap() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.9, 0.3);
        assert!(model.stationary_distribution(10, 1e-10).is_err());
    }

    #[test]
    fn joint_log_pmf_composition() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        // Degenerate initial mass at zero.
        let init = vec![1.0, 0.0, 0.0];
        let series = CountSeries::new(vec![0, 0]).unwrap();
        let pl_zero = model.innovation().ln_pmf(0);
        assert_relative_eq!(
            model.joint_log_pmf(&series, &init).unwrap(),
            pl_zero,
            epsilon = 1e-13
        );

        // Length-one series under the stationary law.
        let dist = model.stationary_distribution(60, 1e-12).unwrap();
        let single = CountSeries::new(vec![4]).unwrap();
        assert_relative_eq!(
            model.joint_log_pmf(&single, &dist).unwrap(),
            dist[4].ln(),
            epsilon = 1e-13
        );

        // Chain rule: joint(prefix + suffix) = joint(prefix) + transitions.
        let full = CountSeries::new(vec![4, 2, 3, 1]).unwrap();
        let prefix = CountSeries::new(vec![4, 2]).unwrap();
        let suffix_sum = model.ln_transition_prob(2, 3) + model.ln_transition_prob(3, 1);
        assert_relative_eq!(
            model.joint_log_pmf(&full, &dist).unwrap(),
            model.joint_log_pmf(&prefix, &dist).unwrap() + suffix_sum,
            epsilon = 1e-12
        );

        // State beyond the provided support is an error.
        let out = CountSeries::new(vec![99, 1]).unwrap();
        assert!(model.joint_log_pmf(&out, &init).is_err());
    }

    #[test]
    fn empirical_transitions_match_kernel() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let series = model.simulate(1_000_000, 500, &mut rng).unwrap();
        // Tally visits and one-step moves.
        let maxv = series.max() as usize;
        let mut visits = vec![0u64; maxv + 1];
        let mut moves = vec![std::collections::HashMap::<u32, u64>::new(); maxv + 1];
        for w in series.values().windows(2) {
            visits[w[0] as usize] += 1;
            *moves[w[0] as usize].entry(w[1]).or_insert(0) += 1;
        }
        // 4 standard errors with an expected-count floor: ~900 cells are
        // compared, so a per-cell 3-sigma bound would trip on chance alone.
        for l in 0..=maxv {
            if visits[l] < 500 {
                continue;
            }
            let n = visits[l] as f64;
            for k in 0..=maxv as u32 {
                let p = model.transition_prob(l as u32, k);
                if n * p < 10.0 {
                    continue;
                }
                let observed = *moves[l].get(&k).unwrap_or(&0) as f64 / n;
                let se = (p * (1.0 - p) / n).sqrt();
                assert!(
                    (observed - p).abs() <= 4.0 * se,
                    "l={l} k={k}: observed {observed}, expected {p} (se {se})"
                );
            }
        }
    }

    #[test]
    fn baseline_innovations_share_kernel_structure() {
        // INARP(1): Bernoulli thinning with Poisson innovations.
        let poisson = InnovationKind::Poisson.with_param(1.5).unwrap();
        let model = InarModel::new(ThinningFamily::Bernoulli, 0.5, poisson).unwrap();
        for k in 0..8 {
            assert_relative_eq!(
                model.transition_prob(0, k),
                model.innovation().pmf(k),
                epsilon = 1e-14
            );
        }
        let row = model.transition_row(3, 60);
        let total: f64 = row.probs.iter().sum::<f64>() + row.tail;
        assert!((total - 1.0).abs() < 1e-12);

        // INARG(1): Bernoulli thinning with geometric innovations.
        let geometric = InnovationKind::Geometric.with_param(0.4).unwrap();
        let model = InarModel::new(ThinningFamily::Bernoulli, 0.5, geometric).unwrap();
        let row = model.transition_row(3, 80);
        let total: f64 = row.probs.iter().sum::<f64>() + row.tail;
        assert!((total - 1.0).abs() < 1e-12);
    }
}
