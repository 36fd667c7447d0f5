//! Parameter estimation: conditional least squares, Yule-Walker and
//! conditional maximum likelihood, plus the CLS asymptotic covariance.

mod likelihood;
mod nelder_mead;

use serde::{Deserialize, Serialize};

use crate::analysis::information_criteria;
use crate::distributions::{InnovationKind, PoissonLindley, ThinningFamily};
use crate::error::{Error, Result};
use crate::numeric::{inv_logit, logit};
use crate::process::{CountSeries, InarModel};

pub(crate) use likelihood::LoglikEvaluator;
use nelder_mead::{minimize, NelderMeadOptions};

/// Estimation method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Cls,
    Yw,
    Cmle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Cls => "CLS",
            Method::Yw => "YW",
            Method::Cmle => "CMLE",
        })
    }
}

/// Raw output of the moment estimators: α̂ and the auxiliary mean μ̂.
///
/// `alpha` is reported as computed, even outside (0,1); check
/// [`MomentEstimate::in_range`] before inverting an innovation parameter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MomentEstimate {
    pub method: Method,
    pub alpha: f64,
    pub mu: f64,
}

impl MomentEstimate {
    /// Whether α̂ lies strictly inside (0, 1); outside it the estimate
    /// carries a boundary flag and parameter inversion is refused.
    pub fn in_range(&self) -> bool {
        self.alpha > 0.0 && self.alpha < 1.0
    }

    /// Implied innovation mean (1 − α̂)μ̂.
    pub fn innovation_mean(&self) -> f64 {
        (1.0 - self.alpha) * self.mu
    }
}

/// Convergence and boundary diagnostics of a fit.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub converged: bool,
    /// α̂ was attracted to the upper boundary (α̂ > 0.999).
    pub boundary: bool,
    /// Number of optimizer starts tried (CMLE only).
    pub starts: usize,
    /// Finite-difference gradient norm of the log-likelihood at the optimum,
    /// in the unconstrained (logit/log) coordinates (CMLE only).
    pub grad_norm: Option<f64>,
}

/// A fitted model summary shared by all three methods.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub method: Method,
    pub alpha: f64,
    /// Innovation parameter (θ, λ or p, depending on the law).
    pub param: f64,
    pub param_name: &'static str,
    /// Auxiliary mean estimate μ̂ (moment methods only).
    pub mu: Option<f64>,
    /// Conditional log-likelihood at the estimates.
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    /// Asymptotic standard errors of (α̂, θ̂) when available.
    pub std_errors: Option<[f64; 2]>,
    pub diagnostics: Diagnostics,
}

fn require_len(series: &CountSeries, need: usize) -> Result<()> {
    if series.len() < need {
        return Err(Error::SeriesTooShort {
            need,
            got: series.len(),
        });
    }
    Ok(())
}

/// Conditional least squares: closed-form minimizer of
/// S(α, μ) = Σ_{t≥2} (x_t − αx_{t−1} − (1−α)μ)².
pub fn fit_cls(series: &CountSeries) -> Result<MomentEstimate> {
    require_len(series, 3)?;
    let x = series.values();
    let n = (x.len() - 1) as f64; // number of transitions
    let mut sum_xy = 0.0;
    let mut sum_curr = 0.0;
    let mut sum_prev = 0.0;
    let mut sum_prev_sq = 0.0;
    for w in x.windows(2) {
        let prev = f64::from(w[0]);
        let curr = f64::from(w[1]);
        sum_xy += curr * prev;
        sum_curr += curr;
        sum_prev += prev;
        sum_prev_sq += prev * prev;
    }
    let denom = n * sum_prev_sq - sum_prev * sum_prev;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateSeries {
            reason: "constant predecessor values give a zero CLS denominator",
        });
    }
    let alpha = (n * sum_xy - sum_curr * sum_prev) / denom;
    let mu = (sum_curr - alpha * sum_prev) / ((1.0 - alpha) * n);
    Ok(MomentEstimate {
        method: Method::Cls,
        alpha,
        mu,
    })
}

/// Yule-Walker: μ̂ is the sample mean, α̂ the lag-1 sample autocorrelation.
pub fn fit_yw(series: &CountSeries) -> Result<MomentEstimate> {
    require_len(series, 3)?;
    let mean = series.mean();
    let x = series.values();
    let denom: f64 = x.iter().map(|&v| (f64::from(v) - mean).powi(2)).sum();
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateSeries {
            reason: "constant series has zero variance",
        });
    }
    let num: f64 = x
        .windows(2)
        .map(|w| (f64::from(w[1]) - mean) * (f64::from(w[0]) - mean))
        .sum();
    Ok(MomentEstimate {
        method: Method::Yw,
        alpha: num / denom,
        mu: mean,
    })
}

/// Solves μ̂ = (θ+2)/(θ(θ+1)(1−α̂)) for θ̂ > 0.
pub fn invert_theta(mu_hat: f64, alpha_hat: f64) -> Result<f64> {
    if !(alpha_hat > 0.0 && alpha_hat < 1.0) {
        return Err(Error::OutOfRange {
            what: format!("alpha estimate {alpha_hat} outside (0,1); theta inversion refused"),
        });
    }
    if !(mu_hat > 0.0 && mu_hat.is_finite()) {
        return Err(Error::OutOfRange {
            what: format!("mean estimate {mu_hat} must be positive for theta inversion"),
        });
    }
    InnovationKind::PoissonLindley.param_from_mean((1.0 - alpha_hat) * mu_hat)
}

/// Runs a moment estimator (CLS or YW) and packages a full [`FitResult`]
/// for the given model family: inverts the innovation parameter from the
/// implied innovation mean and evaluates the conditional likelihood at the
/// plug-in point.
pub fn fit_moment_method(
    series: &CountSeries,
    family: &ThinningFamily,
    kind: InnovationKind,
    method: Method,
) -> Result<FitResult> {
    let estimate = match method {
        Method::Cls => fit_cls(series)?,
        Method::Yw => fit_yw(series)?,
        Method::Cmle => {
            return Err(Error::Config(
                "fit_moment_method expects CLS or YW; use fit_cmle for likelihood fits".into(),
            ))
        }
    };
    if !estimate.in_range() {
        return Err(Error::OutOfRange {
            what: format!(
                "{method} alpha estimate {:.4} outside (0,1); boundary flag set",
                estimate.alpha
            ),
        });
    }
    let param = kind.param_from_mean(estimate.innovation_mean())?;
    let innovation = kind.with_param(param)?;
    let model = InarModel::new(family.clone(), estimate.alpha, innovation)?;
    let loglik = model.log_likelihood(series)?;
    let (aic, bic) = information_criteria(loglik, 2, series.len() - 1);
    let std_errors = if kind == InnovationKind::PoissonLindley && method == Method::Cls {
        cls_asymptotics(series, estimate.alpha, param, family)
            .ok()
            .map(|a| a.std_errors)
    } else {
        None
    };
    Ok(FitResult {
        method,
        alpha: estimate.alpha,
        param,
        param_name: kind.param_name(),
        mu: Some(estimate.mu),
        loglik,
        aic,
        bic,
        std_errors,
        diagnostics: Diagnostics {
            converged: true,
            ..Diagnostics::default()
        },
    })
}

// Coarse multi-start grid: logit-even in alpha, log-even in an unbounded
// innovation parameter, logit-even in a probability parameter.
fn grid_starts(kind: InnovationKind) -> Vec<(f64, f64)> {
    let alphas = [0.1, 0.3, 0.5, 0.7, 0.9];
    let params: [f64; 5] = match kind {
        InnovationKind::PoissonLindley | InnovationKind::Poisson => {
            let lo: f64 = 0.05;
            let hi: f64 = 20.0;
            let step = (hi / lo).powf(0.25);
            [lo, lo * step, lo * step * step, hi / step, hi]
        }
        InnovationKind::Geometric => [0.1, 0.3, 0.5, 0.7, 0.9],
    };
    let mut starts = Vec::with_capacity(25);
    for &a in &alphas {
        for &p in &params {
            starts.push((a, p));
        }
    }
    starts
}

fn to_unconstrained(kind: InnovationKind, alpha: f64, param: f64) -> [f64; 2] {
    let u_param = match kind {
        InnovationKind::PoissonLindley | InnovationKind::Poisson => param.ln(),
        InnovationKind::Geometric => logit(param),
    };
    [logit(alpha), u_param]
}

fn from_unconstrained(kind: InnovationKind, u: &[f64]) -> (f64, f64) {
    let param = match kind {
        InnovationKind::PoissonLindley | InnovationKind::Poisson => u[1].exp(),
        InnovationKind::Geometric => inv_logit(u[1]),
    };
    (inv_logit(u[0]), param)
}

/// Conditional maximum likelihood over (α, innovation parameter).
///
/// The likelihood is maximized by simplex search on a reparameterized
/// unconstrained space (logit for α and probabilities, log for positive
/// parameters), multi-started from the CLS and YW plug-ins, a coarse 5×5
/// grid and an optional caller-provided point. The best local optimum wins;
/// near-ties go to the smaller α̂.
pub fn fit_cmle(
    series: &CountSeries,
    family: &ThinningFamily,
    kind: InnovationKind,
    init: Option<(f64, f64)>,
) -> Result<FitResult> {
    require_len(series, 3)?;
    let mut evaluator = LoglikEvaluator::new(series, family, kind);

    let mut starts: Vec<(f64, f64)> = Vec::new();
    if let Some((a, p)) = init {
        if a > 0.0 && a < 1.0 && kind.with_param(p).is_ok() {
            starts.push((a, p));
        }
    }
    for est in [fit_cls(series), fit_yw(series)].into_iter().flatten() {
        if !est.in_range() {
            continue;
        }
        if let Ok(param) = kind.param_from_mean(est.innovation_mean()) {
            if kind.with_param(param).is_ok() {
                starts.push((est.alpha, param));
            }
        }
    }
    starts.extend(grid_starts(kind));

    let options = NelderMeadOptions::default();
    // (alpha, param, loglik, iterations, converged) of the incumbent.
    let mut best: Option<(f64, f64, f64, usize, bool)> = None;
    let n_starts = starts.len();
    for (alpha0, param0) in starts {
        let u0 = to_unconstrained(kind, alpha0, param0);
        let result = minimize(
            |u| {
                let (a, p) = from_unconstrained(kind, u);
                -evaluator.loglik(a, p)
            },
            &u0,
            &options,
        );
        if !result.value.is_finite() {
            continue;
        }
        let (alpha, param) = from_unconstrained(kind, &result.x);
        let loglik = -result.value;
        let better = match best {
            None => true,
            Some((best_alpha, _, best_ll, _, _)) => {
                loglik > best_ll + 1e-9 || ((loglik - best_ll).abs() <= 1e-9 && alpha < best_alpha)
            }
        };
        if better {
            best = Some((alpha, param, loglik, result.iterations, result.converged));
        }
    }

    let (alpha, param, loglik, iterations, converged) = best.ok_or(Error::OptimizationFailed {
        reason: "likelihood not finite at any start".into(),
        starts: n_starts,
    })?;

    // Stationarity check in the smooth unconstrained coordinates.
    let u_opt = to_unconstrained(kind, alpha, param);
    let h = 1e-6;
    let mut grad = [0.0f64; 2];
    for (i, g) in grad.iter_mut().enumerate() {
        let mut up = u_opt;
        let mut down = u_opt;
        up[i] += h;
        down[i] -= h;
        let (ua, upar) = from_unconstrained(kind, &up);
        let (da, dpar) = from_unconstrained(kind, &down);
        *g = (evaluator.loglik(ua, upar) - evaluator.loglik(da, dpar)) / (2.0 * h);
    }
    let grad_norm = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt();

    let (aic, bic) = information_criteria(loglik, 2, series.len() - 1);
    Ok(FitResult {
        method: Method::Cmle,
        alpha,
        param,
        param_name: kind.param_name(),
        mu: None,
        loglik,
        aic,
        bic,
        std_errors: None,
        diagnostics: Diagnostics {
            iterations,
            converged,
            boundary: alpha > 0.999,
            starts: n_starts,
            grad_norm: Some(grad_norm),
        },
    })
}

/// The CLS asymptotic covariance for (α̂, θ̂) under Poisson-Lindley
/// innovations: covariance c²A/(T−1) with the sample raw moments of the
/// series standing in for the population moments.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClsAsymptotics {
    pub c: f64,
    pub r11: f64,
    pub r12: f64,
    pub r22: f64,
    /// c²A/(T−1), row-major.
    pub covariance: [[f64; 2]; 2],
    /// Square roots of the covariance diagonal: (se(α̂), se(θ̂)).
    pub std_errors: [f64; 2],
}

pub fn cls_asymptotics(
    series: &CountSeries,
    alpha_hat: f64,
    theta_hat: f64,
    family: &ThinningFamily,
) -> Result<ClsAsymptotics> {
    require_len(series, 3)?;
    if !(alpha_hat > 0.0 && alpha_hat < 1.0) {
        return Err(Error::OutOfRange {
            what: format!("alpha estimate {alpha_hat} outside (0,1)"),
        });
    }
    let theta = theta_hat;
    let sigma2 = PoissonLindley::new(theta)?.variance();
    let delta = family.delta(alpha_hat)?;

    let mu1 = series.raw_moment(1);
    let mu2 = series.raw_moment(2);
    let mu3 = series.raw_moment(3);
    let spread = mu2 - mu1 * mu1;
    if spread <= 0.0 {
        return Err(Error::DegenerateSeries {
            reason: "constant series: second moment equals squared mean",
        });
    }

    let q = theta * theta + 4.0 * theta + 2.0;
    let tt = theta * theta * (theta + 1.0) * (theta + 1.0);
    let c = tt / (spread * q);

    let r11 = (q * q) / (tt * tt)
        * ((delta * mu3 + mu2 * sigma2) - mu1 * (delta * mu2 + mu1 * sigma2)
            + mu1 * (mu1 * (delta * mu1 + sigma2) - (delta * mu2 + mu1 * sigma2)));
    let r12 = q / tt
        * (mu1 * (delta * mu3 + sigma2 * mu2) - mu2 * (delta * mu2 + mu1 * sigma2)
            + mu1 * mu2 * (delta * mu1 + sigma2)
            - mu1 * mu1 * (delta * mu2 + mu1 * sigma2));
    let r22 = mu1 * mu1 * (delta * mu3 + sigma2 * mu2)
        - 2.0 * mu1 * mu2 * (delta * mu2 + mu1 * sigma2)
        + mu2 * mu2 * (delta * mu1 + sigma2);

    let n = (series.len() - 1) as f64;
    let scale = c * c / n;
    let covariance = [[scale * r11, scale * r12], [scale * r12, scale * r22]];
    Ok(ClsAsymptotics {
        c,
        r11,
        r12,
        r22,
        covariance,
        std_errors: [
            covariance[0][0].max(0.0).sqrt(),
            covariance[1][1].max(0.0).sqrt(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Innovation;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn series(values: &[u32]) -> CountSeries {
        CountSeries::new(values.to_vec()).unwrap()
    }

    fn pl_model(family: ThinningFamily, alpha: f64, theta: f64) -> InarModel {
        let innovation = Innovation::PoissonLindley(PoissonLindley::new(theta).unwrap());
        InarModel::new(family, alpha, innovation).unwrap()
    }

    #[test]
    fn cls_hand_computation() {
        let est = fit_cls(&series(&[1, 1, 2, 2, 3, 3])).unwrap();
        assert_relative_eq!(est.alpha, 11.0 / 14.0, epsilon = 1e-12);
        assert_relative_eq!(est.mu, 11.0 / 3.0, epsilon = 1e-12);
        assert!(est.in_range());
    }

    #[test]
    fn cls_degenerate_and_boundary_cases() {
        assert!(matches!(
            fit_cls(&series(&[4, 4, 4, 4, 4])),
            Err(Error::DegenerateSeries { .. })
        ));
        // Alternating series: alpha estimate -1, flagged out of range.
        let est = fit_cls(&series(&[1, 2, 1, 2])).unwrap();
        assert_relative_eq!(est.alpha, -1.0, epsilon = 1e-12);
        assert!(!est.in_range());
        assert!(invert_theta(est.mu, est.alpha).is_err());
    }

    #[test]
    fn cls_too_short() {
        assert!(matches!(
            fit_cls(&series(&[1, 2])),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    // Independent oracle: minimize S(alpha, mu) numerically.
    fn cls_by_numeric_minimization(s: &CountSeries) -> (f64, f64) {
        let x = s.values();
        let objective = |p: &[f64]| -> f64 {
            x.windows(2)
                .map(|w| {
                    let pred = p[0] * f64::from(w[0]) + (1.0 - p[0]) * p[1];
                    (f64::from(w[1]) - pred).powi(2)
                })
                .sum()
        };
        let opts = NelderMeadOptions {
            objective_tol: 1e-14,
            param_tol: 1e-11,
            max_iter: 5000,
            ..Default::default()
        };
        let mut best: Option<(f64, Vec<f64>)> = None;
        for a0 in [0.2, 0.5, 0.8] {
            for m0 in [1.0, s.mean(), 2.0 * s.mean() + 1.0] {
                let r = minimize(objective, &[a0, m0], &opts);
                if best.as_ref().is_none_or(|(v, _)| r.value < *v) {
                    best = Some((r.value, r.x));
                }
            }
        }
        let (_, p) = best.unwrap();
        (p[0], p[1])
    }

    #[test]
    fn cls_closed_form_matches_numeric_minimizer() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..50 {
            let s = model.simulate(60, 50, &mut rng).unwrap();
            let est = match fit_cls(&s) {
                Ok(est) => est,
                Err(_) => continue,
            };
            let (a_num, mu_num) = cls_by_numeric_minimization(&s);
            assert!(
                (est.alpha - a_num).abs() < 1e-8,
                "alpha {} vs {}",
                est.alpha,
                a_num
            );
            assert!(
                (est.mu - mu_num).abs() < 1e-6,
                "mu {} vs {}",
                est.mu,
                mu_num
            );
        }
    }

    #[test]
    fn yw_hand_computation() {
        let est = fit_yw(&series(&[1, 1, 2, 2, 3, 3])).unwrap();
        assert_relative_eq!(est.mu, 2.0, epsilon = 1e-12);
        assert_relative_eq!(est.alpha, 0.5, epsilon = 1e-12);
        let theta = invert_theta(est.mu, est.alpha).unwrap();
        assert_relative_eq!(theta, 2.0f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn yw_degenerate_series() {
        assert!(matches!(
            fit_yw(&series(&[3, 3, 3, 3])),
            Err(Error::DegenerateSeries { .. })
        ));
    }

    #[test]
    fn yw_white_noise_estimates_zero_alpha() {
        let pl = PoissonLindley::new(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let values: Vec<u32> = (0..10_000).map(|_| pl.sample(&mut rng)).collect();
        let est = fit_yw(&series(&values)).unwrap();
        assert!(est.alpha.abs() < 0.05, "alpha = {}", est.alpha);
    }

    #[test]
    fn theta_inversion_hand_values() {
        // c = 1: mu = 2, alpha = 0.5.
        assert_relative_eq!(
            invert_theta(2.0, 0.5).unwrap(),
            2.0f64.sqrt(),
            epsilon = 1e-12
        );
        // c = 2: theta = (-1 + sqrt(17)) / 4.
        assert_relative_eq!(
            invert_theta(4.0, 0.5).unwrap(),
            (17.0f64.sqrt() - 1.0) / 4.0,
            epsilon = 1e-12
        );
        assert!(invert_theta(-1.0, 0.5).is_err());
        assert!(invert_theta(2.0, 1.5).is_err());
    }

    #[test]
    fn theta_inversion_round_trips() {
        for &theta in &[0.2878, 1.6850, 2.3490] {
            let pl = PoissonLindley::new(theta).unwrap();
            for &alpha in &[0.2, 0.5, 0.9] {
                let mu = pl.mean() / (1.0 - alpha);
                assert_relative_eq!(invert_theta(mu, alpha).unwrap(), theta, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn moment_fit_result_carries_criteria() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let s = model.simulate(300, 500, &mut rng).unwrap();
        let fit = fit_moment_method(
            &s,
            &ThinningFamily::Bernoulli,
            InnovationKind::PoissonLindley,
            Method::Cls,
        )
        .unwrap();
        assert!(fit.loglik.is_finite());
        assert_relative_eq!(fit.aic, -2.0 * fit.loglik + 4.0, epsilon = 1e-12);
        assert!(fit.std_errors.is_some());
        assert!(fit.mu.is_some());
    }

    #[test]
    fn cmle_dominates_moment_plugins() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for family in [
            ThinningFamily::Bernoulli,
            ThinningFamily::Geometric,
            ThinningFamily::Poisson,
        ] {
            let model = pl_model(family.clone(), 0.5, 1.0);
            let s = model.simulate(150, 500, &mut rng).unwrap();
            let cmle = fit_cmle(&s, &family, InnovationKind::PoissonLindley, None).unwrap();
            for method in [Method::Cls, Method::Yw] {
                if let Ok(plug) =
                    fit_moment_method(&s, &family, InnovationKind::PoissonLindley, method)
                {
                    assert!(
                        cmle.loglik >= plug.loglik - 1e-8,
                        "{}: CMLE {} < {} {}",
                        family.name(),
                        cmle.loglik,
                        method,
                        plug.loglik
                    );
                }
            }
        }
    }

    #[test]
    fn cmle_is_a_local_maximum() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.6, 1.2);
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let s = model.simulate(200, 500, &mut rng).unwrap();
        let fit = fit_cmle(
            &s,
            &ThinningFamily::Bernoulli,
            InnovationKind::PoissonLindley,
            None,
        )
        .unwrap();
        let mut eval = LoglikEvaluator::new(
            &s,
            &ThinningFamily::Bernoulli,
            InnovationKind::PoissonLindley,
        );
        let at_opt = eval.loglik(fit.alpha, fit.param);
        assert_relative_eq!(at_opt, fit.loglik, epsilon = 1e-9);
        for (da, dp) in [(1e-3, 0.0), (-1e-3, 0.0), (0.0, 1e-3), (0.0, -1e-3)] {
            let shifted = eval.loglik(fit.alpha + da, fit.param + dp);
            assert!(
                shifted <= at_opt + 1e-10,
                "shift ({da},{dp}) improved: {shifted} > {at_opt}"
            );
        }
    }

    #[test]
    fn cmle_recovers_simulation_parameters() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let s = model.simulate(300, 500, &mut rng).unwrap();
        let fit = fit_cmle(
            &s,
            &ThinningFamily::Bernoulli,
            InnovationKind::PoissonLindley,
            None,
        )
        .unwrap();
        // Sampling error at T = 300 is about 0.03 for alpha, 0.08 for theta.
        assert!((fit.alpha - 0.5).abs() < 0.12, "alpha = {}", fit.alpha);
        assert!((fit.param - 1.0).abs() < 0.35, "theta = {}", fit.param);
        assert!(fit.diagnostics.converged);
        assert!(!fit.diagnostics.boundary);
        let grad = fit.diagnostics.grad_norm.unwrap();
        assert!(grad < 0.1, "gradient norm at optimum: {grad}");
    }

    #[test]
    fn cmle_honors_explicit_init() {
        let model = pl_model(ThinningFamily::Geometric, 0.4, 0.9);
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let s = model.simulate(120, 500, &mut rng).unwrap();
        let free = fit_cmle(
            &s,
            &ThinningFamily::Geometric,
            InnovationKind::PoissonLindley,
            None,
        )
        .unwrap();
        let seeded = fit_cmle(
            &s,
            &ThinningFamily::Geometric,
            InnovationKind::PoissonLindley,
            Some((0.4, 0.9)),
        )
        .unwrap();
        assert!((free.loglik - seeded.loglik).abs() < 1e-6);
    }

    #[test]
    fn asymptotics_symmetry_and_psd() {
        let model = pl_model(ThinningFamily::Bernoulli, 0.5, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        for _ in 0..100 {
            let s = model.simulate(150, 200, &mut rng).unwrap();
            let est = match fit_cls(&s) {
                Ok(e) if e.in_range() => e,
                _ => continue,
            };
            let theta = match invert_theta(est.mu, est.alpha) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let asym = cls_asymptotics(&s, est.alpha, theta, &ThinningFamily::Bernoulli).unwrap();
            assert_eq!(asym.covariance[0][1], asym.covariance[1][0]);
            // Eigenvalues of the 2x2 covariance must be non-negative.
            let tr = asym.covariance[0][0] + asym.covariance[1][1];
            let det = asym.covariance[0][0] * asym.covariance[1][1]
                - asym.covariance[0][1] * asym.covariance[1][0];
            let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
            let lambda_min = tr / 2.0 - disc;
            assert!(
                lambda_min >= -1e-10 * tr.abs().max(1.0),
                "negative eigenvalue {lambda_min}"
            );
            assert!(asym.std_errors[0].is_finite() && asym.std_errors[1].is_finite());
        }
    }

    #[test]
    fn asymptotics_rejects_degenerate_input() {
        let s = series(&[2, 2, 2, 2]);
        assert!(cls_asymptotics(&s, 0.5, 1.0, &ThinningFamily::Bernoulli).is_err());
        let s = series(&[1, 3, 2, 4, 2]);
        assert!(cls_asymptotics(&s, 1.2, 1.0, &ThinningFamily::Bernoulli).is_err());
    }
}
