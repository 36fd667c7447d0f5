//! One-step-ahead forecasting, information-criterion model comparison and a
//! Monte Carlo study harness for the three estimators.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distributions::{InnovationKind, ThinningFamily};
use crate::error::{Error, Result};
use crate::estimation::{fit_cls, fit_cmle, fit_moment_method, fit_yw, FitResult, Method};
use crate::numeric::mix_seed;
use crate::process::{CountSeries, InarModel};

/// Which lag feeds the prediction recursion x̂_i = α̂·lag + μ̂_W.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LagPolicy {
    /// Use the observed x_{i−1} (one-step-ahead conditional mean).
    Observed,
    /// Chain the recursion on its own previous prediction.
    Predicted,
}

/// One-step-ahead predictions and residuals for an observed series.
#[derive(Debug, Clone, Serialize)]
pub struct PredictionTrace {
    pub alpha: f64,
    /// Innovation mean μ̂_W; the constant term of the recursion.
    pub innovation_mean: f64,
    pub lag: LagPolicy,
    /// x̂_1 = μ̂_W/(1−α̂), then x̂_i = α̂·lag + μ̂_W.
    pub predicted: Vec<f64>,
    /// x_i − x̂_i.
    pub residuals: Vec<f64>,
}

impl PredictionTrace {
    /// The recursion intercept μ̂_W.
    pub fn intercept(&self) -> f64 {
        self.innovation_mean
    }

    /// x̂_1, the unconditional mean implied by the estimates.
    pub fn initial(&self) -> f64 {
        self.innovation_mean / (1.0 - self.alpha)
    }
}

/// Builds the prediction trace with the observed-lag recursion.
pub fn predict(
    series: &CountSeries,
    alpha_hat: f64,
    innovation_mean: f64,
) -> Result<PredictionTrace> {
    predict_with(series, alpha_hat, innovation_mean, LagPolicy::Observed)
}

/// Builds the prediction trace with an explicit lag policy.
pub fn predict_with(
    series: &CountSeries,
    alpha_hat: f64,
    innovation_mean: f64,
    lag: LagPolicy,
) -> Result<PredictionTrace> {
    if !(alpha_hat > 0.0 && alpha_hat < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha_hat",
            value: alpha_hat,
            expected: "a value strictly inside (0, 1)",
        });
    }
    if !(innovation_mean > 0.0 && innovation_mean.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "innovation_mean",
            value: innovation_mean,
            expected: "a finite value > 0",
        });
    }
    let mut predicted = Vec::with_capacity(series.len());
    predicted.push(innovation_mean / (1.0 - alpha_hat));
    for i in 1..series.len() {
        let lagged = match lag {
            LagPolicy::Observed => f64::from(series.values()[i - 1]),
            LagPolicy::Predicted => predicted[i - 1],
        };
        predicted.push(alpha_hat * lagged + innovation_mean);
    }
    let residuals = series
        .values()
        .iter()
        .zip(predicted.iter())
        .map(|(&x, &p)| f64::from(x) - p)
        .collect();
    Ok(PredictionTrace {
        alpha: alpha_hat,
        innovation_mean,
        lag,
        predicted,
        residuals,
    })
}

/// AIC = −2ℓ + 2k and BIC = −2ℓ + k·log(n), with n the number of
/// transitions entering the conditional likelihood.
pub fn information_criteria(loglik: f64, n_params: usize, n_transitions: usize) -> (f64, f64) {
    let k = n_params as f64;
    let aic = -2.0 * loglik + 2.0 * k;
    let bic = -2.0 * loglik + k * (n_transitions as f64).ln();
    (aic, bic)
}

/// The five models compared on real data: three thinning families with
/// Poisson-Lindley innovations, plus the binomial-thinning Poisson and
/// geometric innovation baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelTag {
    Nbinarpl,
    Binarpl,
    Pinarpl,
    Inarg,
    Inarp,
}

impl ModelTag {
    pub fn all() -> [ModelTag; 5] {
        [
            ModelTag::Nbinarpl,
            ModelTag::Binarpl,
            ModelTag::Pinarpl,
            ModelTag::Inarg,
            ModelTag::Inarp,
        ]
    }

    pub fn family(&self) -> ThinningFamily {
        match self {
            ModelTag::Nbinarpl => ThinningFamily::Geometric,
            ModelTag::Binarpl | ModelTag::Inarg | ModelTag::Inarp => ThinningFamily::Bernoulli,
            ModelTag::Pinarpl => ThinningFamily::Poisson,
        }
    }

    pub fn innovation_kind(&self) -> InnovationKind {
        match self {
            ModelTag::Nbinarpl | ModelTag::Binarpl | ModelTag::Pinarpl => {
                InnovationKind::PoissonLindley
            }
            ModelTag::Inarg => InnovationKind::Geometric,
            ModelTag::Inarp => InnovationKind::Poisson,
        }
    }
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelTag::Nbinarpl => "NBINARPL(1)",
            ModelTag::Binarpl => "BINARPL(1)",
            ModelTag::Pinarpl => "PINARPL(1)",
            ModelTag::Inarg => "INARG(1)",
            ModelTag::Inarp => "INARP(1)",
        })
    }
}

/// Per-model fits inside a comparison table; failures are recorded as
/// messages without aborting the table.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub tag: ModelTag,
    pub cls: std::result::Result<FitResult, String>,
    pub yw: std::result::Result<FitResult, String>,
    pub cmle: std::result::Result<FitResult, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    /// Model with the smallest CMLE AIC.
    pub aic_winner: Option<ModelTag>,
    /// Model with the smallest CMLE BIC.
    pub bic_winner: Option<ModelTag>,
}

/// Fits all five models by CLS, YW and CMLE; AIC/BIC come from the CMLE
/// conditional likelihood under a common convention. Errors only when every
/// CMLE fit fails.
pub fn compare_models(series: &CountSeries) -> Result<ComparisonTable> {
    let rows: Vec<ComparisonRow> = ModelTag::all()
        .iter()
        .map(|&tag| {
            let family = tag.family();
            let kind = tag.innovation_kind();
            ComparisonRow {
                tag,
                cls: fit_moment_method(series, &family, kind, Method::Cls)
                    .map_err(|e| e.to_string()),
                yw: fit_moment_method(series, &family, kind, Method::Yw).map_err(|e| e.to_string()),
                cmle: fit_cmle(series, &family, kind, None).map_err(|e| e.to_string()),
            }
        })
        .collect();

    let pick = |key: fn(&FitResult) -> f64| -> Option<ModelTag> {
        rows.iter()
            .filter_map(|row| row.cmle.as_ref().ok().map(|fit| (row.tag, key(fit))))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite criteria"))
            .map(|(tag, _)| tag)
    };
    let aic_winner = pick(|fit| fit.aic);
    let bic_winner = pick(|fit| fit.bic);
    if aic_winner.is_none() {
        return Err(Error::OptimizationFailed {
            reason: "all five likelihood fits failed".into(),
            starts: 5,
        });
    }
    Ok(ComparisonTable {
        rows,
        aic_winner,
        bic_winner,
    })
}

/// Configuration of a Monte Carlo estimator study.
#[derive(Debug, Clone, Serialize)]
pub struct McConfig {
    pub family: ThinningFamily,
    pub innovation_kind: InnovationKind,
    /// True α of the generating process.
    pub alpha: f64,
    /// True innovation parameter of the generating process.
    pub param: f64,
    /// Series lengths, one table block per entry.
    pub sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub methods: Vec<Method>,
}

impl McConfig {
    /// Study of a Poisson-Lindley model with all three methods and the
    /// standard burn-in.
    pub fn new(family: ThinningFamily, alpha: f64, theta: f64) -> Self {
        Self {
            family,
            innovation_kind: InnovationKind::PoissonLindley,
            alpha,
            param: theta,
            sizes: vec![100, 200, 300],
            replicates: 1000,
            seed: crate::cli::DEFAULT_SEED,
            burn_in: 500,
            methods: vec![Method::Cls, Method::Yw, Method::Cmle],
        }
    }
}

/// Aggregates for one estimated parameter in one table cell.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McCell {
    /// Mean of the estimates across replicates.
    pub ae: f64,
    /// ae − truth.
    pub abias: f64,
    /// Root mean squared error about the truth.
    pub rmse: f64,
}

/// One (size, method) block of the study.
#[derive(Debug, Clone, Serialize)]
pub struct McBlock {
    pub size: usize,
    pub method: Method,
    pub alpha: McCell,
    pub param: McCell,
    /// Replicates aggregated.
    pub used: usize,
    /// Replicates excluded (estimate out of range or fit failure).
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub config: McConfig,
    pub blocks: Vec<McBlock>,
}

impl McReport {
    pub fn block(&self, size: usize, method: Method) -> Option<&McBlock> {
        self.blocks
            .iter()
            .find(|b| b.size == size && b.method == method)
    }
}

fn aggregate(estimates: &[(f64, f64)], truth: (f64, f64)) -> (McCell, McCell) {
    let n = estimates.len() as f64;
    let make = |pick: fn(&(f64, f64)) -> f64, truth: f64| -> McCell {
        let ae = estimates.iter().map(pick).sum::<f64>() / n;
        let mse = estimates
            .iter()
            .map(|e| (pick(e) - truth).powi(2))
            .sum::<f64>()
            / n;
        McCell {
            ae,
            abias: ae - truth,
            rmse: mse.sqrt(),
        }
    };
    (make(|e| e.0, truth.0), make(|e| e.1, truth.1))
}

/// Runs the study: for every series length, simulate `replicates` paths,
/// estimate by every requested method, and aggregate AE/ABias/RMSE.
///
/// Moment replicates whose α̂ falls outside (0,1) (or whose parameter
/// inversion fails) are counted as failures and excluded from that method's
/// aggregates. Replicates are independent and may run concurrently;
/// per-replicate seeds derive from the master seed by a counter split, so
/// the report is identical for any thread count.
pub fn run_mc_study(config: &McConfig) -> Result<McReport> {
    if config.replicates == 0 {
        return Err(Error::Config("replicates must be >= 1".into()));
    }
    if config.methods.is_empty() {
        return Err(Error::Config(
            "at least one estimation method required".into(),
        ));
    }
    let innovation = config.innovation_kind.with_param(config.param)?;
    let model = InarModel::new(config.family.clone(), config.alpha, innovation)?;
    let truth = (config.alpha, config.param);

    let mut blocks = Vec::new();
    for (size_index, &size) in config.sizes.iter().enumerate() {
        // One estimate (or failure) per (replicate, method).
        let per_replicate: Vec<Vec<Option<(f64, f64)>>> = (0..config.replicates)
            .into_par_iter()
            .map(|rep| {
                let stream = (size_index as u64) << 32 | rep as u64;
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, stream));
                let series = model
                    .simulate(size, config.burn_in, &mut rng)
                    .expect("length >= 1");
                config
                    .methods
                    .iter()
                    .map(|&method| estimate_one(&series, config, method))
                    .collect()
            })
            .collect();

        for (m_idx, &method) in config.methods.iter().enumerate() {
            let estimates: Vec<(f64, f64)> =
                per_replicate.iter().filter_map(|row| row[m_idx]).collect();
            let failed = config.replicates - estimates.len();
            if estimates.is_empty() {
                return Err(Error::OptimizationFailed {
                    reason: format!("all {method} replicates failed at T = {size}"),
                    starts: config.replicates,
                });
            }
            let (alpha_cell, param_cell) = aggregate(&estimates, truth);
            blocks.push(McBlock {
                size,
                method,
                alpha: alpha_cell,
                param: param_cell,
                used: estimates.len(),
                failed,
            });
        }
    }
    Ok(McReport {
        config: config.clone(),
        blocks,
    })
}

fn estimate_one(series: &CountSeries, config: &McConfig, method: Method) -> Option<(f64, f64)> {
    match method {
        Method::Cls | Method::Yw => {
            let est = match method {
                Method::Cls => fit_cls(series).ok()?,
                _ => fit_yw(series).ok()?,
            };
            if !est.in_range() {
                return None;
            }
            let param = config
                .innovation_kind
                .param_from_mean(est.innovation_mean())
                .ok()?;
            Some((est.alpha, param))
        }
        Method::Cmle => fit_cmle(series, &config.family, config.innovation_kind, None)
            .ok()
            .map(|fit| (fit.alpha, fit.param)),
    }
}
