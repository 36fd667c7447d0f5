//! One-step-ahead forecasting: fit a model, run the prediction recursion
//! x̂₁ = μ̂_W/(1−α̂), x̂ᵢ = α̂·x_{i−1} + μ̂_W, and emit a plot-ready CSV.
//!
//! ```bash
//! cargo run --release --example predict > predictions.csv
//! ```

use psinar::analysis::predict;
use psinar::estimation::fit_cmle;
use psinar::{InarModel, Innovation, InnovationKind, PoissonLindley, ThinningFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psinar::Result<()> {
    let family = ThinningFamily::Geometric;
    let innovation = Innovation::PoissonLindley(PoissonLindley::new(1.685)?);
    let model = InarModel::new(family.clone(), 0.59, innovation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let series = model.simulate(84, 500, &mut rng)?;

    let fit = fit_cmle(&series, &family, InnovationKind::PoissonLindley, None)?;
    let innovation_mean = InnovationKind::PoissonLindley.with_param(fit.param)?.mean();
    let trace = predict(&series, fit.alpha, innovation_mean)?;

    eprintln!(
        "fitted alpha = {:.4}, theta = {:.4}; recursion: xhat_i = {:.3}*x_(i-1) + {:.3}, xhat_1 = {:.3}",
        fit.alpha,
        fit.param,
        trace.alpha,
        trace.intercept(),
        trace.initial()
    );

    println!("t,observed,predicted,residual");
    for (i, (&obs, (&pred, &res))) in series
        .values()
        .iter()
        .zip(trace.predicted.iter().zip(trace.residuals.iter()))
        .enumerate()
    {
        println!("{},{},{:.6},{:.6}", i + 1, obs, pred, res);
    }
    Ok(())
}
