//! Estimate (alpha, theta) from a simulated path by conditional least
//! squares, Yule-Walker and conditional maximum likelihood.
//!
//! ```bash
//! cargo run --release --example fit
//! ```

use psinar::estimation::{fit_cmle, fit_moment_method, Method};
use psinar::{InarModel, Innovation, InnovationKind, PoissonLindley, ThinningFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psinar::Result<()> {
    let (alpha, theta) = (0.5, 1.0);
    let family = ThinningFamily::Bernoulli;
    let innovation = Innovation::PoissonLindley(PoissonLindley::new(theta)?);
    let model = InarModel::new(family.clone(), alpha, innovation)?;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let series = model.simulate(300, 500, &mut rng)?;
    println!(
        "simulated T = {} from alpha = {alpha}, theta = {theta}; sample mean {:.3}, variance {:.3}",
        series.len(),
        series.mean(),
        series.variance()
    );

    let kind = InnovationKind::PoissonLindley;
    let fits = [
        fit_moment_method(&series, &family, kind, Method::Cls)?,
        fit_moment_method(&series, &family, kind, Method::Yw)?,
        fit_cmle(&series, &family, kind, None)?,
    ];

    println!(
        "{:<6} {:>8} {:>8} {:>10} {:>10} {:>10} {:>14}",
        "method", "alpha", "theta", "loglik", "AIC", "BIC", "se(alpha)"
    );
    for fit in &fits {
        println!(
            "{:<6} {:>8.4} {:>8.4} {:>10.3} {:>10.3} {:>10.3} {:>14}",
            fit.method.to_string(),
            fit.alpha,
            fit.param,
            fit.loglik,
            fit.aic,
            fit.bic,
            fit.std_errors
                .map_or("-".into(), |se| format!("{:.4}", se[0])),
        );
    }
    println!(
        "\nCMLE diagnostics: {} starts, {} iterations, converged = {}",
        fits[2].diagnostics.starts, fits[2].diagnostics.iterations, fits[2].diagnostics.converged
    );
    Ok(())
}
