//! Five-model comparison by AIC/BIC: the three Poisson-Lindley variants
//! against the Poisson- and geometric-innovation baselines.
//!
//! Uses `data/earthquakes.csv` when present (see data/README.md), otherwise
//! a simulated Poisson-thinned path of comparable scale.
//!
//! ```bash
//! cargo run --release --example compare_models
//! ```

use std::path::PathBuf;

use psinar::analysis::compare_models;
use psinar::cli::ingest_series;
use psinar::{CountSeries, InarModel, Innovation, PoissonLindley, ThinningFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn load_series() -> psinar::Result<(CountSeries, &'static str)> {
    let fixture = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/earthquakes.csv");
    if fixture.exists() {
        return Ok((ingest_series(&fixture)?, "earthquake counts"));
    }
    let innovation = Innovation::PoissonLindley(PoissonLindley::new(0.2878)?);
    let model = InarModel::new(ThinningFamily::Poisson, 0.6942, innovation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    Ok((
        model.simulate(99, 500, &mut rng)?,
        "simulated Poisson-thinned path",
    ))
}

fn main() -> psinar::Result<()> {
    let (series, source) = load_series()?;
    println!(
        "{source}: T = {}, mean {:.2}, variance {:.2}, acf1 {:.2}\n",
        series.len(),
        series.mean(),
        series.variance(),
        series.autocorrelation(1)
    );

    let table = compare_models(&series)?;
    println!(
        "{:<12} {:>22} {:>22} {:>22} {:>10} {:>10}",
        "model", "CLS", "YW", "MLE", "AIC", "BIC"
    );
    for row in &table.rows {
        let cell = |fit: &Result<psinar::estimation::FitResult, String>| match fit {
            Ok(f) => format!("a={:.4} {}={:.4}", f.alpha, f.param_name, f.param),
            Err(_) => "failed".into(),
        };
        let crit = |fit: &Result<psinar::estimation::FitResult, String>,
                    pick: fn(&psinar::estimation::FitResult) -> f64| {
            fit.as_ref()
                .map_or("-".into(), |f| format!("{:.3}", pick(f)))
        };
        println!(
            "{:<12} {:>22} {:>22} {:>22} {:>10} {:>10}",
            row.tag.to_string(),
            cell(&row.cls),
            cell(&row.yw),
            cell(&row.cmle),
            crit(&row.cmle, |f| f.aic),
            crit(&row.cmle, |f| f.bic),
        );
    }
    println!(
        "\nbest fit: {} by AIC, {} by BIC",
        table.aic_winner.expect("at least one fit"),
        table.bic_winner.expect("at least one fit")
    );
    Ok(())
}
