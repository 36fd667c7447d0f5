//! Simulate the three thinning variants of the process and check the sample
//! moments and autocorrelation against their closed forms.
//!
//! ```bash
//! cargo run --release --example simulate
//! ```

use psinar::{InarModel, Innovation, PoissonLindley, ThinningFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> psinar::Result<()> {
    let alpha = 0.5;
    let theta = 1.0;
    let innovation = Innovation::PoissonLindley(PoissonLindley::new(theta)?);

    for family in [
        ThinningFamily::Bernoulli,
        ThinningFamily::Geometric,
        ThinningFamily::Poisson,
    ] {
        let model = InarModel::new(family, alpha, innovation)?;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let series = model.simulate(50_000, 500, &mut rng)?;

        let (mean, variance) = model.moments();
        println!(
            "{}-thinned model, alpha = {alpha}, theta = {theta}",
            model.family().name()
        );
        println!("  mean      {:8.4} (exact {:.4})", series.mean(), mean);
        println!(
            "  variance  {:8.4} (exact {:.4})",
            series.variance(),
            variance
        );
        for lag in 1..=3 {
            println!(
                "  acf({lag})    {:8.4} (exact {:.4})",
                series.autocorrelation(lag),
                model.autocorrelation(lag as u32)
            );
        }
        let head: Vec<u32> = series.values()[..20].to_vec();
        println!("  first 20  {head:?}\n");
    }
    Ok(())
}
