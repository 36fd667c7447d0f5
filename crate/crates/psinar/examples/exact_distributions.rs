//! Exact distribution theory: innovation pmf and generating function,
//! counting laws, the thinned law, transition kernel rows and the truncated
//! stationary distribution.
//!
//! ```bash
//! cargo run --release --example exact_distributions
//! ```

use psinar::thinning::ThinnedLaw;
use psinar::{InarModel, Innovation, PoissonLindley, ThinningFamily};

fn main() -> psinar::Result<()> {
    let theta = 1.0;
    let pl = PoissonLindley::new(theta)?;
    println!(
        "Poisson-Lindley({theta}): mean {:.4}, variance {:.4}",
        pl.mean(),
        pl.variance()
    );
    print!("  pmf(0..8)  ");
    for x in 0..8 {
        print!("{:.4} ", pl.pmf(x));
    }
    println!(
        "\n  pgf(0) = {:.4} = pmf(0); pgf(1) = {:.4}",
        pl.pgf(0.0)?,
        pl.pgf(1.0)?
    );

    let alpha = 0.5;
    println!("\ncounting laws at alpha = {alpha} (mean alpha, variance delta):");
    for family in [
        ThinningFamily::Bernoulli,
        ThinningFamily::Geometric,
        ThinningFamily::Poisson,
    ] {
        print!(
            "  {:<10} delta = {:.4}, pmf(0..5) =",
            family.name(),
            family.delta(alpha)?
        );
        for y in 0..5 {
            print!(" {:.4}", family.counting_pmf(alpha, y)?);
        }
        println!();
    }

    let thinned = ThinnedLaw::new(ThinningFamily::Geometric, alpha, 4)?;
    println!(
        "\nthinned law (geometric, x = 4): mean {:.2}, variance {:.2}, pmf(0..6) = {:?}",
        thinned.mean(),
        thinned.variance(),
        (0..6)
            .map(|m| (thinned.pmf(m) * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );

    let innovation = Innovation::PoissonLindley(pl);
    let model = InarModel::new(ThinningFamily::Bernoulli, alpha, innovation)?;
    println!("\ntransition rows P(k | l), k = 0..7:");
    for l in [0u32, 3, 6] {
        let row = model.transition_row(l, 7);
        print!("  l = {l}:");
        for p in &row.probs {
            print!(" {p:.4}");
        }
        println!("  (tail {:.2e})", row.tail);
    }

    let stationary = model.stationary_distribution(model.suggested_cap(), 1e-12)?;
    let mean: f64 = stationary
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum();
    let (exact_mean, exact_var) = model.moments();
    let second: f64 = stationary
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64) * (k as f64) * p)
        .sum();
    println!(
        "\nstationary distribution: mean {:.4} (exact {:.4}), variance {:.4} (exact {:.4})",
        mean,
        exact_mean,
        second - mean * mean,
        exact_var
    );
    println!(
        "  mass on 0..10: {:?}",
        stationary[..10]
            .iter()
            .map(|p| (p * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    Ok(())
}
