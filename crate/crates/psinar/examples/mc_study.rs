//! A small Monte Carlo estimator study: simulate replicates, estimate with
//! all three methods and tabulate AE / ABias / RMSE per sample size.
//!
//! The full-size studies (1000 replicates, T up to 300) run in the
//! acceptance test suite; this keeps the example quick.
//!
//! ```bash
//! cargo run --release --example mc_study
//! ```

use psinar::analysis::{run_mc_study, McConfig};
use psinar::ThinningFamily;

fn main() -> psinar::Result<()> {
    let config = McConfig {
        sizes: vec![100, 200],
        replicates: 200,
        seed: 1,
        ..McConfig::new(ThinningFamily::Bernoulli, 0.5, 1.0)
    };
    let report = run_mc_study(&config)?;

    println!(
        "{} thinning, true alpha = {}, true theta = {}, {} replicates",
        config.family.name(),
        config.alpha,
        config.param,
        config.replicates
    );
    for &size in &config.sizes {
        println!("\nT = {size}");
        print!("{:<8}", "");
        for method in &config.methods {
            print!(
                "{:>11} {:>11}",
                format!("alpha_{method}"),
                format!("theta_{method}")
            );
        }
        println!();
        for name in ["AE", "ABias", "RMSE"] {
            print!("{name:<8}");
            for &method in &config.methods {
                let block = report.block(size, method).expect("block exists");
                let pick = |c: &psinar::analysis::McCell| match name {
                    "AE" => c.ae,
                    "ABias" => c.abias,
                    _ => c.rmse,
                };
                print!("{:>11.4} {:>11.4}", pick(&block.alpha), pick(&block.param));
            }
            println!();
        }
    }
    Ok(())
}
