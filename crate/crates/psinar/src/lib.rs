//! Integer-valued AR(1) count time series built on power-series thinning,
//! with Poisson-Lindley innovations and Poisson/geometric baselines.
//!
//! The process is X_t = α∘X_{t−1} + W_t, where α∘X is a sum of X iid
//! counting variables with mean α (Bernoulli, geometric or Poisson, or any
//! user-described power-series law) and W_t are iid innovations. The crate
//! provides exact pmfs and transition kernels, simulation, three estimators
//! (conditional least squares, Yule-Walker, conditional maximum likelihood)
//! with asymptotics, model comparison by information criteria, one-step-ahead
//! forecasting and a Monte Carlo study harness.
//!
//! Start with the runnable programs in `examples/`:
//!
//! ```bash
//! cargo run --release --example simulate
//! cargo run --release --example exact_distributions
//! cargo run --release --example fit
//! cargo run --release --example compare_models
//! cargo run --release --example predict
//! cargo run --release --example mc_study
//! ```
//!
//! A thin command-line front end over the same operations ships as the
//! `psinar` binary; see the crate README.

pub mod analysis;
pub mod cli;
pub mod distributions;
pub mod estimation;
mod numeric;
pub mod process;
pub mod thinning;

mod error;

pub use distributions::{
    GeometricInnovation, Innovation, InnovationKind, PoissonInnovation, PoissonLindley,
    PowerSeriesFamily, ThinningFamily,
};
pub use error::{Error, Result};
pub use process::{CountSeries, InarModel, TransitionRow};
