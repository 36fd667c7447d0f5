//! Exact pmfs, moments, generating functions and sampling for the innovation
//! and counting laws of the process.

mod counting;
mod innovations;
mod poisson_lindley;

pub use counting::{PowerSeriesFamily, ThinningFamily};
pub use innovations::{GeometricInnovation, Innovation, InnovationKind, PoissonInnovation};
pub use poisson_lindley::PoissonLindley;

pub(crate) use counting::check_alpha;
