//! Sharp operator-norm bounds for Gaussian-window localization operators
//! whose weight lies in `L^p ∩ L^q`, together with the extremal weights.

pub mod cli;
pub mod error;
pub mod harness;
pub mod oracle;
pub mod quadrature;
pub mod regimes;
pub mod report;
pub mod roots;
pub mod solver;
pub mod special;
pub mod weight;

pub use error::{Error, Result};
pub use regimes::{classify, closed_form_bound, ProblemParams, Regime, RegimeDecision};
pub use solver::{optimize, solve_multipliers, Optimum, VariationalSolution};
pub use weight::{Profile, RadialWeight};
