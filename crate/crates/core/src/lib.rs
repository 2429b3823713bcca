//! Generalized modified k-Bessel functions and the integral identities they
//! satisfy.
//!
//! The crate provides the k-Gamma function and k-Pochhammer symbol, the
//! generalized modified k-Bessel series, Fox–Wright and k-Wright series,
//! an exp-sinh quadrature for semi-infinite integrals, and a harness that
//! checks the Oberhettinger-type integral identities numerically.

// `!(x > 0.0)` deliberately rejects NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod compensated;
pub mod error;
pub mod identities;
pub mod kbessel;
pub mod kgamma;
pub mod quadrature;
pub mod series;
pub mod wright;

pub use error::{Error, Result};
pub use identities::{verify, IdentityId, IdentityParams, IdentityReport, Tolerances, Verdict};
pub use kbessel::{eval_gmk_bessel, eval_k_bessel_first, BesselParams};
pub use kgamma::{k_gamma, k_pochhammer, KScale};
pub use quadrature::{integrate_semi_infinite, QuadResult};
pub use series::SeriesResult;
pub use wright::{eval_k_wright, eval_pfq, eval_wright, WrightSpec};
