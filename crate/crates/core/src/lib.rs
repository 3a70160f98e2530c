//! Discrete-stable and casual-stable distributions.
//!
//! * [`transforms`]: p.g.f.s, thinning maps `Q_p`, Laplace transforms and the
//!   casual normalizers `g_n`.
//! * [`extract`]: probability masses by discrete Fourier inversion, with a
//!   certified error bound.
//! * [`samplers`]: exact seed-deterministic samplers.
//! * [`stability`]: residual checkers for the stability equations and the
//!   thinning semigroups.
//! * [`citation`]: the publication/citation field model.
//! * [`convergence`]: transform-domain harness for the limit theorem.
//!
//! Signed variables (characteristic-function stability) and ν-stability are
//! not covered.

// `!(x > 0.0)` is the NaN-rejecting guard used throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod citation;
pub mod cmath;
pub mod convergence;
pub mod error;
pub mod extract;
pub mod grid;
pub mod samplers;
pub mod stability;
pub mod stats;
pub mod transforms;

pub use error::{Error, Result};
pub use extract::{extract_pmf, validate_pgf, ExtractOptions, PgfValidation, PmfTable};
pub use grid::{GridSpec, ResidualReport};
pub use samplers::Seed;
pub use transforms::{gfun_eval, laplace_eval, pgf_eval, thinning_eval, LaplaceFamily, PgfFamily, ThinningFamily};
