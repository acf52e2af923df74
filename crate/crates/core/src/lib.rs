//! A laboratory for path-following interior-point methods on inequality
//! form linear programs `min c'x : Ax <= b`.
//!
//! The pieces fit together in layers:
//!
//! - [`lp`]: instances, slacks, gaps, and the worst-case generator
//!   [`lp::generate_lw`];
//! - [`barrier`]: log and weighted-log barriers with exact derivatives,
//!   Dikin ellipsoids, and self-concordance spot checks;
//! - [`centering`]: damped Newton centering, central-path tracing, and a
//!   small path-following solver;
//! - [`shortstep`]: the short-step method with its per-step certificates;
//! - [`neighborhood`]: l2 neighborhood membership in closed form, gap
//!   matching between two barriers' paths, and wide-neighborhood
//!   certificates;
//! - [`oracle`]: exact vertex enumeration and the Chebyshev-center LP,
//!   used to cross-check everything else;
//! - [`verify`]: the numbered verification suites the CLI exposes;
//! - [`io`]: interchange JSON, CSV traces, and run manifests.
//!
//! Everything randomized takes an explicit seed and defaults to
//! [`DEFAULT_SEED`], so runs reproduce bit for bit.

// Validation here deliberately writes `!(x > 0.0)` rather than
// `x <= 0.0`: the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod centering;
pub mod error;
pub mod io;
pub mod lp;
pub mod neighborhood;
pub mod oracle;
pub mod shortstep;
pub mod verify;

pub use barrier::{Barrier, BarrierEval, BarrierSpec};
pub use centering::{
    analytic_center, center, solve_lp, trace_path, CenterOptions, CenteringResult, CentralPath,
    Mu, SolveResult,
};
pub use error::{Error, Result};
pub use lp::{generate_lw, LinearProgram, LwParams};
pub use neighborhood::{beta, l2_membership, match_eta, MuInterval, WideCertificate};
pub use oracle::min_value_oracle;
pub use shortstep::{short_step, ShortStepOptions, ShortStepRun, Termination};
pub use verify::{BoundCheck, Report};

/// Seed used by every randomized routine unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 20240901;
