//! Busy-period height of the mean-field birth-and-death chain on `{0, ..., N}`.
//!
//! The chain jumps up at rate `(N - i) nu` and down at rate `i mu`; an
//! excursion starts at state 1 and ends on hitting 0, and its height `H_N` is
//! the largest state visited. This crate computes the law of `H_N` exactly
//! (log-domain floats and exact rationals), checks it against an independent
//! first-passage solve and a Monte Carlo sampler, and evaluates the large-`N`
//! limits and finite-`N` bounds for `E(H_N)` and `Var(H_N)`.
//!
//! Module dependencies: `oracle` uses only `model`, never `exactdist`.

pub mod asymptotics;
pub mod error;
pub mod exactdist;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod par;
pub mod simulate;

pub use asymptotics::{
    bound_constants, check_concentration, check_mean_sandwich, check_mean_sandwich_for, check_peak_bounds,
    check_peak_bounds_for, check_peak_bounds_with,
    check_tail_bound, convergence_table, f_rho, solve_alpha, stirling_ratio, variance_limit, AlphaSolution,
    BoundConstants, BoundId, BoundReport, CheckStatus, ConvergenceRow, OffsetRounding, PeakBounds,
};
pub use error::{Error, Result};
pub use exactdist::{
    exact_rational_distribution, height_distribution, log_r_term, moments, survival, HeightDistribution,
    RationalHeightDistribution,
};
pub use model::{jump_down_prob, jump_up_prob, make_params, stationary_pmf, ModelParams, StationaryLaw};
pub use oracle::{first_passage_prob, height_dist_oracle};
pub use par::Execution;
pub use simulate::{run_batch, run_batch_with, SimulationConfig, SimulationMode, SimulationSummary};
