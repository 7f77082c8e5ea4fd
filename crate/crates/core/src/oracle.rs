//! First-passage ground truth for the height law.
//!
//! `H_N >= k` exactly when the jump chain started at 1 reaches `k` before 0.
//! That hitting probability solves a tridiagonal boundary-value problem,
//! which is eliminated here directly from the jump probabilities. Nothing in
//! this module uses the closed-form sums of [`crate::exactdist`]; keep it
//! that way, the two are compared against each other.

use crate::error::{check_range, Error, Result};
use crate::model::{down_unchecked, up_unchecked, ModelParams};

/// Hitting system for target level `k`: `h[0] = 0`, `h[k] = 1` and
/// `h[i] = p_i h[i+1] + q_i h[i-1]` for `0 < i < k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstPassageSystem {
    pub k: usize,
    /// Up-probabilities, index `i` for state `i` (`0..=k`).
    pub up: Vec<f64>,
    pub down: Vec<f64>,
    /// `h[i] = P(reach k before 0 | start at i)`.
    pub h: Vec<f64>,
}

impl FirstPassageSystem {
    /// Largest absolute residual over the interior equations.
    pub fn max_residual(&self) -> f64 {
        (1..self.k)
            .map(|i| (self.h[i] - self.up[i] * self.h[i + 1] - self.down[i] * self.h[i - 1]).abs())
            .fold(0.0, f64::max)
    }
}

/// Forward elimination coefficients.
///
/// Eliminating `h[i-1]` leaves `h[i] = c_i h[i+1]` with
/// `c_i = p_i / (p_i + q_i e_{i-1})` and `e_i = 1 - c_i = q_i e_{i-1} / (p_i + q_i e_{i-1})`,
/// starting from `e_0 = 1` (`h[0] = 0`). Tracking `e` rather than forming
/// `1 - q_i c_{i-1}` keeps every operation free of cancellation.
/// `c_i` is also `P(reach i+1 before 0 | start at i)`.
fn elimination(p: &ModelParams, top: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(top + 1);
    c.push(0.0);
    let mut e = 1.0;
    for i in 1..=top {
        let up = up_unchecked(p, i);
        let down = down_unchecked(p, i);
        let denom = up + down * e;
        c.push(up / denom);
        e = down * e / denom;
    }
    c
}

pub fn solve_first_passage(p: &ModelParams, k: usize) -> Result<FirstPassageSystem> {
    check_range("k", k, 1, p.n())?;
    let up: Vec<f64> = (0..=k).map(|i| up_unchecked(p, i)).collect();
    let down: Vec<f64> = (0..=k).map(|i| down_unchecked(p, i)).collect();
    let c = elimination(p, k - 1);
    let mut h = vec![0.0; k + 1];
    h[k] = 1.0;
    for i in (1..k).rev() {
        h[i] = c[i] * h[i + 1];
    }
    Ok(FirstPassageSystem { k, up, down, h })
}

/// `P(H_N >= k)` as the probability of reaching `k` before 0 from state 1.
pub fn first_passage_prob(p: &ModelParams, k: usize) -> Result<f64> {
    Ok(solve_first_passage(p, k)?.h[1])
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    pub max_n: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_n: 2000 }
    }
}

/// Survival function `P(H_N >= k)`, `k = 1..N`, from one elimination sweep:
/// `h_k[1] = c_1 c_2 ... c_{k-1}` because the coefficients do not depend on `k`.
pub fn height_dist_oracle(p: &ModelParams) -> Result<Vec<f64>> {
    height_dist_oracle_with(p, OracleConfig::default())
}

pub fn height_dist_oracle_with(p: &ModelParams, cfg: OracleConfig) -> Result<Vec<f64>> {
    if p.n() > cfg.max_n {
        return Err(Error::Capacity(format!(
            "oracle is capped at N = {} (got {})",
            cfg.max_n,
            p.n()
        )));
    }
    let c = elimination(p, p.n() - 1);
    let mut log_h = 0.0;
    let mut out = Vec::with_capacity(p.n());
    out.push(1.0);
    for &ci in &c[1..] {
        log_h += ci.ln();
        out.push(log_h.exp());
    }
    Ok(out)
}

/// Level-crossing probabilities `c_m = P(reach m+1 before 0 | start at m)`
/// for `m = 0..N-1` (`c_0` is unused and set to 0).
pub fn ladder_probs(p: &ModelParams) -> Vec<f64> {
    elimination(p, p.n() - 1)
}
