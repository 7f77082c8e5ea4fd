//! Large-N behaviour of the height: the limit constant `alpha(rho)`, the
//! bound constants, and numerical checks of the finite-N inequalities that
//! drive the limit theorems.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::{height_distribution, log_r_ratio, log_r_term, HeightDistribution};
use crate::model::ModelParams;
use crate::numeric::{ceil_candidates, floor_candidates, xlogx, Sum};
use crate::par;

/// Sizes below this are reported by the checks but not held to them.
pub const LARGE_N_THRESHOLD: usize = 1000;

const ALPHA_RESIDUAL_TOL: f64 = 1e-13;
const BRACKET_EPS: f64 = 1e-15;

/// `g(x) = x ln x + (1 - x) ln(1 - x) - x ln rho`; its root in `(rho, 1)` is alpha.
pub fn alpha_equation(x: f64, rho: f64) -> f64 {
    xlogx(x) + xlogx(1.0 - x) - x * rho.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaSolution {
    pub rho: f64,
    pub alpha: f64,
    pub residual: f64,
    pub iterations: u32,
    /// Final bracket; `g(lo) <= 0 <= g(hi)`.
    pub bracket: (f64, f64),
}

/// Root of `x^x (1-x)^(1-x) = rho^x` on `(rho, 1)` by bisection.
///
/// `g` is negative at `rho` and positive near 1; bisection runs until the
/// bracket cannot be split further, then returns whichever of the midpoint
/// and bracket ends has the smallest `|g|`.
pub fn solve_alpha(rho: f64) -> Result<AlphaSolution> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha is defined for 0 < rho < 1, got {rho}"
        )));
    }
    let g = |x: f64| alpha_equation(x, rho);
    let mut lo = rho + BRACKET_EPS;
    let mut hi = 1.0 - BRACKET_EPS;
    let (mut g_lo, mut g_hi) = (g(lo), g(hi));
    debug_assert!(g_lo < 0.0 && g_hi > 0.0);
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || iterations >= 200 {
            break;
        }
        iterations += 1;
        let g_mid = g(mid);
        if g_mid == 0.0 {
            lo = mid;
            hi = mid;
            g_lo = 0.0;
            g_hi = 0.0;
            break;
        }
        if g_mid < 0.0 {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let (alpha, residual) = [(lo, g_lo), (hi, g_hi), (mid, g(mid))]
        .into_iter()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap();
    if residual.abs() > ALPHA_RESIDUAL_TOL {
        return Err(Error::InvalidParameter(format!(
            "alpha bisection stalled with residual {residual:e} at rho = {rho}"
        )));
    }
    Ok(AlphaSolution {
        rho,
        alpha,
        residual,
        iterations,
        bracket: (lo, hi),
    })
}

/// Limit of `E(H_N)/N`: alpha(rho) below 1, exactly 1 from 1 on.
pub fn f_rho(rho: f64) -> Result<f64> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    if rho >= 1.0 {
        Ok(1.0)
    } else {
        Ok(solve_alpha(rho)?.alpha)
    }
}

/// Limit of `Var(H_N)/N`, `f(rho)^2 / rho`.
pub fn variance_limit(rho: f64) -> Result<f64> {
    let f = f_rho(rho)?;
    Ok(f * f / rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    pub rho: f64,
    pub alpha: f64,
    /// `2 / (ln alpha - ln(rho (1 - alpha)))`
    pub c1: f64,
    /// `3 / (ln alpha - ln rho)`
    pub c2: f64,
    /// `alpha (3 + rho) / rho^2`
    pub c3: f64,
}

impl BoundConstants {
    /// Peak location `[alpha (n - 1)]`.
    pub fn h(&self, n: usize) -> i64 {
        (self.alpha * (n as f64 - 1.0)).floor() as i64
    }

    fn h_candidates(&self, n: usize) -> Vec<i64> {
        floor_candidates(self.alpha * (n as f64 - 1.0))
    }
}

pub fn bound_constants(rho: f64) -> Result<BoundConstants> {
    let sol = solve_alpha(rho)?;
    let a = sol.alpha;
    Ok(BoundConstants {
        rho,
        alpha: a,
        c1: 2.0 / (a.ln() - (rho * (1.0 - a)).ln()),
        c2: 3.0 / (a.ln() - rho.ln()),
        c3: a * (3.0 + rho) / (rho * rho),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `r(h_n + [C1 ln n]) >= n^2 r(h_n)`
    RGrowthAbovePeak,
    /// `r(h_n - [C2 ln n]) <= n^-3 r(h_n)`
    RDecayBelowPeak,
    /// `E(H_N)` between `[alpha N] - [C2 ln N] - C3` and `[alpha N] + 1`
    /// (`N - 4` and `N` when `rho >= 1`).
    MeanSandwich,
    /// `P(H_N >= h_N + k) <= 1 / (k r(h_N))` for every `k >= 1`.
    TailBound,
    /// Mass of the `O(log N)` window around `h_N`.
    Concentration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of one inequality at one `(n, rho)`.
///
/// `value` must lie in `[lower, upper]` (missing sides are unbounded);
/// `margin` is the distance to the nearer bound, negative on failure.
/// Quantities involving `r` are on the log scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub id: BoundId,
    pub n: usize,
    pub rho: f64,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub margin: f64,
    pub status: CheckStatus,
}

impl BoundReport {
    fn evaluate(id: BoundId, n: usize, rho: f64, value: f64, lower: Option<f64>, upper: Option<f64>) -> Self {
        let margin = lower
            .map_or(f64::INFINITY, |lo| value - lo)
            .min(upper.map_or(f64::INFINITY, |hi| hi - value));
        let status = if margin >= 0.0 {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            id,
            n,
            rho,
            value,
            lower,
            upper,
            margin,
            status,
        }
    }

    fn not_applicable(id: BoundId, n: usize, rho: f64) -> Self {
        Self {
            id,
            n,
            rho,
            value: f64::NAN,
            lower: None,
            upper: None,
            margin: f64::NAN,
            status: CheckStatus::NotApplicable,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// How the `[C ln n]` offsets are rounded. `Floor` is the integer part used
/// by the inequalities as stated; `Ceil` is offered as a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OffsetRounding {
    #[default]
    Floor,
    Ceil,
}

impl OffsetRounding {
    fn candidates(self, x: f64) -> Vec<i64> {
        match self {
            OffsetRounding::Floor => floor_candidates(x),
            OffsetRounding::Ceil => ceil_candidates(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakBounds {
    pub growth: BoundReport,
    pub decay: BoundReport,
}

/// Growth of `r` above and decay below the peak `h_n`, evaluated in logs.
pub fn check_peak_bounds(n: usize, rho: f64) -> Result<PeakBounds> {
    check_peak_bounds_with(n, rho, OffsetRounding::Floor)
}

pub fn check_peak_bounds_with(n: usize, rho: f64, rounding: OffsetRounding) -> Result<PeakBounds> {
    check_peak_bounds_for(n, &bound_constants(rho)?, rounding)
}

/// As [`check_peak_bounds_with`] with caller-supplied constants.
pub fn check_peak_bounds_for(n: usize, c: &BoundConstants, rounding: OffsetRounding) -> Result<PeakBounds> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let rho = c.rho;
    let ln_n = (n as f64).ln();
    let top = n as i64 - 1;

    // Among floor candidates the check passes if any combination does.
    let best = |offsets: &[i64], sign: i64, id: BoundId, lower: Option<f64>, upper: Option<f64>| {
        let mut best: Option<BoundReport> = None;
        for &h in &c.h_candidates(n) {
            for &o in offsets {
                let idx = h + sign * o;
                if h < 0 || h > top || idx < 0 || idx > top {
                    continue;
                }
                let value = log_r_ratio(n, rho, h as usize, idx as usize).expect("index checked");
                let report = BoundReport::evaluate(id, n, rho, value, lower, upper);
                if best.as_ref().is_none_or(|b| report.margin > b.margin) {
                    best = Some(report);
                }
            }
        }
        best.unwrap_or_else(|| BoundReport::not_applicable(id, n, rho))
    };

    let growth = best(
        &rounding.candidates(c.c1 * ln_n),
        1,
        BoundId::RGrowthAbovePeak,
        Some(2.0 * ln_n),
        None,
    );
    let decay = best(
        &rounding.candidates(c.c2 * ln_n),
        -1,
        BoundId::RDecayBelowPeak,
        None,
        Some(-3.0 * ln_n),
    );
    Ok(PeakBounds { growth, decay })
}

/// Sandwich on `E(H_N)`; `mean` should come from [`height_distribution`]
/// for the same `(n, rho)`.
pub fn check_mean_sandwich(n: usize, rho: f64, mean: f64) -> Result<BoundReport> {
    if n == 0 || !(rho.is_finite() && rho > 0.0) {
        return Err(Error::InvalidParameter(format!("bad (N, rho) = ({n}, {rho})")));
    }
    let nf = n as f64;
    let report = |lo: f64, hi: f64| BoundReport::evaluate(BoundId::MeanSandwich, n, rho, mean, Some(lo), Some(hi));
    if rho >= 1.0 {
        return Ok(report(nf - 4.0, nf));
    }
    check_mean_sandwich_for(n, &bound_constants(rho)?, mean)
}

/// Sandwich for `rho < 1` with caller-supplied constants.
pub fn check_mean_sandwich_for(n: usize, c: &BoundConstants, mean: f64) -> Result<BoundReport> {
    let rho = c.rho;
    if n == 0 || !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!("bad (N, rho) = ({n}, {rho})")));
    }
    let nf = n as f64;
    let report = |lo: f64, hi: f64| BoundReport::evaluate(BoundId::MeanSandwich, n, rho, mean, Some(lo), Some(hi));
    let offsets = floor_candidates(c.c2 * nf.ln());
    let best = floor_candidates(c.alpha * nf)
        .into_iter()
        .flat_map(|peak| offsets.iter().map(move |&o| (peak, o)))
        .map(|(peak, o)| report(peak as f64 - o as f64 - c.c3, peak as f64 + 1.0))
        .max_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("at least one candidate");
    Ok(best)
}

/// `r_{rho,n}(h_n) / sqrt(n)`, which stays bounded away from 0 and infinity.
pub fn stirling_ratio(n: usize, rho: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let c = bound_constants(rho)?;
    let h = c.h(n).clamp(0, n as i64 - 1) as usize;
    Ok((log_r_term(n, rho, h)? - 0.5 * (n as f64).ln()).exp())
}

/// Worst case over `k` of `log P(H_N >= h_N + k) + log k + log r(h_N)`, which
/// must stay at or below 0.
pub fn check_tail_bound(d: &HeightDistribution) -> Result<BoundReport> {
    let c = bound_constants(d.rho)?;
    let n = d.n;
    let h = c.h(n);
    if h < 1 || h as usize >= n {
        return Ok(BoundReport::not_applicable(BoundId::TailBound, n, d.rho));
    }
    let h = h as usize;
    let log_r_h = d.log_r(h);
    let worst = (1..=n - h)
        .map(|k| d.log_survival[h + k - 1] + (k as f64).ln() + log_r_h)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundReport::evaluate(BoundId::TailBound, n, d.rho, worst, None, Some(0.0)))
}

/// `[h_N - ceil(C2 ln N) - ceil(C3), h_N + ceil(C1 ln N)]`.
pub fn concentration_window(n: usize, c: &BoundConstants) -> (i64, i64) {
    let ln_n = (n as f64).ln();
    let h = c.h(n);
    (
        h - (c.c2 * ln_n).ceil() as i64 - c.c3.ceil() as i64,
        h + (c.c1 * ln_n).ceil() as i64,
    )
}

/// Mass of [`concentration_window`] against
/// `1 - 2 (3 + rho) / ((N - 1) rho^2) - 2 / r(h_N)`.
pub fn check_concentration(d: &HeightDistribution) -> Result<BoundReport> {
    let c = bound_constants(d.rho)?;
    let n = d.n;
    let h = c.h(n);
    if n < 2 || h < 0 || h as usize >= n {
        return Ok(BoundReport::not_applicable(BoundId::Concentration, n, d.rho));
    }
    let (lo, hi) = concentration_window(n, &c);
    let rho = d.rho;
    let floor = 1.0 - 2.0 * (3.0 + rho) / ((n as f64 - 1.0) * rho * rho) - 2.0 * (-d.log_r(h as usize)).exp();
    Ok(BoundReport::evaluate(
        BoundId::Concentration,
        n,
        rho,
        d.mass_between(lo, hi),
        Some(floor),
        None,
    ))
}

/// `P(|H_N - E H_N| <= half_width * sd(H_N))`.
pub fn standardized_window_mass(d: &HeightDistribution, half_width: f64) -> f64 {
    let sd = d.variance.sqrt();
    d.pmf
        .iter()
        .enumerate()
        .filter(|(i, _)| ((*i + 1) as f64 - d.mean).abs() <= half_width * sd)
        .map(|(_, &m)| m)
        .collect::<Sum>()
        .value()
}

/// `P(|H_N / N - f| > eps)`.
pub fn deviation_prob(d: &HeightDistribution, f: f64, eps: f64) -> f64 {
    let n = d.n as f64;
    d.pmf
        .iter()
        .enumerate()
        .filter(|(i, _)| (((*i + 1) as f64) / n - f).abs() > eps)
        .map(|(_, &m)| m)
        .collect::<Sum>()
        .value()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub mean_over_n: f64,
    pub var_over_n: f64,
    pub f: f64,
    pub var_limit: f64,
    /// `|E(H_N)/N - f|`
    pub mean_gap: f64,
    /// `|Var(H_N)/N - f^2/rho| / (f^2/rho)`
    pub var_rel_gap: f64,
}

/// One row per `N` (ascending), computed in parallel when enabled.
pub fn convergence_table(rho: f64, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty N list".into()));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("N list must be strictly ascending".into()));
    }
    let f = f_rho(rho)?;
    let var_limit = f * f / rho;
    let params = ns
        .iter()
        .map(|&n| ModelParams::from_rho(n, rho))
        .collect::<Result<Vec<_>>>()?;
    Ok(par::map(&params, |p| {
        let d = height_distribution(p);
        let nf = p.n() as f64;
        let mean_over_n = d.mean / nf;
        let var_over_n = d.variance / nf;
        ConvergenceRow {
            n: p.n(),
            mean_over_n,
            var_over_n,
            f,
            var_limit,
            mean_gap: (mean_over_n - f).abs(),
            var_rel_gap: (var_over_n - var_limit).abs() / var_limit,
        }
    }))
}
