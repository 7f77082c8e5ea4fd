//! Closed-form law of the excursion height `H_N`.
//!
//! With `r(i) = rho^{-i} / C(N-1, i)`, the survival function is
//! `P(H_N >= k) = 1 / sum_{i<k} r(i)` for `k = 1..N`. The terms span hundreds
//! of orders of magnitude, so the float path works with logs throughout and
//! keeps a running log-sum-exp of the partial sums. A rational twin gives
//! exact values for small `N`.
//!
//! Vectors are indexed by height value minus one: entry `k - 1` belongs to
//! height `k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::error::{check_range, Error, Result};
use crate::model::ModelParams;
use crate::numeric::{log_add_exp, Sum};

/// `log r_{rho,n}(i) = -i log rho - log C(n-1, i)`.
pub fn log_r_term(n: usize, rho: f64, i: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    check_range("i", i, 0, n - 1)?;
    if i == 0 {
        return Ok(0.0);
    }
    Ok(-(i as f64) * rho.ln() - ln_binomial((n - 1) as u64, i as u64))
}

/// `log r(to) - log r(from)` as a sum of one-step log-ratios
/// `log(i / ((n - i) rho))`. More accurate than differencing two
/// [`log_r_term`] values when `n` is large and the indices are close.
pub fn log_r_ratio(n: usize, rho: f64, from: usize, to: usize) -> Result<f64> {
    check_range("from", from, 0, n.saturating_sub(1))?;
    check_range("to", to, 0, n.saturating_sub(1))?;
    let step = |i: usize| (i as f64 / ((n - i) as f64 * rho)).ln();
    let s: Sum = if to >= from {
        (from + 1..=to).map(step).collect()
    } else {
        (to + 1..=from).map(|i| -step(i)).collect()
    };
    Ok(s.value())
}

/// `P(H_N >= k)` for a single `k`, by log-sum-exp over `r(0..k)`.
pub fn survival(p: &ModelParams, k: usize) -> Result<f64> {
    check_range("k", k, 1, p.n())?;
    let mut acc = f64::NEG_INFINITY;
    for i in 0..k {
        acc = log_add_exp(acc, log_r_term(p.n(), p.rho(), i)?);
    }
    Ok((-acc).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightDistribution {
    pub n: usize,
    pub rho: f64,
    /// `log P(H_N >= k)` at index `k - 1`.
    pub log_survival: Vec<f64>,
    /// `P(H_N = k)` at index `k - 1`.
    pub pmf: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    /// `log r_{rho,N}(i)` for `i = 0..N`.
    #[serde(skip)]
    pub log_r: Vec<f64>,
}

impl HeightDistribution {
    pub fn survival(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else if k > self.n {
            0.0
        } else {
            self.log_survival[k - 1].exp()
        }
    }

    /// `P(H_N <= k)`.
    pub fn cdf(&self, k: usize) -> f64 {
        1.0 - self.survival(k + 1)
    }

    /// `P(lo <= H_N <= hi)`, clipped to the support.
    pub fn mass_between(&self, lo: i64, hi: i64) -> f64 {
        let lo = lo.max(1) as usize;
        let hi = hi.min(self.n as i64);
        if hi < lo as i64 {
            return 0.0;
        }
        (lo..=hi as usize).map(|k| self.pmf[k - 1]).collect::<Sum>().value()
    }

    /// `log r_{rho,N}(i)` from the stored sweep.
    pub fn log_r(&self, i: usize) -> f64 {
        self.log_r[i]
    }
}

/// Full distribution in one forward sweep.
///
/// `log r(i)` is advanced by the ratio `r(i)/r(i-1) = i / ((N-i) rho)` and the
/// partial sums by a running log-sum-exp, so the cost is O(N). The pmf uses
/// `P(H = k) = S(k) S(k+1) r(k)`, which follows from
/// `1/S(k+1) = 1/S(k) + r(k)`; it has no cancellation and is never negative.
pub fn height_distribution(p: &ModelParams) -> HeightDistribution {
    let n = p.n();
    let rho = p.rho();

    let mut log_r = Vec::with_capacity(n);
    let mut log_survival = Vec::with_capacity(n);
    // Compensated: |log r| reaches O(N) and the steps are O(1).
    let mut lr_sum = Sum::default();
    let mut acc = f64::NEG_INFINITY;
    for i in 0..n {
        if i > 0 {
            lr_sum.add((i as f64 / ((n - i) as f64 * rho)).ln());
        }
        let lr = lr_sum.value();
        log_r.push(lr);
        // S(i + 1) = 1 / sum_{j <= i} r(j); S(1) = 1 exactly
        if i == 0 {
            acc = 0.0;
            log_survival.push(0.0);
        } else {
            acc = log_add_exp(acc, lr);
            log_survival.push(-acc);
        }
    }

    let pmf: Vec<f64> = (1..=n)
        .map(|k| {
            if k == n {
                log_survival[n - 1].exp()
            } else {
                (log_survival[k - 1] + log_survival[k] + log_r[k]).exp()
            }
        })
        .collect();

    let (mean, variance) = moments_of(&log_survival, &pmf);
    HeightDistribution {
        n,
        rho,
        log_survival,
        pmf,
        mean,
        variance,
        log_r,
    }
}

fn moments_of(log_survival: &[f64], pmf: &[f64]) -> (f64, f64) {
    let mean = log_survival.iter().map(|l| l.exp()).collect::<Sum>().value();
    let variance = pmf
        .iter()
        .enumerate()
        .map(|(idx, &m)| {
            let d = (idx + 1) as f64 - mean;
            d * d * m
        })
        .collect::<Sum>()
        .value();
    (mean, variance)
}

/// Mean from the survival sum and variance from the centred second moment
/// over the pmf.
pub fn moments(d: &HeightDistribution) -> (f64, f64) {
    moments_of(&d.log_survival, &d.pmf)
}

/// How the pmf compares with `r(i)` and with `1/r(i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PmfBoundFinding {
    /// `P(H = i) <= r(i)` for every `1 <= i <= N - 1`.
    pub below_r: bool,
    /// `P(H = i) <= 1 / r(i)` for every `1 <= i <= N - 1`.
    pub below_inverse_r: bool,
    /// Largest `log P(H = i) - log r(i)`.
    pub worst_log_margin_r: f64,
    /// Largest `log P(H = i) + log r(i)`.
    pub worst_log_margin_inverse_r: f64,
}

pub fn pmf_bound_finding(d: &HeightDistribution) -> PmfBoundFinding {
    let mut worst_r = f64::NEG_INFINITY;
    let mut worst_inv = f64::NEG_INFINITY;
    for i in 1..d.n {
        // log P(H = i), kept in logs since deep-tail masses are subnormal
        let lp = d.log_survival[i - 1] + d.log_survival[i] + d.log_r[i];
        worst_r = worst_r.max(lp - d.log_r[i]);
        worst_inv = worst_inv.max(lp + d.log_r[i]);
    }
    PmfBoundFinding {
        below_r: worst_r <= 1e-12,
        below_inverse_r: worst_inv <= 1e-12,
        worst_log_margin_r: worst_r,
        worst_log_margin_inverse_r: worst_inv,
    }
}

/// Limits on the exact-rational path.
#[derive(Debug, Clone, Copy)]
pub struct RationalLimits {
    pub max_n: usize,
    /// Abort when a partial sum's numerator or denominator exceeds this many bits.
    pub max_bits: u64,
}

impl Default for RationalLimits {
    fn default() -> Self {
        Self {
            max_n: 500,
            max_bits: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RationalHeightDistribution {
    pub survival: Vec<BigRational>,
    pub pmf: Vec<BigRational>,
    pub mean: BigRational,
    pub variance: BigRational,
}

pub fn exact_rational_distribution(
    n: usize,
    rho_num: u64,
    rho_den: u64,
) -> Result<RationalHeightDistribution> {
    exact_rational_distribution_with(n, rho_num, rho_den, RationalLimits::default())
}

pub fn exact_rational_distribution_with(
    n: usize,
    rho_num: u64,
    rho_den: u64,
    limits: RationalLimits,
) -> Result<RationalHeightDistribution> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if rho_num == 0 || rho_den == 0 {
        return Err(Error::InvalidParameter(
            "rho numerator and denominator must be positive".into(),
        ));
    }
    if n > limits.max_n {
        return Err(Error::Capacity(format!(
            "exact rational path is capped at N = {} (got {n})",
            limits.max_n
        )));
    }

    let num = BigInt::from(rho_num);
    let den = BigInt::from(rho_den);
    let mut r = BigRational::one();
    let mut partial = BigRational::one();
    let mut survival = Vec::with_capacity(n);
    survival.push(BigRational::one());
    for i in 1..n {
        // r(i) = r(i-1) * i / ((n - i) rho)
        r *= BigRational::new(BigInt::from(i) * &den, BigInt::from(n - i) * &num);
        partial += &r;
        let bits = partial.numer().bits().max(partial.denom().bits());
        if bits > limits.max_bits {
            return Err(Error::Capacity(format!(
                "rational partial sum reached {bits} bits at i = {i}"
            )));
        }
        // S(i + 1) = 1 / sum_{j <= i} r(j)
        survival.push(partial.recip());
    }

    let pmf: Vec<BigRational> = (0..n)
        .map(|idx| match survival.get(idx + 1) {
            Some(next) => &survival[idx] - next,
            None => survival[idx].clone(),
        })
        .collect();
    // E(H) = sum_k S(k) and E(H^2) = sum_k (2k - 1) S(k), accumulated without
    // intermediate gcd reductions; Var = E(H^2) - E(H)^2 is exact here.
    let mut first = UnreducedSum::default();
    let mut second = UnreducedSum::default();
    for (idx, s) in survival.iter().enumerate() {
        first.add(s, 1);
        second.add(s, 2 * idx as u64 + 1);
    }
    let mean = first.finish();
    let variance = second.finish() - &mean * &mean;
    Ok(RationalHeightDistribution {
        survival,
        pmf,
        mean,
        variance,
    })
}

#[derive(Debug)]
struct UnreducedSum {
    num: BigInt,
    den: BigInt,
}

impl Default for UnreducedSum {
    fn default() -> Self {
        Self {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }
}

impl UnreducedSum {
    fn add(&mut self, x: &BigRational, weight: u64) {
        self.num = &self.num * x.denom() + x.numer() * &self.den * BigInt::from(weight);
        self.den *= x.denom();
    }

    fn finish(self) -> BigRational {
        BigRational::new(self.num, self.den)
    }
}

/// Lossy conversion used when comparing against the float path.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
