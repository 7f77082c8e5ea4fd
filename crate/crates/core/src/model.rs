//! The birth-and-death chain on `{0, ..., N}`.
//!
//! At state `i` the chain jumps up with rate `(N - i) * nu` and down with
//! rate `i * mu`. States are 0-based throughout the crate.

use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::numeric::Sum;

/// Validated chain parameters.
///
/// `rho` is always `nu / mu`. Built with [`ModelParams::from_rho`] it is
/// stored exactly as given (`nu = rho`, `mu = 1`); built from two rates it
/// is the correctly rounded quotient, i.e. it carries one floating rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n: usize,
    nu: f64,
    mu: f64,
    rho: f64,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

impl ModelParams {
    pub fn new(n: usize, nu: f64, mu: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        positive("nu", nu)?;
        positive("mu", mu)?;
        let rho = nu / mu;
        positive("rho = nu/mu", rho)?;
        Ok(Self { n, nu, mu, rho })
    }

    pub fn from_rho(n: usize, rho: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        positive("rho", rho)?;
        Ok(Self {
            n,
            nu: rho,
            mu: 1.0,
            rho,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Birth rate `(N - i) nu` at state `i`.
    pub fn birth_rate(&self, i: usize) -> f64 {
        (self.n - i) as f64 * self.nu
    }

    /// Death rate `i mu` at state `i`.
    pub fn death_rate(&self, i: usize) -> f64 {
        i as f64 * self.mu
    }

    /// Total exit rate `i mu + (N - i) nu`, the negated diagonal of the Q-matrix.
    pub fn exit_rate(&self, i: usize) -> f64 {
        self.birth_rate(i) + self.death_rate(i)
    }
}

/// Make validated params from `(N, nu, mu)`.
pub fn make_params(n: usize, nu: f64, mu: f64) -> Result<ModelParams> {
    ModelParams::new(n, nu, mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryLaw {
    pub probs: Vec<f64>,
}

/// Stationary law `pi_k = C(N, k) rho^k / (1 + rho)^N`, i.e. Binomial(N, rho/(1+rho)).
///
/// Evaluated in the log domain so that it stays finite for N in the millions.
pub fn stationary_pmf(p: &ModelParams) -> StationaryLaw {
    let n = p.n();
    let log_rho = p.rho().ln();
    let log_norm = n as f64 * p.rho().ln_1p();
    let mut log_binom = Sum::default();
    let mut probs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            log_binom.add(((n - k + 1) as f64 / k as f64).ln());
        }
        probs.push((log_binom.value() + k as f64 * log_rho - log_norm).exp());
    }
    StationaryLaw { probs }
}

/// Probability that the jump chain steps from `i` to `i + 1`.
///
/// Row `i` of the jump matrix: 1 at `i = 0`, 0 at `i = N`, otherwise
/// `(N - i) rho / (i + (N - i) rho)`.
pub fn jump_up_prob(p: &ModelParams, i: usize) -> Result<f64> {
    check_range("state", i, 0, p.n())?;
    Ok(up_unchecked(p, i))
}

/// Complement of [`jump_up_prob`], computed directly rather than as `1 - up`.
pub fn jump_down_prob(p: &ModelParams, i: usize) -> Result<f64> {
    check_range("state", i, 0, p.n())?;
    Ok(down_unchecked(p, i))
}

pub(crate) fn up_unchecked(p: &ModelParams, i: usize) -> f64 {
    let n = p.n();
    if i == 0 {
        1.0
    } else if i == n {
        0.0
    } else {
        let up = (n - i) as f64 * p.rho();
        up / (i as f64 + up)
    }
}

pub(crate) fn down_unchecked(p: &ModelParams, i: usize) -> f64 {
    let n = p.n();
    if i == 0 {
        0.0
    } else if i == n {
        1.0
    } else {
        let up = (n - i) as f64 * p.rho();
        i as f64 / (i as f64 + up)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rho_is_rate_ratio() {
        assert_eq!(make_params(2, 1.0, 1.0).unwrap().rho(), 1.0);
        assert_eq!(make_params(10, 1.0, 2.0).unwrap().rho(), 0.5);
        let p = ModelParams::from_rho(7, 0.3).unwrap();
        assert_eq!((p.nu(), p.mu(), p.rho()), (0.3, 1.0, 0.3));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(make_params(0, 1.0, 1.0), Err(Error::InvalidParameter(_))));
        assert!(make_params(3, 0.0, 1.0).is_err());
        assert!(make_params(3, 1.0, -1.0).is_err());
        assert!(make_params(3, f64::NAN, 1.0).is_err());
        assert!(make_params(3, 1.0, f64::INFINITY).is_err());
        assert!(ModelParams::from_rho(3, 0.0).is_err());
        assert!(ModelParams::from_rho(0, 1.0).is_err());
    }

    #[test]
    fn stationary_small_cases() {
        let law = stationary_pmf(&ModelParams::from_rho(1, 1.0).unwrap());
        assert_eq!(law.probs, vec![0.5, 0.5]);
        let law = stationary_pmf(&ModelParams::from_rho(2, 1.0).unwrap());
        for (a, b) in law.probs.iter().zip([0.25, 0.5, 0.25]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn stationary_matches_binomial() {
        use statrs::distribution::{Binomial, Discrete};
        for &rho in &[0.1, 0.5, 1.0, 2.0, 7.5] {
            for n in 1..=30 {
                let law = stationary_pmf(&ModelParams::from_rho(n, rho).unwrap());
                let b = Binomial::new(rho / (1.0 + rho), n as u64).unwrap();
                let total: f64 = law.probs.iter().sum();
                assert!((total - 1.0).abs() < 1e-12);
                for (k, &pk) in law.probs.iter().enumerate() {
                    assert!(pk > 0.0);
                    let expect = b.pmf(k as u64);
                    assert!((pk - expect).abs() <= 1e-12 * expect.max(1e-300), "{n} {rho} {k}");
                }
            }
        }
    }

    #[test]
    fn stationary_large_n_normalized() {
        let law = stationary_pmf(&ModelParams::from_rho(1_000_000, 0.5).unwrap());
        let total: f64 = law.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn detailed_balance() {
        for &rho in &[0.2, 1.0, 3.0] {
            let p = make_params(40, rho, 1.0).unwrap();
            let law = stationary_pmf(&p);
            for i in 0..p.n() {
                let lhs = law.probs[i] * p.birth_rate(i);
                let rhs = law.probs[i + 1] * p.death_rate(i + 1);
                assert!((lhs - rhs).abs() <= 1e-12 * lhs, "{rho} {i}");
            }
        }
    }

    #[test]
    fn jump_probabilities_at_boundaries() {
        let p = ModelParams::from_rho(2, 1.0).unwrap();
        assert_eq!(jump_up_prob(&p, 0).unwrap(), 1.0);
        assert_eq!(jump_up_prob(&p, 2).unwrap(), 0.0);
        assert_eq!(jump_up_prob(&p, 1).unwrap(), 0.5);
        assert_eq!(jump_down_prob(&p, 2).unwrap(), 1.0);
        assert!(matches!(jump_up_prob(&p, 3), Err(Error::OutOfRange { .. })));
    }

    proptest! {
        #[test]
        fn jump_up_strictly_decreasing(n in 1usize..400, rho in 0.01f64..20.0) {
            let p = ModelParams::from_rho(n, rho).unwrap();
            for i in 0..n {
                let a = jump_up_prob(&p, i).unwrap();
                let b = jump_up_prob(&p, i + 1).unwrap();
                prop_assert!(a > b);
                let d = jump_down_prob(&p, i).unwrap();
                prop_assert!((a + d - 1.0).abs() <= 1e-15);
            }
        }
    }
}
