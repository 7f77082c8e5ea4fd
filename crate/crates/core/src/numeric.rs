//! Small numeric helpers shared by the distribution and sampler code.

/// `log(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sum {
    sum: f64,
    comp: f64,
}

impl Sum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Sum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Sum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `x ln x`, extended by continuity to 0 at `x = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Integer part of `x`. When `x` is within `1e-9` of an integer `m` both
/// `m - 1` and `m` are returned, since a rounding error in `x` could move
/// the floor across `m`.
pub fn floor_candidates(x: f64) -> Vec<i64> {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 {
        let m = nearest as i64;
        vec![m - 1, m]
    } else {
        vec![x.floor() as i64]
    }
}

/// Counterpart of [`floor_candidates`] for the ceiling.
pub fn ceil_candidates(x: f64) -> Vec<i64> {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 {
        let m = nearest as i64;
        vec![m, m + 1]
    } else {
        vec![x.ceil() as i64]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_handles_extremes() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
        assert!((log_add_exp(0.0, 0.0) - 2f64.ln()).abs() < 1e-16);
        assert_eq!(log_add_exp(1000.0, -1000.0), 1000.0);
        assert!((log_add_exp(-800.0, -800.0) - (-800.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum() {
        let s: Sum = std::iter::once(1.0)
            .chain(std::iter::repeat_n(1e-16, 1000))
            .collect();
        assert!((s.value() - (1.0 + 1e-13)).abs() < 1e-18);
    }

    #[test]
    fn floor_guard() {
        assert_eq!(floor_candidates(2.5), vec![2]);
        assert_eq!(floor_candidates(3.0 - 1e-12), vec![2, 3]);
        assert_eq!(floor_candidates(3.0), vec![2, 3]);
        assert_eq!(ceil_candidates(3.0 + 1e-12), vec![3, 4]);
        assert_eq!(ceil_candidates(3.2), vec![4]);
        assert_eq!(xlogx(0.0), 0.0);
    }
}
