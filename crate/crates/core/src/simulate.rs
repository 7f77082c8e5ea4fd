//! Monte Carlo sampling of excursion heights.
//!
//! Three samplers, all started from state 1 (every excursion enters the
//! positive states there):
//!
//! * `JumpChain` walks the embedded jump chain step by step until it hits 0
//!   (or reaches `N`, after which the height is known).
//! * `FullCtmc` additionally draws exponential holding times, so it also
//!   records the busy-period duration. It must run to absorption.
//! * `Ladder` draws the level crossings directly: having just reached a new
//!   maximum `m`, the excursion reaches `m + 1` before 0 with probability
//!   `c_m` from [`oracle::ladder_probs`]. By the strong Markov property this
//!   has the exact height law, and its cost is O(height) per sample.
//!
//! The walks need on the order of `(1 + rho)^N` steps per excursion, so they
//! are only usable for small `N`; `Ladder` is the default.
//!
//! Random numbers come from ChaCha8 streams, one per block of
//! [`BLOCK_SIZE`] samples, keyed by `(seed, block index)`. The thread count
//! only decides which thread runs a block, so results do not depend on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactdist::height_distribution;
use crate::model::{up_unchecked, ModelParams};
use crate::numeric::Sum;
use crate::oracle;
use crate::par::{self, Execution};

pub const BLOCK_SIZE: u64 = 1024;
pub const DEFAULT_MAX_STEPS: u64 = 10_000_000_000;
pub const DEFAULT_DKW_DELTA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimulationMode {
    #[default]
    Ladder,
    JumpChain,
    FullCtmc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub params: ModelParams,
    pub n_samples: u64,
    pub seed: u64,
    pub mode: SimulationMode,
    pub worker_count: usize,
    pub dkw_delta: f64,
    /// Per-excursion step budget for the walking samplers.
    pub max_steps: u64,
}

impl SimulationConfig {
    pub fn new(params: ModelParams, n_samples: u64, seed: u64) -> Self {
        Self {
            params,
            n_samples,
            seed,
            mode: SimulationMode::default(),
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            dkw_delta: DEFAULT_DKW_DELTA,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn mode(mut self, mode: SimulationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.worker_count = workers;
        self
    }

    pub fn dkw_delta(mut self, delta: f64) -> Self {
        self.dkw_delta = delta;
        self
    }

    pub fn max_steps(mut self, steps: u64) -> Self {
        self.max_steps = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        if self.worker_count == 0 {
            return Err(Error::InvalidParameter("worker_count must be at least 1".into()));
        }
        if !(self.dkw_delta > 0.0 && self.dkw_delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "DKW delta must lie in (0, 1), got {}",
                self.dkw_delta
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// One simulated excursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excursion {
    pub height: usize,
    /// Jumps taken (walks) or level draws (ladder).
    pub steps: u64,
    /// Busy-period length in the rate units of the params (`FullCtmc` only).
    pub duration: Option<f64>,
}

/// Height of one excursion by walking the jump chain, with the default step budget.
pub fn sample_height<R: Rng + ?Sized>(p: &ModelParams, rng: &mut R) -> Result<usize> {
    Ok(walk_jump_chain(p, rng, DEFAULT_MAX_STEPS)?.height)
}

/// `(height, busy duration)` of one excursion of the continuous-time chain.
pub fn sample_excursion_ctmc<R: Rng + ?Sized>(p: &ModelParams, rng: &mut R) -> Result<(usize, f64)> {
    let e = walk_ctmc(p, rng, DEFAULT_MAX_STEPS)?;
    Ok((e.height, e.duration.unwrap_or(0.0)))
}

pub fn walk_jump_chain<R: Rng + ?Sized>(p: &ModelParams, rng: &mut R, max_steps: u64) -> Result<Excursion> {
    let up: Vec<f64> = (0..=p.n()).map(|i| up_unchecked(p, i)).collect();
    walk_with_table(&up, rng, max_steps)
}

fn walk_with_table<R: Rng + ?Sized>(up: &[f64], rng: &mut R, max_steps: u64) -> Result<Excursion> {
    let n = up.len() - 1;
    let mut state = 1;
    let mut max = 1;
    let mut steps = 0u64;
    // Once the walk touches N the height is N, whatever happens afterwards.
    while state != 0 && max != n {
        if steps == max_steps {
            return Err(Error::CircuitBreaker { steps, completed: 0 });
        }
        steps += 1;
        if rng.random::<f64>() < up[state] {
            state += 1;
            max = max.max(state);
        } else {
            state -= 1;
        }
    }
    Ok(Excursion {
        height: max,
        steps,
        duration: None,
    })
}

pub fn walk_ctmc<R: Rng + ?Sized>(p: &ModelParams, rng: &mut R, max_steps: u64) -> Result<Excursion> {
    let tables = CtmcTables::new(p);
    tables.walk(rng, max_steps)
}

struct CtmcTables {
    up: Vec<f64>,
    rate: Vec<f64>,
}

impl CtmcTables {
    fn new(p: &ModelParams) -> Self {
        Self {
            up: (0..=p.n()).map(|i| up_unchecked(p, i)).collect(),
            rate: (0..=p.n()).map(|i| p.exit_rate(i)).collect(),
        }
    }

    fn walk<R: Rng + ?Sized>(&self, rng: &mut R, max_steps: u64) -> Result<Excursion> {
        let mut state = 1;
        let mut max = 1;
        let mut steps = 0u64;
        let mut duration = 0.0;
        while state != 0 {
            if steps == max_steps {
                return Err(Error::CircuitBreaker { steps, completed: 0 });
            }
            steps += 1;
            let hold: f64 = Exp1.sample(rng);
            duration += hold / self.rate[state];
            if rng.random::<f64>() < self.up[state] {
                state += 1;
                max = max.max(state);
            } else {
                state -= 1;
            }
        }
        Ok(Excursion {
            height: max,
            steps,
            duration: Some(duration),
        })
    }
}

/// Exact sampler over level crossings.
#[derive(Debug, Clone)]
pub struct LadderSampler {
    /// `c[m] = P(reach m+1 before 0 | at m)`, `m = 0..N-1`.
    cross: Vec<f64>,
}

impl LadderSampler {
    pub fn new(p: &ModelParams) -> Self {
        Self {
            cross: oracle::ladder_probs(p),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Excursion {
        let n = self.cross.len();
        let mut m = 1;
        let mut steps = 0;
        while m < n {
            steps += 1;
            if rng.random::<f64>() < self.cross[m] {
                m += 1;
            } else {
                break;
            }
        }
        Excursion {
            height: m,
            steps,
            duration: None,
        }
    }
}

enum Sampler {
    Ladder(LadderSampler),
    Walk(Vec<f64>),
    Ctmc(CtmcTables),
}

impl Sampler {
    fn new(p: &ModelParams, mode: SimulationMode) -> Self {
        match mode {
            SimulationMode::Ladder => Sampler::Ladder(LadderSampler::new(p)),
            SimulationMode::JumpChain => Sampler::Walk((0..=p.n()).map(|i| up_unchecked(p, i)).collect()),
            SimulationMode::FullCtmc => Sampler::Ctmc(CtmcTables::new(p)),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, max_steps: u64) -> Result<Excursion> {
        match self {
            Sampler::Ladder(s) => Ok(s.sample(rng)),
            Sampler::Walk(up) => walk_with_table(up, rng, max_steps),
            Sampler::Ctmc(t) => t.walk(rng, max_steps),
        }
    }
}

/// RNG for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

#[derive(Debug, Clone)]
struct Tally {
    counts: Vec<u64>,
    /// Per-block duration sums, merged in block order afterwards.
    durations: Vec<(u64, f64)>,
    steps: u64,
    completed: u64,
    /// Earliest failing block and the samples it finished before failing.
    failure: Option<(u64, u64)>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Self {
            counts: vec![0; n],
            durations: Vec::new(),
            steps: 0,
            completed: 0,
            failure: None,
        }
    }

    fn run_block(mut self, block: u64, cfg: &SimulationConfig, sampler: &Sampler) -> Self {
        let start = block * BLOCK_SIZE;
        let end = (start + BLOCK_SIZE).min(cfg.n_samples);
        let mut rng = block_rng(cfg.seed, block);
        let mut duration = Sum::default();
        for done in 0..end - start {
            match sampler.draw(&mut rng, cfg.max_steps) {
                Ok(e) => {
                    self.counts[e.height - 1] += 1;
                    self.steps += e.steps;
                    self.completed += 1;
                    if let Some(d) = e.duration {
                        duration.add(d);
                    }
                }
                Err(_) => {
                    self.note_failure(block, done);
                    return self;
                }
            }
        }
        if cfg.mode == SimulationMode::FullCtmc {
            self.durations.push((block, duration.value()));
        }
        self
    }

    fn note_failure(&mut self, block: u64, done: u64) {
        if self.failure.is_none_or(|(b, _)| block < b) {
            self.failure = Some((block, done));
        }
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Tally) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.durations.extend(other.durations);
        self.steps += other.steps;
        self.completed += other.completed;
        if let Some((b, done)) = other.failure {
            self.note_failure(b, done);
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub n: usize,
    pub rho: f64,
    pub mode: SimulationMode,
    pub seed: u64,
    pub n_samples: u64,
    /// Height counts at index `k - 1`.
    pub counts: Vec<u64>,
    pub empirical_pmf: Vec<f64>,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    /// `sup_k |ecdf(k) - cdf(k)|` against the closed-form law.
    pub sup_distance: f64,
    pub dkw_delta: f64,
    pub dkw_epsilon: f64,
    pub dkw_pass: bool,
    /// Mean busy-period length (`FullCtmc` only).
    pub mean_busy_duration: Option<f64>,
    pub total_steps: u64,
}

impl SimulationSummary {
    /// Fraction of samples with `lo <= H <= hi`.
    pub fn window_frequency(&self, lo: i64, hi: i64) -> f64 {
        let lo = lo.max(1) as usize;
        let hi = hi.min(self.n as i64);
        if hi < lo as i64 {
            return 0.0;
        }
        let hits: u64 = self.counts[lo - 1..hi as usize].iter().sum();
        hits as f64 / self.n_samples as f64
    }
}

/// Half-width of the DKW band: `sqrt(ln(2/delta) / (2 n))`.
pub fn dkw_epsilon(n_samples: u64, delta: f64) -> f64 {
    ((2.0 / delta).ln() / (2.0 * n_samples as f64)).sqrt()
}

/// `sup_k |ecdf(k) - cdf(k)|` with `cdf(k) = P(H <= k)`.
pub fn ecdf_sup_distance(counts: &[u64], cdf: impl Fn(usize) -> f64) -> f64 {
    let total: u64 = counts.iter().sum();
    let mut below = 0u64;
    let mut sup = 0.0f64;
    for (idx, &c) in counts.iter().enumerate() {
        below += c;
        let ecdf = below as f64 / total as f64;
        sup = sup.max((ecdf - cdf(idx + 1)).abs());
    }
    sup
}

/// Two-sample Kolmogorov distance between height count vectors of equal length.
pub fn two_sample_sup_distance(a: &[u64], b: &[u64]) -> f64 {
    let (na, nb): (u64, u64) = (a.iter().sum(), b.iter().sum());
    let (mut ca, mut cb) = (0u64, 0u64);
    let mut sup = 0.0f64;
    for (&x, &y) in a.iter().zip(b) {
        ca += x;
        cb += y;
        sup = sup.max((ca as f64 / na as f64 - cb as f64 / nb as f64).abs());
    }
    sup
}

/// Run a batch with rayon when the `parallel` feature is on.
pub fn run_batch(cfg: &SimulationConfig) -> Result<SimulationSummary> {
    run_batch_with(cfg, Execution::Parallel)
}

pub fn run_batch_with(cfg: &SimulationConfig, exec: Execution) -> Result<SimulationSummary> {
    cfg.validate()?;
    let p = cfg.params;
    let n = p.n();
    let sampler = Sampler::new(&p, cfg.mode);
    let n_blocks = cfg.n_samples.div_ceil(BLOCK_SIZE);

    let tally = par::with_workers(cfg.worker_count, exec, || collect_blocks(n_blocks, n, cfg, &sampler, exec));

    if let Some((block, done)) = tally.failure {
        // Count only what a sequential run would have finished.
        let completed = block * BLOCK_SIZE + done;
        return Err(Error::CircuitBreaker {
            steps: cfg.max_steps,
            completed,
        });
    }

    let mut durations = tally.durations;
    durations.sort_by_key(|&(b, _)| b);
    let mean_busy_duration = (cfg.mode == SimulationMode::FullCtmc)
        .then(|| durations.iter().map(|&(_, d)| d).collect::<Sum>().value() / cfg.n_samples as f64);

    let total = cfg.n_samples as f64;
    let counts = tally.counts;
    let empirical_pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let first: u128 = counts.iter().enumerate().map(|(i, &c)| (i as u128 + 1) * c as u128).sum();
    let empirical_mean = first as f64 / total;
    let empirical_variance = if cfg.n_samples > 1 {
        counts
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let d = (i + 1) as f64 - empirical_mean;
                d * d * c as f64
            })
            .collect::<Sum>()
            .value()
            / (total - 1.0)
    } else {
        0.0
    };

    let exact = height_distribution(&p);
    let sup_distance = ecdf_sup_distance(&counts, |k| exact.cdf(k));
    let dkw_epsilon = dkw_epsilon(cfg.n_samples, cfg.dkw_delta);
    Ok(SimulationSummary {
        n,
        rho: p.rho(),
        mode: cfg.mode,
        seed: cfg.seed,
        n_samples: cfg.n_samples,
        counts,
        empirical_pmf,
        empirical_mean,
        empirical_variance,
        sup_distance,
        dkw_delta: cfg.dkw_delta,
        dkw_epsilon,
        dkw_pass: sup_distance <= dkw_epsilon,
        mean_busy_duration,
        total_steps: tally.steps,
    })
}

fn collect_blocks(n_blocks: u64, n: usize, cfg: &SimulationConfig, sampler: &Sampler, exec: Execution) -> Tally {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n_blocks)
            .into_par_iter()
            .fold(|| Tally::new(n), |t, b| t.run_block(b, cfg, sampler))
            .reduce(|| Tally::new(n), Tally::merge);
    }
    let _ = exec;
    (0..n_blocks).fold(Tally::new(n), |t, b| t.run_block(b, cfg, sampler))
}

/// Cost estimate from a short pilot run of a walking sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PilotEstimate {
    pub excursions: u64,
    /// Mean steps per excursion; capped excursions count at the cap.
    pub mean_steps: f64,
    /// Excursions that hit the pilot step cap.
    pub capped: u64,
}

impl PilotEstimate {
    /// Rough total steps for `n_samples` excursions (a lower bound when any were capped).
    pub fn projected_steps(&self, n_samples: u64) -> f64 {
        self.mean_steps * n_samples as f64
    }
}

pub fn pilot(p: &ModelParams, mode: SimulationMode, seed: u64, excursions: u64, step_cap: u64) -> PilotEstimate {
    let sampler = Sampler::new(p, mode);
    // Stream u64::MAX is never used by a batch.
    let mut rng = block_rng(seed, u64::MAX);
    let mut steps = Sum::default();
    let mut capped = 0;
    for _ in 0..excursions {
        match sampler.draw(&mut rng, step_cap) {
            Ok(e) => steps.add(e.steps as f64),
            Err(_) => {
                capped += 1;
                steps.add(step_cap as f64);
            }
        }
    }
    PilotEstimate {
        excursions,
        mean_steps: steps.value() / excursions.max(1) as f64,
        capped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactdist::height_distribution;

    fn params(n: usize, rho: f64) -> ModelParams {
        ModelParams::from_rho(n, rho).unwrap()
    }

    #[test]
    fn single_state_always_height_one() {
        let p = params(1, 0.7);
        let mut rng = block_rng(3, 0);
        for _ in 0..100 {
            assert_eq!(sample_height(&p, &mut rng).unwrap(), 1);
            assert_eq!(LadderSampler::new(&p).sample(&mut rng).height, 1);
        }
    }

    #[test]
    fn two_states_fair_coin() {
        // survival(2) = 1/2; 3 sigma binomial band at 1e5 samples
        let p = params(2, 1.0);
        let mut rng = block_rng(11, 0);
        let n = 100_000;
        let twos = (0..n).filter(|_| sample_height(&p, &mut rng).unwrap() == 2).count();
        let freq = twos as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 3.0 * (0.25 / n as f64).sqrt(), "{freq}");
    }

    #[test]
    fn ctmc_single_state_duration_is_exp1() {
        let p = make(1, 1.0, 1.0);
        let mut rng = block_rng(5, 0);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let (h, d) = sample_excursion_ctmc(&p, &mut rng).unwrap();
            assert_eq!(h, 1);
            sum += d;
        }
        let mean = sum / n as f64;
        assert!((mean - 1.0).abs() <= 3.0 / (n as f64).sqrt(), "{mean}");
    }

    fn make(n: usize, nu: f64, mu: f64) -> ModelParams {
        ModelParams::new(n, nu, mu).unwrap()
    }

    #[test]
    fn ctmc_streams_are_deterministic() {
        let p = params(6, 0.5);
        let mut a = block_rng(99, 4);
        let mut b = block_rng(99, 4);
        for _ in 0..200 {
            assert_eq!(
                sample_excursion_ctmc(&p, &mut a).unwrap(),
                sample_excursion_ctmc(&p, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn circuit_breaker_trips() {
        let p = params(60, 0.8);
        let mut rng = block_rng(1, 0);
        let mut tripped = false;
        for _ in 0..50 {
            if let Err(Error::CircuitBreaker { steps, .. }) = walk_jump_chain(&p, &mut rng, 1000) {
                assert_eq!(steps, 1000);
                tripped = true;
            }
        }
        assert!(tripped);

        let cfg = SimulationConfig::new(p, 5000, 1).mode(SimulationMode::FullCtmc).max_steps(1000);
        match run_batch(&cfg) {
            Err(Error::CircuitBreaker { completed, .. }) => assert!(completed < 5000),
            other => panic!("expected abort, got {other:?}"),
        }
    }

    #[test]
    fn batch_matches_exact_law() {
        let p = params(50, 0.8);
        let s = run_batch(&SimulationConfig::new(p, 100_000, 7)).unwrap();
        assert!(s.dkw_pass, "{} > {}", s.sup_distance, s.dkw_epsilon);
        assert_eq!(s.counts.iter().sum::<u64>(), 100_000);
    }

    #[test]
    fn batch_mean_three_states() {
        let p = params(3, 1.0);
        let s = run_batch(&SimulationConfig::new(p, 1_000_000, 21)).unwrap();
        let sd = (164.0 / 225.0 / 1e6f64).sqrt();
        assert!((s.empirical_mean - 31.0 / 15.0).abs() <= 3.0 * sd);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let p = params(40, 0.6);
        let base = SimulationConfig::new(p, 20_000, 42);
        let one = run_batch(&base.workers(1)).unwrap();
        let eight = run_batch(&base.workers(8)).unwrap();
        let seq = run_batch_with(&base, Execution::Sequential).unwrap();
        assert_eq!(one, eight);
        assert_eq!(one, seq);
        let again = run_batch(&base.workers(3)).unwrap();
        assert_eq!(
            serde_json::to_vec(&one).unwrap(),
            serde_json::to_vec(&again).unwrap()
        );
        let other_seed = run_batch(&SimulationConfig::new(p, 20_000, 43)).unwrap();
        assert_ne!(one.counts, other_seed.counts);
    }

    #[test]
    fn ctmc_durations_reproducible_across_workers() {
        let p = params(8, 0.5);
        let base = SimulationConfig::new(p, 5000, 9).mode(SimulationMode::FullCtmc);
        let a = run_batch(&base.workers(1)).unwrap();
        let b = run_batch(&base.workers(8)).unwrap();
        assert_eq!(a, b);
        assert!(a.mean_busy_duration.unwrap() > 0.0);
    }

    #[test]
    fn samplers_agree_on_small_chain() {
        // The literal walk defines the height; the ladder must reproduce it.
        let p = params(10, 0.5);
        let n = 50_000;
        let ladder = run_batch(&SimulationConfig::new(p, n, 1)).unwrap();
        let walk = run_batch(&SimulationConfig::new(p, n, 2).mode(SimulationMode::JumpChain)).unwrap();
        let ctmc = run_batch(&SimulationConfig::new(p, n, 3).mode(SimulationMode::FullCtmc)).unwrap();
        let eps = dkw_epsilon(n, 0.01);
        assert!(two_sample_sup_distance(&ladder.counts, &walk.counts) <= 2.0 * eps);
        assert!(two_sample_sup_distance(&walk.counts, &ctmc.counts) <= 2.0 * eps);
        for s in [&ladder, &walk, &ctmc] {
            assert!(s.dkw_pass, "{:?} {}", s.mode, s.sup_distance);
        }
    }

    #[test]
    fn config_validation() {
        let p = params(5, 1.0);
        assert!(run_batch(&SimulationConfig::new(p, 0, 1)).is_err());
        assert!(run_batch(&SimulationConfig::new(p, 10, 1).workers(0)).is_err());
        assert!(run_batch(&SimulationConfig::new(p, 10, 1).dkw_delta(1.5)).is_err());
    }

    #[test]
    fn dkw_epsilon_value() {
        assert!((dkw_epsilon(100_000, 0.01) - 0.005146).abs() < 1e-6);
    }

    #[test]
    fn sup_distance_helpers() {
        let d = height_distribution(&params(3, 1.0));
        // perfectly proportional counts: 5/15, 4/15, 6/15
        let counts = [5u64, 4, 6];
        assert!(ecdf_sup_distance(&counts, |k| d.cdf(k)) < 1e-15);
        assert_eq!(two_sample_sup_distance(&[1, 1], &[2, 0]), 0.5);
    }

    #[test]
    fn pilot_flags_long_walks() {
        let est = pilot(&params(60, 0.8), SimulationMode::JumpChain, 1, 20, 10_000);
        assert!(est.capped > 0);
        let est = pilot(&params(60, 0.8), SimulationMode::Ladder, 1, 20, 10_000);
        assert_eq!(est.capped, 0);
        assert!(est.mean_steps <= 60.0);
    }
}
