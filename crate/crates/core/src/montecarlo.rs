//! Seeded simulation of repeated and parallel rounds.
//!
//! Three estimators are provided:
//!
//! * [`time_average_estimate`] - one player, `T` sequential rounds, growth
//!   rate `(ln w_T - ln w_0) / T`;
//! * [`ensemble_average_estimate`] - `N` independent single rounds, sample
//!   mean growth factor `⟨r⟩_N`;
//! * [`subinterval_estimate`] - `q` draws each acting for `1/q` of a round,
//!   `Σ_j (r_j^(1/q) - 1)`.
//!
//! Work is cut into fixed-size blocks. Block `b` draws from its own ChaCha8
//! stream derived from `(seed, b)`, and per-block partial results are merged
//! in block order, so output is bitwise identical for any worker count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamble::{self, menger_log_ratio, GambleSpec, PayoutRule, PlayerState};
use crate::series::CompensatedSum;

/// Draws per RNG substream.
const BLOCK: usize = 1 << 16;

const DOMAIN_TRAJECTORY: u64 = 1;
const DOMAIN_ENSEMBLE: u64 = 2;
const DOMAIN_SUBINTERVAL: u64 = 3;

/// How the Menger payout tracks wealth across rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MengerWealth {
    /// Payout scaled by the wealth at the start of each round.
    #[default]
    PerRound,
    /// Payout scaled by the wealth at the start of the game.
    Initial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub seed: u64,
    /// Sequential rounds `T`.
    pub rounds: usize,
    /// Parallel single rounds `N`.
    pub samples: usize,
    /// Sub-intervals `q`.
    pub subintervals: usize,
    pub workers: usize,
    pub menger_wealth: MengerWealth,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: 0,
            rounds: 1,
            samples: 1,
            subintervals: 1,
            workers: 1,
            menger_wealth: MengerWealth::PerRound,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rounds", self.rounds),
            ("samples", self.samples),
            ("subintervals", self.subintervals),
            ("workers", self.workers),
        ] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    /// `k_n`: how often each waiting time occurred.
    pub frequencies: BTreeMap<u64, u64>,
    pub max_n: u64,
    pub estimate: f64,
    pub stderr: f64,
    /// Total number of draws (`T`, `N` or `q`).
    pub count: u64,
    /// False where the underlying variance is infinite and the standard
    /// error is only a formal quantity.
    pub stderr_reliable: bool,
}

/// One player's wealth over `T` rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `w_0, w_0 r_1, w_0 r_1 r_2, ...`. Saturates to infinity once wealth
    /// leaves the f64 range; `log_wealth_path` does not.
    pub wealth_path: Vec<f64>,
    pub log_wealth_path: Vec<f64>,
    /// `ln r_i` for each round played.
    pub log_returns: Vec<f64>,
    pub waiting_times: Vec<u64>,
    /// Round (1-based) after which wealth was `≤ 0`. The path ends there with
    /// wealth recorded as zero.
    pub bankrupt_at: Option<usize>,
}

impl Trajectory {
    pub fn initial_wealth(&self) -> f64 {
        self.wealth_path[0]
    }

    pub fn rounds(&self) -> usize {
        self.log_returns.len()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent generator for block `index` of the given operation.
fn substream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(domain)));
    rng.set_stream(index);
    rng
}

/// Seed for the `rep`-th independent repetition of an experiment.
pub fn repetition_seed(seed: u64, rep: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(rep.wrapping_add(0x5eed))))
}

/// Fair-coin waiting time: `P(n) = (1/2)^n`.
pub fn draw_waiting_time<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    WaitingTimeSampler::geometric(gamble::FAIR_COIN).sample(rng)
}

/// Inverse-CDF sampler for the waiting time of a gamble.
#[derive(Debug, Clone, PartialEq)]
pub enum WaitingTimeSampler {
    /// `n = ⌈ln u / ln(1 - p)⌉` for `u` uniform on `(0, 1]`.
    Geometric {
        ln_q: f64,
    },
    Table {
        cumulative: Vec<f64>,
    },
}

impl WaitingTimeSampler {
    pub fn geometric(p: f64) -> Self {
        WaitingTimeSampler::Geometric { ln_q: (-p).ln_1p() }
    }

    pub fn for_spec(spec: &GambleSpec) -> Self {
        match spec.payout_rule() {
            PayoutRule::Table { rows } => {
                let mut acc = 0.0;
                let cumulative = rows
                    .iter()
                    .map(|r| {
                        acc += r.probability;
                        acc
                    })
                    .collect();
                WaitingTimeSampler::Table { cumulative }
            }
            _ => Self::geometric(spec.probability_parameter()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self {
            WaitingTimeSampler::Geometric { ln_q } => {
                let u = 1.0 - rng.random::<f64>();
                let n = (u.ln() / ln_q).ceil();
                if n < 1.0 {
                    1
                } else {
                    n as u64
                }
            }
            WaitingTimeSampler::Table { cumulative } => {
                let u = rng.random::<f64>() * cumulative[cumulative.len() - 1];
                let i = cumulative.partition_point(|&c| c <= u);
                (i.min(cumulative.len() - 1) + 1) as u64
            }
        }
    }
}

/// Growth factors `r_n` and `ln r_n` at a fixed state, cached for small `n`.
struct Factors<'a> {
    state: PlayerState,
    spec: &'a GambleSpec,
    cache: Vec<(f64, f64)>,
}

const FACTOR_CACHE: u64 = 128;

impl<'a> Factors<'a> {
    fn new(state: &PlayerState, spec: &'a GambleSpec) -> Result<Self> {
        let limit = spec.support_len().map_or(FACTOR_CACHE, |l| l as u64);
        let cache = (1..=limit.min(FACTOR_CACHE))
            .map(|n| {
                Ok((
                    gamble::growth_factor(state, spec, n)?,
                    gamble::log_growth_factor(state, spec, n)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Factors {
            state: *state,
            spec,
            cache,
        })
    }

    fn get(&self, n: u64) -> Result<(f64, f64)> {
        match self.cache.get((n - 1) as usize) {
            Some(&f) => Ok(f),
            None => Ok((
                gamble::growth_factor(&self.state, self.spec, n)?,
                gamble::log_growth_factor(&self.state, self.spec, n)?,
            )),
        }
    }
}

fn blocks(total: usize) -> Vec<(u64, usize)> {
    (0..total.div_ceil(BLOCK))
        .map(|b| (b as u64, BLOCK.min(total - b * BLOCK)))
        .collect()
}

/// `n` values for `total` draws, block by block.
fn draw_blocks(
    sampler: &WaitingTimeSampler,
    seed: u64,
    domain: u64,
    total: usize,
    config: &SimulationConfig,
) -> Result<Vec<Vec<u64>>> {
    let pool = config.pool()?;
    Ok(pool.install(|| {
        blocks(total)
            .into_par_iter()
            .map(|(b, len)| {
                let mut rng = substream(seed, domain, b);
                (0..len).map(|_| sampler.sample(&mut rng)).collect()
            })
            .collect()
    }))
}

/// Plays `config.rounds` sequential rounds at a fixed ticket price.
///
/// Every round is the same lottery relative to the player's wealth, so the
/// growth factors are those of the initial state. The Menger payout is the
/// exception: by default it is rescaled with the wealth at the start of each
/// round (see [`MengerWealth`]).
pub fn simulate_trajectory(
    state: &PlayerState,
    spec: &GambleSpec,
    config: &SimulationConfig,
) -> Result<Trajectory> {
    config.validate()?;
    let sampler = WaitingTimeSampler::for_spec(spec);
    let draws = draw_blocks(
        &sampler,
        config.seed,
        DOMAIN_TRAJECTORY,
        config.rounds,
        config,
    )?;
    let factors = Factors::new(state, spec)?;
    let per_round_menger = matches!(spec.payout_rule(), PayoutRule::Menger)
        && config.menger_wealth == MengerWealth::PerRound;

    let w0 = state.wealth();
    let c = state.ticket_price();
    let mut traj = Trajectory {
        wealth_path: Vec::with_capacity(config.rounds + 1),
        log_wealth_path: Vec::with_capacity(config.rounds + 1),
        log_returns: Vec::with_capacity(config.rounds),
        waiting_times: Vec::with_capacity(config.rounds),
        bankrupt_at: None,
    };
    traj.wealth_path.push(w0);
    traj.log_wealth_path.push(w0.ln());
    let (mut w, mut lw) = (w0, w0.ln());

    for (round, n) in draws.into_iter().flatten().enumerate() {
        let (r, ln_r) = if per_round_menger {
            let ln_r = menger_log_ratio(n, lw.exp(), c);
            (ln_r.exp(), ln_r)
        } else {
            factors.get(n)?
        };
        traj.waiting_times.push(n);
        traj.log_returns.push(ln_r);
        if !(r > 0.0) || ln_r == f64::NEG_INFINITY {
            traj.bankrupt_at = Some(round + 1);
            traj.wealth_path.push(0.0);
            traj.log_wealth_path.push(f64::NEG_INFINITY);
            break;
        }
        w *= r;
        lw += ln_r;
        traj.wealth_path.push(w);
        traj.log_wealth_path.push(lw);
    }
    Ok(traj)
}

fn frequencies(ns: impl IntoIterator<Item = u64>) -> (BTreeMap<u64, u64>, u64) {
    let mut freq = BTreeMap::new();
    let mut max_n = 0;
    for n in ns {
        *freq.entry(n).or_insert(0) += 1;
        max_n = max_n.max(n);
    }
    (freq, max_n)
}

fn sample_sd(values: &[f64], mean: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// Finite-time growth rate `(ln w_T - ln w_0) / T`, with standard error
/// `sd(ln r_i) / √T`.
pub fn time_average_estimate(trajectory: &Trajectory) -> Result<SampleStats> {
    if let Some(round) = trajectory.bankrupt_at {
        return Err(Error::BankruptTrajectory { round });
    }
    let t = trajectory.rounds();
    if t == 0 {
        return Err(Error::InvalidParameter("trajectory has no rounds".into()));
    }
    let lw = &trajectory.log_wealth_path;
    let estimate = (lw[t] - lw[0]) / t as f64;
    let mean = trajectory.log_returns.iter().sum::<f64>() / t as f64;
    let stderr = sample_sd(&trajectory.log_returns, mean) / (t as f64).sqrt();
    let (frequencies, max_n) = frequencies(trajectory.waiting_times.iter().copied());
    Ok(SampleStats {
        frequencies,
        max_n,
        estimate,
        stderr,
        count: t as u64,
        stderr_reliable: t > 1,
    })
}

/// Per-block sums, merged in block order.
#[derive(Debug, Default)]
struct Partial {
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
    counts: BTreeMap<u64, u64>,
    max_n: u64,
    count: u64,
}

impl Partial {
    fn push(&mut self, n: u64, x: f64) {
        self.sum.add(x);
        self.sum_sq.add(x * x);
        *self.counts.entry(n).or_insert(0) += 1;
        self.max_n = self.max_n.max(n);
        self.count += 1;
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.sum.add(other.sum.value());
        self.sum_sq.add(other.sum_sq.value());
        for (n, k) in other.counts {
            *self.counts.entry(n).or_insert(0) += k;
        }
        self.max_n = self.max_n.max(other.max_n);
        self.count += other.count;
        self
    }

    fn mean_and_var(&self) -> (f64, f64) {
        let n = self.count as f64;
        let mean = self.sum.value() / n;
        let var = if self.count > 1 {
            ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        (mean, var)
    }
}

fn run_blocks<F>(
    spec: &GambleSpec,
    seed: u64,
    domain: u64,
    total: usize,
    config: &SimulationConfig,
    per_draw: F,
) -> Result<Partial>
where
    F: Fn(u64) -> Result<f64> + Sync,
{
    let sampler = WaitingTimeSampler::for_spec(spec);
    let pool = config.pool()?;
    let partials: Vec<Result<Partial>> = pool.install(|| {
        blocks(total)
            .into_par_iter()
            .map(|(b, len)| {
                let mut rng = substream(seed, domain, b);
                let mut part = Partial::default();
                for _ in 0..len {
                    let n = sampler.sample(&mut rng);
                    part.push(n, per_draw(n)?);
                }
                Ok(part)
            })
            .collect()
    });
    partials
        .into_iter()
        .try_fold(Partial::default(), |acc, p| Ok(acc.merge(p?)))
}

/// Whether `Σ p_n r_n²` is finite, i.e. whether the ensemble standard error
/// means anything.
fn finite_payout_variance(spec: &GambleSpec) -> bool {
    match spec.payout_rule() {
        PayoutRule::Table { .. } | PayoutRule::Capped { .. } => true,
        PayoutRule::BernoulliOriginal => 4.0 * (1.0 - spec.probability_parameter()) < 1.0,
        PayoutRule::Menger => false,
    }
}

/// Finite-sample ensemble average `⟨r⟩_N` over `config.samples` independent
/// single rounds.
pub fn ensemble_average_estimate(
    state: &PlayerState,
    spec: &GambleSpec,
    config: &SimulationConfig,
) -> Result<SampleStats> {
    config.validate()?;
    let factors = Factors::new(state, spec)?;
    let part = run_blocks(
        spec,
        config.seed,
        DOMAIN_ENSEMBLE,
        config.samples,
        config,
        |n| Ok(factors.get(n)?.0),
    )?;
    let (mean, var) = part.mean_and_var();
    Ok(SampleStats {
        estimate: mean,
        stderr: (var / part.count as f64).sqrt(),
        frequencies: part.counts,
        max_n: part.max_n,
        count: part.count,
        stderr_reliable: finite_payout_variance(spec) && part.count > 1,
    })
}

/// `⟨r⟩_N` for `repetitions` independent experiments.
pub fn ensemble_repetitions(
    state: &PlayerState,
    spec: &GambleSpec,
    config: &SimulationConfig,
    repetitions: u64,
) -> Result<Vec<f64>> {
    (0..repetitions)
        .map(|rep| {
            let cfg = SimulationConfig {
                seed: repetition_seed(config.seed, rep),
                ..*config
            };
            Ok(ensemble_average_estimate(state, spec, &cfg)?.estimate)
        })
        .collect()
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    })
}

fn subinterval_term(factors: &Factors<'_>, n: u64, q: f64) -> Result<f64> {
    let (r, ln_r) = factors.get(n)?;
    if !(r > 0.0) || ln_r == f64::NEG_INFINITY {
        return Err(Error::NonpositiveReturn { n, factor: r });
    }
    if q == 1.0 {
        return Ok(r - 1.0);
    }
    // r^(1/q) - 1
    Ok((ln_r / q).exp_m1())
}

fn subinterval_stats(part: Partial, q: f64) -> SampleStats {
    let (mean, var) = part.mean_and_var();
    SampleStats {
        estimate: part.sum.value(),
        // sd of the sum of q terms is √q·sd(term)
        stderr: (q * var).sqrt(),
        frequencies: part.counts,
        max_n: part.max_n,
        count: part.count,
        stderr_reliable: part.count > 1 && mean.is_finite(),
    }
}

/// Sub-interval estimate `ĝ_q = Σ_{j=1}^{q} (r_j^(1/q) - 1)` from
/// `config.subintervals` random draws.
pub fn subinterval_estimate(
    state: &PlayerState,
    spec: &GambleSpec,
    config: &SimulationConfig,
) -> Result<SampleStats> {
    config.validate()?;
    let factors = Factors::new(state, spec)?;
    let q = config.subintervals as f64;
    let part = run_blocks(
        spec,
        config.seed,
        DOMAIN_SUBINTERVAL,
        config.subintervals,
        config,
        |n| subinterval_term(&factors, n, q),
    )?;
    Ok(subinterval_stats(part, q))
}

/// [`subinterval_estimate`] with the waiting times given rather than drawn;
/// `q` is the number of draws.
pub fn subinterval_estimate_from_draws(
    state: &PlayerState,
    spec: &GambleSpec,
    draws: &[u64],
) -> Result<SampleStats> {
    if draws.is_empty() {
        return Err(Error::InvalidParameter("need at least one draw".into()));
    }
    let factors = Factors::new(state, spec)?;
    let q = draws.len() as f64;
    let mut part = Partial::default();
    for &n in draws {
        part.push(n, subinterval_term(&factors, n, q)?);
    }
    Ok(subinterval_stats(part, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamble::TableRow;

    fn state(w: f64, c: f64) -> PlayerState {
        PlayerState::new(w, c).unwrap()
    }

    fn certain(payout: f64) -> GambleSpec {
        GambleSpec::table(vec![TableRow {
            probability: 1.0,
            payout,
        }])
        .unwrap()
    }

    fn config(seed: u64) -> SimulationConfig {
        SimulationConfig {
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn draws_are_at_least_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!((0..10_000).all(|_| draw_waiting_time(&mut rng) >= 1));
    }

    #[test]
    fn table_sampler_hits_every_row() {
        let spec = GambleSpec::table(vec![
            TableRow {
                probability: 0.2,
                payout: 1.0,
            },
            TableRow {
                probability: 0.3,
                payout: 2.0,
            },
            TableRow {
                probability: 0.5,
                payout: 3.0,
            },
        ])
        .unwrap();
        let sampler = WaitingTimeSampler::for_spec(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0usize; 3];
        for _ in 0..100_000 {
            counts[(sampler.sample(&mut rng) - 1) as usize] += 1;
        }
        assert!((counts[0] as f64 / 1e5 - 0.2).abs() < 0.01);
        assert!((counts[2] as f64 / 1e5 - 0.5).abs() < 0.01);
    }

    #[test]
    fn constant_path_for_certain_zero_payout() {
        let cfg = SimulationConfig {
            rounds: 100,
            ..config(3)
        };
        let t = simulate_trajectory(&state(50.0, 0.0), &certain(0.0), &cfg).unwrap();
        assert_eq!(t.wealth_path.len(), 101);
        assert!(t.wealth_path.iter().all(|&w| w == 50.0));
        let s = time_average_estimate(&t).unwrap();
        assert_eq!(s.estimate, 0.0);
        assert_eq!(s.stderr, 0.0);
        assert_eq!(s.frequencies.values().sum::<u64>(), 100);
    }

    #[test]
    fn path_is_a_running_product() {
        let cfg = SimulationConfig {
            rounds: 500,
            ..config(11)
        };
        let s = state(100.0, 2.0);
        let spec = GambleSpec::bernoulli();
        let t = simulate_trajectory(&s, &spec, &cfg).unwrap();
        for (i, &n) in t.waiting_times.iter().enumerate() {
            let r = gamble::growth_factor(&s, &spec, n).unwrap();
            assert_eq!(t.wealth_path[i + 1], t.wealth_path[i] * r);
        }
    }

    #[test]
    fn bankruptcy_freezes_path() {
        let cfg = SimulationConfig {
            rounds: 1000,
            ..config(5)
        };
        let t = simulate_trajectory(&state(1.5, 2.6), &GambleSpec::bernoulli(), &cfg).unwrap();
        let round = t.bankrupt_at.expect("n = 1 occurs with probability 1/2");
        assert_eq!(t.wealth_path.len(), round + 1);
        assert_eq!(*t.wealth_path.last().unwrap(), 0.0);
        assert_eq!(
            time_average_estimate(&t),
            Err(Error::BankruptTrajectory { round })
        );
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let s = state(100.0, 2.0);
        let spec = GambleSpec::bernoulli();
        let base = SimulationConfig {
            rounds: 3 * BLOCK + 17,
            samples: 2 * BLOCK + 5,
            subintervals: BLOCK + 1,
            ..config(99)
        };
        let reference = (
            simulate_trajectory(&s, &spec, &base).unwrap(),
            ensemble_average_estimate(&s, &spec, &base).unwrap(),
            subinterval_estimate(&s, &spec, &base).unwrap(),
        );
        for workers in [2, 3, 8] {
            let cfg = SimulationConfig { workers, ..base };
            assert_eq!(simulate_trajectory(&s, &spec, &cfg).unwrap(), reference.0);
            assert_eq!(
                ensemble_average_estimate(&s, &spec, &cfg).unwrap(),
                reference.1
            );
            assert_eq!(subinterval_estimate(&s, &spec, &cfg).unwrap(), reference.2);
        }
    }

    #[test]
    fn single_sample_ensemble_is_the_drawn_factor() {
        let s = state(100.0, 2.0);
        let spec = GambleSpec::bernoulli();
        let stats = ensemble_average_estimate(&s, &spec, &config(21)).unwrap();
        let n = *stats.frequencies.keys().next().unwrap();
        assert_eq!(stats.count, 1);
        assert_eq!(stats.estimate, gamble::growth_factor(&s, &spec, n).unwrap());
    }

    #[test]
    fn forced_single_subinterval() {
        let s = state(100.0, 2.0);
        let spec = GambleSpec::bernoulli();
        for n in [1u64, 2, 5, 12] {
            let r = gamble::growth_factor(&s, &spec, n).unwrap();
            let est = subinterval_estimate_from_draws(&s, &spec, &[n]).unwrap();
            assert_eq!(est.estimate, r - 1.0);
        }
    }

    #[test]
    fn certainty_subinterval_is_zero() {
        let cfg = SimulationConfig {
            subintervals: 1000,
            ..config(2)
        };
        let est = subinterval_estimate(&state(10.0, 4.0), &certain(4.0), &cfg).unwrap();
        assert_eq!(est.estimate, 0.0);
    }

    #[test]
    fn subinterval_rejects_bankrupting_draws() {
        let r = subinterval_estimate_from_draws(&state(1.5, 2.6), &GambleSpec::bernoulli(), &[1]);
        assert!(matches!(r, Err(Error::NonpositiveReturn { n: 1, .. })));
    }

    #[test]
    fn menger_per_round_and_initial_wealth_differ() {
        let s = state(100.0, 50.0);
        let spec = GambleSpec::menger();
        let base = SimulationConfig {
            rounds: 5,
            ..config(8)
        };
        let a = simulate_trajectory(&s, &spec, &base).unwrap();
        let b = simulate_trajectory(
            &s,
            &spec,
            &SimulationConfig {
                menger_wealth: MengerWealth::Initial,
                ..base
            },
        )
        .unwrap();
        assert_eq!(a.waiting_times, b.waiting_times);
        assert_eq!(a.log_returns[0], b.log_returns[0]);
        assert_ne!(a.log_returns[1..], b.log_returns[1..]);
    }

    #[test]
    fn median_of_values() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn zero_counts_rejected() {
        let cfg = SimulationConfig {
            rounds: 0,
            ..config(1)
        };
        assert!(simulate_trajectory(&state(1.0, 0.0), &GambleSpec::bernoulli(), &cfg).is_err());
    }
}
