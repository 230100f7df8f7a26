//! Seeded Monte Carlo estimates of SOP and ESC under the exact model.
//!
//! Trials are split into fixed-size chunks. Chunk `k` draws from the ChaCha
//! stream `k` of the configured seed and the per-chunk partial results are
//! merged in chunk order, so the output is bit-identical for any number of
//! rayon workers. Every trial feeds the same user positions to the PA system
//! and the FA baseline (common random numbers).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::model::{secrecy_rate, secrecy_rate_fa, ChannelParams, Scenario, SecrecyTarget, UserPositions};
use crate::scalar::Real;

pub type TrialRng = ChaCha8Rng;

pub const DEFAULT_CHUNK_SIZE: usize = 4096;
pub const MIN_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

impl McConfig {
    pub fn new(trials: usize, seed: u64) -> Result<Self> {
        Self::with_chunk_size(trials, seed, DEFAULT_CHUNK_SIZE)
    }

    pub fn with_chunk_size(trials: usize, seed: u64, chunk_size: usize) -> Result<Self> {
        if trials < MIN_TRIALS {
            return Err(invalid(
                "mc_trials",
                format!("need at least {MIN_TRIALS}, got {trials}"),
            ));
        }
        if chunk_size == 0 {
            return Err(invalid("mc_chunk_size", "must be positive"));
        }
        Ok(Self {
            trials,
            seed,
            chunk_size,
        })
    }

    fn chunks(&self) -> usize {
        self.trials.div_ceil(self.chunk_size)
    }

    fn chunk_len(&self, k: usize) -> usize {
        self.chunk_size.min(self.trials - k * self.chunk_size)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate<T> {
    pub mean: T,
    pub std_error: T,
    pub trials: usize,
}

impl<T: Real> McEstimate<T> {
    /// `|mean − x| ≤ k·std_error`.
    pub fn within(&self, x: T, k: T) -> bool {
        (self.mean - x).abs() <= k * self.std_error
    }
}

/// Estimates for the PA system and FA baseline from one shared set of
/// user placements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McReport<T> {
    pub sop_pa: McEstimate<T>,
    pub esc_pa: McEstimate<T>,
    pub sop_fa: McEstimate<T>,
    pub esc_fa: McEstimate<T>,
}

/// Bob at `(x1, y1)` and Willie at `(x2, y2)`, all uniform across the room,
/// drawn in that order.
pub fn draw_uniform_positions<T: Real>(rng: &mut TrialRng, scenario: &Scenario<T>) -> UserPositions<T> {
    let h = scenario.half_side();
    let x1 = rng.random_range(-h..=h);
    let y1 = rng.random_range(-h..=h);
    let x2 = rng.random_range(-h..=h);
    let y2 = rng.random_range(-h..=h);
    UserPositions::new_unchecked([x1, y1], [x2, y2])
}

/// Streaming mean/variance (Welford) with an order-fixed merge.
#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    n: usize,
    mean: T,
    m2: T,
}

impl<T: Real> Moments<T> {
    fn new() -> Self {
        Self {
            n: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    fn push(&mut self, x: T) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean = self.mean + delta / T::from_count(self.n);
        self.m2 = self.m2 + delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let (na, nb, nn) = (T::from_count(self.n), T::from_count(other.n), T::from_count(n));
        let delta = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + delta * nb / nn,
            m2: self.m2 + other.m2 + delta * delta * na * nb / nn,
        }
    }

    fn estimate(&self) -> McEstimate<T> {
        let n = T::from_count(self.n);
        let var = if self.n > 1 {
            self.m2 / (n - T::one())
        } else {
            T::zero()
        };
        McEstimate {
            mean: self.mean,
            std_error: (var / n).sqrt(),
            trials: self.n,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Partial<T> {
    trials: usize,
    outages_pa: usize,
    outages_fa: usize,
    rate_pa: Moments<T>,
    rate_fa: Moments<T>,
}

impl<T: Real> Partial<T> {
    fn new() -> Self {
        Self {
            trials: 0,
            outages_pa: 0,
            outages_fa: 0,
            rate_pa: Moments::new(),
            rate_fa: Moments::new(),
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            trials: self.trials + other.trials,
            outages_pa: self.outages_pa + other.outages_pa,
            outages_fa: self.outages_fa + other.outages_fa,
            rate_pa: self.rate_pa.merge(other.rate_pa),
            rate_fa: self.rate_fa.merge(other.rate_fa),
        }
    }
}

fn binomial<T: Real>(hits: usize, trials: usize) -> McEstimate<T> {
    let n = T::from_count(trials);
    let p = T::from_count(hits) / n;
    McEstimate {
        mean: p,
        std_error: (p * (T::one() - p) / n).sqrt(),
        trials,
    }
}

/// Runs the full PA/FA simulation with positions from `draw`.
pub fn simulate_with<T, F>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    cfg: &McConfig,
    draw: F,
) -> McReport<T>
where
    T: Real,
    F: Fn(&mut TrialRng, &Scenario<T>) -> UserPositions<T> + Sync,
{
    let partials: Vec<Partial<T>> = (0..cfg.chunks())
        .into_par_iter()
        .map(|k| {
            let mut rng = TrialRng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let mut acc = Partial::new();
            for _ in 0..cfg.chunk_len(k) {
                let users = draw(&mut rng, scenario);
                let pa = secrecy_rate(scenario, &users, chan);
                let fa = secrecy_rate_fa(scenario, &users, chan);
                acc.trials += 1;
                acc.outages_pa += usize::from(pa.is_outage(target));
                acc.outages_fa += usize::from(fa.is_outage(target));
                acc.rate_pa.push(pa.secrecy);
                acc.rate_fa.push(fa.secrecy);
            }
            acc
        })
        .collect();
    let total = partials.into_iter().fold(Partial::new(), Partial::merge);
    McReport {
        sop_pa: binomial(total.outages_pa, total.trials),
        esc_pa: total.rate_pa.estimate(),
        sop_fa: binomial(total.outages_fa, total.trials),
        esc_fa: total.rate_fa.estimate(),
    }
}

/// [`simulate_with`] using uniform placement of both users.
pub fn simulate<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    cfg: &McConfig,
) -> McReport<T> {
    simulate_with(scenario, chan, target, cfg, draw_uniform_positions)
}

pub fn mc_sop_pa<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    cfg: &McConfig,
) -> McEstimate<T> {
    simulate(scenario, chan, target, cfg).sop_pa
}

pub fn mc_sop_fa<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    cfg: &McConfig,
) -> McEstimate<T> {
    simulate(scenario, chan, target, cfg).sop_fa
}

/// The ESC does not depend on the target; any target gives the same value.
pub fn mc_esc_pa<T: Real>(scenario: &Scenario<T>, chan: &ChannelParams<T>, cfg: &McConfig) -> McEstimate<T> {
    simulate(scenario, chan, &zero_target(), cfg).esc_pa
}

pub fn mc_esc_fa<T: Real>(scenario: &Scenario<T>, chan: &ChannelParams<T>, cfg: &McConfig) -> McEstimate<T> {
    simulate(scenario, chan, &zero_target(), cfg).esc_fa
}

fn zero_target<T: Real>() -> SecrecyTarget<T> {
    SecrecyTarget::new(T::zero()).expect("zero target is valid")
}
