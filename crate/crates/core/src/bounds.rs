//! Closed-form bounds on the secrecy outage probability (SOP) and ergodic
//! secrecy capacity (ESC), their high-SNR limits, and finite-difference
//! estimators of diversity order and high-SNR slope.
//!
//! Every bound replaces the position-dependent in-waveguide loss
//! `exp(-2α·L)`, `L ∈ [0, D]`, by one of its extremes. Bob's link and
//! Willie's link get opposite extremes, giving a secrecy rate that is
//! pointwise above or below the true one. The expectation over user
//! placement then reduces to one-dimensional integrals against the
//! squared-distance densities, each evaluated by Chebyshev–Gauss
//! quadrature on one piece of the support.

use log::debug;

use crate::diststats::{ZbDistribution, ZwDistribution};
use crate::error::{Error, Result};
use crate::model::{ChannelParams, Scenario, SecrecyTarget};
use crate::quad::{compensation, PieceMap, QuadratureRule};
use crate::scalar::Real;

/// Power factors applied to Bob's link (`bob`) and Willie's link (`willie`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCoefficients<T> {
    pub bob: T,
    pub willie: T,
}

impl<T: Real> BoundCoefficients<T> {
    /// Pessimistic secrecy rate: Bob gets the worst loss, Willie none.
    pub fn pessimistic(scenario: &Scenario<T>, chan: &ChannelParams<T>) -> Self {
        Self {
            bob: chan.worst_attenuation(scenario),
            willie: T::one(),
        }
    }

    /// Optimistic secrecy rate: Bob lossless, Willie at the worst loss.
    pub fn optimistic(scenario: &Scenario<T>, chan: &ChannelParams<T>) -> Self {
        Self {
            bob: T::one(),
            willie: chan.worst_attenuation(scenario),
        }
    }

    /// Coefficients of the SOP upper bound.
    pub fn sop_upper(scenario: &Scenario<T>, chan: &ChannelParams<T>) -> Self {
        Self::pessimistic(scenario, chan)
    }

    pub fn sop_lower(scenario: &Scenario<T>, chan: &ChannelParams<T>) -> Self {
        Self::optimistic(scenario, chan)
    }

    /// Coefficients of the ESC upper bound.
    pub fn esc_upper(scenario: &Scenario<T>, chan: &ChannelParams<T>) -> Self {
        Self::optimistic(scenario, chan)
    }

    pub fn esc_lower(scenario: &Scenario<T>, chan: &ChannelParams<T>) -> Self {
        Self::pessimistic(scenario, chan)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair<T> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> BoundPair<T> {
    pub fn contains(&self, x: T, slack: T) -> bool {
        x >= self.lower - slack && x <= self.upper + slack
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }
}

/// Quadrature sums over Willie's three support pieces (`j`, `k`, `l`) and,
/// for the ESC, over Bob's support (`c`). `c` is zero for SOP sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermSums<T> {
    pub j: T,
    pub k: T,
    pub l: T,
    pub c: T,
}

impl<T: Real> TermSums<T> {
    pub fn willie_total(&self) -> T {
        self.j + self.k + self.l
    }

    pub fn as_array(&self) -> [T; 4] {
        [self.j, self.k, self.l, self.c]
    }
}

/// High-SNR log2-moments: `willie = E[log2 Zw]`, `bob = E[log2 Zb]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMoments<T> {
    pub willie: T,
    pub bob: T,
}

/// Shared geometry for one scenario: the two distributions and the four
/// piece maps.
struct Pieces<T> {
    zb: ZbDistribution<T>,
    zw: ZwDistribution<T>,
    bob: PieceMap<T>,
    willie: [PieceMap<T>; 3],
    side: T,
    height_sq: T,
}

impl<T: Real> Pieces<T> {
    fn new(scenario: &Scenario<T>) -> Self {
        let h = scenario.waveguide_height();
        Self {
            zb: ZbDistribution::new(scenario),
            zw: ZwDistribution::new(scenario),
            bob: PieceMap::bob(scenario),
            willie: PieceMap::willie(scenario),
            side: scenario.side_length(),
            height_sq: h * h,
        }
    }

    fn zeta(&self, map: &PieceMap<T>, t: T) -> T {
        map.scale * t + (map.offset - self.height_sq)
    }

    /// Willie's density on piece `idx` at node `t`.
    fn willie_density(&self, idx: usize, t: T) -> T {
        let zeta = self.zeta(&self.willie[idx], t);
        match idx {
            0 => self.zw.near_density(zeta),
            1 => self.zw.xi(zeta),
            _ => self.zw.epsilon(zeta),
        }
    }

    /// `Σ_pieces Σ_i w_i · g(z(t_i)) · f_Zw(z(t_i)) · scale · √(1 − t_i²)`,
    /// one sum per piece.
    fn willie_sums<F>(&self, rule: &QuadratureRule<T>, g: F) -> Result<[T; 3]>
    where
        F: Fn(T) -> T,
    {
        let mut out = [T::zero(); 3];
        for (idx, slot) in out.iter_mut().enumerate() {
            let map = self.willie[idx];
            *slot = rule.integrate(|t| g(map.z(t)) * self.willie_density(idx, t) * map.scale * compensation(t))?;
        }
        Ok(out)
    }

    /// `Σ_i w_i · g(z(t_i)) · f_Zb(z(t_i)) · scale · √(1 − t_i²)`.
    fn bob_sum<F>(&self, rule: &QuadratureRule<T>, g: F) -> Result<T>
    where
        F: Fn(T) -> T,
    {
        let map = self.bob;
        rule.integrate(|t| {
            let density = T::one() / (self.side * self.zeta(&map, t).sqrt());
            g(map.z(t)) * density * map.scale * compensation(t)
        })
    }
}

fn eta_snr<T: Real>(chan: &ChannelParams<T>) -> Result<T> {
    Ok(chan.eta() * chan.snr()?)
}

fn threshold<T: Real>(z_w: T, coeff: &BoundCoefficients<T>, eta_rho: T, four_r: T) -> T {
    let denom = four_r + four_r * eta_rho * coeff.willie / z_w - T::one();
    if denom <= T::zero() {
        T::infinity()
    } else {
        eta_rho * coeff.bob / denom
    }
}

/// Largest `Zb` that still meets the secrecy target when Willie sits at
/// squared distance `z_w`, under the power factors in `coeff`:
/// `η·ρ·A / (4^R̄ + 4^R̄·η·ρ·B / z_w − 1)`.
///
/// A non-positive denominator means every `Zb` meets the target, reported
/// as `+∞`.
pub fn sop_threshold<T: Real>(
    z_w: T,
    coeff: &BoundCoefficients<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
) -> Result<T> {
    Ok(threshold(z_w, coeff, eta_snr(chan)?, target.threshold()))
}

/// Probability of meeting the target, split over Willie's three pieces,
/// for one coefficient pair.
pub fn sop_terms<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    coeff: &BoundCoefficients<T>,
    rule: &QuadratureRule<T>,
) -> Result<TermSums<T>> {
    let pieces = Pieces::new(scenario);
    let eta_rho = eta_snr(chan)?;
    let four_r = target.threshold();
    let [j, k, l] = pieces.willie_sums(rule, |z| pieces.zb.cdf(threshold(z, coeff, eta_rho, four_r)))?;
    Ok(TermSums { j, k, l, c: T::zero() })
}

/// [`sop_terms`] with the threshold replaced by its `ρ → ∞` limit
/// `z·A / (4^R̄·B)`.
pub fn sop_asymptotic_terms<T: Real>(
    scenario: &Scenario<T>,
    target: &SecrecyTarget<T>,
    coeff: &BoundCoefficients<T>,
    rule: &QuadratureRule<T>,
) -> Result<TermSums<T>> {
    let pieces = Pieces::new(scenario);
    let scale = coeff.bob / (target.threshold() * coeff.willie);
    let [j, k, l] = pieces.willie_sums(rule, |z| pieces.zb.cdf(z * scale))?;
    Ok(TermSums { j, k, l, c: T::zero() })
}

fn clamp_probability<T: Real>(p: T, side: &str) -> T {
    if p < T::zero() || p > T::one() {
        debug!("SOP {side} bound {p} clamped to [0, 1]");
    }
    p.max(T::zero()).min(T::one())
}

fn sop_pair<T: Real>(upper: &TermSums<T>, lower: &TermSums<T>) -> BoundPair<T> {
    BoundPair {
        upper: clamp_probability(T::one() - upper.willie_total(), "upper"),
        lower: clamp_probability(T::one() - lower.willie_total(), "lower"),
    }
}

/// SOP bounds at the channel's SNR.
pub fn sop_bounds<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    rule: &QuadratureRule<T>,
) -> Result<BoundPair<T>> {
    let upper = sop_terms(
        scenario,
        chan,
        target,
        &BoundCoefficients::sop_upper(scenario, chan),
        rule,
    )?;
    let lower = sop_terms(
        scenario,
        chan,
        target,
        &BoundCoefficients::sop_lower(scenario, chan),
        rule,
    )?;
    Ok(sop_pair(&upper, &lower))
}

/// High-SNR limit of [`sop_bounds`]. Independent of the SNR.
pub fn sop_asymptotic<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    target: &SecrecyTarget<T>,
    rule: &QuadratureRule<T>,
) -> Result<BoundPair<T>> {
    let upper = sop_asymptotic_terms(scenario, target, &BoundCoefficients::sop_upper(scenario, chan), rule)?;
    let lower = sop_asymptotic_terms(scenario, target, &BoundCoefficients::sop_lower(scenario, chan), rule)?;
    Ok(sop_pair(&upper, &lower))
}

/// Expected log2 rates for one coefficient pair: `c = E[log2(1 + ηρA/Zb)]`
/// and `j + k + l = E[log2(1 + ηρB/Zw)]`. No 1/2 pre-log.
pub fn esc_terms<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    coeff: &BoundCoefficients<T>,
    rule: &QuadratureRule<T>,
) -> Result<TermSums<T>> {
    let pieces = Pieces::new(scenario);
    let eta_rho = eta_snr(chan)?;
    let log2_1p = |x: T| x.ln_1p() / T::LN_2();
    let c = pieces.bob_sum(rule, |z| log2_1p(eta_rho * coeff.bob / z))?;
    let [j, k, l] = pieces.willie_sums(rule, |z| log2_1p(eta_rho * coeff.willie / z))?;
    Ok(TermSums { j, k, l, c })
}

fn esc_value<T: Real>(terms: &TermSums<T>) -> T {
    T::lit(0.5) * (terms.c - terms.willie_total())
}

/// ESC bounds in bits/s/Hz at the channel's SNR.
pub fn esc_bounds<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    rule: &QuadratureRule<T>,
) -> Result<BoundPair<T>> {
    let upper = esc_terms(scenario, chan, &BoundCoefficients::esc_upper(scenario, chan), rule)?;
    let lower = esc_terms(scenario, chan, &BoundCoefficients::esc_lower(scenario, chan), rule)?;
    Ok(BoundPair {
        upper: esc_value(&upper),
        lower: esc_value(&lower),
    })
}

/// `E[log2 Zw]` and `E[log2 Zb]`.
pub fn log_moments<T: Real>(scenario: &Scenario<T>, rule: &QuadratureRule<T>) -> Result<LogMoments<T>> {
    let pieces = Pieces::new(scenario);
    let bob = pieces.bob_sum(rule, |z| z.log2())?;
    let [j, k, l] = pieces.willie_sums(rule, |z| z.log2())?;
    Ok(LogMoments { willie: j + k + l, bob })
}

/// High-SNR limit of [`esc_bounds`]:
/// `(1/2)(E[log2 Zw] − E[log2 Zb] ± 2αD·log2 e)`.
pub fn esc_asymptotic<T: Real>(
    scenario: &Scenario<T>,
    chan: &ChannelParams<T>,
    rule: &QuadratureRule<T>,
) -> Result<BoundPair<T>> {
    let m = log_moments(scenario, rule)?;
    let half = T::lit(0.5);
    // log2(exp(-2αD)), non-positive.
    let loss = chan.worst_attenuation(scenario).log2();
    Ok(BoundPair {
        upper: half * (m.willie - m.bob - loss),
        lower: half * (m.willie - m.bob + loss),
    })
}

/// Two-point estimate of the diversity order,
/// `−(ln P(ρ2) − ln P(ρ1)) / (ln ρ2 − ln ρ1)`.
pub fn diversity_estimate<T, F>(mut sop_at: F, rho1: T, rho2: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    check_snr_pair(rho1, rho2)?;
    let p1 = sop_at(rho1);
    let p2 = sop_at(rho2);
    for (p, rho) in [(p1, rho1), (p2, rho2)] {
        if p.is_nan() || p <= T::zero() {
            return Err(Error::ZeroProbability {
                rho: rho.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(-(p2.ln() - p1.ln()) / (rho2.ln() - rho1.ln()))
}

/// Two-point estimate of the high-SNR slope,
/// `(R(ρ2) − R(ρ1)) / (log2 ρ2 − log2 ρ1)`.
pub fn slope_estimate<T, F>(mut esc_at: F, rho1: T, rho2: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    check_snr_pair(rho1, rho2)?;
    Ok((esc_at(rho2) - esc_at(rho1)) / (rho2.log2() - rho1.log2()))
}

fn check_snr_pair<T: Real>(rho1: T, rho2: T) -> Result<()> {
    if rho1 > T::zero() && rho2 > rho1 && rho2.is_finite() {
        Ok(())
    } else {
        Err(Error::BadSnrPair {
            rho1: rho1.to_f64().unwrap_or(f64::NAN),
            rho2: rho2.to_f64().unwrap_or(f64::NAN),
        })
    }
}
