//! Self-checks of the distance distributions: normalization, continuity at
//! the breakpoints, CDF/PDF consistency and sampler agreement.

use std::fmt;

use rand::SeedableRng;

use crate::config::RunConfig;
use crate::diststats::{ks_critical_1pct, ks_statistic, ZbDistribution, ZwDistribution};
use crate::error::{config_error, Result};
use crate::model::Scenario;
use crate::montecarlo::TrialRng;
use crate::quad::{compensation, PieceMap, QuadratureRule};

/// Node count for the normalization integrals. The piecewise densities
/// converge as O(n⁻²) under Chebyshev–Gauss, so this reaches ~1e-11.
pub const NORMALIZATION_NODES: usize = 200_000;

pub const NORMALIZATION_TOL: f64 = 1e-8;
pub const CONTINUITY_TOL: f64 = 1e-9;
pub const DERIVATIVE_TOL: f64 = 1e-5;
pub const DERIVATIVE_POINTS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct StatCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
}

impl StatCheck {
    fn new(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
        }
    }

    pub fn passed(&self) -> bool {
        self.value < self.limit
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StatsReport {
    pub checks: Vec<StatCheck>,
}

impl StatsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(StatCheck::passed)
    }

    pub fn get(&self, name: &str) -> Option<&StatCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<4} {:<28} {:>12.4e}  (limit {:.3e})",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.limit
            )?;
        }
        Ok(())
    }
}

/// `|∫ f_Zb − 1|` and `|∫ f_Zw − 1|` by Chebyshev–Gauss over each piece.
pub fn normalization_residuals(scenario: &Scenario<f64>, nodes: usize) -> Result<(f64, f64)> {
    let rule = QuadratureRule::new(nodes)?;
    let zb = ZbDistribution::new(scenario);
    let zw = ZwDistribution::new(scenario);
    let over =
        |map: PieceMap<f64>, pdf: &dyn Fn(f64) -> f64| rule.integrate(|t| pdf(map.z(t)) * map.scale * compensation(t));
    let bob = over(PieceMap::bob(scenario), &|z| zb.pdf(z))?;
    let mut willie = 0.0;
    for map in PieceMap::willie(scenario) {
        willie += over(map, &|z| zw.pdf(z))?;
    }
    Ok(((bob - 1.0).abs(), (willie - 1.0).abs()))
}

/// Gaps between adjacent CDF pieces at `d² + D²/4`, `d² + D²` and the
/// support end.
pub fn continuity_residuals(scenario: &Scenario<f64>) -> [f64; 3] {
    let zw = ZwDistribution::new(scenario);
    let d = scenario.side_length();
    let dd = d * d;
    let z1 = dd / 4.0;
    let near = std::f64::consts::PI * z1 / dd - 4.0 * z1.powf(1.5) / (3.0 * dd * d);
    [
        (zw.delta(z1) - near).abs(),
        (zw.theta(dd) - zw.delta(dd)).abs(),
        (zw.theta(1.25 * dd) - 1.0).abs(),
    ]
}

/// Largest relative gap between a central-difference derivative of the
/// CDF and `pdf` over `points` evenly spaced interior points of `[lo, hi]`,
/// skipping points within `exclusion` of any `knots`. The CDF is given
/// through its complement `sf` so the difference keeps its precision where
/// the CDF is close to 1.
pub fn derivative_mismatch(
    sf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    knots: &[f64],
    exclusion: f64,
    points: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let z = lo + (hi - lo) * (i as f64 + 0.5) / points as f64;
        let gap = knots
            .iter()
            .chain([lo, hi].iter())
            .map(|k| (z - k).abs())
            .fold(f64::INFINITY, f64::min);
        if gap < exclusion {
            continue;
        }
        // Step scaled to the distance from the nearest kink.
        let h = (1e-3 * gap).min(1e-2);
        let fd = (sf(z - h) - sf(z + h)) / (2.0 * h);
        let exact = pdf(z);
        worst = worst.max(((fd - exact) / exact).abs());
    }
    worst
}

/// Runs every check with samples drawn from `sampler_scenario` and closed
/// forms from `cfg`'s scenario. They differ only when deliberately probing
/// the KS check.
pub fn validate_stats_with(cfg: &RunConfig, sampler_scenario: &Scenario<f64>) -> Result<StatsReport> {
    if cfg.ks_samples == 0 {
        return Err(config_error("ks_samples", "must be >= 1"));
    }
    let scenario = cfg.scenario()?;
    let zb = ZbDistribution::new(&scenario);
    let zw = ZwDistribution::new(&scenario);
    let mut report = StatsReport::default();

    let (nb, nw) = normalization_residuals(&scenario, NORMALIZATION_NODES)?;
    report
        .checks
        .push(StatCheck::new("normalization Zb", nb, NORMALIZATION_TOL));
    report
        .checks
        .push(StatCheck::new("normalization Zw", nw, NORMALIZATION_TOL));

    let names = ["continuity d²+D²/4", "continuity d²+D²", "continuity d²+5D²/4"];
    for (name, r) in names.iter().zip(continuity_residuals(&scenario)) {
        report.checks.push(StatCheck::new(*name, r, CONTINUITY_TOL));
    }

    let dd = scenario.side_length().powi(2);
    let exclusion = 1e-6 * dd;
    let (blo, bhi) = zb.support();
    let b = derivative_mismatch(
        |z| 1.0 - zb.cdf(z),
        |z| zb.pdf(z),
        blo,
        bhi,
        &[],
        exclusion,
        DERIVATIVE_POINTS,
    );
    report.checks.push(StatCheck::new("cdf'/pdf Zb", b, DERIVATIVE_TOL));
    let (wlo, whi) = zw.support();
    let w = derivative_mismatch(
        |z| zw.sf(z),
        |z| zw.pdf(z),
        wlo,
        whi,
        &zw.breakpoints(),
        exclusion,
        DERIVATIVE_POINTS,
    );
    report.checks.push(StatCheck::new("cdf'/pdf Zw", w, DERIVATIVE_TOL));

    let n = cfg.ks_samples;
    let critical = ks_critical_1pct(n);
    let sb = ZbDistribution::new(sampler_scenario);
    let sw = ZwDistribution::new(sampler_scenario);
    let mut rng = TrialRng::seed_from_u64(cfg.mc_seed);
    let mut xs: Vec<f64> = (0..n).map(|_| sb.sample(&mut rng)).collect();
    report
        .checks
        .push(StatCheck::new("KS Zb", ks_statistic(&mut xs, |z| zb.cdf(z))?, critical));
    let mut xs: Vec<f64> = (0..n).map(|_| sw.sample(&mut rng)).collect();
    report
        .checks
        .push(StatCheck::new("KS Zw", ks_statistic(&mut xs, |z| zw.cdf(z))?, critical));
    Ok(report)
}

pub fn validate_stats(cfg: &RunConfig) -> Result<StatsReport> {
    validate_stats_with(cfg, &cfg.scenario()?)
}
