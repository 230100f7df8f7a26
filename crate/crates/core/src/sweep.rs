//! SNR sweeps: analytical bounds, asymptotes and Monte Carlo estimates per
//! grid point, and their CSV rendering.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::bounds::{esc_asymptotic, esc_bounds, sop_asymptotic, sop_bounds};
use crate::config::RunConfig;
use crate::error::{io_error, Error, Result};
use crate::montecarlo::{simulate, McReport};

/// One grid point. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub snr_db: f64,
    pub sop_lb: f64,
    pub sop_ub: f64,
    pub sop_asym_lb: f64,
    pub sop_asym_ub: f64,
    pub sop_mc: f64,
    pub sop_mc_se: f64,
    pub esc_lb: f64,
    pub esc_ub: f64,
    pub esc_asym_lb: f64,
    pub esc_asym_ub: f64,
    pub esc_mc: f64,
    pub esc_mc_se: f64,
    pub fa_sop_mc: f64,
    pub fa_esc_mc: f64,
}

impl SweepRecord {
    pub const FIELDS: [&'static str; 15] = [
        "snr_db",
        "sop_lb",
        "sop_ub",
        "sop_asym_lb",
        "sop_asym_ub",
        "sop_mc",
        "sop_mc_se",
        "esc_lb",
        "esc_ub",
        "esc_asym_lb",
        "esc_asym_ub",
        "esc_mc",
        "esc_mc_se",
        "fa_sop_mc",
        "fa_esc_mc",
    ];

    pub fn values(&self) -> [f64; 15] {
        [
            self.snr_db,
            self.sop_lb,
            self.sop_ub,
            self.sop_asym_lb,
            self.sop_asym_ub,
            self.sop_mc,
            self.sop_mc_se,
            self.esc_lb,
            self.esc_ub,
            self.esc_asym_lb,
            self.esc_asym_ub,
            self.esc_mc,
            self.esc_mc_se,
            self.fa_sop_mc,
            self.fa_esc_mc,
        ]
    }

    fn check_finite(&self) -> Result<()> {
        match self.values().iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(i) => Err(Error::NonFinite {
                snr_db: self.snr_db,
                field: Self::FIELDS[i],
            }),
        }
    }
}

/// Evaluates one grid point.
pub fn sweep_point(cfg: &RunConfig, snr_db: f64) -> Result<(SweepRecord, McReport<f64>)> {
    let scenario = cfg.scenario()?;
    let chan = cfg.channel(snr_db)?;
    let target = cfg.target()?;
    let rule = cfg.rule()?;
    let sop = sop_bounds(&scenario, &chan, &target, &rule)?;
    let sop_inf = sop_asymptotic(&scenario, &chan, &target, &rule)?;
    let esc = esc_bounds(&scenario, &chan, &rule)?;
    let esc_inf = esc_asymptotic(&scenario, &chan, &rule)?;
    let mc = simulate(&scenario, &chan, &target, &cfg.mc()?);
    let record = SweepRecord {
        snr_db,
        sop_lb: sop.lower,
        sop_ub: sop.upper,
        sop_asym_lb: sop_inf.lower,
        sop_asym_ub: sop_inf.upper,
        sop_mc: mc.sop_pa.mean,
        sop_mc_se: mc.sop_pa.std_error,
        esc_lb: esc.lower,
        esc_ub: esc.upper,
        esc_asym_lb: esc_inf.lower,
        esc_asym_ub: esc_inf.upper,
        esc_mc: mc.esc_pa.mean,
        esc_mc_se: mc.esc_pa.std_error,
        fa_sop_mc: mc.sop_fa.mean,
        fa_esc_mc: mc.esc_fa.mean,
    };
    record.check_finite()?;
    Ok((record, mc))
}

/// One record per grid point, in grid order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    cfg.snr_db_grid
        .par_iter()
        .map(|&db| sweep_point(cfg, db).map(|(r, _)| r))
        .collect()
}

/// Monte Carlo estimates only, one report per grid point.
pub fn run_mc_sweep(cfg: &RunConfig) -> Result<Vec<(f64, McReport<f64>)>> {
    cfg.validate()?;
    let scenario = cfg.scenario()?;
    let target = cfg.target()?;
    let mc = cfg.mc()?;
    cfg.snr_db_grid
        .par_iter()
        .map(|&db| {
            let chan = cfg.channel(db)?;
            Ok((db, simulate(&scenario, &chan, &target, &mc)))
        })
        .collect()
}

/// Fixed-width scientific rendering with 17 significant digits; parses
/// back to the identical `f64`.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

fn render_rows<const N: usize>(header: &[&str; N], rows: impl Iterator<Item = [f64; N]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_csv(records: &[SweepRecord]) -> String {
    render_rows(&SweepRecord::FIELDS, records.iter().map(SweepRecord::values))
}

pub const MC_FIELDS: [&str; 9] = [
    "snr_db",
    "sop_mc",
    "sop_mc_se",
    "esc_mc",
    "esc_mc_se",
    "fa_sop_mc",
    "fa_sop_mc_se",
    "fa_esc_mc",
    "fa_esc_mc_se",
];

pub fn render_mc_csv(rows: &[(f64, McReport<f64>)]) -> String {
    render_rows(
        &MC_FIELDS,
        rows.iter().map(|(db, r)| {
            [
                *db,
                r.sop_pa.mean,
                r.sop_pa.std_error,
                r.esc_pa.mean,
                r.esc_pa.std_error,
                r.sop_fa.mean,
                r.sop_fa.std_error,
                r.esc_fa.mean,
                r.esc_fa.std_error,
            ]
        }),
    )
}

pub fn write_text(text: &str, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| io_error(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| io_error(path, e))
}

pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    write_text(&render_csv(records), path)
}
