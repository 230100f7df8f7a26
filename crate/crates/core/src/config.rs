//! Run configuration: a flat JSON object whose keys mirror [`RunConfig`].
//!
//! Absent keys take the reference deployment values (25 m room, 3 m
//! waveguide, 10 GHz carrier, α = 0.01 Np/m, 10 kbit/s over 1 MHz,
//! 1000 quadrature nodes, 5·10⁴ Monte Carlo trials).

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::error::{config_error, io_error, Result};
use crate::model::{ChannelParams, FeedPlacement, Scenario, SecrecyTarget};
use crate::montecarlo::{McConfig, DEFAULT_CHUNK_SIZE, MIN_TRIALS};
use crate::quad::QuadratureRule;

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "side_length_D",
    "waveguide_height_d",
    "feed_point",
    "carrier_freq_fc",
    "attenuation_alpha",
    "target_rate_Rbar",
    "target_rate_bps",
    "bandwidth_hz",
    "snr_db_grid",
    "quadrature_n",
    "mc_trials",
    "mc_seed",
    "mc_chunk_size",
    "ks_samples",
    "output_path",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub side_length_d: f64,
    pub waveguide_height_d: f64,
    pub feed_point: FeedPlacement,
    pub carrier_freq_fc: f64,
    pub attenuation_alpha: f64,
    /// Target secrecy rate in bits/s/Hz.
    pub target_rate_rbar: f64,
    /// Transmit SNR grid in dB, `ρ = 10^(dB/10)`.
    pub snr_db_grid: Vec<f64>,
    pub quadrature_n: usize,
    pub mc_trials: usize,
    pub mc_seed: u64,
    pub mc_chunk_size: usize,
    pub ks_samples: usize,
    pub output_path: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            side_length_d: 25.0,
            waveguide_height_d: 3.0,
            feed_point: FeedPlacement::Center,
            carrier_freq_fc: 10e9,
            attenuation_alpha: 0.01,
            target_rate_rbar: 10e3 / 1e6,
            snr_db_grid: (-2..=10).map(|k| f64::from(k) * 5.0).collect(),
            quadrature_n: 1000,
            mc_trials: 50_000,
            mc_seed: 20_251_016,
            mc_chunk_size: DEFAULT_CHUNK_SIZE,
            ks_samples: 200_000,
            output_path: PathBuf::from("sweep.csv"),
        }
    }
}

fn number(key: &str, v: &Value) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| config_error(key, format!("expected a number, got {v}")))?;
    if !x.is_finite() {
        return Err(config_error(key, "value is not finite"));
    }
    Ok(x)
}

fn count(key: &str, v: &Value) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| config_error(key, format!("expected a non-negative integer, got {v}")))
}

impl RunConfig {
    /// Parses a config document. Empty or whitespace-only input yields the
    /// defaults.
    pub fn from_json_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        let value: Value = serde_json::from_str(text).map_err(|e| config_error("<root>", e.to_string()))?;
        let map = value
            .as_object()
            .ok_or_else(|| config_error("<root>", "expected a JSON object"))?;
        Self::from_map(map)
    }

    fn from_map(map: &Map<String, Value>) -> Result<Self> {
        let mut cfg = Self::default();
        let mut bit_rate = None;
        let mut bandwidth = None;
        for (key, v) in map {
            let k = key.as_str();
            match k {
                "side_length_D" => cfg.side_length_d = number(k, v)?,
                "waveguide_height_d" => cfg.waveguide_height_d = number(k, v)?,
                "feed_point" => {
                    let s = v
                        .as_str()
                        .ok_or_else(|| config_error(k, format!("expected a string, got {v}")))?;
                    cfg.feed_point = s.parse().map_err(|e: crate::Error| config_error(k, e.to_string()))?;
                }
                "carrier_freq_fc" => cfg.carrier_freq_fc = number(k, v)?,
                "attenuation_alpha" => cfg.attenuation_alpha = number(k, v)?,
                "target_rate_Rbar" => cfg.target_rate_rbar = number(k, v)?,
                "target_rate_bps" => bit_rate = Some(number(k, v)?),
                "bandwidth_hz" => bandwidth = Some(number(k, v)?),
                "snr_db_grid" => {
                    let items = v
                        .as_array()
                        .ok_or_else(|| config_error(k, format!("expected an array, got {v}")))?;
                    cfg.snr_db_grid = items
                        .iter()
                        .enumerate()
                        .map(|(i, x)| number(&format!("snr_db_grid[{i}]"), x))
                        .collect::<Result<_>>()?;
                }
                "quadrature_n" => cfg.quadrature_n = count(k, v)?,
                "mc_trials" => cfg.mc_trials = count(k, v)?,
                "mc_seed" => {
                    cfg.mc_seed = v
                        .as_u64()
                        .ok_or_else(|| config_error(k, format!("expected an unsigned 64-bit integer, got {v}")))?
                }
                "mc_chunk_size" => cfg.mc_chunk_size = count(k, v)?,
                "ks_samples" => cfg.ks_samples = count(k, v)?,
                "output_path" => {
                    let s = v
                        .as_str()
                        .ok_or_else(|| config_error(k, format!("expected a string, got {v}")))?;
                    cfg.output_path = PathBuf::from(s);
                }
                _ => return Err(config_error(k, "unknown key")),
            }
        }
        if bit_rate.is_some() || bandwidth.is_some() {
            if map.contains_key("target_rate_Rbar") {
                return Err(config_error(
                    "target_rate_Rbar",
                    "give either target_rate_Rbar or target_rate_bps/bandwidth_hz, not both",
                ));
            }
            let bw = bandwidth.unwrap_or(1e6);
            if bw <= 0.0 {
                return Err(config_error("bandwidth_hz", format!("must be > 0, got {bw}")));
            }
            cfg.target_rate_rbar = bit_rate.unwrap_or(10e3) / bw;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks every invariant, naming the first offending key.
    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(config_error(key, format!("must be finite and > 0, got {x}")))
            }
        };
        positive("side_length_D", self.side_length_d)?;
        positive("waveguide_height_d", self.waveguide_height_d)?;
        positive("carrier_freq_fc", self.carrier_freq_fc)?;
        if !(self.attenuation_alpha.is_finite() && self.attenuation_alpha >= 0.0) {
            return Err(config_error(
                "attenuation_alpha",
                format!("must be finite and >= 0, got {}", self.attenuation_alpha),
            ));
        }
        if !(self.target_rate_rbar.is_finite() && self.target_rate_rbar >= 0.0) {
            return Err(config_error(
                "target_rate_Rbar",
                format!("must be finite and >= 0, got {}", self.target_rate_rbar),
            ));
        }
        if self.snr_db_grid.is_empty() {
            return Err(config_error("snr_db_grid", "grid is empty"));
        }
        for (i, w) in self.snr_db_grid.windows(2).enumerate() {
            if w[1].is_nan() || w[1] <= w[0] {
                return Err(config_error(
                    format!("snr_db_grid[{}]", i + 1),
                    format!("grid must be strictly increasing ({} after {})", w[1], w[0]),
                ));
            }
        }
        if self.quadrature_n == 0 {
            return Err(config_error("quadrature_n", "must be >= 1"));
        }
        if self.mc_trials < MIN_TRIALS {
            return Err(config_error(
                "mc_trials",
                format!("must be >= {MIN_TRIALS}, got {}", self.mc_trials),
            ));
        }
        if self.mc_chunk_size == 0 {
            return Err(config_error("mc_chunk_size", "must be >= 1"));
        }
        if self.ks_samples == 0 {
            return Err(config_error("ks_samples", "must be >= 1"));
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<Scenario<f64>> {
        Scenario::with_feed(self.side_length_d, self.waveguide_height_d, self.feed_point)
    }

    /// Channel at transmit SNR `snr_db` (unit noise at both receivers).
    pub fn channel(&self, snr_db: f64) -> Result<ChannelParams<f64>> {
        ChannelParams::with_snr(self.carrier_freq_fc, self.attenuation_alpha, db_to_linear(snr_db))
    }

    pub fn target(&self) -> Result<SecrecyTarget<f64>> {
        SecrecyTarget::new(self.target_rate_rbar)
    }

    pub fn rule(&self) -> Result<QuadratureRule<f64>> {
        QuadratureRule::new(self.quadrature_n)
    }

    pub fn mc(&self) -> Result<McConfig> {
        McConfig::with_chunk_size(self.mc_trials, self.mc_seed, self.mc_chunk_size)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    RunConfig::from_json_str(&text)
}
