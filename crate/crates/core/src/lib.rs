//! Physical-layer security analysis of a pinching-antenna (PA) link with
//! in-waveguide attenuation.
//!
//! A base station feeds a dielectric waveguide; a pinching antenna on the
//! waveguide radiates from the point closest to the legitimate user (Bob),
//! while a passive eavesdropper (Willie) overhears the same radiation. The
//! crate computes quadrature-based bounds and high-SNR limits for the
//! secrecy outage probability and ergodic secrecy capacity, validates them
//! with seeded Monte Carlo simulation, and compares the PA link with a
//! fixed-antenna (FA) baseline.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`). The
//! `*64` aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use pasec::{make_rule, sop_bounds, ChannelParams64, Scenario64, SecrecyTarget64};
//!
//! let room = Scenario64::new(25.0, 3.0)?;
//! let chan = ChannelParams64::with_snr(10e9, 0.01, 1e5)?; // 50 dB
//! let target = SecrecyTarget64::new(0.01)?;
//! let sop = sop_bounds(&room, &chan, &target, &make_rule(1000)?)?;
//! assert!(sop.lower <= sop.upper);
//! # Ok::<(), pasec::Error>(())
//! ```

pub mod bounds;
pub mod config;
pub mod diststats;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quad;
pub mod scalar;
pub mod sweep;
pub mod validate;

pub use bounds::{
    diversity_estimate, esc_asymptotic, esc_bounds, slope_estimate, sop_asymptotic, sop_bounds, sop_threshold,
    BoundCoefficients, BoundPair, TermSums,
};
pub use diststats::{ks_statistic, ZbDistribution, ZwDistribution};
pub use error::{Error, Result};
pub use model::{ChannelParams, FeedPlacement, RateSample, Scenario, SecrecyTarget, UserPositions};
pub use montecarlo::{McConfig, McEstimate, McReport};
pub use quad::{make_rule, PieceMap, QuadratureRule};
pub use scalar::Real;

pub type Scenario64 = Scenario<f64>;
pub type UserPositions64 = UserPositions<f64>;
pub type ChannelParams64 = ChannelParams<f64>;
pub type SecrecyTarget64 = SecrecyTarget<f64>;
pub type RateSample64 = RateSample<f64>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type BoundPair64 = BoundPair<f64>;
pub type McEstimate64 = McEstimate<f64>;

pub type Scenario32 = Scenario<f32>;
pub type ChannelParams32 = ChannelParams<f32>;
pub type SecrecyTarget32 = SecrecyTarget<f32>;
pub type QuadratureRule32 = QuadratureRule<f32>;
