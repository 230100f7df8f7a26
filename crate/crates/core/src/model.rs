//! Deployment geometry and instantaneous rate equations for the
//! pinching-antenna (PA) link and the fixed-antenna (FA) baseline.
//!
//! Coordinates are metres in a frame centred on the room floor: the room
//! spans `[-D/2, D/2]` in x and y, users stand at z = 0 and the waveguide
//! runs parallel to the x-axis at height `d` above y = 0.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type Point3<T> = [T; 3];

/// Where the signal enters the waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeedPlacement {
    /// Feed at `[0, 0, d]`, the same point as the FA baseline. In-waveguide
    /// travel is `|x1|`.
    #[default]
    Center,
    /// Feed at the waveguide end `[-D/2, 0, d]`. In-waveguide travel is
    /// `x1 + D/2`.
    End,
}

impl FeedPlacement {
    pub fn as_str(self) -> &'static str {
        match self {
            FeedPlacement::Center => "center",
            FeedPlacement::End => "end",
        }
    }
}

impl std::str::FromStr for FeedPlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "center" | "centre" => Ok(FeedPlacement::Center),
            "end" => Ok(FeedPlacement::End),
            other => Err(invalid(
                "feed_point",
                format!("expected \"center\" or \"end\", got {other:?}"),
            )),
        }
    }
}

/// Room and waveguide geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario<T> {
    side_length: T,
    waveguide_height: T,
    feed: FeedPlacement,
    feed_point: Point3<T>,
    fa_position: Point3<T>,
}

impl<T: Real> Scenario<T> {
    /// Room of side `side_length` with the waveguide at `waveguide_height`,
    /// fed at its centre.
    pub fn new(side_length: T, waveguide_height: T) -> Result<Self> {
        Self::with_feed(side_length, waveguide_height, FeedPlacement::Center)
    }

    pub fn with_feed(side_length: T, waveguide_height: T, feed: FeedPlacement) -> Result<Self> {
        if !(side_length.is_finite() && side_length > T::zero()) {
            return Err(invalid(
                "side_length_D",
                format!("must be finite and > 0, got {side_length}"),
            ));
        }
        if !(waveguide_height.is_finite() && waveguide_height > T::zero()) {
            return Err(invalid(
                "waveguide_height_d",
                format!("must be finite and > 0, got {waveguide_height}"),
            ));
        }
        let zero = T::zero();
        let feed_x = match feed {
            FeedPlacement::Center => zero,
            FeedPlacement::End => -side_length / T::lit(2.0),
        };
        Ok(Self {
            side_length,
            waveguide_height,
            feed,
            feed_point: [feed_x, zero, waveguide_height],
            fa_position: [zero, zero, waveguide_height],
        })
    }

    /// Room side length `D`.
    pub fn side_length(&self) -> T {
        self.side_length
    }

    /// Waveguide height `d`.
    pub fn waveguide_height(&self) -> T {
        self.waveguide_height
    }

    pub fn feed(&self) -> FeedPlacement {
        self.feed
    }

    pub fn feed_point(&self) -> Point3<T> {
        self.feed_point
    }

    pub fn fa_position(&self) -> Point3<T> {
        self.fa_position
    }

    pub fn half_side(&self) -> T {
        self.side_length / T::lit(2.0)
    }

    /// Guided propagation length from the feed to a PA at `pa`.
    /// Always within `[0, D]`.
    pub fn waveguide_travel(&self, pa: &Point3<T>) -> T {
        (pa[0] - self.feed_point[0]).abs()
    }

    pub fn contains_floor_point(&self, p: &Point3<T>) -> bool {
        let h = self.half_side();
        p[0].abs() <= h && p[1].abs() <= h && p[2] == T::zero()
    }
}

/// Positions of the legitimate user (Bob) and the eavesdropper (Willie).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserPositions<T> {
    pub bob: Point3<T>,
    pub willie: Point3<T>,
}

impl<T: Real> UserPositions<T> {
    /// Places Bob at `(x1, y1, 0)` and Willie at `(x2, y2, 0)`, checking both
    /// lie on the room floor.
    pub fn new(scenario: &Scenario<T>, bob_xy: [T; 2], willie_xy: [T; 2]) -> Result<Self> {
        let users = Self::new_unchecked(bob_xy, willie_xy);
        for (who, p) in [("bob", &users.bob), ("willie", &users.willie)] {
            if !scenario.contains_floor_point(p) {
                return Err(Error::OutsideRoom {
                    who,
                    position: p.map(|v| v.to_f64().unwrap_or(f64::NAN)),
                });
            }
        }
        Ok(users)
    }

    pub(crate) fn new_unchecked(bob_xy: [T; 2], willie_xy: [T; 2]) -> Self {
        Self {
            bob: [bob_xy[0], bob_xy[1], T::zero()],
            willie: [willie_xy[0], willie_xy[1], T::zero()],
        }
    }
}

/// Carrier, attenuation, transmit power and receiver noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    carrier_freq: T,
    attenuation: T,
    transmit_power: T,
    noise_bob: T,
    noise_willie: T,
    eta: T,
}

impl<T: Real> ChannelParams<T> {
    pub fn new(carrier_freq: T, attenuation: T, transmit_power: T, noise_bob: T, noise_willie: T) -> Result<Self> {
        let positive = |name, v: T| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        positive("carrier_freq_fc", carrier_freq)?;
        positive("noise_bob_var", noise_bob)?;
        positive("noise_willie_var", noise_willie)?;
        if !(attenuation.is_finite() && attenuation >= T::zero()) {
            return Err(invalid(
                "attenuation_alpha",
                format!("must be finite and >= 0, got {attenuation}"),
            ));
        }
        if !(transmit_power.is_finite() && transmit_power >= T::zero()) {
            return Err(invalid(
                "transmit_power_P1",
                format!("must be finite and >= 0, got {transmit_power}"),
            ));
        }
        Ok(Self {
            carrier_freq,
            attenuation,
            transmit_power,
            noise_bob,
            noise_willie,
            eta: free_space_factor(carrier_freq),
        })
    }

    /// Unit noise at both receivers and transmit power `snr`, so that the
    /// transmit SNR equals `snr`.
    pub fn with_snr(carrier_freq: T, attenuation: T, snr: T) -> Result<Self> {
        Self::new(carrier_freq, attenuation, snr, T::one(), T::one())
    }

    pub fn carrier_freq(&self) -> T {
        self.carrier_freq
    }

    pub fn attenuation(&self) -> T {
        self.attenuation
    }

    pub fn transmit_power(&self) -> T {
        self.transmit_power
    }

    pub fn noise_bob(&self) -> T {
        self.noise_bob
    }

    pub fn noise_willie(&self) -> T {
        self.noise_willie
    }

    /// Free-space factor `c² / (16 π² f_c²)`, m².
    pub fn eta(&self) -> T {
        self.eta
    }

    /// Transmit SNR `P1 / σ²`. Only defined when both receivers see the same
    /// noise power.
    pub fn snr(&self) -> Result<T> {
        if self.noise_bob != self.noise_willie {
            return Err(Error::AsymmetricNoise {
                bob: self.noise_bob.to_f64().unwrap_or(f64::NAN),
                willie: self.noise_willie.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.transmit_power / self.noise_bob)
    }

    pub fn set_snr(&mut self, snr: T) {
        self.transmit_power = snr * self.noise_bob;
    }

    pub fn set_carrier_freq(&mut self, carrier_freq: T) {
        self.carrier_freq = carrier_freq;
        self.eta = free_space_factor(carrier_freq);
    }

    pub fn set_attenuation(&mut self, attenuation: T) {
        self.attenuation = attenuation;
    }

    pub fn set_noise(&mut self, noise_bob: T, noise_willie: T) {
        self.noise_bob = noise_bob;
        self.noise_willie = noise_willie;
    }

    /// Worst-case attenuation over the full waveguide, `exp(-2αD)`.
    pub fn worst_attenuation(&self, scenario: &Scenario<T>) -> T {
        (-T::lit(2.0) * self.attenuation * scenario.side_length()).exp()
    }

    fn gain_bob(&self) -> T {
        self.eta * self.transmit_power / self.noise_bob
    }

    fn gain_willie(&self) -> T {
        self.eta * self.transmit_power / self.noise_willie
    }
}

pub fn free_space_factor<T: Real>(carrier_freq: T) -> T {
    let c = T::lit(SPEED_OF_LIGHT);
    c * c / (T::lit(16.0) * T::PI() * T::PI() * carrier_freq * carrier_freq)
}

/// Target secrecy rate `R̄` in bits/s/Hz with its cached threshold `4^R̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyTarget<T> {
    rate: T,
    threshold: T,
}

impl<T: Real> SecrecyTarget<T> {
    pub fn new(rate: T) -> Result<Self> {
        if !(rate.is_finite() && rate >= T::zero()) {
            return Err(invalid(
                "target_rate_Rbar",
                format!("must be finite and >= 0, got {rate}"),
            ));
        }
        Ok(Self {
            rate,
            threshold: T::lit(4.0).powf(rate),
        })
    }

    /// Target expressed as a bit rate over a bandwidth.
    pub fn from_bit_rate(bits_per_second: T, bandwidth_hz: T) -> Result<Self> {
        if !(bandwidth_hz.is_finite() && bandwidth_hz > T::zero()) {
            return Err(invalid(
                "bandwidth_hz",
                format!("must be finite and > 0, got {bandwidth_hz}"),
            ));
        }
        Self::new(bits_per_second / bandwidth_hz)
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    /// `4^R̄`.
    pub fn threshold(&self) -> T {
        self.threshold
    }
}

/// Instantaneous rates of one realization. `secrecy = bob - willie` and may
/// be negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSample<T> {
    pub bob: T,
    pub willie: T,
    pub secrecy: T,
}

impl<T: Real> RateSample<T> {
    pub fn new(bob: T, willie: T) -> Self {
        Self {
            bob,
            willie,
            secrecy: bob - willie,
        }
    }

    /// Outage event `Rs < R̄`. A negative secrecy rate is always an outage.
    pub fn is_outage(&self, target: &SecrecyTarget<T>) -> bool {
        self.secrecy < target.rate()
    }
}

pub fn squared_distance<T: Real>(a: &Point3<T>, b: &Point3<T>) -> T {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    dx * dx + dy * dy + dz * dz
}

/// `(1/2)·log2(1 + gain·attenuation / dist2)`.
#[inline]
pub fn link_rate<T: Real>(gain: T, attenuation: T, dist2: T) -> T {
    debug_assert!(dist2 > T::zero(), "zero link distance");
    T::lit(0.5) * (gain * attenuation / dist2).ln_1p() / T::LN_2()
}

/// The waveguide point closest to Bob, `[x1, 0, d]`.
pub fn pa_position_for_bob<T: Real>(scenario: &Scenario<T>, users: &UserPositions<T>) -> Point3<T> {
    [users.bob[0], T::zero(), scenario.waveguide_height()]
}

/// In-waveguide power factor `exp(-2α·L)` for the PA serving Bob.
pub fn attenuation_factor<T: Real>(scenario: &Scenario<T>, users: &UserPositions<T>, chan: &ChannelParams<T>) -> T {
    let pa = pa_position_for_bob(scenario, users);
    (-T::lit(2.0) * chan.attenuation() * scenario.waveguide_travel(&pa)).exp()
}

fn rate_at<T: Real>(
    scenario: &Scenario<T>,
    users: &UserPositions<T>,
    user: &Point3<T>,
    gain: T,
    chan: &ChannelParams<T>,
) -> T {
    let pa = pa_position_for_bob(scenario, users);
    let dist2 = squared_distance(&pa, user);
    assert!(dist2 > T::zero(), "PA coincides with a user");
    link_rate(gain, attenuation_factor(scenario, users, chan), dist2)
}

/// Bob's PA rate.
pub fn rate_bob<T: Real>(scenario: &Scenario<T>, users: &UserPositions<T>, chan: &ChannelParams<T>) -> T {
    rate_at(scenario, users, &users.bob, chan.gain_bob(), chan)
}

/// Willie's rate when overhearing the PA placed for Bob.
pub fn rate_willie<T: Real>(scenario: &Scenario<T>, users: &UserPositions<T>, chan: &ChannelParams<T>) -> T {
    rate_at(scenario, users, &users.willie, chan.gain_willie(), chan)
}

pub fn secrecy_rate<T: Real>(
    scenario: &Scenario<T>,
    users: &UserPositions<T>,
    chan: &ChannelParams<T>,
) -> RateSample<T> {
    RateSample::new(rate_bob(scenario, users, chan), rate_willie(scenario, users, chan))
}

/// Rate from the fixed antenna at `[0, 0, d]`, with Bob's noise power.
/// No in-waveguide loss.
pub fn rate_fa<T: Real>(scenario: &Scenario<T>, user: &Point3<T>, chan: &ChannelParams<T>) -> T {
    link_rate(
        chan.gain_bob(),
        T::one(),
        squared_distance(&scenario.fa_position(), user),
    )
}

/// FA secrecy rate with each receiver's own noise power.
pub fn secrecy_rate_fa<T: Real>(
    scenario: &Scenario<T>,
    users: &UserPositions<T>,
    chan: &ChannelParams<T>,
) -> RateSample<T> {
    let fa = scenario.fa_position();
    RateSample::new(
        link_rate(chan.gain_bob(), T::one(), squared_distance(&fa, &users.bob)),
        link_rate(chan.gain_willie(), T::one(), squared_distance(&fa, &users.willie)),
    )
}
