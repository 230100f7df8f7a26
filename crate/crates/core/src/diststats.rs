//! Squared PA–user distance distributions.
//!
//! With the PA directly above Bob's x-coordinate, `Zb = y1² + d²` and
//! `Zw = (x1 − x2)² + y2² + d²` for coordinates uniform on `[-D/2, D/2]`.
//! Both have closed-form PDFs and CDFs; the samplers here draw the
//! underlying coordinates directly so they can check those closed forms.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::scalar::Real;

/// Distribution of the squared PA–Bob distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZbDistribution<T> {
    side: T,
    height: T,
}

impl<T: Real> ZbDistribution<T> {
    pub fn new(scenario: &Scenario<T>) -> Self {
        Self {
            side: scenario.side_length(),
            height: scenario.waveguide_height(),
        }
    }

    /// Closed support `[d², d² + D²/4]`.
    pub fn support(&self) -> (T, T) {
        let d2 = self.height * self.height;
        (d2, d2 + self.side * self.side / T::lit(4.0))
    }

    /// Density `1/(D√(z − d²))` on the support. At `z = d²` exactly the
    /// density diverges and `T::max_value()` is returned instead.
    pub fn pdf(&self, z: T) -> T {
        let (lo, hi) = self.support();
        if z < lo || z > hi {
            return T::zero();
        }
        let zeta = z - lo;
        if zeta == T::zero() {
            return T::max_value();
        }
        T::one() / (self.side * zeta.sqrt())
    }

    /// `(2/D)√(z − d²)`, clamped to `[0, 1]`.
    pub fn cdf(&self, z: T) -> T {
        let lo = self.height * self.height;
        if z <= lo {
            return T::zero();
        }
        (T::lit(2.0) / self.side * (z - lo).sqrt()).min(T::one())
    }

    /// Draws `y1² + d²` with `y1` uniform across the room.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let h = self.side / T::lit(2.0);
        let y1 = rng.random_range(-h..=h);
        y1 * y1 + self.height * self.height
    }
}

/// Distribution of the squared PA–Willie distance.
///
/// The support `[d², d² + 5D²/4]` splits into three pieces at `d² + D²/4`
/// and `d² + D²`. Branches are half-open `[lo, hi)` except the last, which
/// is closed; the CDF is continuous so the choice does not matter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZwDistribution<T> {
    side: T,
    height: T,
}

impl<T: Real> ZwDistribution<T> {
    pub fn new(scenario: &Scenario<T>) -> Self {
        Self {
            side: scenario.side_length(),
            height: scenario.waveguide_height(),
        }
    }

    pub fn support(&self) -> (T, T) {
        let d2 = self.height * self.height;
        (d2, d2 + T::lit(1.25) * self.side * self.side)
    }

    /// Interior breakpoints `d² + D²/4` and `d² + D²`.
    pub fn breakpoints(&self) -> [T; 2] {
        let d2 = self.height * self.height;
        let dd = self.side * self.side;
        [d2 + dd / T::lit(4.0), d2 + dd]
    }

    /// `ζ = z − d²`.
    pub fn zeta(&self, z: T) -> T {
        z - self.height * self.height
    }

    /// `arcsin(D / (2√ζ))` with the argument clamped to 1.
    fn arcsin_half_side(&self, zeta: T) -> T {
        (self.side / (T::lit(2.0) * zeta.sqrt())).min(T::one()).asin()
    }

    /// Density on the first piece, `π/D² − 2√ζ/D³`.
    pub fn near_density(&self, zeta: T) -> T {
        let dd = self.side * self.side;
        T::PI() / dd - T::lit(2.0) * zeta.max(T::zero()).sqrt() / (dd * self.side)
    }

    /// Density on the middle piece, `ξ(ζ)`.
    pub fn xi(&self, zeta: T) -> T {
        let dd = self.side * self.side;
        T::lit(2.0) / dd * self.arcsin_half_side(zeta) - T::one() / dd
    }

    /// Density on the far piece, `ε(ζ)`.
    pub fn epsilon(&self, zeta: T) -> T {
        let d = self.side;
        let dd = d * d;
        let inner = (T::one() - dd / zeta).max(T::zero()).sqrt().min(T::one());
        let tail = (zeta - dd).max(T::zero()).sqrt();
        T::lit(2.0) / dd * (self.arcsin_half_side(zeta) - inner.asin()) - T::one() / dd + T::lit(2.0) / (dd * d) * tail
    }

    /// CDF on the middle piece, `δ(ζ)`.
    pub fn delta(&self, zeta: T) -> T {
        let d = self.side;
        let dd = d * d;
        (zeta - dd / T::lit(4.0)).max(T::zero()).sqrt() / d + T::lit(2.0) * zeta / dd * self.arcsin_half_side(zeta)
            - zeta / dd
            + T::one() / T::lit(12.0)
    }

    /// CDF on the far piece, `θ(ζ)`.
    pub fn theta(&self, zeta: T) -> T {
        let d = self.side;
        let dd = d * d;
        let two = T::lit(2.0);
        let quarter = (zeta - dd / T::lit(4.0)).max(T::zero()).sqrt();
        let tail = (zeta - dd).max(T::zero()).sqrt();
        // atan(D / (2·quarter)) is finite here since zeta >= D² on this piece.
        quarter / d + two * zeta / dd * ((d / (two * quarter)).atan() - (tail / d).atan()) - zeta / dd
            + T::one() / T::lit(12.0)
            + two / (T::lit(3.0) * dd * d) * tail * (two * zeta + dd)
    }

    pub fn pdf(&self, z: T) -> T {
        let (lo, hi) = self.support();
        if z < lo || z > hi {
            return T::zero();
        }
        let [b1, b2] = self.breakpoints();
        let zeta = self.zeta(z);
        if z < b1 {
            self.near_density(zeta)
        } else if z < b2 {
            self.xi(zeta)
        } else {
            self.epsilon(zeta)
        }
    }

    pub fn cdf(&self, z: T) -> T {
        let (lo, hi) = self.support();
        if z <= lo {
            return T::zero();
        }
        if z >= hi {
            return T::one();
        }
        let [b1, b2] = self.breakpoints();
        let zeta = self.zeta(z);
        let dd = self.side * self.side;
        let v = if z < b1 {
            T::PI() * zeta / dd - T::lit(4.0) * zeta * zeta.sqrt() / (T::lit(3.0) * dd * self.side)
        } else if z < b2 {
            self.delta(zeta)
        } else {
            self.theta(zeta)
        };
        v.max(T::zero()).min(T::one())
    }

    /// `1 − cdf(z)`. On the far piece this integrates the corner area
    /// directly, so it keeps full relative precision as `z` approaches the
    /// support end where `cdf` rounds to 1.
    pub fn sf(&self, z: T) -> T {
        let (lo, hi) = self.support();
        if z <= lo {
            return T::one();
        }
        if z >= hi {
            return T::zero();
        }
        let [_, b2] = self.breakpoints();
        if z < b2 {
            return T::one() - self.cdf(z);
        }
        let side = self.side.to_f64().unwrap_or(f64::NAN);
        let zeta = self.zeta(z).to_f64().unwrap_or(f64::NAN);
        let dd = side * side;
        // Gap between |x1 − x2| and D over the strip where it is positive.
        let reach = |y: f64| {
            let w = (zeta - y * y).sqrt();
            (dd - zeta + y * y) / (side + w)
        };
        let top = reach(side / 2.0);
        if top <= 0.0 {
            return T::zero();
        }
        let a = (zeta - dd).max(0.0).sqrt();
        let span = side / 2.0 - a;
        let out = quadrature::integrate(|y| (reach(y) / top).powi(2), a, side / 2.0, 1e-15 * span);
        T::lit(2.0 * top * top * out.integral / (dd * side))
    }

    /// Draws `(x1 − x2)² + y2² + d²` with all coordinates uniform across
    /// the room.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let h = self.side / T::lit(2.0);
        let x1 = rng.random_range(-h..=h);
        let x2 = rng.random_range(-h..=h);
        let y2 = rng.random_range(-h..=h);
        let dx = x1 - x2;
        dx * dx + y2 * y2 + self.height * self.height
    }
}

/// Two-sided Kolmogorov–Smirnov statistic of `samples` against `cdf`.
///
/// The slice is sorted in place.
pub fn ks_statistic<T, F>(samples: &mut [T], cdf: F) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    if samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    samples.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let n = T::from_count(samples.len());
    let mut stat = T::zero();
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let above = T::from_count(i + 1) / n - f;
        let below = f - T::from_count(i) / n;
        stat = stat.max(above).max(below);
    }
    Ok(stat)
}

/// Asymptotic 1% critical value `1.63/√n` of the KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}
