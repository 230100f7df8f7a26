//! Chebyshev–Gauss quadrature and the affine maps that carry each distance
//! distribution piece onto `[-1, 1]`.

use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::scalar::{pairwise_sum, Real};

/// `n`-node Chebyshev–Gauss rule: nodes `cos((2i − 1)π / 2n)`, weights `π/n`.
///
/// The rule integrates `g(t)/√(1 − t²)` exactly for polynomial `g`. Callers
/// integrating a plain `h(t)` pass `g(t) = h(t)·√(1 − t²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyRule);
        }
        let nf = T::from_count(n);
        let mut nodes = vec![T::zero(); n];
        // Mirror the first half so the ± pairs are exact negatives.
        for i in 0..n / 2 {
            let t = (T::from_count(2 * i + 1) * T::PI() / (T::lit(2.0) * nf)).cos();
            nodes[i] = t;
            nodes[n - 1 - i] = -t;
        }
        Ok(Self {
            nodes,
            weights: vec![T::PI() / nf; n],
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in decreasing order, `t_1 > t_2 > … > t_n`.
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `Σ w_i · g(t_i)`, summed pairwise in node order.
    pub fn integrate<F>(&self, g: F) -> Result<T>
    where
        F: Fn(T) -> T,
    {
        let mut terms = Vec::with_capacity(self.len());
        for (index, (&t, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let value = g(t);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand {
                    index,
                    node: t.to_f64().unwrap_or(f64::NAN),
                    value: value.to_f64().unwrap_or(f64::NAN),
                });
            }
            terms.push(w * value);
        }
        Ok(pairwise_sum(&terms))
    }
}

/// Shorthand for [`QuadratureRule::new`].
pub fn make_rule<T: Real>(n: usize) -> Result<QuadratureRule<T>> {
    QuadratureRule::new(n)
}

/// Affine substitution `z = scale·t + offset` from `[-1, 1]` onto one piece
/// of a distance distribution's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PieceMap<T> {
    pub scale: T,
    pub offset: T,
}

impl<T: Real> PieceMap<T> {
    pub fn z(&self, t: T) -> T {
        self.scale * t + self.offset
    }

    /// Bob's support `[d², d² + D²/4]`: `(D²/8, D²/8 + d²)`.
    pub fn bob(scenario: &Scenario<T>) -> Self {
        let (dd, d2) = squares(scenario);
        Self {
            scale: dd / T::lit(8.0),
            offset: dd / T::lit(8.0) + d2,
        }
    }

    /// Willie's three pieces: `[d², d² + D²/4]`, `[d² + D²/4, d² + D²]` and
    /// `[d² + D², d² + 5D²/4]`.
    pub fn willie(scenario: &Scenario<T>) -> [Self; 3] {
        let (dd, d2) = squares(scenario);
        let eighth = dd / T::lit(8.0);
        [
            Self {
                scale: eighth,
                offset: eighth + d2,
            },
            Self {
                scale: T::lit(3.0) * eighth,
                offset: T::lit(5.0) * eighth + d2,
            },
            Self {
                scale: eighth,
                offset: T::lit(9.0) * eighth + d2,
            },
        ]
    }
}

fn squares<T: Real>(scenario: &Scenario<T>) -> (T, T) {
    let d = scenario.side_length();
    let h = scenario.waveguide_height();
    (d * d, h * h)
}

/// `√(1 − t²)`, the factor that turns a Chebyshev–Gauss sum into a plain
/// integral over `[-1, 1]`.
#[inline]
pub fn compensation<T: Real>(t: T) -> T {
    (T::one() - t * t).max(T::zero()).sqrt()
}
