//! Seeded stand-ins for an uncharacterized control-to-parameter map.
//!
//! A map is stored in normalized form on `[0, 1]` with `f(0) = 0` and
//! `f(1) = 1`; the control knob `I ∈ [0, I_m]` and parameter scale `Ω_m`
//! are applied by the caller. Negative arguments use the odd extension
//! `f(−x) = −f(x)` so that signed channels keep their sign.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound on how much a random map may stretch or compress the control axis.
pub const MAX_SLOPE: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub weight: f64,
    pub center: f64,
    pub width: f64,
}

/// `G(x) = w₀x + Σ wₖ·σ((x − cₖ)/sₖ)` normalized to `(G(x) − G(0))/(G(1) − G(0))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnknownMap {
    pub linear_weight: f64,
    pub bumps: Vec<Bump>,
    pub seed: Option<u64>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl UnknownMap {
    /// `f(x) = x`.
    pub fn linear() -> Self {
        Self::custom(1.0, Vec::new()).expect("linear map is monotone")
    }

    pub fn custom(linear_weight: f64, bumps: Vec<Bump>) -> Result<Self> {
        if !linear_weight.is_finite() || bumps.iter().any(|b| !(b.width > 0.0) || !b.weight.is_finite()) {
            return Err(Error::InvalidParameter("map weights must be finite and widths positive".into()));
        }
        let m = Self { linear_weight, bumps, seed: None };
        m.validate()?;
        Ok(m)
    }

    /// A random smooth monotone map: a linear floor plus 1–3 sigmoid steps,
    /// redrawn until its slope stays within `[1/MAX_SLOPE, MAX_SLOPE]`.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let count = rng.random_range(1..=3);
            let bumps = (0..count)
                .map(|_| Bump {
                    weight: rng.random_range(0.2..2.0),
                    center: rng.random_range(0.1..0.9),
                    width: rng.random_range(0.03..0.25),
                })
                .collect();
            let w0 = rng.random_range(0.1..1.0);
            let mut m = Self::custom(w0, bumps).expect("positive weights give a monotone map");
            let (lo, hi) = m.slope_range();
            if hi <= MAX_SLOPE && lo >= 1.0 / MAX_SLOPE {
                m.seed = Some(seed);
                return m;
            }
        }
    }

    /// Smallest and largest slope of the normalized map on `[0, 1]`.
    pub fn slope_range(&self) -> (f64, f64) {
        let (g0, g1) = self.range();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for k in 0..=1024 {
            let x = k as f64 / 1024.0;
            let d = self.linear_weight
                + self
                    .bumps
                    .iter()
                    .map(|b| {
                        let s = sigmoid((x - b.center) / b.width);
                        b.weight * s * (1.0 - s) / b.width
                    })
                    .sum::<f64>();
            let d = d / (g1 - g0);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        (lo, hi)
    }

    fn raw(&self, x: f64) -> f64 {
        self.linear_weight * x
            + self
                .bumps
                .iter()
                .map(|b| b.weight * sigmoid((x - b.center) / b.width))
                .sum::<f64>()
    }

    fn range(&self) -> (f64, f64) {
        (self.raw(0.0), self.raw(1.0))
    }

    /// Normalized map on `[−1, 1]`, odd about zero. Endpoints are exact.
    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let sign = x.signum();
        let a = x.abs();
        if a >= 1.0 {
            return sign * if a == 1.0 { 1.0 } else { self.eval_pos(a) };
        }
        sign * self.eval_pos(a)
    }

    fn eval_pos(&self, a: f64) -> f64 {
        let (g0, g1) = self.range();
        (self.raw(a) - g0) / (g1 - g0)
    }

    /// Inverse of `eval` on `[−1, 1]` by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let sign = y.signum();
        let target = y.abs().min(1.0);
        if target == 1.0 {
            return sign;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.eval_pos(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 {
                break;
            }
        }
        sign * 0.5 * (lo + hi)
    }

    /// Checks strict monotonicity on a dense grid of `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        let (g0, g1) = self.range();
        if !(g1 > g0) {
            return Err(Error::NonMonotoneMap);
        }
        let n = 4096;
        let mut prev = 0.0;
        for k in 1..=n {
            let v = self.eval_pos(k as f64 / n as f64);
            if !(v > prev) {
                return Err(Error::NonMonotoneMap);
            }
            prev = v;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        for seed in 0..20 {
            let m = UnknownMap::random(seed);
            assert_eq!(m.eval(0.0), 0.0);
            assert_eq!(m.eval(1.0), 1.0);
            assert_eq!(m.eval(-1.0), -1.0);
        }
    }

    #[test]
    fn random_slopes_are_bounded() {
        for seed in 0..50 {
            let m = UnknownMap::random(seed);
            let (lo, hi) = m.slope_range();
            assert!(hi <= MAX_SLOPE && lo >= 1.0 / MAX_SLOPE, "seed {seed}: {lo} {hi}");
            // finite-difference check of the analytic slope
            let h = 1e-6;
            let fd = (m.eval(0.5 + h) - m.eval(0.5 - h)) / (2.0 * h);
            assert!(fd <= hi + 1e-6 && fd >= lo - 1e-6);
        }
    }

    #[test]
    fn same_seed_same_map() {
        assert_eq!(UnknownMap::random(7), UnknownMap::random(7));
        assert_ne!(UnknownMap::random(7), UnknownMap::random(8));
    }

    #[test]
    fn inverse_round_trips() {
        let m = UnknownMap::random(3);
        for k in -10..=10 {
            let x = k as f64 / 10.0;
            assert!((m.inverse(m.eval(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn decreasing_map_rejected() {
        let r = UnknownMap::custom(-1.0, Vec::new());
        assert_eq!(r, Err(Error::NonMonotoneMap));
        let r = UnknownMap::custom(0.1, vec![Bump { weight: -1.0, center: 0.5, width: 0.05 }]);
        assert_eq!(r, Err(Error::NonMonotoneMap));
    }
}
