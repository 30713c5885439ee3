use serde::{Deserialize, Serialize};

/// Ramp profile `s(u)` on `[0, 1]` with `s(0) = 0`, `s(1) = 1`.
///
/// All profiles satisfy `s(1 − u) = 1 − s(u)`, which the mirror-symmetric
/// protocols rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RampShape {
    Linear,
    /// `3u² − 2u³`, zero slope at both ends.
    #[default]
    Smoothstep,
    /// `10u³ − 15u⁴ + 6u⁵`, zero slope and curvature at both ends.
    Smootherstep,
}

impl RampShape {
    pub fn eval(self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            RampShape::Linear => u,
            RampShape::Smoothstep => u * u * (3.0 - 2.0 * u),
            RampShape::Smootherstep => u * u * u * (u * (6.0 * u - 15.0) + 10.0),
        }
    }
}

/// How a ramp interpolates between its end values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Interp {
    /// Every channel moves along `start + (end − start)·s(u)`.
    #[default]
    Straight,
    /// The drive channel moves at constant detuning along the mixing angle
    /// `α = atan2(drive, detuning)`, interpolated by `s(u)`. This spends
    /// time where the gap is small. Requires the detuning to be held fixed
    /// and nonzero over the segment.
    Angle { detuning: usize, drive: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_mirror_symmetry() {
        for shape in [RampShape::Linear, RampShape::Smoothstep, RampShape::Smootherstep] {
            assert_eq!(shape.eval(0.0), 0.0);
            assert_eq!(shape.eval(1.0), 1.0);
            for k in 0..=100 {
                let u = k as f64 / 100.0;
                assert!((shape.eval(1.0 - u) - (1.0 - shape.eval(u))).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn smoothstep_has_flat_ends() {
        let h = 1e-6;
        let s = RampShape::Smoothstep;
        assert!(s.eval(h) / h < 1e-5);
        assert!((1.0 - s.eval(1.0 - h)) / h < 1e-5);
    }
}
