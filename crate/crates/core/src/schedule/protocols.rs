//! Gate protocols expressed as parameter paths.
//!
//! `t_leg` is the duration of one adiabatic half: every protocol here runs
//! for `2·t_leg` in total.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Constraint, Interp, ParamPath, PathOrigin, RampShape, Segment, SegmentKind, UnknownMap};
use crate::error::{Error, Result};
use crate::hamiltonians::{h1, h2, h2_target_flipped, QubitParams, TwoQubitParams};
use crate::operator::Operator;

/// How drive ramps at fixed detuning are parameterized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DriveRamp {
    /// Straight interpolation of the drive amplitude.
    #[default]
    Straight,
    /// Interpolation of the mixing angle `atan2(Ω, Δ)`.
    GapAdapted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleLimits {
    pub omega_m: f64,
    pub delta_m: f64,
    pub omega_t_m: f64,
    pub delta_t_m: f64,
    pub theta: f64,
    pub t_leg: f64,
    pub shape: RampShape,
    pub drive_ramp: DriveRamp,
    /// Fraction of each phase-gate half spent ramping Ω (the rest rotates φ).
    pub phase_split: f64,
    /// Fraction of Hadamard leg A spent on each detuning ramp, steps (i) and (iv).
    pub hadamard_split: f64,
    /// Fraction of each CNOT half spent ramping the drive at full detuning.
    pub cnot_split: f64,
}

impl Default for ScheduleLimits {
    fn default() -> Self {
        Self {
            omega_m: 1.0,
            delta_m: 0.1,
            omega_t_m: 1.0,
            delta_t_m: 0.1,
            theta: PI / 2.0,
            t_leg: 300.0,
            shape: RampShape::Smoothstep,
            drive_ramp: DriveRamp::Straight,
            phase_split: 0.5,
            hadamard_split: 0.25,
            cnot_split: 0.5,
        }
    }
}

impl ScheduleLimits {
    /// Settings used for the fixed-ratio gate-error runs (`Δ_m/Ω_m = 1/10`):
    /// gap-adapted drive ramps, with most of each half spent where the gap
    /// is smallest.
    pub fn tuned(t_leg: f64) -> Self {
        Self {
            t_leg,
            drive_ramp: DriveRamp::GapAdapted,
            hadamard_split: 0.05,
            cnot_split: 0.9,
            ..Self::default()
        }
    }

    fn drive_interp(&self, detuning: usize, drive: usize) -> Interp {
        match self.drive_ramp {
            DriveRamp::Straight => Interp::Straight,
            DriveRamp::GapAdapted => Interp::Angle { detuning, drive },
        }
    }

    fn check_time(&self) -> Result<()> {
        if !(self.t_leg > 0.0) || !self.t_leg.is_finite() {
            return Err(Error::InvalidParameter(format!("leg duration must be positive, got {}", self.t_leg)));
        }
        Ok(())
    }
}

fn check_fraction(name: &str, x: f64, max: f64) -> Result<()> {
    if !(x > 0.0 && x < max) {
        return Err(Error::InvalidParameter(format!("{name} must lie in (0, {max}), got {x}")));
    }
    Ok(())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `(0,0) → (Ω_m,0) → (Ω_m,θ/2) ⇒ (Ω_m,θ/2+π) → (Ω_m,θ+π) → (0,θ+π)` over `(Ω, φ)`.
pub fn phase_gate_path(limits: &ScheduleLimits, fmap: &UnknownMap) -> Result<ParamPath> {
    let theta = limits.theta;
    if !(0.0..2.0 * PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!("theta must lie in [0, 2π), got {theta}")));
    }
    limits.check_time()?;
    positive("omega_m", limits.omega_m)?;
    check_fraction("phase_split", limits.phase_split, 1.0)?;
    fmap.validate()?;
    let (om, t, sh) = (limits.omega_m, limits.t_leg, limits.shape);
    let (ta, tb) = (limits.phase_split * t, (1.0 - limits.phase_split) * t);
    let segments = vec![
        Segment::ramp(ta, vec![0.0, 0.0], vec![om, 0.0], sh),
        Segment::ramp(tb, vec![om, 0.0], vec![om, theta / 2.0], sh),
        Segment::jump(vec![om, theta / 2.0], vec![om, theta / 2.0 + PI]),
        Segment::ramp(tb, vec![om, theta / 2.0 + PI], vec![om, theta + PI], sh),
        Segment::ramp(ta, vec![om, theta + PI], vec![0.0, theta + PI], sh),
    ];
    let total = 2.0 * t;
    Ok(ParamPath::new(&["omega", "phi"], segments)?
        .with_map(0, fmap.clone(), om)
        .with_origin(PathOrigin::Phase { theta })
        .with_constraints(vec![
            Constraint::mirror("omega(t) = omega(2T - t)", 0, total, 1.0, 0.0, 0.0, total),
            Constraint::mirror("phi(t) = pi + theta - phi(2T - t)", 1, total, -1.0, PI + theta, 0.0, total),
        ]))
}

/// Hadamard-like path over `(Δ, Ω_x)`.
///
/// Leg A (duration T) runs at `Ω_x = −Ω_m`; the jump flips the drive to
/// `+Ω_m`; leg B (duration T) retraces the first half of leg A at half
/// speed with the drive sign flipped, ending at `(Δ_m, 0)`.
pub fn hadamard_path(limits: &ScheduleLimits, fmap: &UnknownMap) -> Result<ParamPath> {
    limits.check_time()?;
    positive("delta_m", limits.delta_m)?;
    positive("omega_m", limits.omega_m)?;
    check_fraction("hadamard_split", limits.hadamard_split, 0.5)?;
    fmap.validate()?;
    let (dm, om, t, sh) = (limits.delta_m, limits.omega_m, limits.t_leg, limits.shape);
    let a = limits.hadamard_split * t;
    let b = (0.5 - limits.hadamard_split) * t;
    let angle = limits.drive_interp(0, 1);
    let segments = vec![
        Segment::ramp(a, vec![0.0, -om], vec![dm, -om], sh),
        Segment::ramp(b, vec![dm, -om], vec![dm, 0.0], sh).with_interp(angle),
        Segment::ramp(b, vec![dm, 0.0], vec![dm, -om], sh).with_interp(angle),
        Segment::ramp(a, vec![dm, -om], vec![0.0, -om], sh),
        Segment::jump(vec![0.0, -om], vec![0.0, om]),
        Segment::ramp(2.0 * a, vec![0.0, om], vec![dm, om], sh),
        Segment::ramp(2.0 * b, vec![dm, om], vec![dm, 0.0], sh).with_interp(angle),
    ];
    let retrace = |name: &str, channel: usize, factor: f64| Constraint {
        name: name.into(),
        channel,
        source: channel,
        factor,
        offset: 0.0,
        source_scale: 0.5,
        source_offset: -0.5 * t,
        from: t,
        to: 2.0 * t,
        tolerance: 1e-12,
    };
    Ok(ParamPath::new(&["delta", "omega_x"], segments)?
        .with_map(0, fmap.clone(), dm)
        .with_map(1, fmap.clone(), om)
        .with_origin(PathOrigin::Hadamard)
        .with_constraints(vec![
            Constraint::mirror("delta(t) = delta(T - t)", 0, t, 1.0, 0.0, 0.0, t),
            Constraint::mirror("omega_x(t) = omega_x(T - t)", 1, t, 1.0, 0.0, 0.0, t),
            retrace("delta(T + t) = delta(t/2)", 0, 1.0),
            retrace("omega_x(T + t) = -omega_x(t/2)", 1, -1.0),
        ]))
}

/// `(Δ̃_m,0) → (Δ̃_m,Ω̃_m) → (0,Ω̃_m) ⇒ (0,−Ω̃_m) → (Δ̃_m,−Ω̃_m) → (Δ̃_m,0)` over `(Δ̃, Ω̃_x)`.
pub fn cnot_u1_path(limits: &ScheduleLimits) -> Result<ParamPath> {
    cnot_u1_path_mapped(limits, &UnknownMap::linear())
}

/// As [`cnot_u1_path`], with both channels routed through `fmap`.
pub fn cnot_u1_path_mapped(limits: &ScheduleLimits, fmap: &UnknownMap) -> Result<ParamPath> {
    limits.check_time()?;
    positive("delta_t_m", limits.delta_t_m)?;
    positive("omega_t_m", limits.omega_t_m)?;
    check_fraction("cnot_split", limits.cnot_split, 1.0)?;
    fmap.validate()?;
    let (dm, om, t, sh) = (limits.delta_t_m, limits.omega_t_m, limits.t_leg, limits.shape);
    let a = limits.cnot_split * t;
    let b = (1.0 - limits.cnot_split) * t;
    let angle = limits.drive_interp(0, 1);
    let segments = vec![
        Segment::ramp(a, vec![dm, 0.0], vec![dm, om], sh).with_interp(angle),
        Segment::ramp(b, vec![dm, om], vec![0.0, om], sh),
        Segment::jump(vec![0.0, om], vec![0.0, -om]),
        Segment::ramp(b, vec![0.0, -om], vec![dm, -om], sh),
        Segment::ramp(a, vec![dm, -om], vec![dm, 0.0], sh).with_interp(angle),
    ];
    let total = 2.0 * t;
    Ok(ParamPath::new(&["delta_t", "omega_x"], segments)?
        .with_map(0, fmap.clone(), dm)
        .with_map(1, fmap.clone(), om)
        .with_origin(PathOrigin::CnotU1 { half: t })
        .with_constraints(vec![
            Constraint::mirror("delta_t(t) = delta_t(2T - t)", 0, total, 1.0, 0.0, 0.0, total),
            Constraint::mirror("omega_x(t) = -omega_x(2T - t)", 1, total, -1.0, 0.0, 0.0, total),
        ]))
}

fn u3_from(u1: &ParamPath, refocus: bool) -> Result<ParamPath> {
    match u1.origin {
        PathOrigin::CnotU1 { .. } => {}
        ref other => {
            return Err(Error::MismatchedPath(format!("expected a CNOT U1 path, got {other:?}")));
        }
    }
    if u1.width() != 2 {
        return Err(Error::MismatchedPath("U1 path must have two channels".into()));
    }
    let mut segments = Vec::new();
    let mut flipped = false;
    for seg in u1.segments() {
        let flip = if refocus && flipped { 1.0 } else { 0.0 };
        match seg.kind {
            SegmentKind::Jump => {
                if refocus {
                    segments.push(Segment::jump(vec![seg.start[0], 0.0, 0.0], vec![seg.end[0], 0.0, 1.0]));
                    flipped = true;
                } else if seg.start[0] != seg.end[0] {
                    segments.push(Segment::jump(vec![seg.start[0], 0.0, 0.0], vec![seg.end[0], 0.0, 0.0]));
                }
            }
            _ => {
                let start = vec![seg.start[0], 0.0, flip];
                let end = vec![seg.end[0], 0.0, flip];
                if start == end {
                    segments.push(Segment::hold(seg.duration, start));
                } else {
                    segments.push(Segment::ramp(seg.duration, start, end, seg.shape));
                }
            }
        }
    }
    let total = u1.total_duration();
    let mut path = ParamPath::new(&["delta_t", "omega_x", "target_flip"], segments)?
        .with_origin(PathOrigin::CnotU3 { refocused: refocus })
        .with_constraints(vec![Constraint::mirror(
            "delta_t(t) = delta_t(2T - t)",
            0,
            total,
            1.0,
            0.0,
            0.0,
            total,
        )]);
    if let Some(cm) = &u1.maps()[0] {
        path = path.with_map(0, cm.map.clone(), cm.scale);
    }
    Ok(path)
}

/// Same `Δ̃` trajectory as `u1_path` with the drive off.
///
/// The target qubit is refocused at the midpoint: the `target_flip`
/// channel jumps to 1, and [`cnot_builder`] then evolves under
/// `(I⊗σx) h2 (I⊗σx)`. Without refocusing the zero-drive evolution puts
/// the whole conditional phase on `|11⟩` alone.
pub fn cnot_u3_path(u1_path: &ParamPath) -> Result<ParamPath> {
    u3_from(u1_path, true)
}

/// The zero-drive path without the midpoint refocusing.
pub fn cnot_u3_path_unrefocused(u1_path: &ParamPath) -> Result<ParamPath> {
    u3_from(u1_path, false)
}

/// `h1` over `(Ω, φ)` with `Δ = 0`.
pub fn phase_builder(v: &[f64]) -> Operator {
    h1(QubitParams::new(0.0, v[0].abs(), v[1] + if v[0] < 0.0 { PI } else { 0.0 }))
}

/// `h1` over `(Δ, Ω_x)`.
pub fn hadamard_builder(v: &[f64]) -> Operator {
    h1(QubitParams::from_signed(v[0], v[1]))
}

/// `h2` over `(Δ̃, Ω̃_x[, target_flip])`.
pub fn cnot_builder(v: &[f64]) -> Operator {
    let p = TwoQubitParams::from_signed(v[0], v[1]);
    if v.len() > 2 && v[2] > 0.5 {
        h2_target_flipped(p)
    } else {
        h2(p)
    }
}
