//! Piecewise parameter trajectories: ramps, holds and sudden jumps, with
//! declared symmetry constraints that can be checked numerically.

mod protocols;
mod shape;
mod unknown_map;

pub use protocols::*;
pub use shape::{Interp, RampShape};
pub use unknown_map::{Bump, UnknownMap, MAX_SLOPE};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Ramp,
    Hold,
    Jump,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub duration: f64,
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub shape: RampShape,
    pub interp: Interp,
}

impl Segment {
    pub fn ramp(duration: f64, start: Vec<f64>, end: Vec<f64>, shape: RampShape) -> Self {
        Self { kind: SegmentKind::Ramp, duration, start, end, shape, interp: Interp::Straight }
    }

    pub fn hold(duration: f64, values: Vec<f64>) -> Self {
        Self {
            kind: SegmentKind::Hold,
            duration,
            end: values.clone(),
            start: values,
            shape: RampShape::Linear,
            interp: Interp::Straight,
        }
    }

    pub fn jump(start: Vec<f64>, end: Vec<f64>) -> Self {
        Self { kind: SegmentKind::Jump, duration: 0.0, start, end, shape: RampShape::Linear, interp: Interp::Straight }
    }

    pub fn with_interp(mut self, interp: Interp) -> Self {
        self.interp = interp;
        self
    }

    /// Nominal (unmapped) values at fraction `u ∈ [0, 1]` of the segment.
    pub fn eval(&self, u: f64) -> Vec<f64> {
        match self.kind {
            SegmentKind::Hold => self.start.clone(),
            SegmentKind::Jump => self.end.clone(),
            SegmentKind::Ramp => {
                if u <= 0.0 {
                    return self.start.clone();
                }
                if u >= 1.0 {
                    return self.end.clone();
                }
                let s = self.shape.eval(u);
                let mut v: Vec<f64> = self
                    .start
                    .iter()
                    .zip(&self.end)
                    .map(|(a, b)| a + (b - a) * s)
                    .collect();
                if let Interp::Angle { detuning, drive } = self.interp {
                    let d = self.start[detuning];
                    let a0 = self.start[drive].atan2(d);
                    let a1 = self.end[drive].atan2(d);
                    v[drive] = d * (a0 + (a1 - a0) * s).tan();
                }
                v
            }
        }
    }

    fn check(&self, width: usize) -> Result<()> {
        if self.start.len() != width || self.end.len() != width {
            return Err(Error::DimensionMismatch { expected: width, found: self.start.len().min(self.end.len()) });
        }
        if !(self.duration >= 0.0) || !self.duration.is_finite() {
            return Err(Error::InvalidParameter(format!("segment duration {} must be finite and nonnegative", self.duration)));
        }
        match self.kind {
            SegmentKind::Hold if self.start != self.end => {
                Err(Error::InvalidParameter("hold segment must keep its values".into()))
            }
            SegmentKind::Jump if self.duration != 0.0 => {
                Err(Error::InvalidParameter("jump segment must have zero duration".into()))
            }
            SegmentKind::Jump if self.start == self.end => {
                Err(Error::InvalidParameter("jump segment must change a value".into()))
            }
            _ => {
                if let Interp::Angle { detuning, drive } = self.interp {
                    if detuning >= width || drive >= width {
                        return Err(Error::InvalidParameter("angle ramp channel out of range".into()));
                    }
                    let d = self.start[detuning];
                    if d != self.end[detuning] || d == 0.0 {
                        return Err(Error::InvalidParameter(
                            "angle ramp needs a fixed nonzero detuning".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Pointwise map applied to a channel: `value = scale·f(nominal/scale)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelMap {
    pub map: UnknownMap,
    pub scale: f64,
}

/// Affine relation `value[channel](t) = factor·value[source](source_scale·t + source_offset) + offset`
/// required for `t ∈ [from, to]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub channel: usize,
    pub source: usize,
    pub factor: f64,
    pub offset: f64,
    pub source_scale: f64,
    pub source_offset: f64,
    pub from: f64,
    pub to: f64,
    pub tolerance: f64,
}

impl Constraint {
    /// Mirror relation `x(t) = factor·x(mirror − t) + offset` on `[from, to]`.
    pub fn mirror(name: &str, channel: usize, mirror: f64, factor: f64, offset: f64, from: f64, to: f64) -> Self {
        Self {
            name: name.into(),
            channel,
            source: channel,
            factor,
            offset,
            source_scale: -1.0,
            source_offset: mirror,
            from,
            to,
            tolerance: 1e-12,
        }
    }
}

/// Which constructor produced a path; used to validate derived paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PathOrigin {
    Phase { theta: f64 },
    Hadamard,
    CnotU1 { half: f64 },
    CnotU3 { refocused: bool },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamPath {
    pub names: Vec<String>,
    segments: Vec<Segment>,
    maps: Vec<Option<ChannelMap>>,
    pub constraints: Vec<Constraint>,
    pub origin: PathOrigin,
    total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub points: usize,
    pub passed: bool,
}

/// Grid points per constraint check.
pub const TIMING_GRID: usize = 4096;

impl ParamPath {
    pub fn new(names: &[&str], segments: Vec<Segment>) -> Result<Self> {
        let width = names.len();
        if width == 0 {
            return Err(Error::InvalidParameter("path needs at least one channel".into()));
        }
        if segments.is_empty() {
            return Err(Error::InvalidParameter("path needs at least one segment".into()));
        }
        for seg in &segments {
            seg.check(width)?;
        }
        for w in segments.windows(2) {
            let gap = w[0].end.iter().zip(&w[1].start).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            if gap > 1e-12 {
                return Err(Error::InvalidParameter(format!("segments discontinuous by {gap:e} outside a jump")));
            }
        }
        let total = segments.iter().map(|s| s.duration).sum();
        Ok(Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            segments,
            maps: vec![None; width],
            constraints: Vec::new(),
            origin: PathOrigin::Custom,
            total,
        })
    }

    pub fn with_constraints(mut self, constraints: Vec<Constraint>) -> Self {
        self.constraints = constraints;
        self
    }

    pub fn with_origin(mut self, origin: PathOrigin) -> Self {
        self.origin = origin;
        self
    }

    /// Routes a channel through an unknown map.
    pub fn with_map(mut self, channel: usize, map: UnknownMap, scale: f64) -> Self {
        self.maps[channel] = Some(ChannelMap { map, scale });
        self
    }

    /// Same path with new channel names, e.g. to drive a different model.
    pub fn renamed(mut self, names: &[&str]) -> Result<Self> {
        if names.len() != self.width() {
            return Err(Error::DimensionMismatch { expected: self.width(), found: names.len() });
        }
        self.names = names.iter().map(|s| s.to_string()).collect();
        Ok(self)
    }

    pub fn width(&self) -> usize {
        self.names.len()
    }

    pub fn total_duration(&self) -> f64 {
        self.total
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn maps(&self) -> &[Option<ChannelMap>] {
        &self.maps
    }

    /// Mutable access for deliberate corruption in tests and studies.
    pub fn segment_mut(&mut self, index: usize) -> &mut Segment {
        &mut self.segments[index]
    }

    /// Start times of each segment.
    pub fn segment_starts(&self) -> Vec<f64> {
        let mut t = 0.0;
        self.segments
            .iter()
            .map(|s| {
                let t0 = t;
                t += s.duration;
                t0
            })
            .collect()
    }

    pub fn channel(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn apply_maps(&self, mut v: Vec<f64>) -> Vec<f64> {
        for (x, m) in v.iter_mut().zip(&self.maps) {
            if let Some(cm) = m {
                *x = cm.scale * cm.map.eval(*x / cm.scale);
            }
        }
        v
    }

    /// Parameter values at segment `index`, fraction `u`.
    pub fn eval_segment(&self, index: usize, u: f64) -> Vec<f64> {
        self.apply_maps(self.segments[index].eval(u))
    }

    /// Right-continuous evaluation: at a jump instant the post-jump value is returned.
    pub fn sample(&self, t: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0 && t <= self.total) {
            return Err(Error::TimeOutOfRange { t, total: self.total });
        }
        let mut t0 = 0.0;
        for (k, seg) in self.segments.iter().enumerate() {
            if seg.duration > 0.0 && t < t0 + seg.duration {
                return Ok(self.eval_segment(k, (t - t0) / seg.duration));
            }
            t0 += seg.duration;
        }
        let last = self.segments.last().expect("nonempty");
        Ok(self.apply_maps(last.end.clone()))
    }

    pub fn start_values(&self) -> Vec<f64> {
        self.apply_maps(self.segments[0].start.clone())
    }

    pub fn end_values(&self) -> Vec<f64> {
        self.apply_maps(self.segments.last().expect("nonempty").end.clone())
    }

    /// Evaluates every declared constraint on a midpoint grid.
    pub fn verify_timing(&self) -> Vec<ConstraintCheck> {
        self.constraints
            .iter()
            .map(|c| {
                let n = TIMING_GRID;
                let h = (c.to - c.from) / n as f64;
                let mut worst = 0.0_f64;
                for k in 0..n {
                    let t = c.from + (k as f64 + 0.5) * h;
                    let ts = (c.source_scale * t + c.source_offset).clamp(0.0, self.total);
                    let lhs = self.sample(t.clamp(0.0, self.total)).map(|v| v[c.channel]);
                    let rhs = self.sample(ts).map(|v| c.factor * v[c.source] + c.offset);
                    match (lhs, rhs) {
                        (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
                        _ => worst = f64::INFINITY,
                    }
                }
                ConstraintCheck {
                    name: c.name.clone(),
                    max_violation: worst,
                    tolerance: c.tolerance,
                    points: n,
                    passed: worst <= c.tolerance,
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simple() -> ParamPath {
        ParamPath::new(
            &["x", "y"],
            vec![
                Segment::ramp(1.0, vec![0.0, 0.0], vec![1.0, 0.0], RampShape::Linear),
                Segment::hold(2.0, vec![1.0, 0.0]),
                Segment::jump(vec![1.0, 0.0], vec![1.0, 5.0]),
                Segment::ramp(1.0, vec![1.0, 5.0], vec![0.0, 5.0], RampShape::Smoothstep),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sample_is_right_continuous_at_jumps() {
        let p = simple();
        assert_eq!(p.total_duration(), 4.0);
        assert_eq!(p.sample(0.0).unwrap(), vec![0.0, 0.0]);
        assert_eq!(p.sample(0.5).unwrap(), vec![0.5, 0.0]);
        assert_eq!(p.sample(2.0).unwrap(), vec![1.0, 0.0]);
        assert_eq!(p.sample(3.0).unwrap(), vec![1.0, 5.0]);
        assert_eq!(p.sample(4.0).unwrap(), vec![0.0, 5.0]);
    }

    #[test]
    fn out_of_range_sample_rejected() {
        let p = simple();
        assert!(matches!(p.sample(-0.1), Err(Error::TimeOutOfRange { .. })));
        assert!(matches!(p.sample(4.1), Err(Error::TimeOutOfRange { .. })));
    }

    #[test]
    fn invalid_segments_rejected() {
        assert!(ParamPath::new(&["x"], vec![Segment::jump(vec![1.0], vec![1.0])]).is_err());
        let bad_hold = Segment { end: vec![2.0], ..Segment::hold(1.0, vec![1.0]) };
        assert!(ParamPath::new(&["x"], vec![bad_hold]).is_err());
        let gap = vec![
            Segment::hold(1.0, vec![0.0]),
            Segment::hold(1.0, vec![1.0]),
        ];
        assert!(ParamPath::new(&["x"], gap).is_err());
    }

    #[test]
    fn empty_constraint_list_gives_empty_report() {
        assert!(simple().verify_timing().is_empty());
    }

    #[test]
    fn angle_ramp_follows_mixing_angle() {
        let seg = Segment::ramp(1.0, vec![0.5, 0.0], vec![0.5, 2.0], RampShape::Linear)
            .with_interp(Interp::Angle { detuning: 0, drive: 1 });
        let v = seg.eval(0.5);
        let expect = 0.5 * (0.5 * 4.0_f64.atan()).tan();
        assert!((v[1] - expect).abs() < 1e-15);
        assert_eq!(seg.eval(1.0)[1], 2.0);
    }

    #[test]
    fn json_round_trip() {
        let p = simple().with_map(0, UnknownMap::random(4), 1.0);
        let back = ParamPath::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
