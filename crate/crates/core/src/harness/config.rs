use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SimMode;
use crate::schedule::{RampShape, ScheduleLimits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    #[default]
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Robustness,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2a => "fig2a",
            Experiment::Fig2b => "fig2b",
            Experiment::Fig2c => "fig2c",
            Experiment::Fig2d => "fig2d",
            Experiment::Robustness => "robustness",
        }
    }

    /// Grid used when the config does not give one.
    pub fn default_grid(self) -> Grid {
        match self {
            Experiment::Fig2a => Grid { start: 30.0, stop: 3000.0, points: 13, spacing: Spacing::Log },
            Experiment::Robustness => Grid { start: 300.0, stop: 300.0, points: 1, spacing: Spacing::Linear },
            _ => Grid { start: 1e2, stop: 1e5, points: 10, spacing: Spacing::Log },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    Phase,
    Hadamard,
    Cnot,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::Phase => "phase",
            GateKind::Hadamard => "hadamard",
            GateKind::Cnot => "cnot",
        }
    }
}

impl std::str::FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase" => Ok(GateKind::Phase),
            "hadamard" => Ok(GateKind::Hadamard),
            "cnot" => Ok(GateKind::Cnot),
            other => Err(Error::Config(format!("unknown gate '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Log,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k == 0 {
                    return self.start;
                }
                if k == self.points - 1 {
                    return self.stop;
                }
                let u = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + u * (self.stop - self.start),
                    Spacing::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + u * (b - a))
                    }
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Config("grid must have at least one point".into()));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config("grid bounds must be finite".into()));
        }
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::Config("log grid needs positive bounds".into()));
        }
        if self.points > 1 && self.start == self.stop {
            return Err(Error::Config("grid with several points must not be degenerate".into()));
        }
        let v = self.values();
        let increasing = v.windows(2).all(|w| w[1] > w[0]);
        let decreasing = v.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::Config("grid is not strictly monotone".into()));
        }
        Ok(())
    }
}

/// Settings for the lattice panels. Energies are in units of `U_ab`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub u_ab: f64,
    pub u_aa: f64,
    /// `J_m` in units of `U_ab`; the two-qubit drive is `Ω̃_m = J_m²/10`.
    pub j_m: f64,
    /// Gate time in units of `1/Ω_m`.
    pub t_factor: f64,
    /// Atoms per site for the local and balanced two-qubit runs.
    pub occupations: Vec<usize>,
    /// Values of `n − m` for the imbalance run.
    pub imbalances: Vec<usize>,
    /// Atoms on the target site `m` for the imbalance run.
    pub target_occupation: usize,
    pub local_gate: GateKind,
    pub local_omega_m: f64,
    pub local_delta_m: f64,
    pub shape: RampShape,
    pub cnot_split: f64,
    pub local_mode: SimMode,
    pub two_qubit_mode: SimMode,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        Self {
            u_ab: 1.0,
            u_aa: 1.0,
            j_m: 0.05,
            t_factor: 200.0,
            occupations: vec![1, 3, 5],
            imbalances: vec![0, 1, 2],
            target_occupation: 1,
            local_gate: GateKind::Phase,
            local_omega_m: 10.0,
            local_delta_m: 1.0,
            shape: RampShape::Smootherstep,
            cnot_split: 0.1,
            local_mode: SimMode::Full,
            two_qubit_mode: SimMode::Effective,
        }
    }
}

/// One sweep, as read from a JSON file. Unknown keys are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Gates run by `fig2a` and `robustness`.
    pub gates: Vec<GateKind>,
    /// Swept values: `T·Ω_m` for `fig2a`, `U_bb/U_ab` for the lattice panels.
    /// `robustness` takes a single point, its gate time `T·Ω_m`.
    pub grid: Option<Grid>,
    /// Integration steps per `1/Ω_m`.
    pub steps: f64,
    pub seed: u64,
    /// Number of random maps for `robustness`.
    pub count: usize,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
    /// Fill the `wall_ms` column. Off by default so output is reproducible byte for byte.
    pub record_wall_time: bool,
    /// Schedule for the abstract gates; `t_leg` is replaced by the swept time.
    pub limits: ScheduleLimits,
    pub lattice: LatticeConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Fig2a,
            gates: vec![GateKind::Hadamard, GateKind::Phase, GateKind::Cnot],
            grid: None,
            steps: 32.0,
            seed: 0,
            count: 10,
            workers: 0,
            record_wall_time: false,
            limits: ScheduleLimits { theta: PI / 4.0, ..ScheduleLimits::tuned(300.0) },
            lattice: LatticeConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn for_experiment(experiment: Experiment) -> Self {
        Self { experiment, ..Self::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn grid(&self) -> Grid {
        self.grid.unwrap_or_else(|| self.experiment.default_grid())
    }

    pub fn validate(&self) -> Result<()> {
        self.grid().validate()?;
        if !(self.steps > 0.0) || !self.steps.is_finite() {
            return Err(Error::Config(format!("steps must be positive, got {}", self.steps)));
        }
        match self.experiment {
            Experiment::Fig2a | Experiment::Robustness if self.gates.is_empty() => {
                return Err(Error::Config("no gates selected".into()));
            }
            Experiment::Robustness if self.count == 0 => {
                return Err(Error::Config("robustness needs at least one map".into()));
            }
            Experiment::Robustness if self.grid().points != 1 => {
                return Err(Error::Config("robustness runs at a single gate time; give a one-point grid".into()));
            }
            _ => {}
        }
        let l = &self.lattice;
        if matches!(self.experiment, Experiment::Fig2b | Experiment::Fig2c) && l.occupations.contains(&0) {
            return Err(Error::Config("occupations must be at least 1".into()));
        }
        if self.experiment == Experiment::Fig2d && l.target_occupation == 0 {
            return Err(Error::Config("target occupation must be at least 1".into()));
        }
        if l.local_gate == GateKind::Cnot {
            return Err(Error::Config("local gate must be phase or hadamard".into()));
        }
        for (name, x) in [("u_ab", l.u_ab), ("j_m", l.j_m), ("t_factor", l.t_factor), ("local_omega_m", l.local_omega_m)] {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::Config(format!("lattice.{name} must be positive, got {x}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_hits_endpoints() {
        let g = Experiment::Fig2a.default_grid();
        let v = g.values();
        assert_eq!(v.len(), 13);
        assert_eq!(v[0], 30.0);
        assert_eq!(v[12], 3000.0);
        assert!((v[6] - 300.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(SweepConfig::from_json(r#"{"experiment":"fig2a","bogus":1}"#), Err(Error::Config(_))));
        assert!(matches!(SweepConfig::from_json(r#"{"lattice":{"j":1}}"#), Err(Error::Config(_))));
    }

    #[test]
    fn partial_config_fills_defaults() {
        let cfg = SweepConfig::from_json(r#"{"experiment":"fig2c","steps":8}"#).unwrap();
        assert_eq!(cfg.steps, 8.0);
        assert_eq!(cfg.lattice, LatticeConfig::default());
        assert_eq!(cfg.grid().points, 10);
    }

    #[test]
    fn bad_grids() {
        let g = Grid { start: 1.0, stop: 1.0, points: 3, spacing: Spacing::Linear };
        assert!(g.validate().is_err());
        let g = Grid { start: 0.0, stop: 1.0, points: 3, spacing: Spacing::Log };
        assert!(g.validate().is_err());
        let g = Grid { start: 1.0, stop: 2.0, points: 0, spacing: Spacing::Linear };
        assert!(g.validate().is_err());
        let g = Grid { start: 5.0, stop: 5.0, points: 1, spacing: Spacing::Log };
        assert_eq!(g.values(), vec![5.0]);
    }

    #[test]
    fn round_trip() {
        let cfg = SweepConfig::for_experiment(Experiment::Robustness);
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(SweepConfig::from_json(&text).unwrap(), cfg);
    }
}
