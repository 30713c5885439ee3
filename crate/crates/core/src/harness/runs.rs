use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{Experiment, GateKind, LatticeConfig, SweepConfig};
use crate::error::{Error, Result};
use crate::gates::{compose_cnot, fidelity, ideal_cnot_like, ideal_hadamard_like, ideal_phase, not_gate, GateTarget};
use crate::lattice::{
    build_fock_basis, simulate_lattice_cnot, simulate_lattice_gate, LatticeParams, LatticeReport, LatticeSetup,
    SiteOccupation,
};
use crate::propagator::evolve;
use crate::schedule::{
    cnot_builder, cnot_u1_path, cnot_u1_path_mapped, cnot_u3_path, hadamard_builder, hadamard_path, phase_builder,
    phase_gate_path, ParamPath, ScheduleLimits, UnknownMap,
};

/// Outcome of one abstract gate run.
#[derive(Clone, Debug, Serialize)]
pub struct GateRun {
    pub gate: GateKind,
    pub error: f64,
    pub step_count: usize,
    pub max_unitarity_defect: f64,
    /// `ξ` extracted from `U₁` (CNOT only).
    pub xi: Option<f64>,
}

/// Paths driven by one gate: one for the local gates, `U₁` and `U₃` for the CNOT.
pub fn gate_paths(gate: GateKind, limits: &ScheduleLimits, fmap: &UnknownMap) -> Result<Vec<ParamPath>> {
    Ok(match gate {
        GateKind::Phase => vec![phase_gate_path(limits, fmap)?],
        GateKind::Hadamard => vec![hadamard_path(limits, fmap)?],
        GateKind::Cnot => {
            let u1 = cnot_u1_path_mapped(limits, fmap)?;
            let u3 = cnot_u3_path(&u1)?;
            vec![u1, u3]
        }
    })
}

pub fn gate_target(gate: GateKind, limits: &ScheduleLimits) -> GateTarget {
    match gate {
        GateKind::Phase => ideal_phase(limits.theta),
        GateKind::Hadamard => ideal_hadamard_like(),
        GateKind::Cnot => ideal_cnot_like(),
    }
}

/// Propagates a gate of the abstract `h1`/`h2` models. `steps` is per `1/Ω_m`
/// (per `1/Ω̃_m` for the CNOT).
pub fn run_gate(gate: GateKind, limits: &ScheduleLimits, fmap: &UnknownMap, steps: f64) -> Result<GateRun> {
    let paths = gate_paths(gate, limits, fmap)?;
    let target = gate_target(gate, limits);
    match gate {
        GateKind::Phase | GateKind::Hadamard => {
            let (builder, rate): (fn(&[f64]) -> _, f64) = match gate {
                GateKind::Phase => (phase_builder, limits.omega_m),
                _ => (hadamard_builder, limits.omega_m),
            };
            let r = evolve(&paths[0], builder, steps * rate)?;
            Ok(GateRun {
                gate,
                error: 1.0 - fidelity(&target, &r.unitary)?,
                step_count: r.step_count,
                max_unitarity_defect: r.max_unitarity_defect,
                xi: None,
            })
        }
        GateKind::Cnot => {
            let spu = steps * limits.omega_t_m;
            let r1 = evolve(&paths[0], cnot_builder, spu)?;
            let r3 = evolve(&paths[1], cnot_builder, spu)?;
            let seq = compose_cnot(&r1.unitary, &not_gate(), &r3.unitary)?;
            Ok(GateRun {
                gate,
                error: 1.0 - fidelity(&target, &seq.composed)?,
                step_count: r1.step_count + r3.step_count,
                max_unitarity_defect: r1.max_unitarity_defect.max(r3.max_unitarity_defect),
                xi: Some(seq.xi),
            })
        }
    }
}

/// Lattice energies for a given `U_bb/U_ab`.
fn lattice_base(lc: &LatticeConfig, ratio: f64) -> LatticeParams {
    LatticeParams { u_bb: ratio * lc.u_ab, u_aa: lc.u_aa, u_ab: lc.u_ab, ..LatticeParams::default() }
}

/// Two-qubit drive amplitude `Ω̃_m = J_m²/10` with `J_m` in units of `U_ab`.
pub fn lattice_two_qubit_omega(lc: &LatticeConfig) -> f64 {
    let jm = lc.j_m * lc.u_ab;
    jm * jm / (10.0 * lc.u_ab)
}

/// Schedules for the lattice CNOT: `J²` follows the `Δ̃` channel.
pub fn lattice_cnot_paths(lc: &LatticeConfig) -> Result<(ParamPath, ParamPath)> {
    let jm = lc.j_m * lc.u_ab;
    let om = lattice_two_qubit_omega(lc);
    let limits = ScheduleLimits {
        t_leg: lc.t_factor / om,
        delta_t_m: jm * jm,
        omega_t_m: om,
        shape: lc.shape,
        cnot_split: lc.cnot_split,
        ..ScheduleLimits::default()
    };
    let u1 = cnot_u1_path(&limits)?;
    let u3 = cnot_u3_path(&u1)?.renamed(&["j2", "omega_x", "target_flip"])?;
    Ok((u1.renamed(&["j2", "omega_x"])?, u3))
}

/// Lattice CNOT with `n` atoms on the control site and `m` on the target.
///
/// The tilt is `g = U_bb + U_ab/2` and the laser, applied to the target
/// site, is held on resonance with that site's tilted level splitting.
pub fn lattice_cnot_point(lc: &LatticeConfig, n: usize, m: usize, ratio: f64, steps: f64) -> Result<LatticeReport> {
    let mut p = lattice_base(lc, ratio);
    p.g = p.u_bb + 0.5 * lc.u_ab;
    p.delta = -4.0 * p.g;
    let setup = LatticeSetup {
        mode: lc.two_qubit_mode,
        ..LatticeSetup::new(
            build_fock_basis(&[n, m])?,
            vec![SiteOccupation::zero(n), SiteOccupation::zero(m)],
            p,
            2,
        )
    };
    let (u1, u3) = lattice_cnot_paths(lc)?;
    simulate_lattice_cnot(&u1, &u3, &setup, &ideal_cnot_like(), steps * lattice_two_qubit_omega(lc))
}

pub fn lattice_local_limits(lc: &LatticeConfig) -> ScheduleLimits {
    ScheduleLimits {
        t_leg: lc.t_factor / lc.local_omega_m,
        omega_m: lc.local_omega_m,
        delta_m: lc.local_delta_m,
        shape: lc.shape,
        ..ScheduleLimits::tuned(1.0)
    }
}

/// Local gate on a single site holding `n` atoms.
pub fn lattice_local_point(lc: &LatticeConfig, n: usize, ratio: f64, steps: f64) -> Result<LatticeReport> {
    let limits = lattice_local_limits(lc);
    let path = gate_paths(lc.local_gate, &limits, &UnknownMap::linear())?.remove(0);
    let setup = LatticeSetup {
        mode: lc.local_mode,
        ..LatticeSetup::new(build_fock_basis(&[n])?, vec![SiteOccupation::zero(n)], lattice_base(lc, ratio), 1)
    };
    simulate_lattice_gate(&path, &setup, Some(&gate_target(lc.local_gate, &limits)), steps * lc.local_omega_m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Record {
    pub swept: f64,
    pub error: f64,
    pub leakage: f64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub label: String,
    pub records: Vec<Record>,
}

impl Series {
    pub fn errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.error).collect()
    }

    /// `max − min` of the errors.
    pub fn spread(&self) -> f64 {
        let e = self.errors();
        let max = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = e.iter().cloned().fold(f64::INFINITY, f64::min);
        if e.is_empty() {
            0.0
        } else {
            max - min
        }
    }
}

/// Per-point remark: a failed propagation or a violated gap condition.
#[derive(Clone, Debug, Serialize)]
pub struct Note {
    pub series: String,
    pub swept: f64,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub experiment: Experiment,
    pub series: Vec<Series>,
    pub notes: Vec<Note>,
    /// Number of points whose propagation failed; their error is recorded as 1.
    pub failures: usize,
    pub config: SweepConfig,
    pub version: String,
}

impl SweepResult {
    pub fn series(&self, label: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.label == label)
    }

    pub fn record_count(&self) -> usize {
        self.series.iter().map(|s| s.records.len()).sum()
    }
}

struct Outcome {
    error: f64,
    leakage: f64,
    note: Option<String>,
    failed: bool,
}

impl Outcome {
    fn from_gate(r: Result<GateRun>) -> Self {
        match r {
            Ok(g) => Outcome { error: g.error.clamp(0.0, 1.0), leakage: 0.0, note: None, failed: false },
            Err(e) => Outcome::failure(e),
        }
    }

    fn from_lattice(r: Result<LatticeReport>) -> Self {
        match r {
            Ok(rep) => {
                let error = (1.0 - rep.fidelity.unwrap_or(0.0)).clamp(0.0, 1.0);
                let note = (!rep.gap_ok).then(|| {
                    format!("gap ratio {:.3} below required; admixture bound {:.3e}", rep.min_gap_ratio, rep.leakage_bound)
                });
                Outcome { error, leakage: rep.leakage, note, failed: false }
            }
            Err(e) => Outcome::failure(e),
        }
    }

    fn failure(e: Error) -> Self {
        Outcome { error: 1.0, leakage: 0.0, note: Some(format!("failed: {e}")), failed: true }
    }
}

struct Job {
    series: usize,
    swept: f64,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn execute(cfg: &SweepConfig, labels: Vec<String>, jobs: Vec<Job>) -> Result<SweepResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let timed = cfg.record_wall_time;
    let outcomes: Vec<(Outcome, f64)> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let t0 = Instant::now();
                let out = (job.run)();
                let ms = if timed { t0.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
                (out, ms)
            })
            .collect()
    });
    let mut series: Vec<Series> = labels.into_iter().map(|label| Series { label, records: Vec::new() }).collect();
    let mut notes = Vec::new();
    let mut failures = 0;
    for (job, (out, ms)) in jobs.iter().zip(outcomes) {
        let s = &mut series[job.series];
        if let Some(message) = out.note {
            notes.push(Note { series: s.label.clone(), swept: job.swept, message });
        }
        failures += out.failed as usize;
        s.records.push(Record { swept: job.swept, error: out.error, leakage: out.leakage, wall_ms: ms });
    }
    Ok(SweepResult {
        experiment: cfg.experiment,
        series,
        notes,
        failures,
        config: cfg.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Error versus gate time `T·Ω_m` for the abstract models.
pub fn run_fig2a(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = cfg.grid().values();
    let mut jobs = Vec::new();
    for (si, &gate) in cfg.gates.iter().enumerate() {
        for &t in &grid {
            let mut limits = cfg.limits.clone();
            let rate = if gate == GateKind::Cnot { limits.omega_t_m } else { limits.omega_m };
            limits.t_leg = t / rate;
            let steps = cfg.steps;
            jobs.push(Job {
                series: si,
                swept: t,
                run: Box::new(move || Outcome::from_gate(run_gate(gate, &limits, &UnknownMap::linear(), steps))),
            });
        }
    }
    execute(cfg, cfg.gates.iter().map(|g| g.name().to_string()).collect(), jobs)
}

/// Lattice error versus `U_bb/U_ab`: local gates (`fig2b`) or the CNOT with
/// equal populations (`fig2c`), one series per occupation.
pub fn run_fig2bc(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let local = match cfg.experiment {
        Experiment::Fig2b => true,
        Experiment::Fig2c => false,
        other => return Err(Error::Config(format!("run_fig2bc cannot run {}", other.name()))),
    };
    let grid = cfg.grid().values();
    let mut jobs = Vec::new();
    for (si, &n) in cfg.lattice.occupations.iter().enumerate() {
        for &ratio in &grid {
            let lc = cfg.lattice.clone();
            let steps = cfg.steps;
            let run: Box<dyn Fn() -> Outcome + Send + Sync> = if local {
                Box::new(move || Outcome::from_lattice(lattice_local_point(&lc, n, ratio, steps)))
            } else {
                Box::new(move || Outcome::from_lattice(lattice_cnot_point(&lc, n, n, ratio, steps)))
            };
            jobs.push(Job { series: si, swept: ratio, run });
        }
    }
    execute(cfg, cfg.lattice.occupations.iter().map(|n| format!("n={n}")).collect(), jobs)
}

/// Lattice CNOT versus `U_bb/U_ab` for control population `m + k` and target
/// population `m`, one series per imbalance `k`.
pub fn run_fig2d(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let grid = cfg.grid().values();
    let m = cfg.lattice.target_occupation;
    let mut jobs = Vec::new();
    for (si, &k) in cfg.lattice.imbalances.iter().enumerate() {
        for &ratio in &grid {
            let lc = cfg.lattice.clone();
            let steps = cfg.steps;
            jobs.push(Job {
                series: si,
                swept: ratio,
                run: Box::new(move || Outcome::from_lattice(lattice_cnot_point(&lc, m + k, m, ratio, steps))),
            });
        }
    }
    execute(cfg, cfg.lattice.imbalances.iter().map(|k| format!("|n-m|={k}")).collect(), jobs)
}

/// Seeds of the random maps used by [`run_robustness`].
pub fn robustness_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random()).collect()
}

/// Every gate under `count` random unknown maps at one gate time; the
/// swept column is the map index.
pub fn run_robustness(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let t = cfg.grid().values()[0];
    let seeds = robustness_seeds(cfg.seed, cfg.count);
    let mut jobs = Vec::new();
    for (si, &gate) in cfg.gates.iter().enumerate() {
        for (i, &s) in seeds.iter().enumerate() {
            let mut limits = cfg.limits.clone();
            let rate = if gate == GateKind::Cnot { limits.omega_t_m } else { limits.omega_m };
            limits.t_leg = t / rate;
            let steps = cfg.steps;
            jobs.push(Job {
                series: si,
                swept: i as f64,
                run: Box::new(move || Outcome::from_gate(run_gate(gate, &limits, &UnknownMap::random(s), steps))),
            });
        }
    }
    execute(cfg, cfg.gates.iter().map(|g| g.name().to_string()).collect(), jobs)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    match cfg.experiment {
        Experiment::Fig2a => run_fig2a(cfg),
        Experiment::Fig2b | Experiment::Fig2c => run_fig2bc(cfg),
        Experiment::Fig2d => run_fig2d(cfg),
        Experiment::Robustness => run_robustness(cfg),
    }
}

/// The schedules a sweep would run at its first grid point, labeled.
pub fn representative_paths(cfg: &SweepConfig) -> Result<Vec<(String, ParamPath)>> {
    let first = cfg.grid().values()[0];
    let mut out = Vec::new();
    match cfg.experiment {
        Experiment::Fig2a | Experiment::Robustness => {
            let fmap = match cfg.experiment {
                Experiment::Robustness => UnknownMap::random(robustness_seeds(cfg.seed, 1)[0]),
                _ => UnknownMap::linear(),
            };
            for &gate in &cfg.gates {
                let mut limits = cfg.limits.clone();
                let rate = if gate == GateKind::Cnot { limits.omega_t_m } else { limits.omega_m };
                limits.t_leg = first / rate;
                for (i, p) in gate_paths(gate, &limits, &fmap)?.into_iter().enumerate() {
                    out.push((format!("{}#{i}", gate.name()), p));
                }
            }
        }
        Experiment::Fig2b => {
            let limits = lattice_local_limits(&cfg.lattice);
            let p = gate_paths(cfg.lattice.local_gate, &limits, &UnknownMap::linear())?.remove(0);
            out.push((cfg.lattice.local_gate.name().to_string(), p));
        }
        Experiment::Fig2c | Experiment::Fig2d => {
            let (u1, u3) = lattice_cnot_paths(&cfg.lattice)?;
            out.push(("cnot#0".into(), u1));
            out.push(("cnot#1".into(), u3));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Grid;

    #[test]
    fn single_point_fig2a() {
        let cfg = SweepConfig {
            gates: vec![GateKind::Phase],
            grid: Some(Grid { start: 300.0, stop: 300.0, points: 1, spacing: Default::default() }),
            ..SweepConfig::default()
        };
        let r = run_fig2a(&cfg).unwrap();
        assert_eq!(r.record_count(), 1);
        assert!(r.series[0].records[0].error < 1e-4);
        assert_eq!(r.failures, 0);
    }

    #[test]
    fn robustness_seeds_are_reproducible() {
        assert_eq!(robustness_seeds(7, 5), robustness_seeds(7, 5));
        assert_ne!(robustness_seeds(7, 5), robustness_seeds(8, 5));
    }

    #[test]
    fn single_map_has_zero_spread() {
        let cfg = SweepConfig {
            experiment: Experiment::Robustness,
            gates: vec![GateKind::Phase],
            count: 1,
            grid: Some(Grid { start: 30.0, stop: 30.0, points: 1, spacing: Default::default() }),
            ..SweepConfig::default()
        };
        let r = run_robustness(&cfg).unwrap();
        assert_eq!(r.series[0].spread(), 0.0);
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let mut cfg = SweepConfig {
            gates: vec![GateKind::Hadamard],
            grid: Some(Grid { start: 30.0, stop: 30.0, points: 1, spacing: Default::default() }),
            ..SweepConfig::default()
        };
        cfg.limits.hadamard_split = 0.7;
        let r = run_fig2a(&cfg).unwrap();
        assert_eq!(r.failures, 1);
        assert_eq!(r.series[0].records[0].error, 1.0);
        assert!(r.notes[0].message.starts_with("failed"));
    }
}
