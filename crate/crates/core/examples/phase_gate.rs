//! Geometric phase gate: drive on, rotate φ by θ/2, flip the drive sign,
//! rotate again, drive off. The dynamical phases cancel between halves.

use std::f64::consts::PI;

use qgate::gates::{gate_error, ideal_phase};
use qgate::propagator::evolve;
use qgate::schedule::{phase_builder, phase_gate_path, ScheduleLimits, UnknownMap};

fn main() -> qgate::Result<()> {
    for theta in [PI / 4.0, PI / 2.0, PI] {
        let limits = ScheduleLimits { theta, ..ScheduleLimits::tuned(300.0) };
        let path = phase_gate_path(&limits, &UnknownMap::linear())?;
        let r = evolve(&path, phase_builder, 32.0)?;
        println!(
            "theta = {theta:.4}  error = {:.3e}  steps = {}",
            gate_error(&ideal_phase(theta), &r.unitary)?,
            r.step_count
        );
    }
    Ok(())
}
