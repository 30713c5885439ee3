//! Hadamard-like gate over (Δ, Ω_x) and its error against gate time.

use qgate::gates::{gate_error, ideal_hadamard_like};
use qgate::propagator::evolve;
use qgate::schedule::{hadamard_builder, hadamard_path, ScheduleLimits, UnknownMap};

fn main() -> qgate::Result<()> {
    for t in [30.0, 100.0, 300.0, 1000.0, 3000.0] {
        let limits = ScheduleLimits::tuned(t);
        let path = hadamard_path(&limits, &UnknownMap::linear())?;
        for c in path.verify_timing() {
            assert!(c.passed, "{}", c.name);
        }
        let u = evolve(&path, hadamard_builder, 32.0)?.unitary;
        println!("T = {t:>6}  error = {:.3e}", gate_error(&ideal_hadamard_like(), &u)?);
    }
    Ok(())
}
