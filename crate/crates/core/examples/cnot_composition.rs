//! CNOT-like gate from U₂ U₃ U₂ U₁, with and without the refocused U₃.

use qgate::gates::{compose_cnot, gate_error, ideal_cnot_like, not_gate};
use qgate::propagator::evolve;
use qgate::schedule::{cnot_builder, cnot_u1_path, cnot_u3_path, cnot_u3_path_unrefocused, ScheduleLimits};

fn main() -> qgate::Result<()> {
    let limits = ScheduleLimits::tuned(300.0);
    let u1_path = cnot_u1_path(&limits)?;
    let u1 = evolve(&u1_path, cnot_builder, 32.0)?.unitary;
    for (label, u3_path) in [("refocused", cnot_u3_path(&u1_path)?), ("literal", cnot_u3_path_unrefocused(&u1_path)?)] {
        let u3 = evolve(&u3_path, cnot_builder, 32.0)?.unitary;
        let seq = compose_cnot(&u1, &not_gate(), &u3)?;
        println!(
            "{label:>10}: xi = {:+.4}  error = {:.3e}",
            seq.xi,
            gate_error(&ideal_cnot_like(), &seq.composed)?
        );
    }
    Ok(())
}
