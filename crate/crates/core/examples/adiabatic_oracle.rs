//! Compare direct propagation with the adiabatic-limit gate built from
//! tracked eigenstates, and print the phases the oracle finds.

use qgate::gates::{fidelity, GateTarget};
use qgate::propagator::{adiabatic_oracle, evolve};
use qgate::schedule::{hadamard_builder, hadamard_path, ScheduleLimits, UnknownMap};

fn main() -> qgate::Result<()> {
    let path = hadamard_path(&ScheduleLimits::tuned(3000.0), &UnknownMap::linear())?;
    let (_, phases) = adiabatic_oracle(&path, hadamard_builder, 400)?;
    println!("dynamical {:?}", phases.dynamical);
    println!("geometric {:?}", phases.geometric);
    for t in [300.0, 3000.0] {
        let p = hadamard_path(&ScheduleLimits::tuned(t), &UnknownMap::linear())?;
        let (o, _) = adiabatic_oracle(&p, hadamard_builder, 400)?;
        let u = evolve(&p, hadamard_builder, 32.0)?.unitary;
        println!("T = {t}: fidelity to oracle {:.6}", fidelity(&GateTarget::new("o", o), &u)?);
    }
    Ok(())
}
