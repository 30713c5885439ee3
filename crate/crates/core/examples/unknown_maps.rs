//! The same protocols under random monotone distortions f of the
//! controlled parameters. The gate targets do not change.

use qgate::harness::{run_gate, GateKind};
use qgate::schedule::{ScheduleLimits, UnknownMap};

fn main() -> qgate::Result<()> {
    let limits = ScheduleLimits::tuned(300.0);
    for seed in 0..5 {
        let f = UnknownMap::random(seed);
        let (lo, hi) = f.slope_range();
        let errs: Vec<String> = [GateKind::Phase, GateKind::Hadamard, GateKind::Cnot]
            .into_iter()
            .map(|g| run_gate(g, &limits, &f, 32.0).map(|r| format!("{}={:.2e}", g.name(), r.error)))
            .collect::<qgate::Result<_>>()?;
        println!("seed {seed}: f(0.5) = {:.3}, slope in [{lo:.2}, {hi:.2}]  {}", f.eval(0.5), errs.join(" "));
    }
    Ok(())
}
