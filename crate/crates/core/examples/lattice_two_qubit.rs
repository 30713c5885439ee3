//! Two-site CNOT-like gate: the hopping J² plays the role of the
//! conditional detuning. Uses the second-order effective Hamiltonian.

use qgate::harness::{lattice_cnot_point, LatticeConfig};

fn main() -> qgate::Result<()> {
    let lc = LatticeConfig::default();
    for ratio in [1e2, 1e3, 1e4, 1e5] {
        let r = lattice_cnot_point(&lc, 1, 1, ratio, 32.0)?;
        println!(
            "U_bb/U_ab = {ratio:.0e}  error = {:.3e}  admixture <= {:.1e}  gap ratio {:.2}",
            1.0 - r.fidelity.unwrap_or(0.0),
            r.leakage_bound,
            r.min_gap_ratio
        );
    }
    Ok(())
}
