//! Local phase gate on a single lattice site with n atoms, propagated in
//! the full Fock space, against U_bb/U_ab.

use qgate::harness::{lattice_local_point, LatticeConfig};

fn main() -> qgate::Result<()> {
    let lc = LatticeConfig::default();
    for n in [1, 3, 5] {
        print!("n = {n}:");
        for ratio in [1e2, 1e3, 1e4, 1e5] {
            let r = lattice_local_point(&lc, n, ratio, 32.0)?;
            print!("  {:.1e} (leak {:.0e})", 1.0 - r.fidelity.unwrap_or(0.0), r.leakage);
        }
        println!();
    }
    Ok(())
}
