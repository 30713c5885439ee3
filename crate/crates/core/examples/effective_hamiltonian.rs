//! Second-order reduction of a driven two-site Bose-Hubbard Hamiltonian
//! onto the qubit subspace, checked against exact diagonalization.

use qgate::lattice::{
    build_fock_basis, conditional_shift, effective_hamiltonian_2nd_order, effective_rabi, qubit_projector,
    two_site_hamiltonian, LatticeParams, SiteOccupation,
};
use qgate::operator::eigensystem;

fn main() -> qgate::Result<()> {
    let (n, m) = (2, 1);
    let u_bb = 1e3;
    let p = LatticeParams { u_bb, j_a: 0.05, j_b: 0.05, g: u_bb + 0.5, omega: 1e-3, ..Default::default() };
    let basis = build_fock_basis(&[n, m])?;
    let occ = [SiteOccupation::zero(n), SiteOccupation::zero(m)];
    let h = two_site_hamiltonian(&basis, &p, 2)?;
    let heff = effective_hamiltonian_2nd_order(&h, &qubit_projector(&basis, &occ)?, 1.0)?;
    println!("Fock dimension {}", basis.dim());
    let approx = eigensystem(&heff, None)?.values;
    let exact = eigensystem(&h, None)?.values;
    for a in &approx {
        let nearest = exact.iter().cloned().min_by(|x, y| (x - a).abs().total_cmp(&(y - a).abs())).unwrap_or(f64::NAN);
        println!("  {a:>16.9} vs exact {nearest:>16.9}  (diff {:.1e})", (a - nearest).abs());
    }
    let s = conditional_shift(n, m, &p)?;
    println!("conditional shift {:.6e}, leakage bound {:.1e}", s.conditional_shift.unwrap_or(0.0), s.leakage_bound);
    println!("effective Rabi frequency for n = {n}: {:.6}", effective_rabi(n, 1.0)?);
    Ok(())
}
