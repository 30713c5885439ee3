//! Two-species Bose–Hubbard Hamiltonians on one or two sites.
//!
//! Sites are numbered from 1. Terms:
//! - on-site: `(U_aa/2)a†a†aa + (U_bb/2)b†b†bb + U_ab a†b†ab`
//! - hopping: `−J_b(b†₂b₁ + h.c.) + J_a(a†₂a₁ + h.c.)`
//! - tilt: `Σ_k k·g(a†_k a_k − b†_k b_k)` (two sites only)
//! - laser detuning `(Δ/2)(a†a − b†b)`: a rotating-frame term, so it acts
//!   on every site
//! - laser coupling `(Ω/2)(e^{iφ}a†b + e^{−iφ}b†a)` on the driven site only

use serde::{Deserialize, Serialize};

use super::fock::FockBasis;
use crate::error::{Error, Result};
use crate::operator::{c, Operator, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeParams {
    pub u_bb: f64,
    pub u_aa: f64,
    pub u_ab: f64,
    pub j_a: f64,
    pub j_b: f64,
    pub g: f64,
    pub delta: f64,
    pub omega: f64,
    pub phi: f64,
}

impl Default for LatticeParams {
    fn default() -> Self {
        Self { u_bb: 1e4, u_aa: 1.0, u_ab: 1.0, j_a: 0.0, j_b: 0.0, g: 0.0, delta: 0.0, omega: 0.0, phi: 0.0 }
    }
}

/// Diagonal energy of a Fock state.
pub fn diagonal_energy(state: &[usize], p: &LatticeParams) -> f64 {
    let sites = state.len() / 2;
    let mut e = 0.0;
    for k in 0..sites {
        let a = state[2 * k] as f64;
        let b = state[2 * k + 1] as f64;
        e += 0.5 * p.u_aa * a * (a - 1.0) + 0.5 * p.u_bb * b * (b - 1.0) + p.u_ab * a * b;
        e += 0.5 * p.delta * (a - b);
        if sites > 1 {
            e += (k + 1) as f64 * p.g * (a - b);
        }
    }
    e
}

/// Single-particle diagonal part `(k·g + Δ/2)(a_k − b_k)` of one site.
pub fn site_level_energy(state: &[usize], site: usize, p: &LatticeParams) -> f64 {
    let sites = state.len() / 2;
    let k = site - 1;
    let a = state[2 * k] as f64;
    let b = state[2 * k + 1] as f64;
    let tilt = if sites > 1 { site as f64 * p.g } else { 0.0 };
    (tilt + 0.5 * p.delta) * (a - b)
}

/// Nonzero off-diagonal elements `⟨target|H|state⟩` as `(target, value)`.
pub fn off_diagonal(state: &[usize], p: &LatticeParams, drive_site: usize) -> Vec<(Vec<usize>, C64)> {
    let sites = state.len() / 2;
    let mut out = Vec::new();
    let mut push = |target: Vec<usize>, v: C64| {
        if v != C64::default() {
            out.push((target, v));
        }
    };
    if sites == 2 {
        // species offset 0 = a, 1 = b
        for (species, amp) in [(0usize, p.j_a), (1usize, -p.j_b)] {
            if amp == 0.0 {
                continue;
            }
            let (i1, i2) = (species, 2 + species);
            for (from, to) in [(i1, i2), (i2, i1)] {
                if state[from] > 0 {
                    let mut t = state.to_vec();
                    let m = ((state[from] * (state[to] + 1)) as f64).sqrt();
                    t[from] -= 1;
                    t[to] += 1;
                    push(t, c(amp * m, 0.0));
                }
            }
        }
    }
    if p.omega != 0.0 && drive_site >= 1 && drive_site <= sites {
        let k = drive_site - 1;
        let (ia, ib) = (2 * k, 2 * k + 1);
        let e = C64::from_polar(0.5 * p.omega, p.phi);
        // a†b: one b becomes a
        if state[ib] > 0 {
            let mut t = state.to_vec();
            let m = ((state[ib] * (state[ia] + 1)) as f64).sqrt();
            t[ib] -= 1;
            t[ia] += 1;
            push(t, e * m);
        }
        if state[ia] > 0 {
            let mut t = state.to_vec();
            let m = ((state[ia] * (state[ib] + 1)) as f64).sqrt();
            t[ia] -= 1;
            t[ib] += 1;
            push(t, e.conj() * m);
        }
    }
    out
}

fn assemble(basis: &FockBasis, p: &LatticeParams, drive_site: usize) -> Operator {
    let mut h = Operator::zeros(basis.dim());
    for (i, s) in basis.states().iter().enumerate() {
        h.add_to(i, i, c(diagonal_energy(s, p), 0.0));
        for (t, v) in off_diagonal(s, p, drive_site) {
            let j = basis.index_of(&t).expect("atom number is conserved");
            h.add_to(j, i, v);
        }
    }
    h
}

/// Laser and interaction terms on an `n`-atom site.
pub fn single_site_hamiltonian(n: usize, p: &LatticeParams) -> Result<Operator> {
    let basis = super::fock::build_fock_basis(&[n])?;
    Ok(assemble(&basis, p, 1))
}

pub fn single_site_hamiltonian_in(basis: &FockBasis, p: &LatticeParams) -> Result<Operator> {
    if basis.sites() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: basis.sites() });
    }
    Ok(assemble(basis, p, 1))
}

/// Full two-site Hamiltonian with the laser coupling on `drive_site`.
pub fn two_site_hamiltonian(basis: &FockBasis, p: &LatticeParams, drive_site: usize) -> Result<Operator> {
    if basis.sites() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: basis.sites() });
    }
    if drive_site != 1 && drive_site != 2 {
        return Err(Error::InvalidParameter(format!("drive site must be 1 or 2, got {drive_site}")));
    }
    Ok(assemble(basis, p, drive_site))
}
