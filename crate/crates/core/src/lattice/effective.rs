//! Second-order reduction onto the qubit subspace, and the single-site
//! effective qubit parameters.

use serde::Serialize;

use super::fock::{build_fock_basis, FockBasis, SiteOccupation};
use super::hamiltonian::{diagonal_energy, off_diagonal, single_site_hamiltonian, LatticeParams};
use crate::error::{Error, Result};
use crate::operator::{c, Operator, C64};

/// Default required ratio between the smallest energy denominator and the
/// largest off-block coupling.
pub const DEFAULT_GAP_RATIO: f64 = 10.0;

/// `2·|⟨1|(Ω/2)(a†b + b†a)|0⟩|` on an `n`-atom site, by explicit projection.
pub fn effective_rabi(n: usize, omega: f64) -> Result<f64> {
    let p = LatticeParams { omega, u_aa: 0.0, u_ab: 0.0, u_bb: 0.0, ..Default::default() };
    let h = single_site_hamiltonian(n, &p)?;
    // (n, 0) is index 0 and (n − 1, 1) index 1
    Ok(2.0 * h.entry(1, 0).norm())
}

/// The quoted second-order estimate `Δ + 2Ω²n/(Δ + U_ab − U_bb)`.
pub fn delta_shift(n: usize, omega: f64, delta: f64, p: &LatticeParams) -> Result<f64> {
    let den = delta + p.u_ab - p.u_bb;
    if den.abs() <= f64::EPSILON * (delta.abs() + p.u_ab.abs() + p.u_bb.abs()).max(1.0) {
        return Err(Error::InvalidParameter("singular regime: Δ + U_ab − U_bb vanishes".into()));
    }
    Ok(delta + 2.0 * omega * omega * n as f64 / den)
}

/// Effective detuning of an `n`-atom site from the second-order reduction
/// of the full single-site Hamiltonian: `⟨0|H_eff|0⟩ − ⟨1|H_eff|1⟩`.
pub fn reduced_delta(n: usize, omega: f64, delta: f64, p: &LatticeParams) -> Result<f64> {
    let q = LatticeParams { omega, delta, phi: 0.0, ..*p };
    let basis = build_fock_basis(&[n])?;
    let rows = qubit_rows(&basis, &[SiteOccupation::zero(n)], &q, 1)?;
    let red = reduce(&rows);
    Ok(red.h.entry(0, 0).re - red.h.entry(1, 1).re)
}

/// One qubit-subspace row of the full Hamiltonian.
#[derive(Clone, Debug)]
pub(crate) struct QubitRow {
    pub energy: f64,
    /// Couplings inside the qubit subspace, by qubit index.
    pub inner: Vec<(usize, C64)>,
    /// Couplings to outside states: `(state key, ⟨v|H|i⟩, E_v)`.
    pub outer: Vec<(Vec<usize>, C64, f64)>,
}

pub(crate) fn qubit_rows(
    basis: &FockBasis,
    occupations: &[SiteOccupation],
    p: &LatticeParams,
    drive_site: usize,
) -> Result<Vec<QubitRow>> {
    let idx = basis.qubit_indices(occupations)?;
    let states: Vec<&[usize]> = idx.iter().map(|&i| basis.state(i)).collect();
    Ok(states
        .iter()
        .map(|s| {
            let mut inner = Vec::new();
            let mut outer = Vec::new();
            for (t, v) in off_diagonal(s, p, drive_site) {
                match states.iter().position(|q| *q == t.as_slice()) {
                    Some(k) => inner.push((k, v)),
                    None => {
                        let e = diagonal_energy(&t, p);
                        outer.push((t, v, e));
                    }
                }
            }
            QubitRow { energy: diagonal_energy(s, p), inner, outer }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub h: Operator,
    /// Smallest energy denominator over the largest off-block coupling.
    pub gap_ratio: f64,
    /// Largest second-order admixture `Σ_v |V_iv|²/(E_i − E_v)²` of a qubit state.
    pub admixture: f64,
}

/// `H_eff = H_PP + ½ Σ_v V_iv V_vj [1/(E_i − E_v) + 1/(E_j − E_v)]`.
pub(crate) fn reduce(rows: &[QubitRow]) -> Reduction {
    let d = rows.len();
    let mut h = Operator::zeros(d);
    let mut min_gap = f64::INFINITY;
    let mut max_coupling = 0.0_f64;
    let mut admixture = 0.0_f64;
    for (x, r) in rows.iter().enumerate() {
        h.add_to(x, x, c(r.energy, 0.0));
        for &(k, v) in &r.inner {
            h.add_to(k, x, v);
        }
        let mut mix = 0.0;
        for (_, v, e) in &r.outer {
            let gap = (r.energy - e).abs();
            min_gap = min_gap.min(gap);
            max_coupling = max_coupling.max(v.norm());
            mix += v.norm_sqr() / (gap * gap);
        }
        admixture = admixture.max(mix);
    }
    for (x, rx) in rows.iter().enumerate() {
        for (y, ry) in rows.iter().enumerate() {
            let mut acc = C64::default();
            for (sx, vx, ev) in &rx.outer {
                for (sy, vy, _) in &ry.outer {
                    if sx == sy {
                        // ⟨x|H|v⟩⟨v|H|y⟩ with ⟨v|H|x⟩ = vx
                        acc += vx.conj() * vy * 0.5 * (1.0 / (rx.energy - ev) + 1.0 / (ry.energy - ev));
                    }
                }
            }
            h.add_to(x, y, acc);
        }
    }
    let gap_ratio = if max_coupling == 0.0 { f64::INFINITY } else { min_gap / max_coupling };
    Reduction { h, gap_ratio, admixture }
}

#[derive(Clone, Debug, Serialize)]
pub struct EffectiveBlock {
    #[serde(skip)]
    pub h: Operator,
    pub gap_ratio: f64,
}

fn projector_indices(projector: &Operator) -> Result<Vec<usize>> {
    let n = projector.dim();
    let mut idx = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = projector.entry(i, j);
            let expect_one = i == j && (z - c(1.0, 0.0)).norm() < 1e-12;
            if expect_one {
                idx.push(i);
            } else if z.norm() > 1e-12 {
                return Err(Error::InvalidParameter("projector must be diagonal with 0/1 entries".into()));
            }
        }
    }
    if idx.is_empty() {
        return Err(Error::InvalidParameter("projector has rank zero".into()));
    }
    Ok(idx)
}

/// Second-order block reduction of a dense operator onto the range of a
/// diagonal projector, without the gap check.
pub fn effective_hamiltonian_unchecked(full: &Operator, projector: &Operator) -> Result<EffectiveBlock> {
    if full.dim() != projector.dim() {
        return Err(Error::DimensionMismatch { expected: full.dim(), found: projector.dim() });
    }
    let p = projector_indices(projector)?;
    let rows: Vec<QubitRow> = p
        .iter()
        .map(|&i| {
            let mut inner = Vec::new();
            let mut outer = Vec::new();
            for v in 0..full.dim() {
                if v == i {
                    continue;
                }
                let z = full.entry(v, i);
                if z == C64::default() {
                    continue;
                }
                match p.iter().position(|&q| q == v) {
                    Some(k) => inner.push((k, z)),
                    None => outer.push((vec![v], z, full.entry(v, v).re)),
                }
            }
            QubitRow { energy: full.entry(i, i).re, inner, outer }
        })
        .collect();
    let r = reduce(&rows);
    Ok(EffectiveBlock { h: r.h, gap_ratio: r.gap_ratio })
}

/// Second-order reduction; fails when the smallest energy denominator is
/// below `required_ratio` times the largest off-block coupling.
pub fn effective_hamiltonian_2nd_order(full: &Operator, projector: &Operator, required_ratio: f64) -> Result<Operator> {
    let block = effective_hamiltonian_unchecked(full, projector)?;
    if block.gap_ratio < required_ratio {
        return Err(Error::GapCondition { ratio: block.gap_ratio, required: required_ratio });
    }
    Ok(block.h)
}

/// Coefficients of the effective qubit model on an `n`-atom site and,
/// optionally, the conditional two-qubit shift.
#[derive(Clone, Debug, Serialize)]
pub struct EffectiveQubitModel {
    pub delta_eff: f64,
    pub omega_eff: f64,
    /// Coefficient of `|11⟩⟨11|` after removing single-qubit terms, when a
    /// second site is present.
    pub conditional_shift: Option<f64>,
    pub leakage_bound: f64,
}

/// Effective single-site qubit model.
pub fn effective_qubit_model(n: usize, p: &LatticeParams) -> Result<EffectiveQubitModel> {
    let basis = build_fock_basis(&[n])?;
    let rows = qubit_rows(&basis, &[SiteOccupation::zero(n)], p, 1)?;
    let red = reduce(&rows);
    Ok(EffectiveQubitModel {
        delta_eff: red.h.entry(0, 0).re - red.h.entry(1, 1).re,
        omega_eff: 2.0 * red.h.entry(0, 1).norm(),
        conditional_shift: None,
        leakage_bound: red.admixture,
    })
}

/// Conditional shift `E₁₁ − E₁₀ − E₀₁ + E₀₀` of the undriven two-site
/// effective Hamiltonian.
pub fn conditional_shift(n: usize, m: usize, p: &LatticeParams) -> Result<EffectiveQubitModel> {
    let basis = build_fock_basis(&[n, m])?;
    let q = LatticeParams { omega: 0.0, ..*p };
    let rows = qubit_rows(&basis, &[SiteOccupation::zero(n), SiteOccupation::zero(m)], &q, 2)?;
    let red = reduce(&rows);
    let e = |k: usize| red.h.entry(k, k).re;
    Ok(EffectiveQubitModel {
        delta_eff: 0.0,
        omega_eff: 0.0,
        conditional_shift: Some(e(3) - e(2) - e(1) + e(0)),
        leakage_bound: red.admixture,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::fock::qubit_projector;
    use crate::lattice::hamiltonian::two_site_hamiltonian;

    #[test]
    fn rabi_matches_ladder_algebra() {
        assert!((effective_rabi(1, 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!((effective_rabi(4, 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(effective_rabi(3, 0.0).unwrap(), 0.0);
        for n in 1..=6 {
            let brute = effective_rabi(n, 1.3).unwrap();
            assert!((brute - 1.3 * (n as f64).sqrt()).abs() <= 4.0 * f64::EPSILON * brute);
        }
    }

    #[test]
    fn quoted_shift_values() {
        let p = LatticeParams { u_ab: 0.0, u_bb: 50.0, ..Default::default() };
        assert_eq!(delta_shift(2, 0.0, 0.4, &p).unwrap(), 0.4);
        let got = delta_shift(1, 0.3, 0.0, &p).unwrap();
        assert!((got - (-2.0 * 0.09 / 50.0)).abs() < 1e-15);
        let sing = LatticeParams { u_ab: 1.0, u_bb: 1.5, ..Default::default() };
        assert!(delta_shift(1, 0.1, 0.5, &sing).is_err());
    }

    #[test]
    fn block_diagonal_input_reduces_to_its_block() {
        let mut full = Operator::real_diagonal(&[0.1, 0.2, 5.0, 6.0]);
        full.set(0, 1, c(0.3, 0.1));
        full.set(1, 0, c(0.3, -0.1));
        full.set(2, 3, c(0.5, 0.0));
        full.set(3, 2, c(0.5, 0.0));
        let p = Operator::real_diagonal(&[1.0, 1.0, 0.0, 0.0]);
        let h = effective_hamiltonian_2nd_order(&full, &p, 10.0).unwrap();
        assert!(h.max_abs_diff(&full.submatrix(&[0, 1])) < 1e-15);
    }

    #[test]
    fn gap_violation_reported() {
        let mut full = Operator::real_diagonal(&[0.0, 1.0]);
        full.set(0, 1, c(0.5, 0.0));
        full.set(1, 0, c(0.5, 0.0));
        let p = Operator::real_diagonal(&[1.0, 0.0]);
        match effective_hamiltonian_2nd_order(&full, &p, 10.0) {
            Err(Error::GapCondition { ratio, .. }) => assert!((ratio - 2.0).abs() < 1e-12),
            other => panic!("expected gap error, got {other:?}"),
        }
    }

    #[test]
    fn sparse_and_dense_reductions_agree() {
        let b = build_fock_basis(&[2, 1]).unwrap();
        let p = LatticeParams { u_bb: 80.0, j_a: 0.3, j_b: 0.4, g: 80.5, delta: -4.0 * 80.5, omega: 0.2, phi: 0.3, ..Default::default() };
        let occ = [SiteOccupation::zero(2), SiteOccupation::zero(1)];
        let full = two_site_hamiltonian(&b, &p, 2).unwrap();
        let proj = qubit_projector(&b, &occ).unwrap();
        let dense = effective_hamiltonian_unchecked(&full, &proj).unwrap();
        let sparse = reduce(&qubit_rows(&b, &occ, &p, 2).unwrap());
        assert!(dense.h.max_abs_diff(&sparse.h) < 1e-9);
        assert!(dense.h.is_hermitian());
    }

    #[test]
    fn conditional_shift_carries_bosonic_factor() {
        // b hops either way between the two sites: 2J²/(g − U_bb) for one atom each
        let (u_bb, j) = (1e4, 0.05);
        let g = u_bb + 0.5;
        let p = LatticeParams { u_bb, j_a: j, j_b: j, g, delta: -4.0 * g, ..Default::default() };
        let m = conditional_shift(1, 1, &p).unwrap();
        let expect = 2.0 * j * j / (g - u_bb);
        assert!((m.conditional_shift.unwrap() - expect).abs() < 1e-3 * expect);
    }
}
