//! Gate propagation in the lattice realization.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::effective::{qubit_rows, reduce, DEFAULT_GAP_RATIO};
use super::fock::{FockBasis, SiteOccupation};
use super::hamiltonian::{site_level_energy, LatticeParams};
use crate::error::{Error, Result};
use crate::gates::{compose_cnot_unchecked, fidelity, not_gate, GateTarget};
use crate::operator::{c, unitary_exp, Operator};
use crate::schedule::{ParamPath, SegmentKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    /// Propagate the whole Fock space and project at the end.
    Full,
    /// Propagate the second-order effective Hamiltonian on the qubit subspace.
    #[default]
    Effective,
}

/// Everything except the path needed to run a lattice gate.
#[derive(Clone, Debug)]
pub struct LatticeSetup {
    pub basis: FockBasis,
    pub occupations: Vec<SiteOccupation>,
    /// Fixed parameters; path channels override the matching fields.
    pub params: LatticeParams,
    pub drive_site: usize,
    pub mode: SimMode,
    pub required_gap_ratio: f64,
}

impl LatticeSetup {
    pub fn new(basis: FockBasis, occupations: Vec<SiteOccupation>, params: LatticeParams, drive_site: usize) -> Self {
        Self { basis, occupations, params, drive_site, mode: SimMode::Effective, required_gap_ratio: DEFAULT_GAP_RATIO }
    }

    pub fn with_mode(mut self, mode: SimMode) -> Self {
        self.mode = mode;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    /// `None` when no target was supplied.
    pub fidelity: Option<f64>,
    /// `1 − ‖P U P‖²_F / d`; zero by construction in effective mode.
    pub leakage: f64,
    /// Largest second-order admixture of a qubit state along the path.
    pub leakage_bound: f64,
    /// Smallest denominator-to-coupling ratio met along the path.
    pub min_gap_ratio: f64,
    pub gap_ok: bool,
    pub step_count: usize,
    pub max_unitarity_defect: f64,
    #[serde(skip)]
    pub block: Operator,
}

/// Path channel names understood by the lattice builders.
fn apply_channels(names: &[String], v: &[f64], base: &LatticeParams) -> Result<(LatticeParams, bool)> {
    let mut p = *base;
    let mut flip = false;
    for (name, &x) in names.iter().zip(v) {
        match name.as_str() {
            "delta" => p.delta = x,
            "omega" => p.omega = x,
            "phi" => p.phi += x,
            "omega_x" => {
                p.omega = x.abs();
                if x < 0.0 {
                    p.phi += PI;
                }
            }
            "j2" => {
                let j = x.max(0.0).sqrt();
                p.j_a = j;
                p.j_b = j;
            }
            "j_b" => p.j_b = x,
            "target_flip" => flip = x > 0.5,
            other => {
                return Err(Error::InvalidParameter(format!("path channel '{other}' has no lattice counterpart")));
            }
        }
    }
    if p.omega < 0.0 {
        p.omega = -p.omega;
        p.phi += PI;
    }
    Ok((p, flip))
}

/// Conjugation by a NOT on the qubit of `site` (qubit-subspace basis).
fn flip_qubit(h: &Operator, sites: usize, site: usize) -> Operator {
    let d = h.dim();
    let bit = 1usize << (sites - site);
    Operator::from_fn(d, |i, j| h.entry(i ^ bit, j ^ bit))
}

/// Propagates one path and projects onto the qubit subspace.
pub fn simulate_lattice_gate(
    path: &ParamPath,
    setup: &LatticeSetup,
    target: Option<&GateTarget>,
    steps_per_unit_time: f64,
) -> Result<LatticeReport> {
    if !(steps_per_unit_time > 0.0) {
        return Err(Error::InvalidParameter("steps per unit time must be positive".into()));
    }
    let sites = setup.basis.sites();
    if setup.occupations.len() != sites {
        return Err(Error::DimensionMismatch { expected: sites, found: setup.occupations.len() });
    }
    if setup.drive_site < 1 || setup.drive_site > sites {
        return Err(Error::InvalidParameter(format!("drive site {} out of range", setup.drive_site)));
    }
    let qidx = setup.basis.qubit_indices(&setup.occupations)?;
    let d = qidx.len();
    if let Some(t) = target {
        if t.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: t.dim() });
        }
    }
    let qstates: Vec<Vec<usize>> = qidx.iter().map(|&i| setup.basis.state(i).to_vec()).collect();

    let full_dim = setup.basis.dim();
    let dim = match setup.mode {
        SimMode::Full => full_dim,
        SimMode::Effective => d,
    };
    let mut u = Operator::identity(dim);
    let mut steps = 0;
    let mut min_gap = f64::INFINITY;
    let mut leak_bound = 0.0_f64;
    let mut worst = 0.0_f64;

    for (idx, seg) in path.segments().iter().enumerate() {
        if seg.kind == SegmentKind::Jump || seg.duration == 0.0 {
            continue;
        }
        let n = ((seg.duration * steps_per_unit_time).ceil() as usize).max(1);
        let dt = seg.duration / n as f64;
        for k in 0..n {
            let v = path.eval_segment(idx, (k as f64 + 0.5) / n as f64);
            let (p, flip) = apply_channels(&path.names, &v, &setup.params)?;
            let rows = qubit_rows(&setup.basis, &setup.occupations, &p, setup.drive_site)?;
            let red = reduce(&rows);
            min_gap = min_gap.min(red.gap_ratio);
            leak_bound = leak_bound.max(red.admixture);
            let h = match setup.mode {
                SimMode::Effective => {
                    let mut h = red.h;
                    // rotating frame: drop the exactly conserved level splitting of undriven sites
                    for (x, s) in qstates.iter().enumerate() {
                        let e: f64 = (1..=sites)
                            .filter(|&site| site != setup.drive_site)
                            .map(|site| site_level_energy(s, site, &p))
                            .sum();
                        h.add_to(x, x, c(-e, 0.0));
                    }
                    if flip {
                        flip_qubit(&h, sites, setup.drive_site)
                    } else {
                        h
                    }
                }
                SimMode::Full => {
                    if flip {
                        return Err(Error::InvalidParameter(
                            "target refocusing frame is only available in effective mode".into(),
                        ));
                    }
                    if sites == 1 {
                        super::hamiltonian::single_site_hamiltonian_in(&setup.basis, &p)?
                    } else {
                        super::hamiltonian::two_site_hamiltonian(&setup.basis, &p, setup.drive_site)?
                    }
                }
            };
            u = &unitary_exp(&h, dt)? * &u;
        }
        steps += n;
        worst = worst.max(u.unitarity_defect());
    }

    let block = match setup.mode {
        SimMode::Full => u.submatrix(&qidx),
        SimMode::Effective => u,
    };
    let leakage = match setup.mode {
        SimMode::Full => (1.0 - block.norm().powi(2) / d as f64).max(0.0),
        SimMode::Effective => 0.0,
    };
    let fid = match target {
        Some(t) => Some(fidelity(t, &block)?),
        None => None,
    };
    Ok(LatticeReport {
        fidelity: fid,
        leakage,
        leakage_bound: leak_bound,
        min_gap_ratio: min_gap,
        gap_ok: min_gap >= setup.required_gap_ratio,
        step_count: steps,
        max_unitarity_defect: worst,
        block,
    })
}

/// Runs the `U₁` and `U₃` paths, composes `U₂U₃U₂U₁` with an exact NOT on
/// the first qubit and compares to `target`.
pub fn simulate_lattice_cnot(
    u1_path: &ParamPath,
    u3_path: &ParamPath,
    setup: &LatticeSetup,
    target: &GateTarget,
    steps_per_unit_time: f64,
) -> Result<LatticeReport> {
    let r1 = simulate_lattice_gate(u1_path, setup, None, steps_per_unit_time)?;
    let r3 = simulate_lattice_gate(u3_path, setup, None, steps_per_unit_time)?;
    let seq = compose_cnot_unchecked(&r1.block, &not_gate(), &r3.block)?;
    let f = fidelity(target, &seq.composed)?;
    Ok(LatticeReport {
        fidelity: Some(f),
        leakage: 1.0 - (1.0 - r1.leakage) * (1.0 - r3.leakage),
        leakage_bound: r1.leakage_bound.max(r3.leakage_bound),
        min_gap_ratio: r1.min_gap_ratio.min(r3.min_gap_ratio),
        gap_ok: r1.gap_ok && r3.gap_ok,
        step_count: r1.step_count + r3.step_count,
        max_unitarity_defect: r1.max_unitarity_defect.max(r3.max_unitarity_defect),
        block: seq.composed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::ideal_hadamard_like;
    use crate::lattice::fock::build_fock_basis;
    use crate::propagator::evolve;
    use crate::schedule::{hadamard_builder, hadamard_path, ScheduleLimits, UnknownMap};

    #[test]
    fn one_atom_full_mode_matches_abstract_model() {
        let limits = ScheduleLimits { t_leg: 50.0, ..ScheduleLimits::default() };
        let path = hadamard_path(&limits, &UnknownMap::linear()).unwrap();
        let abstract_u = evolve(&path, hadamard_builder, 16.0).unwrap().unitary;
        let setup = LatticeSetup::new(
            build_fock_basis(&[1]).unwrap(),
            vec![SiteOccupation::zero(1)],
            LatticeParams { u_bb: 1e6, u_aa: 0.0, u_ab: 0.0, ..Default::default() },
            1,
        )
        .with_mode(SimMode::Full);
        let r = simulate_lattice_gate(&path, &setup, Some(&ideal_hadamard_like()), 16.0).unwrap();
        assert!(r.block.max_abs_diff(&abstract_u) < 1e-12);
        assert!(r.leakage.abs() < 1e-12);
    }

    #[test]
    fn unknown_channel_rejected() {
        let names = vec!["delta_t".to_string()];
        assert!(apply_channels(&names, &[1.0], &LatticeParams::default()).is_err());
    }

    #[test]
    fn qubit_flip_permutes_target_bit() {
        let h = Operator::real_diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let f = flip_qubit(&h, 2, 2);
        assert!(f.max_abs_diff(&Operator::real_diagonal(&[2.0, 1.0, 4.0, 3.0])) < 1e-15);
        let f = flip_qubit(&h, 2, 1);
        assert!(f.max_abs_diff(&Operator::real_diagonal(&[3.0, 4.0, 1.0, 2.0])) < 1e-15);
    }
}
