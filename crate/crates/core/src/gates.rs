//! Ideal gates, the trace fidelity and the CNOT composition.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::operator::{c, pauli, tensor, Operator, C64};

/// An ideal unitary compared up to global phase.
#[derive(Clone, Debug)]
pub struct GateTarget {
    pub name: String,
    pub unitary: Operator,
}

impl GateTarget {
    pub fn new(name: &str, unitary: Operator) -> Self {
        debug_assert!(unitary.unitarity_defect() < 1e-12);
        Self { name: name.into(), unitary }
    }

    pub fn dim(&self) -> usize {
        self.unitary.dim()
    }
}

/// `diag(e^{iθ/2}, e^{−iθ/2})`.
pub fn ideal_phase(theta: f64) -> GateTarget {
    GateTarget::new(
        "phase",
        Operator::diagonal(&[C64::from_polar(1.0, theta / 2.0), C64::from_polar(1.0, -theta / 2.0)]),
    )
}

/// Maps `(|0⟩+|1⟩)/√2 → |0⟩` and `(|0⟩−|1⟩)/√2 → −|1⟩`.
pub fn ideal_hadamard_like() -> GateTarget {
    let s = FRAC_1_SQRT_2;
    GateTarget::new("hadamard", Operator::from_real_rows(&[&[s, s], &[-s, s]]))
}

/// `iσy = [[0, 1], [−1, 0]]`.
pub fn i_sigma_y() -> Operator {
    pauli::y().scale(c(0.0, 1.0))
}

/// `|0⟩⟨0|⊗I + |1⟩⟨1|⊗iσy`.
pub fn ideal_cnot_like() -> GateTarget {
    let p0 = Operator::outer_basis(2, 0, 0);
    let p1 = Operator::outer_basis(2, 1, 1);
    let u = &tensor(&p0, &pauli::identity()) + &tensor(&p1, &i_sigma_y());
    GateTarget::new("cnot", u)
}

/// NOT on the first qubit, `σx ⊗ I`.
pub fn not_gate() -> Operator {
    tensor(&pauli::x(), &pauli::identity())
}

/// `|Tr(U_ideal† U)|² / d²`; insensitive to the global phase of either argument.
pub fn fidelity(ideal: &GateTarget, real: &Operator) -> Result<f64> {
    if ideal.dim() != real.dim() {
        return Err(Error::DimensionMismatch { expected: ideal.dim(), found: real.dim() });
    }
    let tr: C64 = (ideal.unitary.matrix().adjoint() * real.matrix()).trace();
    let d = ideal.dim() as f64;
    Ok((tr.norm_sqr() / (d * d)).clamp(0.0, 1.0))
}

/// `1 − fidelity`.
pub fn gate_error(ideal: &GateTarget, real: &Operator) -> Result<f64> {
    Ok(1.0 - fidelity(ideal, real)?)
}

#[derive(Clone, Debug)]
pub struct CnotSequence {
    pub u1: Operator,
    pub u2: Operator,
    pub u3: Operator,
    pub xi: f64,
    /// Largest entry of `U₁` coupling the control-0 and control-1 blocks.
    pub off_block: f64,
    /// `U₂ U₃ U₂ U₁`.
    pub composed: Operator,
}

/// Tolerance on the off-diagonal control blocks of `U₁`.
pub const BLOCK_TOL: f64 = 1e-3;

/// Composes `U₂ U₃ U₂ U₁` and extracts `ξ` from `⟨10|U₁|11⟩ = e^{iξ}`.
///
/// Fails if `U₁` mixes the control blocks by more than [`BLOCK_TOL`].
pub fn compose_cnot(u1: &Operator, u2: &Operator, u3: &Operator) -> Result<CnotSequence> {
    let seq = compose_cnot_unchecked(u1, u2, u3)?;
    if seq.off_block > BLOCK_TOL {
        return Err(Error::BlockStructure { off_block: seq.off_block });
    }
    Ok(seq)
}

/// As [`compose_cnot`] but only records the off-block norm, for sweeps
/// where a badly broken `U₁` should show up as a large gate error.
pub fn compose_cnot_unchecked(u1: &Operator, u2: &Operator, u3: &Operator) -> Result<CnotSequence> {
    for u in [u1, u2, u3] {
        if u.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: u.dim() });
        }
    }
    let mut off = 0.0_f64;
    for i in 0..2 {
        for j in 2..4 {
            off = off.max(u1.entry(i, j).norm()).max(u1.entry(j, i).norm());
        }
    }
    let xi = u1.entry(2, 3).arg();
    let composed = &(&(u2 * u3) * u2) * u1;
    Ok(CnotSequence { u1: u1.clone(), u2: u2.clone(), u3: u3.clone(), xi, off_block: off, composed })
}

/// `|0⟩⟨0|⊗I + e^{iξ}|1⟩⟨1|⊗iσy`.
pub fn synthetic_u1(xi: f64) -> Operator {
    let p0 = Operator::outer_basis(2, 0, 0);
    let p1 = Operator::outer_basis(2, 1, 1).scale(C64::from_polar(1.0, xi));
    &tensor(&p0, &pauli::identity()) + &tensor(&p1, &i_sigma_y())
}

/// `(|0⟩⟨0| + e^{iξ}|1⟩⟨1|)⊗I`.
pub fn synthetic_u3(xi: f64) -> Operator {
    tensor(
        &Operator::diagonal(&[c(1.0, 0.0), C64::from_polar(1.0, xi)]),
        &pauli::identity(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn phase_targets() {
        assert!(ideal_phase(0.0).unitary.max_abs_diff(&Operator::identity(2)) < 1e-15);
        let pi = ideal_phase(PI).unitary;
        assert!(pi.max_abs_diff(&pauli::z().scale(c(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn hadamard_like_columns() {
        let h = ideal_hadamard_like().unitary;
        let s = FRAC_1_SQRT_2;
        let plus = h.apply(&[c(s, 0.0), c(s, 0.0)]);
        let minus = h.apply(&[c(s, 0.0), c(-s, 0.0)]);
        assert!((plus[0] - c(1.0, 0.0)).norm() < 1e-15 && plus[1].norm() < 1e-15);
        assert!(minus[0].norm() < 1e-15 && (minus[1] - c(-1.0, 0.0)).norm() < 1e-15);
        let m = h.matrix();
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        assert!((det - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cnot_like_action() {
        let u = ideal_cnot_like().unitary;
        let basis = |k: usize| {
            let mut v = vec![c(0.0, 0.0); 4];
            v[k] = c(1.0, 0.0);
            v
        };
        assert_eq!(u.apply(&basis(0)), basis(0));
        let img10 = u.apply(&basis(2));
        assert!((img10[3] + c(1.0, 0.0)).norm() < 1e-15);
        let img11 = u.apply(&basis(3));
        assert!((img11[2] - c(1.0, 0.0)).norm() < 1e-15);
        let sq = &u * &u;
        assert!(sq.max_abs_diff(&Operator::real_diagonal(&[1.0, 1.0, -1.0, -1.0])) < 1e-15);
    }

    #[test]
    fn not_gate_properties() {
        let x = not_gate();
        assert!((&x * &x).max_abs_diff(&Operator::identity(4)) < 1e-15);
        assert!(x.is_hermitian() && x.is_unitary());
        assert_eq!(x.entry(2, 0), c(1.0, 0.0));
    }

    #[test]
    fn fidelity_basics() {
        let id = GateTarget::new("id", Operator::identity(2));
        assert!((fidelity(&id, &Operator::identity(2)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&id, &pauli::x()).unwrap(), 0.0);
        let phased = Operator::identity(2).scale(C64::from_polar(1.0, 0.77));
        assert!((fidelity(&id, &phased).unwrap() - 1.0).abs() < 1e-15);
        assert!(fidelity(&id, &Operator::identity(4)).is_err());
    }

    #[test]
    fn composition_with_ideal_blocks() {
        let seq = compose_cnot(&synthetic_u1(0.0), &not_gate(), &Operator::identity(4)).unwrap();
        assert!(seq.composed.max_abs_diff(&ideal_cnot_like().unitary) < 1e-15);
        for xi in [0.0, PI / 3.0, PI, -2.0] {
            let seq = compose_cnot(&synthetic_u1(xi), &not_gate(), &synthetic_u3(xi)).unwrap();
            let f = fidelity(&ideal_cnot_like(), &seq.composed).unwrap();
            assert!((1.0 - f).abs() < 1e-12);
            assert!((C64::from_polar(1.0, seq.xi) - C64::from_polar(1.0, xi)).norm() < 1e-12);
        }
    }

    #[test]
    fn composition_rejects_mixed_blocks() {
        let bad = not_gate();
        assert!(matches!(
            compose_cnot(&bad, &not_gate(), &Operator::identity(4)),
            Err(Error::BlockStructure { .. })
        ));
    }
}
