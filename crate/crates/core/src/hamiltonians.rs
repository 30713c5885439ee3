//! The single-qubit and two-qubit control Hamiltonians.
//!
//! `h1 = (Δ/2)σz + (Ω/2)(σ₊e^{iφ} + σ₋e^{−iφ})` with `σ₊ = |0⟩⟨1|`, so a
//! positive detuning raises `|0⟩`.
//! `h2 = Δ̃|11⟩⟨11| + (Ω̃/2)·I⊗(σ₊e^{iφ} + σ₋e^{−iφ})` in the basis
//! `|00⟩, |01⟩, |10⟩, |11⟩`.

use serde::{Deserialize, Serialize};

use crate::operator::{c, pauli, tensor, Operator, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub delta: f64,
    pub omega: f64,
    pub phi: f64,
}

impl QubitParams {
    pub fn new(delta: f64, omega: f64, phi: f64) -> Self {
        debug_assert!(omega >= 0.0, "omega must be nonnegative");
        Self { delta, omega, phi }
    }

    /// From a signed drive `Ω_x = Ω cos φ` restricted to φ ∈ {0, π}.
    pub fn from_signed(delta: f64, omega_x: f64) -> Self {
        let phi = if omega_x < 0.0 { std::f64::consts::PI } else { 0.0 };
        Self { delta, omega: omega_x.abs(), phi }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitParams {
    pub delta_t: f64,
    pub omega_t: f64,
    pub phi: f64,
}

impl TwoQubitParams {
    pub fn new(delta_t: f64, omega_t: f64, phi: f64) -> Self {
        debug_assert!(omega_t >= 0.0, "omega_t must be nonnegative");
        Self { delta_t, omega_t, phi }
    }

    pub fn from_signed(delta_t: f64, omega_x: f64) -> Self {
        let phi = if omega_x < 0.0 { std::f64::consts::PI } else { 0.0 };
        Self { delta_t, omega_t: omega_x.abs(), phi }
    }
}

/// `σ₊e^{iφ} + σ₋e^{−iφ}`.
pub fn drive(phi: f64) -> Operator {
    let e = C64::from_polar(1.0, phi);
    Operator::from_rows(&[&[c(0.0, 0.0), e], &[e.conj(), c(0.0, 0.0)]])
}

pub fn h1(p: QubitParams) -> Operator {
    let mut h = drive(p.phi).scale_real(p.omega / 2.0);
    h.add_to(0, 0, c(p.delta / 2.0, 0.0));
    h.add_to(1, 1, c(-p.delta / 2.0, 0.0));
    h
}

pub fn h2(p: TwoQubitParams) -> Operator {
    let mut h = tensor(&pauli::identity(), &drive(p.phi)).scale_real(p.omega_t / 2.0);
    h.add_to(3, 3, c(p.delta_t, 0.0));
    h
}

/// `h2` seen in a frame where the target qubit has been flipped:
/// `(I⊗σx) h2 (I⊗σx) = Δ̃|10⟩⟨10| + (Ω̃/2)·I⊗(σ₋e^{iφ} + σ₊e^{−iφ})`.
///
/// Evolving under this generator for a stretch of time equals sandwiching
/// the plain evolution between two target flips.
pub fn h2_target_flipped(p: TwoQubitParams) -> Operator {
    let x2 = tensor(&pauli::identity(), &pauli::x());
    h2(p).conjugate_by(&x2)
}

/// Closed-form eigenvalues of `h1`: `∓½√(Δ²+Ω²)`.
pub fn h1_energies(p: QubitParams) -> [f64; 2] {
    let r = 0.5 * (p.delta * p.delta + p.omega * p.omega).sqrt();
    [-r, r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::eigensystem;
    use std::f64::consts::PI;

    #[test]
    fn h1_all_off_is_zero() {
        let h = h1(QubitParams::new(0.0, 0.0, 1.234));
        assert_eq!(h.max_abs(), 0.0);
    }

    #[test]
    fn h1_pure_detuning() {
        let h = h1(QubitParams::new(1.0, 0.0, 0.0));
        assert!(h.max_abs_diff(&Operator::real_diagonal(&[0.5, -0.5])) < 1e-15);
    }

    #[test]
    fn h1_pure_drive_is_half_sigma_x() {
        let h = h1(QubitParams::new(0.0, 1.0, 0.0));
        assert!(h.max_abs_diff(&pauli::x().scale_real(0.5)) < 1e-15);
        let s = eigensystem(&h, None).unwrap();
        assert!((s.values[0] + 0.5).abs() < 1e-14 && (s.values[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn h1_upper_element_carries_positive_phase() {
        let h = h1(QubitParams::new(0.0, 2.0, 0.3));
        assert!((h.entry(0, 1) - C64::from_polar(1.0, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn h2_projector_term_only() {
        let h = h2(TwoQubitParams::new(1.0, 0.0, 0.0));
        assert!(h.max_abs_diff(&Operator::real_diagonal(&[0.0, 0.0, 0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn h2_drive_only() {
        let h = h2(TwoQubitParams::new(0.0, 1.0, 0.0));
        let expect = tensor(&pauli::identity(), &pauli::x()).scale_real(0.5);
        assert!(h.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn h2_matches_termwise_assembly() {
        // Δ̃=2, Ω̃=1, φ=π/2 built element by element
        let (d, o, phi) = (2.0, 1.0, PI / 2.0);
        let h = h2(TwoQubitParams::new(d, o, phi));
        let mut brute = Operator::zeros(4);
        let e = C64::from_polar(o / 2.0, phi);
        for q in 0..2 {
            // ⟨q0|·|q1⟩ from σ₊e^{iφ}
            brute.add_to(2 * q, 2 * q + 1, e);
            brute.add_to(2 * q + 1, 2 * q, e.conj());
        }
        brute.add_to(3, 3, c(d, 0.0));
        assert!(h.max_abs_diff(&brute) < 1e-15);
        assert!((h.entry(3, 2) - c(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn target_flipped_frame_moves_projector() {
        let h = h2_target_flipped(TwoQubitParams::new(1.5, 0.0, 0.0));
        assert!(h.max_abs_diff(&Operator::real_diagonal(&[0.0, 0.0, 1.5, 0.0])) < 1e-15);
    }

    #[test]
    fn control_zero_block_is_rotated_drive() {
        let (o, phi) = (0.7, 1.1);
        let h = h2(TwoQubitParams::new(3.0, o, phi));
        let block = h.submatrix(&[0, 1]);
        let expect = (&pauli::x().scale_real(phi.cos()) - &pauli::y().scale_real(phi.sin()))
            .scale_real(o / 2.0);
        assert!(block.max_abs_diff(&expect) < 1e-15);
    }
}
