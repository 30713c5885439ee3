//! Adiabatic-passage gate protocols whose outcome does not depend on the
//! exact values of the Hamiltonian parameters, together with a bosonic
//! optical-lattice realization and a sweep harness.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gates;
pub mod hamiltonians;
pub mod harness;
pub mod lattice;
pub mod operator;
pub mod propagator;
pub mod schedule;

pub use error::{Error, Result};
