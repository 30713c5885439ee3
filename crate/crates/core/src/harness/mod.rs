//! Sweeps over gate time or interaction strength, with CSV and SVG output.

mod config;
mod output;
mod runs;

pub use config::{Experiment, GateKind, Grid, LatticeConfig, Spacing, SweepConfig};
pub use output::{csv_string, read_csv, render_svg, svg_string, write_csv, CSV_HEADER, SYMLOG_FLOOR};
pub use runs::{
    gate_paths, gate_target, lattice_cnot_paths, lattice_cnot_point, lattice_local_limits, lattice_local_point,
    lattice_two_qubit_omega, representative_paths, robustness_seeds, run_fig2a, run_fig2bc, run_fig2d, run_gate,
    run_robustness, run_sweep, GateRun, Note, Record, Series, SweepResult,
};
