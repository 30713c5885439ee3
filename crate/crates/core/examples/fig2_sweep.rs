//! Run a small gate-time sweep through the harness and write CSV + SVG to
//! the system temp directory.

use qgate::harness::{csv_string, render_svg, run_sweep, Experiment, Grid, Spacing, SweepConfig};

fn main() -> qgate::Result<()> {
    let mut cfg = SweepConfig::for_experiment(Experiment::Fig2a);
    cfg.grid = Some(Grid { start: 30.0, stop: 3000.0, points: 5, spacing: Spacing::Log });
    cfg.steps = 16.0;
    let result = run_sweep(&cfg)?;
    print!("{}", csv_string(&result)?);
    let svg = std::env::temp_dir().join("qgate_fig2a.svg");
    render_svg(&result, &svg)?;
    eprintln!("plot written to {}", svg.display());
    Ok(())
}
