//! Error spread over random unknown maps at a fixed gate time.

use qgate::harness::{run_sweep, Experiment, SweepConfig};

fn main() -> qgate::Result<()> {
    let mut cfg = SweepConfig::for_experiment(Experiment::Robustness);
    cfg.seed = 11;
    cfg.count = 6;
    let result = run_sweep(&cfg)?;
    for s in &result.series {
        let e = s.errors();
        let max = e.iter().cloned().fold(0.0, f64::max);
        println!("{:>9}: max {:.2e}, spread {:.2e}", s.label, max, s.spread());
    }
    Ok(())
}
