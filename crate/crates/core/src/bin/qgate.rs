use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgate::harness::{
    gate_paths, render_svg, representative_paths, run_gate, run_sweep, write_csv, Experiment, GateKind, SweepConfig,
};
use qgate::schedule::UnknownMap;
use qgate::Error;

#[derive(Parser)]
#[command(name = "qgate", version, about = "Adiabatic gate sweeps with unknown Hamiltonian parameters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON sweep configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV destination (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Integration steps per 1/Ω_m.
    #[arg(long, global = true)]
    steps: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the schedules as JSON.
    #[arg(long, global = true)]
    dump_path: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    Fig2a,
    Fig2b,
    Fig2c,
    Fig2d,
    Robustness,
    /// Run one abstract gate and print its error.
    Gate {
        #[arg(value_parser = parse_gate)]
        gate: GateKind,
        /// Gate time in units of 1/Ω_m.
        #[arg(long, default_value_t = 300.0)]
        t: f64,
        /// Use the random unknown map with this seed instead of the identity.
        #[arg(long)]
        map_seed: Option<u64>,
    },
    /// Check the timing constraints of every gate schedule.
    Verify,
}

fn parse_gate(s: &str) -> Result<GateKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Io(_) | Error::InvalidParameter(_) => Failure::Config(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn load(common: &Common, experiment: Option<Experiment>) -> Result<SweepConfig, Failure> {
    let mut cfg = match &common.config {
        Some(p) => SweepConfig::load(p)?,
        None => SweepConfig::default(),
    };
    if let Some(e) = experiment {
        if common.config.is_some() && cfg.experiment != e {
            eprintln!("note: config names {}, running {}", cfg.experiment.name(), e.name());
        }
        cfg.experiment = e;
    }
    if let Some(s) = common.steps {
        cfg.steps = s as f64;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(w) = common.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dump(paths: &[(String, qgate::schedule::ParamPath)], dest: &PathBuf) -> Result<(), Failure> {
    let obj: serde_json::Map<String, serde_json::Value> = paths
        .iter()
        .map(|(k, p)| Ok((k.clone(), serde_json::from_str(&p.to_json())?)))
        .collect::<Result<_, serde_json::Error>>()
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    let text = serde_json::to_string_pretty(&obj).map_err(|e| Failure::Numerical(e.to_string()))?;
    std::fs::write(dest, text + "\n").map_err(|e| Failure::Config(format!("{}: {e}", dest.display())))
}

fn sweep(common: &Common, experiment: Experiment) -> Result<(), Failure> {
    let cfg = load(common, Some(experiment))?;
    if let Some(dest) = &common.dump_path {
        dump(&representative_paths(&cfg)?, dest)?;
    }
    let result = run_sweep(&cfg)?;
    match &common.out {
        Some(p) => write_csv(&result, p)?,
        None => print!("{}", qgate::harness::csv_string(&result)?),
    }
    if let Some(p) = &common.svg {
        render_svg(&result, p)?;
    }
    for n in &result.notes {
        eprintln!("{} @ {:e}: {}", n.series, n.swept, n.message);
    }
    if result.failures > 0 {
        return Err(Failure::Numerical(format!("{} point(s) failed", result.failures)));
    }
    Ok(())
}

fn gate(common: &Common, gate: GateKind, t: f64, map_seed: Option<u64>) -> Result<(), Failure> {
    let cfg = load(common, None)?;
    let mut limits = cfg.limits.clone();
    let rate = if gate == GateKind::Cnot { limits.omega_t_m } else { limits.omega_m };
    limits.t_leg = t / rate;
    let fmap = map_seed.map(UnknownMap::random).unwrap_or_else(UnknownMap::linear);
    if let Some(dest) = &common.dump_path {
        let paths: Vec<_> = gate_paths(gate, &limits, &fmap)?
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("{}#{i}", gate.name()), p))
            .collect();
        dump(&paths, dest)?;
    }
    let r = run_gate(gate, &limits, &fmap, cfg.steps)?;
    println!("gate={} T={t} error={:.6e} steps={} unitarity_defect={:.3e}", gate.name(), r.error, r.step_count, r.max_unitarity_defect);
    if let Some(xi) = r.xi {
        println!("xi={xi:.6}");
    }
    Ok(())
}

fn verify(common: &Common) -> Result<(), Failure> {
    let cfg = load(common, None)?;
    let mut failed = 0;
    let mut all = Vec::new();
    for g in [GateKind::Phase, GateKind::Hadamard, GateKind::Cnot] {
        for (i, p) in gate_paths(g, &cfg.limits, &UnknownMap::random(cfg.seed))?.into_iter().enumerate() {
            for c in p.verify_timing() {
                println!(
                    "{}#{i} {:<40} max_violation={:.3e} tol={:.1e} {}",
                    g.name(),
                    c.name,
                    c.max_violation,
                    c.tolerance,
                    if c.passed { "ok" } else { "FAIL" }
                );
                failed += (!c.passed) as usize;
            }
            all.push((format!("{}#{i}", g.name()), p));
        }
    }
    if let Some(dest) = &common.dump_path {
        dump(&all, dest)?;
    }
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} timing constraint(s) violated")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let r = match cli.command {
        Command::Fig2a => sweep(c, Experiment::Fig2a),
        Command::Fig2b => sweep(c, Experiment::Fig2b),
        Command::Fig2c => sweep(c, Experiment::Fig2c),
        Command::Fig2d => sweep(c, Experiment::Fig2d),
        Command::Robustness => sweep(c, Experiment::Robustness),
        Command::Gate { gate: g, t, map_seed } => gate(c, g, t, map_seed),
        Command::Verify => verify(c),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("config error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}
