//! Command-line driver: one subcommand per experiment.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fspt::runner::{self, EngineChoice, Experiment, Grid, RunConfig};
use fspt::{Error, Result};

#[derive(Parser)]
#[command(name = "fspt", version, about = "Floquet SPT simulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Adiabatic sweep: S_1(even) and every ⟨X_l⟩ per step.
    Sweep(Overrides),
    /// Ramp to N_steps/2 + ε, then repeat the frozen drive.
    StopRepeat(Overrides),
    /// Envelope crossing over an (L, N_steps) grid.
    CrossingScan(Overrides),
    /// Ferromagnetic-tail amplitudes and their size scaling.
    Scaling(Overrides),
    /// π-mode trace and quasienergy spectra.
    Spectrum(Overrides),
    /// Edge-to-edge teleportation through the controlled drive.
    Teleport(Overrides),
    /// Degeneracy families of Z_N × Z_N SPT fixed points.
    SreFamilies(Overrides),
    /// Cross-check the two engines along a sweep.
    Compare(Overrides),
    /// Run whatever experiment the config file names.
    Run(Overrides),
}

#[derive(clap::Args)]
struct Overrides {
    /// JSON config file.
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["fermion", "statevector", "both"])]
    engine: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Chain lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    sites: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    l_a: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    n_steps: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    epsilon: Vec<i64>,
    #[arg(long)]
    r0: Option<f64>,
    /// Frozen-drive repetitions.
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    n_ramp: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    profile: bool,
    /// Cyclic order N of Z_N × Z_N.
    #[arg(long)]
    group_n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Pumped charge, comma separated.
    #[arg(long, value_delimiter = ',')]
    c: Vec<usize>,
}

fn grid<T: Clone>(v: &[T]) -> Option<Grid<T>> {
    match v {
        [] => None,
        [x] => Some(Grid::One(x.clone())),
        xs => Some(Grid::List(xs.to_vec())),
    }
}

fn build(experiment: Option<Experiment>, o: &Overrides) -> Result<RunConfig> {
    let mut cfg = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let cfg: RunConfig = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            if let Some(exp) = experiment {
                if cfg.experiment != exp {
                    return Err(Error::Config(format!(
                        "config describes {} but the subcommand is {exp}",
                        cfg.experiment
                    )));
                }
            }
            cfg
        }
        None => RunConfig::new(
            experiment.ok_or_else(|| Error::Config("`run` needs a config file".into()))?,
        ),
    };
    if let Some(e) = &o.engine {
        cfg.engine = Some(match e.as_str() {
            "fermion" => EngineChoice::Fermion,
            "statevector" => EngineChoice::Statevector,
            _ => EngineChoice::Both,
        });
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    if let Some(d) = &o.out {
        cfg.output_dir = d.clone();
    }
    cfg.sites = grid(&o.sites).or(cfg.sites);
    cfg.l_a = grid(&o.l_a).or(cfg.l_a);
    cfg.n_steps = grid(&o.n_steps).or(cfg.n_steps);
    cfg.epsilon = grid(&o.epsilon).or(cfg.epsilon);
    if let Some(r0) = o.r0 {
        cfg.r0 = r0;
    }
    cfg.r = o.repeats.or(cfg.r);
    cfg.theta1 = o.theta1.or(cfg.theta1);
    cfg.n_ramp = o.n_ramp.or(cfg.n_ramp);
    cfg.trials = o.trials.or(cfg.trials);
    cfg.profile |= o.profile;
    cfg.group_n = o.group_n.or(cfg.group_n);
    cfg.m = o.m.or(cfg.m);
    if !o.c.is_empty() {
        cfg.c = Some(o.c.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let (experiment, o) = match &cli.command {
        Command::Sweep(o) => (Some(Experiment::Sweep), o),
        Command::StopRepeat(o) => (Some(Experiment::StopRepeat), o),
        Command::CrossingScan(o) => (Some(Experiment::CrossingScan), o),
        Command::Scaling(o) => (Some(Experiment::Scaling), o),
        Command::Spectrum(o) => (Some(Experiment::Spectrum), o),
        Command::Teleport(o) => (Some(Experiment::Teleport), o),
        Command::SreFamilies(o) => (Some(Experiment::SreFamilies), o),
        Command::Compare(o) => (Some(Experiment::Compare), o),
        Command::Run(o) => (None, o),
    };
    let cfg = build(experiment, o)?;
    let manifest = runner::execute(&cfg, o.jobs)?;
    println!(
        "{} finished in {:.2}s, wrote {}",
        cfg.experiment,
        manifest.wall_clock_seconds,
        cfg.output_dir.display()
    );
    for out in &manifest.outputs {
        println!("  {} {}", out.sha256, out.file);
    }
    if !manifest.summary.is_empty() {
        println!(
            "{}",
            serde_json::to_string(&manifest.summary).unwrap_or_default()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", runner::error_record(&e));
            ExitCode::from(runner::exit_code(&e) as u8)
        }
    }
}
