//! Command-line front end: experiment presets, config parsing and run
//! orchestration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use majsim::config::{load_config_file, resolve_config, ConfigPair, ExperimentConfig};
use majsim::error::SimError;
use majsim::run::{run_compare, run_experiment, RunSummary};

#[derive(Parser)]
#[command(
    name = "sim",
    about = "Majorana/Dirac wavepacket dynamics in binary waveguide lattices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write CSV/heatmap outputs.
    Run(RunArgs),
    /// Emit the Majoranon-vs-Dirac pseudo-energy comparison curves.
    Compare(RunArgs),
    /// Run the oracle and invariant suite and print a pass/fail table.
    Validate,
}

/// Flags mirror the config keys 1:1; `--config FILE` values are applied
/// first and explicit flags win.
#[derive(Args)]
struct RunArgs {
    /// Output directory for CSV and heatmap files.
    #[arg(long)]
    out: PathBuf,
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment preset: lowmass, highmass or custom.
    #[arg(long)]
    preset: Option<String>,
    /// Simulation level: spinor, lattice or device.
    #[arg(long)]
    model: Option<String>,
    /// dirac_plus, dirac_minus, majorana_composed or majorana_reference.
    #[arg(long)]
    evolver: Option<String>,
    /// Number of unit cells N.
    #[arg(long)]
    n: Option<String>,
    /// Number of lattice sites K = 2N.
    #[arg(long)]
    sites: Option<String>,
    /// Coupling constant in 1/mm.
    #[arg(long)]
    kappa: Option<String>,
    /// Dimensionless mass (detuning over coupling).
    #[arg(long)]
    mu: Option<String>,
    /// Packet width in cells.
    #[arg(long)]
    sigma: Option<String>,
    /// Packet center in cells.
    #[arg(long)]
    n0: Option<String>,
    /// Mean packet momentum.
    #[arg(long)]
    p0: Option<String>,
    /// Comma-separated evolution coordinates.
    #[arg(long)]
    zetas: Option<String>,
    /// Range sampling: largest coordinate.
    #[arg(long)]
    zeta_max: Option<String>,
    /// Range sampling: coordinate step.
    #[arg(long)]
    zeta_step: Option<String>,
    /// Comma-separated subset of pseudo_energy, intensities, map,
    /// centroid_width.
    #[arg(long)]
    outputs: Option<String>,
}

impl RunArgs {
    fn resolve(&self) -> Result<(ExperimentConfig, Vec<String>), SimError> {
        let mut pairs = Vec::new();
        if let Some(path) = &self.config {
            pairs.extend(load_config_file(path)?);
        }
        let flags: [(&str, &Option<String>); 13] = [
            ("preset", &self.preset),
            ("model", &self.model),
            ("evolver", &self.evolver),
            ("n", &self.n),
            ("sites", &self.sites),
            ("kappa", &self.kappa),
            ("mu", &self.mu),
            ("sigma", &self.sigma),
            ("n0", &self.n0),
            ("p0", &self.p0),
            ("zetas", &self.zetas),
            ("zeta_max", &self.zeta_max),
            ("zeta_step", &self.zeta_step),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                pairs.push(ConfigPair::flag(key, value));
            }
        }
        if let Some(outputs) = &self.outputs {
            pairs.push(ConfigPair::flag("outputs", outputs));
        }
        resolve_config(&pairs)
    }
}

fn print_summary(summary: &RunSummary) {
    for path in &summary.files {
        println!("wrote {}", path.display());
    }
    for (name, value) in &summary.scalars {
        println!("{name} = {value:.6}");
    }
}

fn run_command(args: &RunArgs, compare: bool) -> Result<(), SimError> {
    let (cfg, notices) = args.resolve()?;
    for notice in &notices {
        eprintln!("notice: {notice}");
    }
    let summary = if compare {
        run_compare(&cfg, &args.out)?
    } else {
        run_experiment(&cfg, &args.out)?
    };
    print_summary(&summary);
    Ok(())
}

fn validate_command() -> Result<bool, SimError> {
    let results = majsim::validate::run_all_checks()?;
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut all_passed = true;
    for result in &results {
        let status = if result.passed { "pass" } else { "FAIL" };
        println!("{status}  {:width$}  {}", result.name, result.detail);
        all_passed &= result.passed;
    }
    println!(
        "{} of {} checks passed",
        results.iter().filter(|r| r.passed).count(),
        results.len()
    );
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run_command(args, false),
        Command::Compare(args) => run_command(args, true),
        Command::Validate => match validate_command() {
            Ok(true) => Ok(()),
            Ok(false) => {
                eprintln!("error: validation found failing checks");
                return ExitCode::from(3);
            }
            Err(e) => Err(e),
        },
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
