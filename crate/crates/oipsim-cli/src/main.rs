//! `oipsim` — batch front end for the optically-induced plasma RF switch
//! toolkit: forward simulation to Touchstone files, swept loss tables,
//! equivalent-circuit extraction, microstrip synthesis, and carrier-profile
//! dumps. All physics inputs live in a JSON configuration file so a run is
//! reproducible from a single artifact; identical inputs produce
//! byte-identical outputs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{
    cmd_fit, cmd_profile, cmd_simulate, cmd_sweep, cmd_synth_line, CommandOutcome, FitTopology,
};

#[derive(Parser)]
#[command(
    name = "oipsim",
    version,
    about = "Optically-induced plasma RF switch: simulation and circuit extraction",
    propagate_version = true
)]
struct Cli {
    /// Directory for all written artifacts; overrides the config file's
    /// output directory. No command writes outside this directory.
    #[arg(long, global = true, env = "OIPSIM_OUT_DIR", value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forward-model the switch: one Touchstone .s2p per configured laser
    /// power, plus a summary table of R, C, and band-edge losses.
    Simulate {
        /// JSON configuration file.
        config: PathBuf,
    },
    /// Tabulate insertion/return loss over every (power, frequency) pair
    /// into sweep.csv, verifying loss is monotone in power.
    Sweep {
        /// JSON configuration file.
        config: PathBuf,
    },
    /// Extract a lumped equivalent circuit from a two-port Touchstone file
    /// and write fit_report.txt. Exits 2 if the fit hit its iteration cap.
    Fit {
        /// Input .s2p file (Touchstone v1, two-port).
        s2p: PathBuf,
        /// Circuit topology to extract.
        #[arg(long, value_enum, default_value_t = TopologyArg::Off)]
        topology: TopologyArg,
        /// Fit |s21| only; default fits complex s21 and s11. Use for
        /// magnitude-only published data.
        #[arg(long)]
        magnitude: bool,
        /// Iteration cap for the off-state simplex fit.
        #[arg(long, value_name = "N")]
        max_iterations: Option<usize>,
    },
    /// Synthesize a microstrip trace width for a target impedance and
    /// verify it by re-analysis.
    SynthLine {
        /// Substrate relative permittivity, e.g. 3.45.
        epsilon_r: f64,
        /// Substrate height: bare metres or a unit string like "30 mil".
        height: String,
        /// Target characteristic impedance: bare ohms or e.g. "50 ohm".
        z0: String,
    },
    /// Write carrier-density and conductivity depth profiles, one CSV per
    /// configured laser power.
    Profile {
        /// JSON configuration file.
        config: PathBuf,
    },
}

/// Topology flag for `fit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TopologyArg {
    /// OFF state: series R||C (dark, isolating).
    Off,
    /// ON state: flat series R (illuminated, conducting).
    On,
}

fn run(cli: Cli) -> oipsim_core::Result<CommandOutcome> {
    let out_dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Simulate { config } => cmd_simulate(&config, out_dir),
        Command::Sweep { config } => cmd_sweep(&config, out_dir),
        Command::Fit {
            s2p,
            topology,
            magnitude,
            max_iterations,
        } => cmd_fit(
            &s2p,
            match topology {
                TopologyArg::Off => FitTopology::Off,
                TopologyArg::On => FitTopology::On,
            },
            magnitude,
            max_iterations,
            out_dir,
        ),
        Command::SynthLine {
            epsilon_r,
            height,
            z0,
        } => cmd_synth_line(epsilon_r, &height, &z0),
        Command::Profile { config } => cmd_profile(&config, out_dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(1)
        }
    }
}
