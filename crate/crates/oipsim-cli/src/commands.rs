//! Command implementations. Each command composes the core toolkit into one
//! reproducible batch operation and reports what it did through
//! [`CommandOutcome`]; `main` owns printing and process exit.

use std::fs;
use std::path::{Path, PathBuf};

use oipsim_core::{
    carrier_profile, conductivity_profile, fit_off_model, fit_off_model_with, fit_on_resistance,
    load_config, microstrip_analyze, microstrip_synthesize, parse_length, parse_resistance,
    read_touchstone, switch_element, switch_response, write_sweep_csv, write_touchstone, Error,
    FitMode, MicrostripLine, Result, RunConfig, SweepRow, TwoPortNetwork, PROFILE_POINTS,
};

/// Exit code for fit runs that hit the iteration cap; input and physics
/// errors exit 1, success 0.
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// What a command did: the process exit code, every file it created, and
/// the lines to print.
pub struct CommandOutcome {
    pub exit_code: i32,
    pub artifacts_written: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl CommandOutcome {
    fn new() -> Self {
        Self {
            exit_code: 0,
            artifacts_written: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }
}

/// Equivalent-circuit topology selected on the `fit` command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitTopology {
    /// OFF-state R||C extracted by simplex descent.
    Off,
    /// ON-state flat series R extracted in closed form.
    On,
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_run_config(path: &Path) -> Result<RunConfig> {
    load_config(&read_file(path)?)
}

/// Command-line/environment override wins over the config's own directory.
fn resolve_out_dir(override_dir: Option<&Path>, config: Option<&RunConfig>) -> PathBuf {
    match (override_dir, config) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(cfg)) => cfg.output.directory.clone(),
        (None, None) => PathBuf::from("out"),
    }
}

/// All artifact writes go through here: everything lands inside `dir`.
fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(path)
}

/// Powers in ascending order so artifact listings and tables are stable
/// regardless of document order.
fn sorted_powers(cfg: &RunConfig) -> Vec<f64> {
    let mut powers = cfg.powers.clone();
    powers.sort_by(f64::total_cmp);
    powers
}

/// Stable artifact stem, e.g. power 0.175 W -> "00175.000mW".
fn power_stem(power_w: f64) -> String {
    format!("{:09.3}mW", power_w * 1e3)
}

/// Forward-models one element + feed-line cascade per configured power and
/// writes each swept response as a Touchstone file plus a summary table.
pub fn cmd_simulate(config_path: &Path, out_override: Option<&Path>) -> Result<CommandOutcome> {
    let cfg = read_run_config(config_path)?;
    let out_dir = resolve_out_dir(out_override, Some(&cfg));
    let line = cfg.board.feed_line()?;
    let grid = cfg.sweep.grid();
    let mut outcome = CommandOutcome::new();

    let dark = switch_element(&cfg.chiplet, &cfg.laser.at_power(0.0), &cfg.material)?;
    outcome.line(format!("dark resistance: {:.6} ohm", dark.resistance()));
    outcome.line(format!(
        "band: {:.3} GHz to {:.3} GHz, {} points",
        grid[0] / 1e9,
        grid[grid.len() - 1] / 1e9,
        grid.len()
    ));
    outcome.line("power_mW R_ohm C_fF IL_lo_dB IL_hi_dB RL_lo_dB RL_hi_dB".to_string());

    for &power in &sorted_powers(&cfg) {
        let element = switch_element(&cfg.chiplet, &cfg.laser.at_power(power), &cfg.material)?;
        let net = switch_response(&line, &line, &element, &grid)?;
        let text = write_touchstone(&net, cfg.output.touchstone_format);
        let path = write_artifact(&out_dir, &format!("sim_{}.s2p", power_stem(power)), &text)?;
        outcome.artifacts_written.push(path);

        let lo = net.points()[0];
        let hi = net.points()[net.len() - 1];
        outcome.line(format!(
            "{:.3} {:.6} {:.6} {:.3} {:.3} {:.3} {:.3}",
            power * 1e3,
            element.resistance(),
            element.capacitance().unwrap_or(0.0) * 1e15,
            lo.insertion_loss_db(),
            hi.insertion_loss_db(),
            lo.return_loss_db(),
            hi.return_loss_db(),
        ));
    }

    let table = outcome.summary.join("\n") + "\n";
    let path = write_artifact(&out_dir, "summary.txt", &table)?;
    outcome.line(format!("wrote {} artifacts", outcome.artifacts_written.len() + 1));
    outcome.artifacts_written.push(path);
    Ok(outcome)
}

/// Tabulates IL/RL/R/C over (power, frequency) into one CSV and verifies
/// that insertion loss never increases with power at any frequency.
pub fn cmd_sweep(config_path: &Path, out_override: Option<&Path>) -> Result<CommandOutcome> {
    let cfg = read_run_config(config_path)?;
    let out_dir = resolve_out_dir(out_override, Some(&cfg));
    let line = cfg.board.feed_line()?;
    let grid = cfg.sweep.grid();
    let powers = sorted_powers(&cfg);

    let mut rows = Vec::with_capacity(powers.len() * grid.len());
    let mut il_by_power: Vec<Vec<f64>> = Vec::with_capacity(powers.len());
    for &power in &powers {
        let element = switch_element(&cfg.chiplet, &cfg.laser.at_power(power), &cfg.material)?;
        let net = switch_response(&line, &line, &element, &grid)?;
        let mut ils = Vec::with_capacity(grid.len());
        for (f, point) in net.iter() {
            let il = point.insertion_loss_db();
            ils.push(il);
            rows.push(SweepRow {
                power_w: power,
                frequency_hz: f,
                insertion_loss_db: il,
                return_loss_db: point.return_loss_db(),
                resistance_ohm: element.resistance(),
                capacitance_f: element.capacitance().unwrap_or(0.0),
            });
        }
        il_by_power.push(ils);
    }

    // More optical power can only lower the series resistance, so IL must
    // not grow with power; a violation means an internal inconsistency.
    for pair in il_by_power.windows(2) {
        for (k, (lower_p, higher_p)) in pair[0].iter().zip(&pair[1]).enumerate() {
            if *higher_p > *lower_p + 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "insertion loss increased with power at {} Hz: {} dB -> {} dB",
                    grid[k], lower_p, higher_p
                )));
            }
        }
    }

    let csv = write_sweep_csv(&rows)?;
    let path = write_artifact(&out_dir, "sweep.csv", &csv)?;
    let mut outcome = CommandOutcome::new();
    outcome.line(format!(
        "wrote {} rows ({} powers x {} frequencies)",
        rows.len(),
        powers.len(),
        grid.len()
    ));
    outcome.line("insertion loss monotone non-increasing with power: verified".to_string());
    outcome.line(format!("wrote {}", path.display()));
    outcome.artifacts_written.push(path);
    Ok(outcome)
}

/// Extracts an equivalent circuit from a Touchstone file and writes a fit
/// report. Exit code 2 signals a hit iteration cap; the report is written
/// either way.
pub fn cmd_fit(
    s2p_path: &Path,
    topology: FitTopology,
    magnitude_only: bool,
    max_iterations: Option<usize>,
    out_override: Option<&Path>,
) -> Result<CommandOutcome> {
    let net = read_touchstone(&read_file(s2p_path)?)?;
    reject_non_passive(&net)?;
    let out_dir = resolve_out_dir(out_override, None);

    let (result, mode_name) = match topology {
        FitTopology::On => (fit_on_resistance(&net)?, "closed-form |s21|"),
        FitTopology::Off => {
            let mode = if magnitude_only {
                FitMode::MagnitudeS21
            } else {
                FitMode::Complex
            };
            let fit = match max_iterations {
                Some(cap) => fit_off_model_with(&net, mode, cap)?,
                None => fit_off_model(&net, mode)?,
            };
            (
                fit,
                if magnitude_only {
                    "|s21| magnitude"
                } else {
                    "complex s21+s11"
                },
            )
        }
    };

    let mut outcome = CommandOutcome::new();
    outcome.line(format!("input: {}", s2p_path.display()));
    outcome.line(format!(
        "topology: {}",
        match topology {
            FitTopology::Off => "off-state R||C",
            FitTopology::On => "on-state series R",
        }
    ));
    outcome.line(format!("mode: {mode_name}"));
    outcome.line(format!("R_ohm: {:.6}", result.circuit.resistance()));
    if let Some(c) = result.circuit.capacitance() {
        outcome.line(format!("C_fF: {:.6}", c * 1e15));
    }
    outcome.line(format!("residual_rms: {:.6e}", result.residual_rms));
    outcome.line(format!("iterations: {}", result.iterations));
    outcome.line(format!("converged: {}", result.converged));
    if let Some(note) = &result.note {
        outcome.line(format!("note: {note}"));
    }

    let report = outcome.summary.join("\n") + "\n";
    let path = write_artifact(&out_dir, "fit_report.txt", &report)?;
    outcome.line(format!("wrote {}", path.display()));
    outcome.artifacts_written.push(path);
    if !result.converged {
        outcome.exit_code = EXIT_NOT_CONVERGED;
    }
    Ok(outcome)
}

fn reject_non_passive(net: &TwoPortNetwork) -> Result<()> {
    for (f, point) in net.iter() {
        if !point.is_passive(1e-9) {
            let magnitude = [point.s11, point.s21, point.s12, point.s22]
                .iter()
                .map(|s| s.norm())
                .fold(0.0f64, f64::max);
            return Err(Error::NonPassiveData {
                magnitude,
                frequency_hz: f,
            });
        }
    }
    Ok(())
}

/// Synthesizes a microstrip width for a target impedance and verifies it by
/// re-analysis. Arguments accept unit strings ("30 mil", "50 ohm").
pub fn cmd_synth_line(epsilon_r: f64, height: &str, z0: &str) -> Result<CommandOutcome> {
    let height_m = parse_length(height)?;
    let target_z0 = parse_resistance(z0)?;
    let width = microstrip_synthesize(epsilon_r, height_m, target_z0)?;
    let line = MicrostripLine::lossless(epsilon_r, height_m, width, 1e-3)?;
    let params = microstrip_analyze(&line)?;

    let mut outcome = CommandOutcome::new();
    outcome.line(format!("width_mm: {:.6}", width * 1e3));
    outcome.line(format!("w_over_h: {:.4}", width / height_m));
    outcome.line(format!("eps_effective: {:.6}", params.eps_effective));
    outcome.line(format!("z0_verified_ohm: {:.6}", params.char_impedance));
    Ok(outcome)
}

/// Writes carrier-density and conductivity depth tables, one CSV per power.
pub fn cmd_profile(config_path: &Path, out_override: Option<&Path>) -> Result<CommandOutcome> {
    let cfg = read_run_config(config_path)?;
    let out_dir = resolve_out_dir(out_override, Some(&cfg));
    let mut outcome = CommandOutcome::new();

    for &power in &sorted_powers(&cfg) {
        let profile = carrier_profile(
            &cfg.laser.at_power(power),
            &cfg.material,
            cfg.chiplet.thickness,
            PROFILE_POINTS,
        )?;
        let sigma = conductivity_profile(&profile, &cfg.material);

        let mut csv = String::from("z_um,n_per_cm3,sigma_S_per_m\n");
        for ((&z, &n), &s) in profile
            .depths()
            .iter()
            .zip(profile.densities())
            .zip(sigma.sigma())
        {
            // Densities convert from 1/m^3 to the conventional 1/cm^3.
            csv.push_str(&format!("{:.6},{:.6e},{:.6e}\n", z * 1e6, n * 1e-6, s));
        }
        let path = write_artifact(&out_dir, &format!("profile_{}.csv", power_stem(power)), &csv)?;
        outcome.line(format!(
            "power {:.3} mW: surface n {:.6e} per cm^3, wrote {}",
            power * 1e3,
            profile.densities()[0] * 1e-6,
            path.display()
        ));
        outcome.artifacts_written.push(path);
    }
    Ok(outcome)
}
