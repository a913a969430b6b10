//! Inverse problems: extracting equivalent circuits from swept S-parameter
//! data and calibrating the optical coupling against a measured ON-state
//! resistance.

use num_complex::Complex64;

use crate::carrier::{LaserExcitation, SiliconMaterial};
use crate::device::{switch_element, ChipletGeometry, EquivalentCircuit, Provenance};
use crate::error::{Error, Result};
use crate::network::TwoPortNetwork;
use crate::simplex::{minimize, SimplexOptions};

/// Default iteration cap for the simplex descent.
pub const MAX_FIT_ITERATIONS: usize = 400;

/// Smallest capacitance the extractor will report [F]; flat data pins the
/// capacitance here because it carries no frequency information.
const CAPACITANCE_FLOOR: f64 = 1e-18;

/// Largest capacitance considered during initialization [F].
const CAPACITANCE_CEIL: f64 = 1e-9;

/// Resistance clamp for the data-driven initial guess [ohm].
const RESISTANCE_INIT_RANGE: (f64, f64) = (1e-3, 1e7);

/// Tolerance above unit magnitude before ON-state data is rejected as
/// non-passive; covers representation rounding in measured files.
const PASSIVITY_SLACK: f64 = 1e-9;

/// Bisection depth for coupling calibration.
const MAX_CALIBRATION_ITERATIONS: usize = 200;

/// Relative bracket width at which coupling bisection stops.
const CALIBRATION_TOLERANCE: f64 = 1e-9;

/// Which residual the OFF-state extractor minimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMode {
    /// Complex error on both s21 and s11; use when phase is trustworthy.
    Complex,
    /// Error on |s21| only; use for magnitude-only published data.
    MagnitudeS21,
}

/// Outcome of a circuit extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Extracted element, provenance [`Provenance::Fitted`].
    pub circuit: EquivalentCircuit,
    /// Root-mean-square residual of the minimized error terms.
    pub residual_rms: f64,
    /// Simplex iterations spent (0 for closed-form extractions).
    pub iterations: usize,
    /// False when the iteration cap was hit; the result is best-so-far.
    pub converged: bool,
    /// Set when the data constrained the model only partially.
    pub note: Option<String>,
}

/// Series R||C seen from ports at `z0`: transmission and reflection.
fn series_element_s(z: Complex64, z0: f64) -> (Complex64, Complex64) {
    let den = 2.0 * z0 + z;
    (2.0 * z0 / den, z / den)
}

fn rc_impedance(r: f64, c: f64, f: f64) -> Complex64 {
    let omega = 2.0 * std::f64::consts::PI * f;
    Complex64::new(r, 0.0) / Complex64::new(1.0, omega * r * c)
}

/// Closed-form series resistance from a transmission magnitude,
/// `R = 2 Z0 (1/|s21| - 1)`.
fn resistance_from_magnitude(mag: f64, z0: f64) -> f64 {
    (2.0 * z0 * (1.0 / mag - 1.0)).max(0.0)
}

/// Extracts a series R||C from swept two-port data by simplex descent in
/// (ln R, ln C). Needs at least two frequency points; frequency-flat data
/// takes a closed-form path that reports the capacitance at the floor with
/// an explanatory note. A hit iteration cap is reported through
/// `converged = false`, not an error.
pub fn fit_off_model(data: &TwoPortNetwork, mode: FitMode) -> Result<FitResult> {
    fit_off_model_with(data, mode, MAX_FIT_ITERATIONS)
}

/// [`fit_off_model`] with an explicit iteration cap.
pub fn fit_off_model_with(
    data: &TwoPortNetwork,
    mode: FitMode,
    max_iterations: usize,
) -> Result<FitResult> {
    if data.len() < 2 {
        return Err(Error::InsufficientData {
            got: data.len(),
            need: 2,
        });
    }
    let z0 = data.reference_impedance();

    let first = data.points()[0];
    let flat = data.points().iter().all(|p| match mode {
        FitMode::Complex => p.s21 == first.s21 && p.s11 == first.s11,
        FitMode::MagnitudeS21 => p.s21.norm() == first.s21.norm(),
    });
    if flat {
        let resistance = resistance_from_magnitude(first.s21.norm().min(1.0), z0);
        let circuit =
            EquivalentCircuit::series_r_par_c(resistance, CAPACITANCE_FLOOR, Provenance::Fitted)?;
        return Ok(FitResult {
            residual_rms: off_residual_rms(data, &circuit, mode),
            circuit,
            iterations: 0,
            converged: true,
            note: Some(
                "frequency-flat data cannot constrain the capacitance; reported at floor"
                    .to_string(),
            ),
        });
    }

    // Data-driven start: R from the lowest frequency (capacitor nearly
    // open), C from the highest frequency treated as a pure reactance.
    let low_mag = data.points()[0].s21.norm().min(1.0 - 1e-12);
    let r_init = resistance_from_magnitude(low_mag, z0)
        .clamp(RESISTANCE_INIT_RANGE.0, RESISTANCE_INIT_RANGE.1);
    let high = data.points()[data.len() - 1];
    let f_max = data.frequencies()[data.len() - 1];
    let high_mag = high.s21.norm().min(1.0 - 1e-12);
    let through_mag = 2.0 * z0 / high_mag;
    let reactance = (through_mag * through_mag - 4.0 * z0 * z0).max(1e-12).sqrt();
    let c_init = (1.0 / (2.0 * std::f64::consts::PI * f_max * reactance))
        .clamp(CAPACITANCE_FLOOR, CAPACITANCE_CEIL);

    let objective = |p: &[f64]| {
        let (r, c) = (p[0].exp(), p[1].exp());
        let mut total = 0.0;
        for (f, point) in data.iter() {
            let (s21, s11) = series_element_s(rc_impedance(r, c, f), z0);
            match mode {
                FitMode::Complex => {
                    total += (s21 - point.s21).norm_sqr() + (s11 - point.s11).norm_sqr();
                }
                FitMode::MagnitudeS21 => {
                    let d = s21.norm() - point.s21.norm();
                    total += d * d;
                }
            }
        }
        total
    };

    let options = SimplexOptions {
        max_iterations,
        ..SimplexOptions::default()
    };
    let outcome = minimize(objective, &[r_init.ln(), c_init.ln()], &options)?;

    let resistance = outcome.best_point[0].exp();
    let capacitance = outcome.best_point[1].exp().max(CAPACITANCE_FLOOR);
    let circuit = EquivalentCircuit::series_r_par_c(resistance, capacitance, Provenance::Fitted)?;
    Ok(FitResult {
        residual_rms: off_residual_rms(data, &circuit, mode),
        circuit,
        iterations: outcome.iterations,
        converged: outcome.converged,
        note: (!outcome.converged)
            .then(|| format!("iteration cap {max_iterations} reached; best point returned")),
    })
}

fn off_residual_rms(data: &TwoPortNetwork, circuit: &EquivalentCircuit, mode: FitMode) -> f64 {
    let z0 = data.reference_impedance();
    let mut total = 0.0;
    let mut terms = 0usize;
    for (f, point) in data.iter() {
        let (s21, s11) = series_element_s(circuit.impedance(f), z0);
        match mode {
            FitMode::Complex => {
                total += (s21 - point.s21).norm_sqr() + (s11 - point.s11).norm_sqr();
                terms += 2;
            }
            FitMode::MagnitudeS21 => {
                let d = s21.norm() - point.s21.norm();
                total += d * d;
                terms += 1;
            }
        }
    }
    (total / terms as f64).sqrt()
}

/// Extracts a flat series resistance from ON-state data via the closed form
/// `R = 2 Z0 (1/|s21| - 1)` averaged over the band. Rejects data with
/// transmission magnitude above one.
pub fn fit_on_resistance(data: &TwoPortNetwork) -> Result<FitResult> {
    if data.is_empty() {
        return Err(Error::InsufficientData { got: 0, need: 1 });
    }
    let z0 = data.reference_impedance();
    let mut sum = 0.0;
    for (f, point) in data.iter() {
        let mag = point.s21.norm();
        if mag > 1.0 + PASSIVITY_SLACK {
            return Err(Error::NonPassiveData {
                magnitude: mag,
                frequency_hz: f,
            });
        }
        if mag == 0.0 {
            return Err(Error::invalid(format!(
                "zero transmission at {f} Hz has no finite resistance"
            )));
        }
        sum += resistance_from_magnitude(mag.min(1.0), z0);
    }
    let resistance = sum / data.len() as f64;
    let circuit = EquivalentCircuit::series_r(resistance, Provenance::Fitted)?;

    let model_mag = 2.0 * z0 / (2.0 * z0 + resistance);
    let mut residual = 0.0;
    for (_, point) in data.iter() {
        let d = model_mag - point.s21.norm();
        residual += d * d;
    }
    Ok(FitResult {
        circuit,
        residual_rms: (residual / data.len() as f64).sqrt(),
        iterations: 0,
        converged: true,
        note: None,
    })
}

/// Finds the coupling efficiency in (0, 1] at which the forward model
/// reproduces `measured_r` at the laser's set power, by bisection (the
/// modeled resistance decreases monotonically with coupling). When even
/// perfect coupling leaves the model above `measured_r`, the error reports
/// the coupling that would be required.
pub fn calibrate_coupling(
    measured_r: f64,
    laser: &LaserExcitation,
    material: &SiliconMaterial,
    chiplet: &ChipletGeometry,
) -> Result<f64> {
    if !(measured_r > 0.0) {
        return Err(Error::invalid(format!(
            "measured resistance {measured_r} must be > 0"
        )));
    }
    if !(laser.power > 0.0) {
        return Err(Error::invalid(
            "coupling calibration needs a non-zero laser power".to_string(),
        ));
    }
    let resistance_at = |coupling: f64| -> Result<f64> {
        Ok(switch_element(chiplet, &laser.with_coupling(coupling), material)?.resistance())
    };

    let r_dark = switch_element(chiplet, &laser.with_coupling(1.0).at_power(0.0), material)?
        .resistance();
    if measured_r >= r_dark {
        return Err(Error::invalid(format!(
            "measured resistance {measured_r} ohm is not below the dark resistance {r_dark} ohm"
        )));
    }

    let r_full = resistance_at(1.0)?;
    if (r_full - measured_r).abs() <= 1e-9 * measured_r {
        return Ok(1.0);
    }
    if r_full > measured_r {
        // Even perfect coupling is too resistive; report what it would take.
        // Gap conductance is affine in coupling, so extrapolation is exact.
        let g_dark = 1.0 / r_dark;
        let g_unit = 1.0 / r_full - g_dark;
        let required = (1.0 / measured_r - g_dark) / g_unit;
        return Err(Error::OutOfRange {
            target_ohms: measured_r,
            required,
        });
    }

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    // Invariant: R(lo) > measured_r > R(hi); lo = 0 is the dark limit.
    for _ in 0..MAX_CALIBRATION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if resistance_at(mid)? > measured_r {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < CALIBRATION_TOLERANCE * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::NoConvergence(format!(
        "coupling bisection for {measured_r} ohm did not tighten after \
         {MAX_CALIBRATION_ITERATIONS} iterations"
    )))
}
