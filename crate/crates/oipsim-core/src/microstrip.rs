//! Quasi-static microstrip modeling: Hammerstad-Jensen impedance and
//! effective permittivity, width synthesis by bisection, and the chain
//! matrix of a finite line section with optional dielectric and conductor
//! losses.

use num_complex::Complex64;

use crate::constants::{FREE_SPACE_IMPEDANCE, SPEED_OF_LIGHT, VACUUM_PERMEABILITY};
use crate::error::{Error, Result};
use crate::network::AbcdMatrix;

/// Bisection iteration cap for width synthesis.
const MAX_SYNTH_ITERATIONS: usize = 200;

/// Relative width-bracket tolerance at which synthesis stops.
const SYNTH_TOLERANCE: f64 = 1e-12;

/// Width-to-height ratio bracket searched during synthesis; covers
/// characteristic impedances from well under 10 ohm to well over 200 ohm
/// for permittivities from 1 to beyond 10.
const U_BRACKET: (f64, f64) = (1e-3, 1e2);

/// A microstrip trace section on a grounded dielectric substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrostripLine {
    /// Substrate relative permittivity; >= 1 (exactly 1 models an air line).
    pub substrate_epsilon: f64,
    /// Substrate height [m].
    pub substrate_height: f64,
    /// Trace width [m].
    pub trace_width: f64,
    /// Conductor thickness [m]; 0 selects the thin-strip formulas.
    pub copper_thickness: f64,
    /// Section length [m]; 0 degenerates to an ideal through.
    pub physical_length: f64,
    /// Substrate loss tangent [dimensionless].
    pub loss_tangent: f64,
    /// Trace conductivity [S/m], used for skin-effect loss.
    pub conductor_conductivity: f64,
    /// When false the section propagates without attenuation regardless of
    /// the loss parameters.
    pub include_losses: bool,
}

impl MicrostripLine {
    /// Ideal (zero-loss, zero-thickness) line.
    pub fn lossless(
        substrate_epsilon: f64,
        substrate_height: f64,
        trace_width: f64,
        physical_length: f64,
    ) -> Result<Self> {
        let line = Self {
            substrate_epsilon,
            substrate_height,
            trace_width,
            copper_thickness: 0.0,
            physical_length,
            loss_tangent: 0.0,
            conductor_conductivity: 5.8e7,
            include_losses: false,
        };
        line.validate()?;
        Ok(line)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.substrate_epsilon >= 1.0) {
            return Err(Error::invalid(format!(
                "substrate permittivity {} must be >= 1",
                self.substrate_epsilon
            )));
        }
        let positives = [
            ("substrate height", self.substrate_height),
            ("trace width", self.trace_width),
            ("conductor conductivity", self.conductor_conductivity),
        ];
        for (name, value) in positives {
            if !(value > 0.0) {
                return Err(Error::invalid(format!("{name} {value} must be > 0")));
            }
        }
        let non_negatives = [
            ("copper thickness", self.copper_thickness),
            ("physical length", self.physical_length),
            ("loss tangent", self.loss_tangent),
        ];
        for (name, value) in non_negatives {
            if !(value >= 0.0) {
                return Err(Error::invalid(format!("{name} {value} must be >= 0")));
            }
        }
        Ok(())
    }

    /// Quasi-static characteristic impedance and effective permittivity.
    pub fn analyze(&self) -> Result<LineParams> {
        microstrip_analyze(self)
    }

    /// Chain matrix of the section at frequency `f`.
    pub fn abcd(&self, f: f64) -> Result<AbcdMatrix> {
        abcd_line(self, f)
    }
}

/// Quasi-static line parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineParams {
    /// Characteristic impedance [ohm].
    pub char_impedance: f64,
    /// Effective relative permittivity.
    pub eps_effective: f64,
}

/// Hammerstad-Jensen effective permittivity for width ratio `u = w/h`.
fn eps_effective_thin(u: f64, er: f64) -> f64 {
    let a = 1.0
        + ((u.powi(4) + (u / 52.0).powi(2)) / (u.powi(4) + 0.432)).ln() / 49.0
        + (1.0 + (u / 18.1).powi(3)).ln() / 18.7;
    let b = 0.564 * ((er - 0.9) / (er + 3.0)).powf(0.053);
    (er + 1.0) / 2.0 + (er - 1.0) / 2.0 * (1.0 + 10.0 / u).powf(-a * b)
}

/// Hammerstad-Jensen free-space impedance for width ratio `u = w/h`.
fn z0_air(u: f64) -> f64 {
    let f = 6.0 + (2.0 * std::f64::consts::PI - 6.0) * (-(30.666 / u).powf(0.7528)).exp();
    FREE_SPACE_IMPEDANCE / (2.0 * std::f64::consts::PI)
        * (f / u + (1.0 + (2.0 / u).powi(2)).sqrt()).ln()
}

/// Quasi-static analysis with the Wheeler-Bahl thickness correction:
/// a finite conductor thickness widens the effective strip and slightly
/// lowers the effective permittivity.
pub fn microstrip_analyze(line: &MicrostripLine) -> Result<LineParams> {
    line.validate()?;
    let er = line.substrate_epsilon;
    let h = line.substrate_height;
    let w = line.trace_width;
    let t = line.copper_thickness;

    let (u, eps_correction) = if t > 0.0 {
        let delta_w = if w / h >= 1.0 / (2.0 * std::f64::consts::PI) {
            1.25 * t / std::f64::consts::PI * (1.0 + (2.0 * h / t).ln())
        } else {
            1.25 * t / std::f64::consts::PI * (1.0 + (4.0 * std::f64::consts::PI * w / t).ln())
        };
        let u = (w + delta_w) / h;
        (u, (er - 1.0) * (t / h) / (4.6 * u.sqrt()))
    } else {
        (w / h, 0.0)
    };

    let eps_eff = eps_effective_thin(u, er) - eps_correction;
    Ok(LineParams {
        char_impedance: z0_air(u) / eps_eff.sqrt(),
        eps_effective: eps_eff,
    })
}

/// Finds the thin-strip trace width giving `target_z0` on the given
/// substrate, by bisection on `w/h` (impedance is strictly decreasing in
/// width). Target must lie in [10, 200] ohm.
pub fn microstrip_synthesize(substrate_epsilon: f64, substrate_height: f64, target_z0: f64) -> Result<f64> {
    if !(substrate_epsilon >= 1.0) {
        return Err(Error::invalid(format!(
            "substrate permittivity {substrate_epsilon} must be >= 1"
        )));
    }
    if !(substrate_height > 0.0) {
        return Err(Error::invalid(format!(
            "substrate height {substrate_height} must be > 0"
        )));
    }
    if !(10.0..=200.0).contains(&target_z0) {
        return Err(Error::invalid(format!(
            "target impedance {target_z0} ohm outside synthesizable range [10, 200]"
        )));
    }

    let z0_of = |u: f64| z0_air(u) / eps_effective_thin(u, substrate_epsilon).sqrt();
    let (mut lo, mut hi) = U_BRACKET;
    // z0 decreases with u, so the low end of the bracket must start above
    // the target and the high end below it.
    if z0_of(lo) < target_z0 || z0_of(hi) > target_z0 {
        return Err(Error::NoConvergence(format!(
            "width bracket does not enclose {target_z0} ohm"
        )));
    }
    for _ in 0..MAX_SYNTH_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if z0_of(mid) > target_z0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < SYNTH_TOLERANCE * hi {
            return Ok(0.5 * (lo + hi) * substrate_height);
        }
    }
    Err(Error::NoConvergence(format!(
        "width bisection for {target_z0} ohm did not tighten after {MAX_SYNTH_ITERATIONS} iterations"
    )))
}

/// Chain matrix of the line section at frequency `f`:
/// `[[cosh gl, Z0 sinh gl], [sinh(gl)/Z0, cosh gl]]` with
/// `g = alpha + j beta`, `beta = 2 pi f sqrt(eps_eff) / c`. The
/// attenuation combines substrate (loss-tangent) and conductor
/// (skin-effect) terms, and is zero when losses are disabled.
pub fn abcd_line(line: &MicrostripLine, f: f64) -> Result<AbcdMatrix> {
    if !(f > 0.0) {
        return Err(Error::invalid(format!("frequency {f} Hz must be > 0")));
    }
    let params = microstrip_analyze(line)?;
    let z0 = params.char_impedance;
    let eps_eff = params.eps_effective;
    let beta = 2.0 * std::f64::consts::PI * f * eps_eff.sqrt() / SPEED_OF_LIGHT;

    let alpha = if line.include_losses {
        let er = line.substrate_epsilon;
        // Dielectric term vanishes for an air line (eps_eff = er = 1).
        let alpha_d = if er > 1.0 {
            std::f64::consts::PI * f * er * (eps_eff - 1.0) * line.loss_tangent
                / (SPEED_OF_LIGHT * eps_eff.sqrt() * (er - 1.0))
        } else {
            0.0
        };
        let surface_resistance =
            (std::f64::consts::PI * f * VACUUM_PERMEABILITY / line.conductor_conductivity).sqrt();
        let alpha_c = surface_resistance / (z0 * line.trace_width);
        alpha_d + alpha_c
    } else {
        0.0
    };

    let gamma_l = Complex64::new(alpha, beta) * line.physical_length;
    let cosh = gamma_l.cosh();
    let sinh = gamma_l.sinh();
    Ok(AbcdMatrix {
        a: cosh,
        b: z0 * sinh,
        c: sinh / z0,
        d: cosh,
    })
}
