//! Lumped equivalent circuit the chiplet presents across the microstrip gap.
//!
//! The dark chiplet is a bulk resistor in parallel with the parasitic
//! capacitance between its gold traces; under illumination the resistor
//! drops by orders of magnitude and the capacitance becomes negligible.
//! Both states share one series R||C topology so the response is continuous
//! in laser power.

use num_complex::Complex64;

use crate::carrier::{
    carrier_profile, conductivity_profile, ConductivityProfile, LaserExcitation, SiliconMaterial,
};
use crate::constants::VACUUM_PERMITTIVITY;
use crate::elliptic::{complete_elliptic_k, complete_elliptic_k_complement};
use crate::error::{Error, Result};

/// Depth-grid resolution used when forward-modeling the switch element.
/// 0.5 um spacing on the 200 um reference wafer; trapezoid error on the
/// default profile is below 1e-4 relative.
pub const PROFILE_POINTS: usize = 401;

/// Chiplet dimensions and contact parasitics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChipletGeometry {
    /// Gap in the gold plating that the plasma bridges [m].
    pub gap_length: f64,
    /// Chiplet width transverse to the signal path [m].
    pub width: f64,
    /// Wafer thickness [m].
    pub thickness: f64,
    /// Chiplet length along the signal path [m]; sets the trace overlap
    /// entering the gap-capacitance estimate.
    pub length: f64,
    /// Relative permittivity of the silicon under the traces.
    pub silicon_epsilon: f64,
    /// Lumped contact resistance per side [ohm].
    pub contact_resistance: f64,
    /// When set, bypasses the coplanar-strip capacitance estimate [F].
    pub gap_capacitance_override: Option<f64>,
}

impl ChipletGeometry {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("gap length", self.gap_length),
            ("width", self.width),
            ("thickness", self.thickness),
            ("length", self.length),
        ];
        for (name, value) in positives {
            if !(value > 0.0) {
                return Err(Error::invalid(format!("chiplet {name} {value} must be > 0")));
            }
        }
        if !(self.length > self.gap_length) {
            return Err(Error::invalid(format!(
                "chiplet length {} must exceed gap length {}",
                self.length, self.gap_length
            )));
        }
        if !(self.silicon_epsilon > 1.0) {
            return Err(Error::invalid(format!(
                "silicon permittivity {} must be > 1",
                self.silicon_epsilon
            )));
        }
        if !(self.contact_resistance >= 0.0) {
            return Err(Error::invalid(format!(
                "contact resistance {} must be >= 0",
                self.contact_resistance
            )));
        }
        if let Some(c) = self.gap_capacitance_override {
            if !(c > 0.0) {
                return Err(Error::invalid(format!(
                    "capacitance override {c} must be > 0"
                )));
            }
        }
        Ok(())
    }
}

/// Where a circuit's element values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Predicted from carrier physics and geometry.
    ForwardModeled,
    /// Extracted from S-parameter data.
    Fitted,
}

/// Series element topology; the capacitance exists only in the R||C form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Topology {
    SeriesR { resistance: f64 },
    SeriesRparC { resistance: f64, capacitance: f64 },
}

/// Lumped series element bridging the line gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentCircuit {
    pub topology: Topology,
    pub provenance: Provenance,
}

impl EquivalentCircuit {
    /// Pure series resistor. Resistance may be zero (ideal through), never
    /// negative.
    pub fn series_r(resistance: f64, provenance: Provenance) -> Result<Self> {
        if !(resistance >= 0.0) {
            return Err(Error::invalid(format!("resistance {resistance} must be >= 0")));
        }
        Ok(Self {
            topology: Topology::SeriesR { resistance },
            provenance,
        })
    }

    /// Series resistor in parallel with a capacitor.
    pub fn series_r_par_c(resistance: f64, capacitance: f64, provenance: Provenance) -> Result<Self> {
        if !(resistance >= 0.0) {
            return Err(Error::invalid(format!("resistance {resistance} must be >= 0")));
        }
        if !(capacitance > 0.0) {
            return Err(Error::invalid(format!("capacitance {capacitance} must be > 0")));
        }
        Ok(Self {
            topology: Topology::SeriesRparC {
                resistance,
                capacitance,
            },
            provenance,
        })
    }

    pub fn resistance(&self) -> f64 {
        match self.topology {
            Topology::SeriesR { resistance } => resistance,
            Topology::SeriesRparC { resistance, .. } => resistance,
        }
    }

    pub fn capacitance(&self) -> Option<f64> {
        match self.topology {
            Topology::SeriesR { .. } => None,
            Topology::SeriesRparC { capacitance, .. } => Some(capacitance),
        }
    }

    /// Series impedance at frequency `f` [ohm].
    ///
    /// `SeriesR` is flat; `SeriesRparC` is `R / (1 + j 2 pi f R C)`.
    pub fn impedance(&self, frequency: f64) -> Complex64 {
        match self.topology {
            Topology::SeriesR { resistance } => Complex64::new(resistance, 0.0),
            Topology::SeriesRparC {
                resistance,
                capacitance,
            } => {
                let omega = 2.0 * std::f64::consts::PI * frequency;
                Complex64::new(resistance, 0.0)
                    / Complex64::new(1.0, omega * resistance * capacitance)
            }
        }
    }
}

/// Depth integral of the conductivity profile over `[0, thickness]` by the
/// trapezoidal rule [S].
pub fn sheet_conductance(profile: &ConductivityProfile, thickness: f64) -> Result<f64> {
    let depths = profile.depths();
    if depths.len() < 2 {
        return Err(Error::invalid("conductivity profile needs >= 2 points".to_string()));
    }
    let start = depths[0];
    let end = *depths.last().unwrap();
    let span_tol = 1e-9 * thickness;
    if start.abs() > span_tol || (end - thickness).abs() > span_tol {
        return Err(Error::GridMismatch {
            grid_start: start,
            grid_end: end,
            thickness,
        });
    }
    let sigma = profile.sigma();
    let mut integral = 0.0;
    for i in 1..depths.len() {
        integral += 0.5 * (sigma[i] + sigma[i - 1]) * (depths[i] - depths[i - 1]);
    }
    Ok(integral)
}

/// Lateral resistance across the gold gap plus both contacts,
/// `R = g / (w G_s) + 2 R_c` [ohm].
pub fn gap_resistance(chiplet: &ChipletGeometry, sheet: f64) -> Result<f64> {
    chiplet.validate()?;
    if !(sheet > 0.0) {
        return Err(Error::invalid(format!("sheet conductance {sheet} must be > 0")));
    }
    Ok(chiplet.gap_length / (chiplet.width * sheet) + 2.0 * chiplet.contact_resistance)
}

/// Parasitic capacitance between the gold traces [F].
///
/// Uses the coplanar-strip estimate
/// `C = eps0 (eps_r + 1)/2 * w * K(k') / K(k)` with modulus
/// `k = g / (g + 2 s)` and trace overlap `s` equal to half the chiplet
/// length minus half the gap. An explicit override wins when present.
pub fn off_capacitance(chiplet: &ChipletGeometry) -> Result<f64> {
    chiplet.validate()?;
    if let Some(c) = chiplet.gap_capacitance_override {
        return Ok(c);
    }
    let g = chiplet.gap_length;
    let s = 0.5 * chiplet.length - 0.5 * g;
    let k = g / (g + 2.0 * s);
    let ratio = complete_elliptic_k_complement(k) / complete_elliptic_k(k);
    Ok(VACUUM_PERMITTIVITY * 0.5 * (chiplet.silicon_epsilon + 1.0) * chiplet.width * ratio)
}

/// Forward-models the series element for the given drive.
///
/// The resistance comes from the illuminated conductivity profile, the
/// capacitance from the trace geometry; the topology is always R||C so the
/// ON state is simply the limit where the resistor shorts out the capacitor.
pub fn switch_element(
    chiplet: &ChipletGeometry,
    laser: &LaserExcitation,
    material: &SiliconMaterial,
) -> Result<EquivalentCircuit> {
    chiplet.validate()?;
    let profile = carrier_profile(laser, material, chiplet.thickness, PROFILE_POINTS)?;
    let sigma = conductivity_profile(&profile, material);
    let sheet = sheet_conductance(&sigma, chiplet.thickness)?;
    let resistance = gap_resistance(chiplet, sheet)?;
    let capacitance = off_capacitance(chiplet)?;
    EquivalentCircuit::series_r_par_c(resistance, capacitance, Provenance::ForwardModeled)
}
