//! Photo-generated excess-carrier depth profiles and the conductivity they
//! induce in the silicon chiplet.
//!
//! The steady-state excess density under surface illumination is
//!
//! ```text
//! n(z) = eta*alpha*tau * (P*lambda / (A*h*c)) * (1-R)/(1 - alpha^2 L^2)
//!        * [ exp(-alpha z) - (alpha L^2 + vs tau)/(L + vs tau) * exp(-z/L) ]
//! ```
//!
//! with a removable singularity at `alpha*L = 1` where the bracket vanishes
//! at the same rate as the denominator.

use crate::constants::{ELEMENTARY_CHARGE, PLANCK, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Density floor below which a computed profile is treated as an error
/// rather than rounding noise [1/m^3].
const DENSITY_FLOOR: f64 = -1.0;

/// Relative width of the guarded zone around `alpha^2 L^2 = 1`.
const SINGULARITY_THRESHOLD: f64 = 1e-9;

/// Relative perturbation of the diffusion length used to evaluate the
/// removable-singularity limit from both sides.
const SINGULARITY_PERTURBATION: f64 = 1e-6;

/// Optical drive parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserExcitation {
    /// Optical output power [W].
    pub power: f64,
    /// Vacuum wavelength [m].
    pub wavelength: f64,
    /// Illuminated spot area on the exposed silicon [m^2].
    pub spot_area: f64,
    /// Fraction of emitted photons delivered to the spot, in (0, 1].
    /// Absorbs fiber dispersion and other unmodeled optical losses; set by
    /// calibration against a measured ON-state resistance.
    pub coupling_efficiency: f64,
}

impl LaserExcitation {
    pub fn validate(&self) -> Result<()> {
        if !(self.power >= 0.0) {
            return Err(Error::invalid(format!("laser power {} W must be >= 0", self.power)));
        }
        if !(self.wavelength > 0.0) {
            return Err(Error::invalid(format!(
                "wavelength {} m must be > 0",
                self.wavelength
            )));
        }
        if !(self.spot_area > 0.0) {
            return Err(Error::invalid(format!(
                "spot area {} m^2 must be > 0",
                self.spot_area
            )));
        }
        if !(self.coupling_efficiency > 0.0 && self.coupling_efficiency <= 1.0) {
            return Err(Error::invalid(format!(
                "coupling efficiency {} must lie in (0, 1]",
                self.coupling_efficiency
            )));
        }
        Ok(())
    }

    /// Same excitation at a different power.
    pub fn at_power(&self, power: f64) -> Self {
        Self { power, ..*self }
    }

    /// Same excitation with a different coupling efficiency.
    pub fn with_coupling(&self, coupling_efficiency: f64) -> Self {
        Self {
            coupling_efficiency,
            ..*self
        }
    }
}

/// Semiconductor constants and doping of the chiplet silicon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiliconMaterial {
    /// Quantum efficiency of carrier generation [dimensionless].
    pub quantum_efficiency: f64,
    /// Optical absorption coefficient [1/m].
    pub absorption_coefficient: f64,
    /// Excess-carrier lifetime [s].
    pub carrier_lifetime: f64,
    /// Diffusion length [m].
    pub diffusion_length: f64,
    /// Surface recombination velocity [m/s].
    pub surface_velocity: f64,
    /// Optical surface reflectance, in [0, 1).
    pub surface_reflectance: f64,
    /// Electron mobility [m^2/(V s)].
    pub electron_mobility: f64,
    /// Hole mobility [m^2/(V s)].
    pub hole_mobility: f64,
    /// Dark (unilluminated) bulk resistivity [ohm m].
    pub dark_resistivity: f64,
}

impl SiliconMaterial {
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("quantum efficiency", self.quantum_efficiency),
            ("absorption coefficient", self.absorption_coefficient),
            ("carrier lifetime", self.carrier_lifetime),
            ("diffusion length", self.diffusion_length),
            ("surface velocity", self.surface_velocity),
            ("electron mobility", self.electron_mobility),
            ("hole mobility", self.hole_mobility),
            ("dark resistivity", self.dark_resistivity),
        ];
        for (name, value) in positives {
            if !(value > 0.0) {
                return Err(Error::invalid(format!("{name} {value} must be > 0")));
            }
        }
        if !(0.0..1.0).contains(&self.surface_reflectance) {
            return Err(Error::invalid(format!(
                "surface reflectance {} must lie in [0, 1)",
                self.surface_reflectance
            )));
        }
        Ok(())
    }

    /// Dark conductivity, 1/rho [S/m].
    pub fn dark_conductivity(&self) -> f64 {
        1.0 / self.dark_resistivity
    }

    /// Sum of electron and hole mobilities [m^2/(V s)].
    pub fn mobility_sum(&self) -> f64 {
        self.electron_mobility + self.hole_mobility
    }
}

/// Excess-carrier density sampled on a depth grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CarrierProfile {
    depths: Vec<f64>,
    densities: Vec<f64>,
}

impl CarrierProfile {
    /// Wraps an externally computed profile (e.g. from a TCAD export).
    /// Depths must be finite, strictly increasing, and start at >= 0;
    /// densities must be finite with one sample per depth.
    pub fn new(depths: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        validate_grid(&depths, &densities, "density")?;
        Ok(Self { depths, densities })
    }

    /// Depth grid [m], strictly increasing, starting at 0.
    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    /// Densities [1/m^3], one per grid point.
    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }
}

/// Conductivity sampled on the same depth grid as the carrier profile it
/// came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConductivityProfile {
    depths: Vec<f64>,
    sigma: Vec<f64>,
}

impl ConductivityProfile {
    /// Wraps externally supplied conductivity samples. Depths must be
    /// finite, strictly increasing, and start at >= 0; samples must be
    /// finite and non-negative.
    pub fn new(depths: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        validate_grid(&depths, &sigma, "conductivity")?;
        if let Some(&bad) = sigma.iter().find(|&&s| s < 0.0) {
            return Err(Error::invalid(format!("conductivity {bad} must be >= 0")));
        }
        Ok(Self { depths, sigma })
    }

    /// Depth grid [m].
    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    /// Conductivity samples [S/m].
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }
}

fn validate_grid(depths: &[f64], samples: &[f64], kind: &str) -> Result<()> {
    if depths.len() != samples.len() {
        return Err(Error::invalid(format!(
            "{} grid has {} depths but {} samples",
            kind,
            depths.len(),
            samples.len()
        )));
    }
    if depths.is_empty() {
        return Err(Error::invalid(format!("{kind} grid is empty")));
    }
    if !(depths[0] >= 0.0) {
        return Err(Error::invalid(format!(
            "{kind} grid starts at {} m, must be >= 0",
            depths[0]
        )));
    }
    for pair in depths.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::invalid(format!(
                "{kind} grid not strictly increasing at {} m",
                pair[1]
            )));
        }
    }
    if depths.iter().chain(samples).any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{kind} grid contains non-finite values")));
    }
    Ok(())
}

/// Delivered photon rate, coupling * P * lambda / (h c) [photons/s].
pub fn photon_flux(laser: &LaserExcitation) -> f64 {
    laser.coupling_efficiency * laser.power * laser.wavelength / (PLANCK * SPEED_OF_LIGHT)
}

/// Excess-carrier density at depth `z` [1/m^3].
///
/// Near `alpha*L = 1` (relative gap below 1e-9) the removable singularity is
/// evaluated by perturbing `L` by +-1e-6 relative and averaging the two
/// limits; anywhere else the closed form is used directly. A result below
/// -1 per cubic metre is rejected as `NonPhysicalProfile`.
pub fn excess_density(laser: &LaserExcitation, material: &SiliconMaterial, z: f64) -> Result<f64> {
    laser.validate()?;
    material.validate()?;
    if !(z >= 0.0) {
        return Err(Error::invalid(format!("depth {z} m must be >= 0")));
    }
    let n = excess_density_unchecked(laser, material, z);
    if n < DENSITY_FLOOR {
        return Err(Error::NonPhysicalProfile {
            density: n,
            depth_m: z,
        });
    }
    Ok(n)
}

fn excess_density_unchecked(laser: &LaserExcitation, material: &SiliconMaterial, z: f64) -> f64 {
    let alpha = material.absorption_coefficient;
    let l = material.diffusion_length;
    let al2 = alpha * alpha * l * l;
    if (1.0 - al2).abs() < SINGULARITY_THRESHOLD * al2 {
        let lo = evaluate_closed_form(laser, material, l * (1.0 - SINGULARITY_PERTURBATION), z);
        let hi = evaluate_closed_form(laser, material, l * (1.0 + SINGULARITY_PERTURBATION), z);
        0.5 * (lo + hi)
    } else {
        evaluate_closed_form(laser, material, l, z)
    }
}

fn evaluate_closed_form(
    laser: &LaserExcitation,
    material: &SiliconMaterial,
    diffusion_length: f64,
    z: f64,
) -> f64 {
    let alpha = material.absorption_coefficient;
    let tau = material.carrier_lifetime;
    let l = diffusion_length;
    let vs = material.surface_velocity;
    let flux_density = photon_flux(laser) / laser.spot_area;
    let prefactor = material.quantum_efficiency * alpha * tau * flux_density
        * (1.0 - material.surface_reflectance)
        / (1.0 - alpha * alpha * l * l);
    let surface_coeff = (alpha * l * l + vs * tau) / (l + vs * tau);
    prefactor * ((-alpha * z).exp() - surface_coeff * (-z / l).exp())
}

/// Samples `excess_density` on a uniform grid over `[0, thickness]`.
pub fn carrier_profile(
    laser: &LaserExcitation,
    material: &SiliconMaterial,
    thickness: f64,
    n_points: usize,
) -> Result<CarrierProfile> {
    if !(thickness > 0.0) {
        return Err(Error::invalid(format!("thickness {thickness} m must be > 0")));
    }
    if n_points < 2 {
        return Err(Error::invalid(format!("grid needs >= 2 points, got {n_points}")));
    }
    laser.validate()?;
    material.validate()?;
    let step = thickness / (n_points - 1) as f64;
    let mut depths = Vec::with_capacity(n_points);
    let mut densities = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let z = if i + 1 == n_points { thickness } else { i as f64 * step };
        let n = excess_density_unchecked(laser, material, z);
        if n < DENSITY_FLOOR {
            return Err(Error::NonPhysicalProfile {
                density: n,
                depth_m: z,
            });
        }
        depths.push(z);
        densities.push(n);
    }
    Ok(CarrierProfile { depths, densities })
}

/// Maps a carrier profile to conductivity samples,
/// `sigma(z) = q (mu_n + mu_p) n(z) + 1/rho_dark`.
pub fn conductivity_profile(
    profile: &CarrierProfile,
    material: &SiliconMaterial,
) -> ConductivityProfile {
    let sigma_dark = material.dark_conductivity();
    let mobility = material.mobility_sum();
    let sigma = profile
        .densities
        .iter()
        .map(|&n| ELEMENTARY_CHARGE * mobility * n + sigma_dark)
        .collect();
    ConductivityProfile {
        depths: profile.depths.clone(),
        sigma,
    }
}
