//! Physical constants, CODATA 2018 defined values.
//!
//! These are fixed rather than configurable so that identical inputs always
//! produce identical outputs.

/// Planck constant [J s].
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Speed of light in vacuum [m/s].
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Elementary charge [C].
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity [F/m].
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_8128e-12;

/// Vacuum permeability [H/m].
pub const VACUUM_PERMEABILITY: f64 = 1.256_637_062_12e-6;

/// Free-space wave impedance [ohm].
pub const FREE_SPACE_IMPEDANCE: f64 = VACUUM_PERMEABILITY * SPEED_OF_LIGHT;
