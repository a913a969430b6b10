//! Simulation and extraction toolkit for optically-induced plasma RF
//! switches: a laser-illuminated silicon chiplet bridging a gap in a
//! microstrip line.
//!
//! The forward path predicts swept S-parameters from first principles:
//! photon flux into the silicon ([`carrier`]), the excess-carrier depth
//! profile and its conductivity, the lumped series element the chiplet
//! presents across the gap ([`device`]), and the feed-line cascade that
//! turns it into two-port data ([`network`], [`microstrip`]). The inverse
//! path ([`fit`]) extracts equivalent circuits from measured S-parameters
//! and calibrates the optical coupling from a single resistance
//! measurement. [`touchstone`], [`config`], and [`sweep`] cover the file
//! formats around both paths.

pub use num_complex::Complex64;

pub mod carrier;
pub mod config;
pub mod constants;
pub mod device;
pub mod elliptic;
pub mod error;
pub mod fit;
pub mod microstrip;
pub mod network;
pub mod simplex;
pub mod sweep;
pub mod touchstone;

pub use carrier::{
    carrier_profile, conductivity_profile, excess_density, photon_flux, CarrierProfile,
    ConductivityProfile, LaserExcitation, SiliconMaterial,
};
pub use config::{
    load_config, parse_length, parse_resistance, BoardConfig, OutputConfig, RunConfig, SweepConfig,
};
pub use device::{
    gap_resistance, off_capacitance, sheet_conductance, switch_element, ChipletGeometry,
    EquivalentCircuit, Provenance, Topology, PROFILE_POINTS,
};
pub use error::{Error, Result};
pub use fit::{
    calibrate_coupling, fit_off_model, fit_off_model_with, fit_on_resistance, FitMode, FitResult,
};
pub use microstrip::{
    abcd_line, microstrip_analyze, microstrip_synthesize, LineParams, MicrostripLine,
};
pub use network::{
    abcd_series, abcd_to_s, cascade, s_to_abcd, switch_response, AbcdMatrix, SParams,
    TwoPortNetwork, Z0_REF,
};
pub use sweep::{write_sweep_csv, SweepRow, SWEEP_CSV_HEADER};
pub use touchstone::{read_touchstone, write_touchstone, TouchstoneFormat};
