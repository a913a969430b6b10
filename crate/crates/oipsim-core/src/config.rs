//! Run configuration: a JSON document with optional unit-suffixed string
//! values ("30 mil", "3000 ohm·cm"), resolved to SI on load.
//!
//! Every physics parameter has a default matching the reference device, so
//! a minimal config only names the laser drive. Unknown keys anywhere in
//! the document are hard errors — a typo in a physics parameter must never
//! silently fall back to a default.

use std::path::PathBuf;

use serde_json::{Map, Value};

use crate::carrier::{LaserExcitation, SiliconMaterial};
use crate::device::ChipletGeometry;
use crate::error::{Error, Result};
use crate::microstrip::{microstrip_synthesize, MicrostripLine};
use crate::touchstone::TouchstoneFormat;

// Laser defaults.
const DEFAULT_SPOT_DIAMETER: f64 = 100e-6;
const DEFAULT_COUPLING: f64 = 1.0;

// Material defaults: high-resistivity float-zone silicon chiplet.
const DEFAULT_QUANTUM_EFFICIENCY: f64 = 0.9;
const DEFAULT_ABSORPTION: f64 = 3.3e4;
const DEFAULT_LIFETIME: f64 = 25e-6;
const DEFAULT_DIFFUSION_LENGTH: f64 = 212e-6;
const DEFAULT_SURFACE_VELOCITY: f64 = 1.0;
const DEFAULT_REFLECTANCE: f64 = 0.3;
const DEFAULT_ELECTRON_MOBILITY: f64 = 0.135;
const DEFAULT_HOLE_MOBILITY: f64 = 0.048;
const DEFAULT_DARK_RESISTIVITY: f64 = 30.0;

// Chiplet defaults.
const DEFAULT_GAP_LENGTH: f64 = 75e-6;
const DEFAULT_CHIP_WIDTH: f64 = 500e-6;
const DEFAULT_CHIP_THICKNESS: f64 = 200e-6;
const DEFAULT_CHIP_LENGTH: f64 = 3.075e-3;
const DEFAULT_SILICON_EPSILON: f64 = 11.7;
const DEFAULT_CONTACT_RESISTANCE: f64 = 0.0;

// Board defaults: ceramic laminate, 30 mil, half-ounce-plus copper.
const DEFAULT_BOARD_EPSILON: f64 = 3.45;
const DEFAULT_BOARD_HEIGHT: f64 = 762e-6;
const DEFAULT_COPPER_THICKNESS: f64 = 17.5e-6;
const DEFAULT_LINE_LENGTH: f64 = 15e-3;
const DEFAULT_TARGET_IMPEDANCE: f64 = 50.0;
const DEFAULT_LOSS_TANGENT: f64 = 0.002;
const DEFAULT_CONDUCTOR_CONDUCTIVITY: f64 = 5.8e7;

// Sweep defaults.
const DEFAULT_SWEEP_START: f64 = 1e9;
const DEFAULT_SWEEP_STOP: f64 = 4e9;
const DEFAULT_SWEEP_POINTS: usize = 61;

/// Fully resolved run configuration, SI units throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Laser powers to evaluate [W]; distinct, in document order.
    pub powers: Vec<f64>,
    /// Optical drive with `power` left at 0; commands select a power via
    /// [`LaserExcitation::at_power`].
    pub laser: LaserExcitation,
    pub material: SiliconMaterial,
    pub chiplet: ChipletGeometry,
    pub board: BoardConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

/// Feed-line board stack; one identical line on each side of the chiplet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoardConfig {
    pub substrate_epsilon: f64,
    pub substrate_height: f64,
    /// Explicit trace width; when absent the width is synthesized for
    /// `target_impedance`.
    pub trace_width: Option<f64>,
    pub copper_thickness: f64,
    /// Length of each feed line [m].
    pub line_length: f64,
    pub target_impedance: f64,
    pub include_losses: bool,
    pub loss_tangent: f64,
    pub conductor_conductivity: f64,
}

impl BoardConfig {
    /// Builds one feed line, synthesizing the width when not pinned.
    pub fn feed_line(&self) -> Result<MicrostripLine> {
        let trace_width = match self.trace_width {
            Some(w) => w,
            None => microstrip_synthesize(
                self.substrate_epsilon,
                self.substrate_height,
                self.target_impedance,
            )?,
        };
        let line = MicrostripLine {
            substrate_epsilon: self.substrate_epsilon,
            substrate_height: self.substrate_height,
            trace_width,
            copper_thickness: self.copper_thickness,
            physical_length: self.line_length,
            loss_tangent: self.loss_tangent,
            conductor_conductivity: self.conductor_conductivity,
            include_losses: self.include_losses,
        };
        line.validate()?;
        Ok(line)
    }
}

/// Uniform frequency grid settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepConfig {
    /// Inclusive uniform grid; the last point is exactly `stop`.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

/// Where and how artifacts are written.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub touchstone_format: TouchstoneFormat,
}

/// Physical dimension a config value is checked against; selects which
/// unit suffixes are legal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Length,
    Power,
    Frequency,
    Time,
    Velocity,
    InverseLength,
    Resistivity,
    Resistance,
    Capacitance,
    Conductivity,
    Mobility,
    Dimensionless,
}

/// Exact conversion factors to SI; matched case-sensitively.
fn unit_factor(unit: &str, quantity: Quantity) -> Option<f64> {
    let table: &[(&str, f64)] = match quantity {
        Quantity::Length => &[
            ("m", 1.0),
            ("cm", 1e-2),
            ("mm", 1e-3),
            ("um", 1e-6),
            ("nm", 1e-9),
            ("mil", 25.4e-6),
        ],
        Quantity::Power => &[("W", 1.0), ("mW", 1e-3), ("uW", 1e-6), ("kW", 1e3)],
        Quantity::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
        Quantity::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)],
        Quantity::Velocity => &[("m/s", 1.0), ("cm/s", 1e-2)],
        Quantity::InverseLength => &[("1/m", 1.0), ("1/cm", 1e2), ("1/um", 1e6)],
        Quantity::Resistivity => &[
            ("ohm·m", 1.0),
            ("ohm.m", 1.0),
            ("ohm·cm", 1e-2),
            ("ohm.cm", 1e-2),
        ],
        Quantity::Resistance => &[("ohm", 1.0), ("mohm", 1e-3), ("kohm", 1e3), ("Mohm", 1e6)],
        Quantity::Capacitance => &[("F", 1.0), ("nF", 1e-9), ("pF", 1e-12), ("fF", 1e-15)],
        Quantity::Conductivity => &[("S/m", 1.0), ("MS/m", 1e6)],
        Quantity::Mobility => &[("m^2/Vs", 1.0), ("cm^2/Vs", 1e-4)],
        Quantity::Dimensionless => &[],
    };
    table.iter().find(|(u, _)| *u == unit).map(|&(_, f)| f)
}

fn scalar(value: &Value, quantity: Quantity, path: &str) -> Result<f64> {
    match value {
        Value::Number(n) => {
            let v = n
                .as_f64()
                .ok_or_else(|| Error::config(path, "number out of range"))?;
            if !v.is_finite() {
                return Err(Error::config(path, "number must be finite"));
            }
            Ok(v)
        }
        Value::String(s) => {
            let s = s.trim();
            // Longest numeric prefix, remainder is the unit suffix.
            let mut split = None;
            for i in (1..=s.len()).rev() {
                if !s.is_char_boundary(i) {
                    continue;
                }
                if let Ok(v) = s[..i].parse::<f64>() {
                    split = Some((v, s[i..].trim()));
                    break;
                }
            }
            let (number, unit) = split
                .ok_or_else(|| Error::config(path, format!("cannot parse '{s}' as a number")))?;
            if !number.is_finite() {
                return Err(Error::config(path, "number must be finite"));
            }
            if unit.is_empty() {
                return Ok(number);
            }
            let factor = unit_factor(unit, quantity).ok_or_else(|| {
                Error::config(path, format!("unknown unit '{unit}' for this quantity"))
            })?;
            Ok(number * factor)
        }
        other => Err(Error::config(
            path,
            format!("expected a number or 'value unit' string, found {other}"),
        )),
    }
}

fn boolean(value: &Value, path: &str) -> Result<bool> {
    value
        .as_bool()
        .ok_or_else(|| Error::config(path, "expected true or false"))
}

fn integer(value: &Value, path: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::config(path, "expected a non-negative integer"))
}

fn text(value: &Value, path: &str) -> Result<String> {
    value
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| Error::config(path, "expected a string"))
}

/// One object level of the document; keys are consumed as they are read
/// and leftovers are reported as unknown.
struct Section {
    path: String,
    map: Map<String, Value>,
}

impl Section {
    fn from_value(value: Value, path: &str) -> Result<Self> {
        match value {
            Value::Object(map) => Ok(Self {
                path: path.to_string(),
                map,
            }),
            other => Err(Error::config(path, format!("expected an object, found {other}"))),
        }
    }

    fn empty(path: &str) -> Self {
        Self {
            path: path.to_string(),
            map: Map::new(),
        }
    }

    fn key_path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{}", self.path, key)
        }
    }

    fn take(&mut self, key: &str) -> Option<(Value, String)> {
        self.map.remove(key).map(|v| (v, self.key_path(key)))
    }

    fn scalar_or(&mut self, key: &str, quantity: Quantity, default: f64) -> Result<f64> {
        match self.take(key) {
            Some((value, path)) => scalar(&value, quantity, &path),
            None => Ok(default),
        }
    }

    fn required(&mut self, key: &str) -> Result<(Value, String)> {
        let path = self.key_path(key);
        self.take(key)
            .ok_or_else(|| Error::config(&path, "missing required key"))
    }

    fn deny_unknown(self) -> Result<()> {
        if let Some(key) = self.map.keys().next() {
            let path = self.key_path(key);
            return Err(Error::config(path, "unknown key"));
        }
        Ok(())
    }
}

/// Parses a length given as bare metres or a `"value unit"` string
/// ("30 mil", "762 um", ...), using the configuration unit table.
pub fn parse_length(text: &str) -> Result<f64> {
    scalar(&Value::String(text.to_string()), Quantity::Length, "length")
}

/// Parses a resistance given as bare ohms or a `"value unit"` string
/// ("50 ohm", "2.2 kohm", ...), using the configuration unit table.
pub fn parse_resistance(text: &str) -> Result<f64> {
    scalar(
        &Value::String(text.to_string()),
        Quantity::Resistance,
        "resistance",
    )
}

/// Parses and resolves a configuration document.
pub fn load_config(document: &str) -> Result<RunConfig> {
    let root_value: Value = serde_json::from_str(document)
        .map_err(|e| Error::config("<document>", format!("invalid JSON: {e}")))?;
    let mut root = Section::from_value(root_value, "")?;

    let take_section = |root: &mut Section, name: &str| -> Result<Section> {
        match root.take(name) {
            Some((value, path)) => Section::from_value(value, &path),
            None => Ok(Section::empty(name)),
        }
    };

    // Laser block is the only required one: it has no sensible default.
    let (laser_value, laser_path) = root.required("laser")?;
    let mut laser_section = Section::from_value(laser_value, &laser_path)?;
    let (powers, laser) = resolve_laser(&mut laser_section)?;
    laser_section.deny_unknown()?;

    let mut material_section = take_section(&mut root, "material")?;
    let material = resolve_material(&mut material_section)?;
    material_section.deny_unknown()?;

    let mut chiplet_section = take_section(&mut root, "chiplet")?;
    let chiplet = resolve_chiplet(&mut chiplet_section)?;
    chiplet_section.deny_unknown()?;

    let mut board_section = take_section(&mut root, "board")?;
    let board = resolve_board(&mut board_section)?;
    board_section.deny_unknown()?;

    let mut sweep_section = take_section(&mut root, "sweep")?;
    let sweep = resolve_sweep(&mut sweep_section)?;
    sweep_section.deny_unknown()?;

    let mut output_section = take_section(&mut root, "output")?;
    let output = resolve_output(&mut output_section)?;
    output_section.deny_unknown()?;

    root.deny_unknown()?;

    // Surface semantic errors (bad dimensions, unsynthesizable board) at
    // load time rather than mid-run.
    material
        .validate()
        .map_err(|e| Error::config("material", e.to_string()))?;
    chiplet
        .validate()
        .map_err(|e| Error::config("chiplet", e.to_string()))?;
    board
        .feed_line()
        .map_err(|e| Error::config("board", e.to_string()))?;

    Ok(RunConfig {
        powers,
        laser,
        material,
        chiplet,
        board,
        sweep,
        output,
    })
}

fn resolve_laser(section: &mut Section) -> Result<(Vec<f64>, LaserExcitation)> {
    let (wavelength_value, wavelength_path) = section.required("wavelength")?;
    let wavelength = scalar(&wavelength_value, Quantity::Length, &wavelength_path)?;

    let powers_entry = section.take("powers");
    let range_entry = section.take("power_range");
    let powers = match (powers_entry, range_entry) {
        (Some(_), Some((_, path))) => {
            return Err(Error::config(
                path,
                "give either 'powers' or 'power_range', not both",
            ));
        }
        (Some((value, path)), None) => {
            let list = value
                .as_array()
                .ok_or_else(|| Error::config(&path, "expected an array of powers"))?;
            if list.is_empty() {
                return Err(Error::config(&path, "power list is empty"));
            }
            list.iter()
                .enumerate()
                .map(|(i, v)| scalar(v, Quantity::Power, &format!("{path}[{i}]")))
                .collect::<Result<Vec<f64>>>()?
        }
        (None, Some((value, path))) => {
            let mut range = Section::from_value(value, &path)?;
            let (start_v, start_p) = range.required("start")?;
            let start = scalar(&start_v, Quantity::Power, &start_p)?;
            let (stop_v, stop_p) = range.required("stop")?;
            let stop = scalar(&stop_v, Quantity::Power, &stop_p)?;
            let (points_v, points_p) = range.required("points")?;
            let points = integer(&points_v, &points_p)?;
            range.deny_unknown()?;
            if points < 2 {
                return Err(Error::config(points_p, "power range needs >= 2 points"));
            }
            if !(stop > start) {
                return Err(Error::config(stop_p, "power range stop must exceed start"));
            }
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { stop } else { start + step * i as f64 })
                .collect()
        }
        (None, None) => {
            let path = section.key_path("powers");
            return Err(Error::config(path, "missing required key"));
        }
    };
    for (i, &p) in powers.iter().enumerate() {
        if !(p >= 0.0) {
            return Err(Error::config(
                format!("{}[{}]", section.key_path("powers"), i),
                format!("power {p} W must be >= 0"),
            ));
        }
    }
    let mut sorted = powers.clone();
    sorted.sort_by(f64::total_cmp);
    // Powers that agree to within float noise would map to the same artifact
    // name downstream, so treat them as duplicates rather than comparing
    // bitwise (e.g. "175 mW" and 0.175 differ only in the last ulp).
    if sorted
        .windows(2)
        .any(|w| (w[1] - w[0]).abs() <= 1e-9 * w[1].abs())
    {
        return Err(Error::config(
            section.key_path("powers"),
            "duplicate power values",
        ));
    }

    let spot_diameter =
        section.scalar_or("spot_diameter", Quantity::Length, DEFAULT_SPOT_DIAMETER)?;
    if !(spot_diameter > 0.0) {
        return Err(Error::config(
            section.key_path("spot_diameter"),
            format!("spot diameter {spot_diameter} m must be > 0"),
        ));
    }
    let coupling =
        section.scalar_or("coupling_efficiency", Quantity::Dimensionless, DEFAULT_COUPLING)?;

    let laser = LaserExcitation {
        power: 0.0,
        wavelength,
        spot_area: std::f64::consts::PI * (spot_diameter / 2.0) * (spot_diameter / 2.0),
        coupling_efficiency: coupling,
    };
    laser
        .validate()
        .map_err(|e| Error::config(&section.path, e.to_string()))?;
    Ok((powers, laser))
}

fn resolve_material(section: &mut Section) -> Result<SiliconMaterial> {
    Ok(SiliconMaterial {
        quantum_efficiency: section.scalar_or(
            "quantum_efficiency",
            Quantity::Dimensionless,
            DEFAULT_QUANTUM_EFFICIENCY,
        )?,
        absorption_coefficient: section.scalar_or(
            "absorption_coefficient",
            Quantity::InverseLength,
            DEFAULT_ABSORPTION,
        )?,
        carrier_lifetime: section.scalar_or("carrier_lifetime", Quantity::Time, DEFAULT_LIFETIME)?,
        diffusion_length: section.scalar_or(
            "diffusion_length",
            Quantity::Length,
            DEFAULT_DIFFUSION_LENGTH,
        )?,
        surface_velocity: section.scalar_or(
            "surface_velocity",
            Quantity::Velocity,
            DEFAULT_SURFACE_VELOCITY,
        )?,
        surface_reflectance: section.scalar_or(
            "surface_reflectance",
            Quantity::Dimensionless,
            DEFAULT_REFLECTANCE,
        )?,
        electron_mobility: section.scalar_or(
            "electron_mobility",
            Quantity::Mobility,
            DEFAULT_ELECTRON_MOBILITY,
        )?,
        hole_mobility: section.scalar_or("hole_mobility", Quantity::Mobility, DEFAULT_HOLE_MOBILITY)?,
        dark_resistivity: section.scalar_or(
            "dark_resistivity",
            Quantity::Resistivity,
            DEFAULT_DARK_RESISTIVITY,
        )?,
    })
}

fn resolve_chiplet(section: &mut Section) -> Result<ChipletGeometry> {
    let gap_capacitance_override = match section.take("gap_capacitance") {
        Some((value, path)) => Some(scalar(&value, Quantity::Capacitance, &path)?),
        None => None,
    };
    Ok(ChipletGeometry {
        gap_length: section.scalar_or("gap_length", Quantity::Length, DEFAULT_GAP_LENGTH)?,
        width: section.scalar_or("width", Quantity::Length, DEFAULT_CHIP_WIDTH)?,
        thickness: section.scalar_or("thickness", Quantity::Length, DEFAULT_CHIP_THICKNESS)?,
        length: section.scalar_or("length", Quantity::Length, DEFAULT_CHIP_LENGTH)?,
        silicon_epsilon: section.scalar_or(
            "silicon_epsilon",
            Quantity::Dimensionless,
            DEFAULT_SILICON_EPSILON,
        )?,
        contact_resistance: section.scalar_or(
            "contact_resistance",
            Quantity::Resistance,
            DEFAULT_CONTACT_RESISTANCE,
        )?,
        gap_capacitance_override,
    })
}

fn resolve_board(section: &mut Section) -> Result<BoardConfig> {
    let trace_width = match section.take("trace_width") {
        Some((value, path)) => Some(scalar(&value, Quantity::Length, &path)?),
        None => None,
    };
    let include_losses = match section.take("include_losses") {
        Some((value, path)) => boolean(&value, &path)?,
        None => false,
    };
    Ok(BoardConfig {
        substrate_epsilon: section.scalar_or(
            "substrate_epsilon",
            Quantity::Dimensionless,
            DEFAULT_BOARD_EPSILON,
        )?,
        substrate_height: section.scalar_or(
            "substrate_height",
            Quantity::Length,
            DEFAULT_BOARD_HEIGHT,
        )?,
        trace_width,
        copper_thickness: section.scalar_or(
            "copper_thickness",
            Quantity::Length,
            DEFAULT_COPPER_THICKNESS,
        )?,
        line_length: section.scalar_or("line_length", Quantity::Length, DEFAULT_LINE_LENGTH)?,
        target_impedance: section.scalar_or(
            "target_impedance",
            Quantity::Resistance,
            DEFAULT_TARGET_IMPEDANCE,
        )?,
        include_losses,
        loss_tangent: section.scalar_or("loss_tangent", Quantity::Dimensionless, DEFAULT_LOSS_TANGENT)?,
        conductor_conductivity: section.scalar_or(
            "conductor_conductivity",
            Quantity::Conductivity,
            DEFAULT_CONDUCTOR_CONDUCTIVITY,
        )?,
    })
}

fn resolve_sweep(section: &mut Section) -> Result<SweepConfig> {
    let start = section.scalar_or("start", Quantity::Frequency, DEFAULT_SWEEP_START)?;
    let stop = section.scalar_or("stop", Quantity::Frequency, DEFAULT_SWEEP_STOP)?;
    let points = match section.take("points") {
        Some((value, path)) => integer(&value, &path)?,
        None => DEFAULT_SWEEP_POINTS,
    };
    if !(start > 0.0) {
        return Err(Error::config(
            section.key_path("start"),
            format!("sweep start {start} Hz must be > 0"),
        ));
    }
    if !(stop > start) {
        return Err(Error::config(
            section.key_path("stop"),
            format!("sweep stop {stop} Hz must exceed start {start} Hz"),
        ));
    }
    if points < 2 {
        return Err(Error::config(
            section.key_path("points"),
            format!("sweep needs >= 2 points, got {points}"),
        ));
    }
    Ok(SweepConfig { start, stop, points })
}

fn resolve_output(section: &mut Section) -> Result<OutputConfig> {
    let directory = match section.take("directory") {
        Some((value, path)) => PathBuf::from(text(&value, &path)?),
        None => PathBuf::from("out"),
    };
    let touchstone_format = match section.take("touchstone_format") {
        Some((value, path)) => {
            let token = text(&value, &path)?;
            match token.to_ascii_uppercase().as_str() {
                "RI" => TouchstoneFormat::Ri,
                "MA" => TouchstoneFormat::Ma,
                "DB" => TouchstoneFormat::Db,
                other => {
                    return Err(Error::config(
                        path,
                        format!("unknown format '{other}'; use RI, MA, or DB"),
                    ));
                }
            }
        }
        None => TouchstoneFormat::Ma,
    };
    Ok(OutputConfig {
        directory,
        touchstone_format,
    })
}
