//! Touchstone v1 two-port reader/writer.
//!
//! Grammar handled: `!` comments (full-line or trailing), one `#` option
//! line (frequency unit, parameter type `S`, format, `R <z0>`), then data
//! rows of nine numbers — frequency followed by the four S-parameters in
//! v1 column order s11, s21, s12, s22. Files without an option line get
//! the v1 defaults: GHz, MA, 50 ohm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{SParams, TwoPortNetwork};

/// Pair encoding for S-parameters in a Touchstone file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TouchstoneFormat {
    /// Real and imaginary parts.
    Ri,
    /// Linear magnitude and angle in degrees.
    Ma,
    /// 20 log10 magnitude and angle in degrees.
    Db,
}

impl TouchstoneFormat {
    fn token(self) -> &'static str {
        match self {
            TouchstoneFormat::Ri => "RI",
            TouchstoneFormat::Ma => "MA",
            TouchstoneFormat::Db => "DB",
        }
    }
}

/// Magnitude floor substituted when writing a true zero in DB format,
/// where log10 would otherwise produce -inf. Reads back as 1e-30.
const DB_MAGNITUDE_FLOOR: f64 = 1e-30;

fn encode(s: Complex64, format: TouchstoneFormat) -> (f64, f64) {
    match format {
        TouchstoneFormat::Ri => (s.re, s.im),
        TouchstoneFormat::Ma => (s.norm(), s.arg().to_degrees()),
        TouchstoneFormat::Db => {
            let mag = s.norm().max(DB_MAGNITUDE_FLOOR);
            (20.0 * mag.log10(), s.arg().to_degrees())
        }
    }
}

fn decode(first: f64, second: f64, format: TouchstoneFormat) -> Complex64 {
    match format {
        TouchstoneFormat::Ri => Complex64::new(first, second),
        TouchstoneFormat::Ma => Complex64::from_polar(first, second.to_radians()),
        TouchstoneFormat::Db => {
            Complex64::from_polar(10f64.powf(first / 20.0), second.to_radians())
        }
    }
}

/// Serializes the network as a Touchstone v1 document. Frequencies are
/// always written in GHz with 13 significant digits.
pub fn write_touchstone(net: &TwoPortNetwork, format: TouchstoneFormat) -> String {
    let mut out = String::new();
    out.push_str("! two-port S-parameters, row order: f s11 s21 s12 s22\n");
    out.push_str(&format!(
        "# GHz S {} R {}\n",
        format.token(),
        net.reference_impedance()
    ));
    for (f, p) in net.iter() {
        let mut cols = vec![f / 1e9];
        for s in [p.s11, p.s21, p.s12, p.s22] {
            let (x, y) = encode(s, format);
            cols.push(x);
            cols.push(y);
        }
        let row: Vec<String> = cols.iter().map(|v| format!("{v:.12e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

struct Options {
    freq_scale: f64,
    format: TouchstoneFormat,
    reference: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            freq_scale: 1e9,
            format: TouchstoneFormat::Ma,
            reference: 50.0,
        }
    }
}

fn parse_option_line(line: &str, line_no: usize) -> Result<Options> {
    let mut opts = Options::default();
    let tokens: Vec<&str> = line[1..].split_whitespace().collect();
    let mut i = 0;
    while i < tokens.len() {
        let token = tokens[i].to_ascii_uppercase();
        match token.as_str() {
            "HZ" => opts.freq_scale = 1.0,
            "KHZ" => opts.freq_scale = 1e3,
            "MHZ" => opts.freq_scale = 1e6,
            "GHZ" => opts.freq_scale = 1e9,
            "S" => {}
            "Y" | "Z" | "H" | "G" => {
                return Err(Error::parse(
                    line_no,
                    format!("parameter type {token} not supported; only S"),
                ));
            }
            "RI" => opts.format = TouchstoneFormat::Ri,
            "MA" => opts.format = TouchstoneFormat::Ma,
            "DB" => opts.format = TouchstoneFormat::Db,
            "R" => {
                i += 1;
                let value = tokens.get(i).ok_or_else(|| {
                    Error::parse(line_no, "R must be followed by an impedance".to_string())
                })?;
                let z0: f64 = value.parse().map_err(|_| {
                    Error::parse(line_no, format!("bad reference impedance '{value}'"))
                })?;
                if !(z0 > 0.0) {
                    return Err(Error::parse(
                        line_no,
                        format!("reference impedance {z0} must be > 0"),
                    ));
                }
                opts.reference = z0;
            }
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unrecognized option token '{other}'"),
                ));
            }
        }
        i += 1;
    }
    Ok(opts)
}

/// Parses a Touchstone v1 two-port document.
pub fn read_touchstone(text: &str) -> Result<TwoPortNetwork> {
    let mut opts: Option<Options> = None;
    let mut frequencies: Vec<f64> = Vec::new();
    let mut points: Vec<SParams> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('!') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if opts.is_some() {
                return Err(Error::parse(line_no, "duplicate option line".to_string()));
            }
            if !frequencies.is_empty() {
                return Err(Error::parse(
                    line_no,
                    "option line after data rows".to_string(),
                ));
            }
            opts = Some(parse_option_line(line, line_no)?);
            continue;
        }

        let current = opts.get_or_insert_with(Options::default);
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 9 {
            return Err(Error::parse(
                line_no,
                format!("expected 9 columns, found {}", fields.len()),
            ));
        }
        let mut values = [0.0f64; 9];
        for (k, field) in fields.iter().enumerate() {
            values[k] = field
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad number '{field}'")))?;
        }
        let f_hz = values[0] * current.freq_scale;
        if !(f_hz > 0.0) {
            return Err(Error::parse(
                line_no,
                format!("frequency {f_hz} Hz must be > 0"),
            ));
        }
        if let Some(&prev) = frequencies.last() {
            if f_hz <= prev {
                return Err(Error::NonMonotoneFrequency {
                    line: line_no,
                    frequency_hz: f_hz,
                });
            }
        }
        frequencies.push(f_hz);
        points.push(SParams {
            s11: decode(values[1], values[2], current.format),
            s21: decode(values[3], values[4], current.format),
            s12: decode(values[5], values[6], current.format),
            s22: decode(values[7], values[8], current.format),
        });
    }

    if frequencies.is_empty() {
        return Err(Error::parse(0, "no data rows".to_string()));
    }
    let reference = opts.map(|o| o.reference).unwrap_or(50.0);
    TwoPortNetwork::new(frequencies, points, reference)
}
