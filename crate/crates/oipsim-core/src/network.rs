//! Two-port network algebra: ABCD (chain) matrices, S-parameters, and the
//! line-element-line cascade that models the switch fixture.

use num_complex::Complex64;

use crate::device::EquivalentCircuit;
use crate::error::{Error, Result};
use crate::microstrip::MicrostripLine;

/// System reference impedance the fixture is normalized to [ohm].
pub const Z0_REF: f64 = 50.0;

/// Denominator magnitude below which an ABCD/S conversion is rejected.
const SINGULAR_DENOMINATOR: f64 = 1e-30;

/// 2x2 chain matrix; `b` carries ohms, `c` siemens. Cascades multiply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbcdMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl AbcdMatrix {
    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// `a d - b c`; equals 1 for reciprocal networks.
    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }
}

/// Chain matrix of a bare series impedance, `[[1, Z], [0, 1]]`.
pub fn abcd_series(z: Complex64) -> AbcdMatrix {
    AbcdMatrix {
        a: Complex64::new(1.0, 0.0),
        b: z,
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    }
}

/// Matrix product `x * y`: the network `x` followed by the network `y`.
pub fn cascade(x: &AbcdMatrix, y: &AbcdMatrix) -> AbcdMatrix {
    AbcdMatrix {
        a: x.a * y.a + x.b * y.c,
        b: x.a * y.b + x.b * y.d,
        c: x.c * y.a + x.d * y.c,
        d: x.c * y.b + x.d * y.d,
    }
}

/// One frequency point of two-port scattering parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParams {
    pub s11: Complex64,
    pub s21: Complex64,
    pub s12: Complex64,
    pub s22: Complex64,
}

impl SParams {
    /// Insertion loss, `-20 log10 |s21|` [dB]; positive for attenuation.
    pub fn insertion_loss_db(&self) -> f64 {
        -20.0 * self.s21.norm().log10()
    }

    /// Return loss, `-20 log10 |s11|` [dB]; positive for good match.
    pub fn return_loss_db(&self) -> f64 {
        -20.0 * self.s11.norm().log10()
    }

    /// All four magnitudes within `1 + slack`.
    pub fn is_passive(&self, slack: f64) -> bool {
        [self.s11, self.s21, self.s12, self.s22]
            .iter()
            .all(|s| s.norm() <= 1.0 + slack)
    }
}

/// Converts a chain matrix to S-parameters at real reference `z0`.
pub fn abcd_to_s(m: &AbcdMatrix, z0: f64) -> Result<SParams> {
    if !(z0 > 0.0) {
        return Err(Error::invalid(format!("reference impedance {z0} must be > 0")));
    }
    let den = m.a + m.b / z0 + m.c * z0 + m.d;
    if den.norm() < SINGULAR_DENOMINATOR {
        return Err(Error::SingularConversion {
            magnitude: den.norm(),
        });
    }
    Ok(SParams {
        s11: (m.a + m.b / z0 - m.c * z0 - m.d) / den,
        s12: 2.0 * m.determinant() / den,
        s21: 2.0 / den,
        s22: (-m.a + m.b / z0 - m.c * z0 + m.d) / den,
    })
}

/// Inverse of [`abcd_to_s`]. Fails when `s21` vanishes (no through path).
pub fn s_to_abcd(s: &SParams, z0: f64) -> Result<AbcdMatrix> {
    if !(z0 > 0.0) {
        return Err(Error::invalid(format!("reference impedance {z0} must be > 0")));
    }
    let den = 2.0 * s.s21;
    if den.norm() < SINGULAR_DENOMINATOR {
        return Err(Error::SingularConversion {
            magnitude: den.norm(),
        });
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(AbcdMatrix {
        a: ((one + s.s11) * (one - s.s22) + s.s12 * s.s21) / den,
        b: z0 * ((one + s.s11) * (one + s.s22) - s.s12 * s.s21) / den,
        c: ((one - s.s11) * (one - s.s22) - s.s12 * s.s21) / den / z0,
        d: ((one - s.s11) * (one + s.s22) + s.s12 * s.s21) / den,
    })
}

/// Frequency-swept two-port S-parameters at a single real reference
/// impedance. Construction validates the grid, not passivity: measured
/// data may exceed unit magnitude by noise, so passivity is a query
/// ([`SParams::is_passive`]) rather than an invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortNetwork {
    frequencies: Vec<f64>,
    points: Vec<SParams>,
    reference_impedance: f64,
}

impl TwoPortNetwork {
    pub fn new(frequencies: Vec<f64>, points: Vec<SParams>, reference_impedance: f64) -> Result<Self> {
        if frequencies.len() != points.len() {
            return Err(Error::invalid(format!(
                "{} frequencies but {} S-parameter points",
                frequencies.len(),
                points.len()
            )));
        }
        if frequencies.is_empty() {
            return Err(Error::invalid("frequency grid is empty".to_string()));
        }
        if !(reference_impedance > 0.0) {
            return Err(Error::invalid(format!(
                "reference impedance {reference_impedance} must be > 0"
            )));
        }
        if !(frequencies[0] > 0.0) {
            return Err(Error::invalid(format!(
                "frequency {} Hz must be > 0",
                frequencies[0]
            )));
        }
        for pair in frequencies.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::invalid(format!(
                    "frequency grid not strictly increasing at {} Hz",
                    pair[1]
                )));
            }
        }
        Ok(Self {
            frequencies,
            points,
            reference_impedance,
        })
    }

    /// Frequencies [Hz], strictly increasing.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// One S-parameter quadruple per frequency.
    pub fn points(&self) -> &[SParams] {
        &self.points
    }

    pub fn reference_impedance(&self) -> f64 {
        self.reference_impedance
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// `(frequency, point)` pairs in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &SParams)> {
        self.frequencies.iter().copied().zip(self.points.iter())
    }
}

/// Swept response of the fixture: feed line, series switch element, feed
/// line, normalized to [`Z0_REF`].
pub fn switch_response(
    input_line: &MicrostripLine,
    output_line: &MicrostripLine,
    element: &EquivalentCircuit,
    freq_grid: &[f64],
) -> Result<TwoPortNetwork> {
    if freq_grid.is_empty() {
        return Err(Error::invalid("frequency grid is empty".to_string()));
    }
    let mut points = Vec::with_capacity(freq_grid.len());
    for &f in freq_grid {
        if !(f > 0.0) {
            return Err(Error::invalid(format!("frequency {f} Hz must be > 0")));
        }
        let left = input_line.abcd(f)?;
        let right = output_line.abcd(f)?;
        let mid = abcd_series(element.impedance(f));
        let total = cascade(&left, &cascade(&mid, &right));
        points.push(abcd_to_s(&total, Z0_REF)?);
    }
    TwoPortNetwork::new(freq_grid.to_vec(), points, Z0_REF)
}
