//! Sweep summary table: one CSV row per (laser power, frequency) point.

use crate::error::{Error, Result};

/// Exact column header of the sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "power_mW,freq_GHz,il_dB,rl_dB,R_ohm,C_fF";

/// One evaluated operating point, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub power_w: f64,
    pub frequency_hz: f64,
    pub insertion_loss_db: f64,
    pub return_loss_db: f64,
    pub resistance_ohm: f64,
    pub capacitance_f: f64,
}

/// Renders rows as CSV with fixed six-decimal formatting, sorted
/// power-major then frequency-minor so output is reproducible regardless
/// of evaluation order. Power is reported in mW, frequency in GHz, and
/// capacitance in fF.
pub fn write_sweep_csv(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::invalid("sweep table has no rows".to_string()));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| {
        a.power_w
            .total_cmp(&b.power_w)
            .then(a.frequency_hz.total_cmp(&b.frequency_hz))
    });
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in &sorted {
        // `+ 0.0` collapses IEEE negative zero so a lossless through prints
        // 0.000000, not -0.000000.
        out.push_str(&format!(
            "{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            row.power_w * 1e3 + 0.0,
            row.frequency_hz / 1e9 + 0.0,
            row.insertion_loss_db + 0.0,
            row.return_loss_db + 0.0,
            row.resistance_ohm + 0.0,
            row.capacitance_f * 1e15 + 0.0,
        ));
    }
    Ok(out)
}
