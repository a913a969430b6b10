//! Derivative-free Nelder-Mead minimizer used by the circuit extractors.
//!
//! Standard reflection/expansion/contraction/shrink moves; convergence is
//! declared when either the simplex collapses geometrically or the spread
//! of objective values across its vertices stops changing at the
//! floating-point level.

use crate::error::{Error, Result};

/// Tuning knobs for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Hard iteration cap; the outcome carries `converged = false` when hit.
    pub max_iterations: usize,
    /// Geometric stop: largest coordinate spread of the simplex relative to
    /// `1 + |best coordinate|`.
    pub spread_tolerance: f64,
    /// Objective stop: fractional spread `2 (f_hi - f_lo) / (|f_hi| + |f_lo|)`.
    pub objective_tolerance: f64,
    /// Additive offset applied per coordinate to build the initial simplex.
    pub initial_step: f64,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            max_iterations: 400,
            spread_tolerance: 1e-10,
            objective_tolerance: 1e-14,
            initial_step: 0.25,
        }
    }
}

/// Result of a simplex descent.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Best objective value after each iteration; non-increasing.
    pub history: Vec<f64>,
}

/// Minimizes `objective` starting from `start`. Non-finite objective values
/// are treated as infinitely bad rather than poisoning the simplex.
pub fn minimize(
    mut objective: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    options: &SimplexOptions,
) -> Result<SimplexOutcome> {
    let n = start.len();
    if n == 0 {
        return Err(Error::invalid("cannot optimize over zero parameters".to_string()));
    }
    if start.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite start point".to_string()));
    }
    if !(options.initial_step != 0.0 && options.initial_step.is_finite()) {
        return Err(Error::invalid(format!(
            "initial step {} must be finite and non-zero",
            options.initial_step
        )));
    }

    let mut eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };

    // Vertex 0 is the start; vertex i offsets coordinate i-1.
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    vertices.push(start.to_vec());
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += options.initial_step;
        vertices.push(v);
    }
    let mut values: Vec<f64> = vertices.iter().map(|v| eval(v)).collect();

    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..options.max_iterations {
        // Sort vertices by objective, best first.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| vertices[i].clone()).collect();
        let revalued: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        vertices = reordered;
        values = revalued;

        if is_converged(&vertices, &values, options) {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|k| vertices[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = vertices[n].clone();
        let f_best = values[0];
        let f_second_worst = values[n - 1];
        let f_worst = values[n];

        let blend = |towards: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + towards * (centroid[k] - worst[k]))
                .collect()
        };

        let reflected = blend(1.0);
        let f_reflected = eval(&reflected);

        if f_reflected < f_best {
            let expanded = blend(2.0);
            let f_expanded = eval(&expanded);
            if f_expanded < f_reflected {
                vertices[n] = expanded;
                values[n] = f_expanded;
            } else {
                vertices[n] = reflected;
                values[n] = f_reflected;
            }
        } else if f_reflected < f_second_worst {
            vertices[n] = reflected;
            values[n] = f_reflected;
        } else {
            let contracted = if f_reflected < f_worst {
                blend(0.5)
            } else {
                blend(-0.5)
            };
            let f_contracted = eval(&contracted);
            if f_contracted < f_reflected.min(f_worst) {
                vertices[n] = contracted;
                values[n] = f_contracted;
            } else {
                // Shrink everything toward the best vertex.
                let best = vertices[0].clone();
                for i in 1..=n {
                    for k in 0..n {
                        vertices[i][k] = best[k] + 0.5 * (vertices[i][k] - best[k]);
                    }
                    values[i] = eval(&vertices[i]);
                }
            }
        }

        let current_best = values.iter().cloned().fold(f64::INFINITY, f64::min);
        history.push(current_best);
    }

    let (best_idx, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is non-empty");
    Ok(SimplexOutcome {
        best_point: vertices[best_idx].clone(),
        best_value: values[best_idx],
        iterations,
        converged,
        history,
    })
}

/// Loose geometric bound that must accompany the objective criterion:
/// vertices placed symmetrically around a minimum can tie exactly in
/// objective value while the simplex is still wide, and must not count as
/// converged.
const OBJECTIVE_CRITERION_SPREAD_GUARD: f64 = 1e-6;

fn is_converged(vertices: &[Vec<f64>], values: &[f64], options: &SimplexOptions) -> bool {
    let n = vertices[0].len();
    let best = &vertices[0];
    let mut spread: f64 = 0.0;
    for v in &vertices[1..] {
        for k in 0..n {
            let rel = (v[k] - best[k]).abs() / (1.0 + best[k].abs());
            spread = spread.max(rel);
        }
    }
    if spread < options.spread_tolerance {
        return true;
    }
    let f_lo = values[0];
    let f_hi = values[values.len() - 1];
    if f_hi.is_finite() && spread < OBJECTIVE_CRITERION_SPREAD_GUARD {
        let fractional = 2.0 * (f_hi - f_lo).abs() / (f_hi.abs() + f_lo.abs() + f64::MIN_POSITIVE);
        if fractional < options.objective_tolerance {
            return true;
        }
    }
    false
}
