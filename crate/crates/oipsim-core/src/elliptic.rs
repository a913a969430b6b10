//! Complete elliptic integral of the first kind via the arithmetic-geometric
//! mean, in the modulus convention K(k) (not the parameter m = k^2).
//!
//! K(k) = pi / (2 * AGM(1, sqrt(1 - k^2)))

use std::f64::consts::PI;

const MAX_ITER: usize = 40;
const EPSILON: f64 = 1e-15;

/// K(k) for modulus k in [0, 1). Returns infinity at k = 1 and NaN outside
/// the domain.
pub fn complete_elliptic_k(k: f64) -> f64 {
    if !(0.0..=1.0).contains(&k) {
        return f64::NAN;
    }
    if k == 1.0 {
        return f64::INFINITY;
    }
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    for _ in 0..MAX_ITER {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        if (a_next - b_next).abs() < EPSILON * a_next {
            return PI / (2.0 * a_next);
        }
        a = a_next;
        b = b_next;
    }
    PI / (2.0 * a)
}

/// K(k') for the complementary modulus k' = sqrt(1 - k^2), evaluated without
/// forming k' explicitly (keeps precision for small k).
pub fn complete_elliptic_k_complement(k: f64) -> f64 {
    if !(0.0..=1.0).contains(&k) {
        return f64::NAN;
    }
    if k == 0.0 {
        // K(k'=1) diverges.
        return f64::INFINITY;
    }
    let mut a = 1.0;
    let mut b = k;
    for _ in 0..MAX_ITER {
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        if (a_next - b_next).abs() < EPSILON * a_next {
            return PI / (2.0 * a_next);
        }
        a = a_next;
        b = b_next;
    }
    PI / (2.0 * a)
}
