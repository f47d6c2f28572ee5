//! Closed forms for the geometric phase sums `sum_{m<M} exp(i 2 pi k m / N)`.
//!
//! All angles are carried as exact integer fractions of `pi` and reduced
//! before any trigonometric call, so resonances (`k = 0 mod N`) are detected
//! exactly and near-resonant terms keep full relative precision.

use std::f64::consts::PI;

use num_complex::Complex64;

/// `sin(pi * j / den)`, reduced to `[0, pi/2]` in integer arithmetic first.
pub fn sin_pi_frac(j: u128, den: u128) -> f64 {
    let j = j % (2 * den);
    let (negate, j) = if j >= den { (true, j - den) } else { (false, j) };
    let j = if 2 * j > den { den - j } else { j };
    let s = (PI * (j as f64 / den as f64)).sin();
    if negate {
        -s
    } else {
        s
    }
}

/// `exp(i * 2 pi * num / den)`.
pub fn unit_phase(num: u64, den: u64) -> Complex64 {
    let j = (num % den) as f64 / den as f64;
    let (s, c) = (2.0 * PI * j).sin_cos();
    Complex64::new(c, s)
}

/// `sum_{m=0}^{terms-1} exp(i 2 pi k m / size)` for `k = num mod size`.
///
/// Away from resonance this is
/// `exp(i pi k (M-1) / N) * sin(pi k M / N) / sin(pi k / N)`; at resonance
/// it is exactly `M`.
pub fn comb_sum(num: u64, size: u64, terms: u64) -> Complex64 {
    let k = (num % size) as u128;
    if k == 0 {
        return Complex64::new(terms as f64, 0.0);
    }
    let (size, m) = (size as u128, terms as u128);
    let ratio = sin_pi_frac(k * m, size) / sin_pi_frac(k, size);
    // exp(i pi k (M-1) / N) with the exponent reduced mod 2N
    let j = (k * (m - 1)) % (2 * size);
    let (s, c) = (PI * (j as f64 / size as f64)).sin_cos();
    Complex64::new(c * ratio, s * ratio)
}

/// `|comb_sum(num, size, terms)|^2`, with the `M^2` limit at resonance.
pub fn comb_sum_sq(num: u64, size: u64, terms: u64) -> f64 {
    let k = (num % size) as u128;
    if k == 0 {
        return (terms as f64) * (terms as f64);
    }
    let size = size as u128;
    let ratio = sin_pi_frac(k * terms as u128, size) / sin_pi_frac(k, size);
    ratio * ratio
}
