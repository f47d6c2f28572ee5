//! Brute-force reference implementations, written from the definitions and
//! sharing no code with the library beyond its plain data types.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

pub const TOL: f64 = 1e-10;

/// Comb amplitudes `M^{-1/2}` on `x0 + m r`, zero elsewhere.
pub fn comb(n: u32, r: u64, x0: u64) -> Vec<Complex64> {
    let size = 1u64 << n;
    let hits: Vec<u64> = (x0..size).step_by(r as usize).collect();
    let a = 1.0 / (hits.len() as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); size as usize];
    for x in hits {
        v[x as usize] = Complex64::new(a, 0.0);
    }
    v
}

/// Textbook DFT with a positive exponent and unitary scaling.
pub fn dft(v: &[Complex64]) -> Vec<Complex64> {
    let size = v.len();
    let scale = 1.0 / (size as f64).sqrt();
    (0..size)
        .map(|b| {
            v.iter()
                .enumerate()
                .map(|(x, a)| a * Complex64::from_polar(1.0, 2.0 * PI * ((x * b) % size) as f64 / size as f64))
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

/// Reduced density matrix of qubit `q` by the explicit double loop
/// `rho_ij = sum_rest psi(i, rest) conj(psi(j, rest))`.
pub fn reduce(psi: &[Complex64], q: u32) -> [[Complex64; 2]; 2] {
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    let bit = 1usize << q;
    for x in 0..psi.len() {
        for y in 0..psi.len() {
            if x & !bit != y & !bit {
                continue;
            }
            let (i, j) = ((x & bit != 0) as usize, (y & bit != 0) as usize);
            rho[i][j] += psi[x] * psi[y].conj();
        }
    }
    rho
}

/// First register after measuring `f = a0` on a uniform superposition,
/// without simulating any gates.
pub fn collapse(n: u32, f: impl Fn(u64) -> u64, a0: u64) -> Vec<Complex64> {
    let size = 1u64 << n;
    let hits: Vec<u64> = (0..size).filter(|&x| f(x) == a0).collect();
    let a = 1.0 / (hits.len() as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); size as usize];
    for x in hits {
        v[x as usize] = Complex64::new(a, 0.0);
    }
    v
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
