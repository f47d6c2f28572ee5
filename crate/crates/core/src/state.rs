//! First-register states of the period-finding circuit.
//!
//! Two independent routes produce the output state:
//!
//! * the closed forms ([`build_phi_direct`], [`build_psi_direct`]), which
//!   need `2^n` amplitudes and are used for every sweep;
//! * [`run_full_circuit`], a literal two-register simulation (Hadamards,
//!   oracle permutation, measurement of register 2, QFT). It allocates
//!   `2^(2n)` amplitudes and serves as the reference at small `n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::kernel::{comb_sum, unit_phase};
use crate::oracle::PeriodicFunction;

/// Largest `n` accepted by [`run_full_circuit`] (`2^26` amplitudes).
pub const FULL_CIRCUIT_MAX_QUBITS: u32 = 13;

/// Largest `n` accepted by the closed-form builders.
pub const DIRECT_MAX_QUBITS: u32 = 24;

/// From this size on, [`qft`] uses the FFT instead of the dense transform.
pub const FAST_QFT_FROM: u32 = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    domain: Domain,
}

impl StateVector {
    pub fn new(domain: Domain, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() as u64 != domain.size() {
            return Err(Error::Argument(format!(
                "expected {} amplitudes, got {}",
                domain.size(),
                amplitudes.len()
            )));
        }
        Ok(Self { amplitudes, domain })
    }

    /// Computational basis state `|b>`.
    pub fn basis(domain: Domain, b: u64) -> Result<Self> {
        check_direct(domain)?;
        if b >= domain.size() {
            return Err(Error::Argument(format!("basis index {b} out of range")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); domain.size() as usize];
        amplitudes[b as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes, domain })
    }

    /// Uniform superposition `H^n |0>`.
    pub fn uniform(domain: Domain) -> Result<Self> {
        check_direct(domain)?;
        let a = 1.0 / (domain.size() as f64).sqrt();
        Ok(Self { amplitudes: vec![Complex64::new(a, 0.0); domain.size() as usize], domain })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `|C_b|^2` for every `b`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// Largest amplitude-wise deviation from `other`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Outcome of measuring the second register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MeasurementRecord {
    /// Measured function value.
    pub a0: u64,
    /// Number of `x` in `[0, N)` with `f(x) = a0`.
    pub multiplicity: u64,
    /// Seed of the sampling RNG; `None` when post-selected.
    pub seed: Option<u64>,
}

/// How the second-register measurement is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A0Mode {
    /// Sample from the exact marginal with a seeded RNG.
    Sample { seed: u64 },
    /// Condition on the given function value.
    PostSelect { a0: u64 },
}

fn check_direct(domain: Domain) -> Result<()> {
    if domain.qubits() > DIRECT_MAX_QUBITS {
        return Err(Error::Capacity { what: "state vector", n: domain.qubits(), max: DIRECT_MAX_QUBITS });
    }
    Ok(())
}

/// Number of points `x0 + m r` below `N`.
pub fn preimage_count(domain: Domain, r: u64, x0: u64) -> u64 {
    (domain.size() - 1 - x0) / r + 1
}

fn check_comb(domain: Domain, r: u64, x0: u64) -> Result<u64> {
    check_direct(domain)?;
    domain.check_period(r)?;
    if x0 >= r {
        return Err(Error::Argument(format!("offset x0 = {x0} must be below the period {r}")));
    }
    Ok(preimage_count(domain, r, x0))
}

/// Post-measurement comb `M^{-1/2} sum_m |x0 + m r>`.
pub fn build_phi_direct(domain: Domain, r: u64, x0: u64) -> Result<StateVector> {
    let m = check_comb(domain, r, x0)?;
    let a = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); domain.size() as usize];
    for k in 0..m {
        amplitudes[(x0 + k * r) as usize] = a;
    }
    Ok(StateVector { amplitudes, domain })
}

/// Fourier transform of the comb, evaluated in closed form:
/// `C_b = (N M)^{-1/2} exp(i 2 pi x0 b / N) sum_m exp(i 2 pi m r b / N)`.
pub fn build_psi_direct(domain: Domain, r: u64, x0: u64) -> Result<StateVector> {
    let m = check_comb(domain, r, x0)?;
    let size = domain.size();
    let scale = 1.0 / ((size as f64) * (m as f64)).sqrt();
    let amplitudes = (0..size)
        .map(|b| {
            let rb = (r as u128 * b as u128 % size as u128) as u64;
            let xb = (x0 as u128 * b as u128 % size as u128) as u64;
            unit_phase(xb, size) * comb_sum(rb, size, m) * scale
        })
        .collect();
    Ok(StateVector { amplitudes, domain })
}

/// Dense `O(N^2)` transform `out_b = N^{-1/2} sum_x exp(i 2 pi x b / N) in_x`.
pub fn qft_dense(state: &StateVector) -> StateVector {
    let size = state.domain.size() as usize;
    let roots: Vec<Complex64> = (0..size)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / size as f64))
        .collect();
    let scale = 1.0 / (size as f64).sqrt();
    let amplitudes = (0..size)
        .map(|b| {
            state
                .amplitudes
                .iter()
                .enumerate()
                .map(|(x, a)| a * roots[x * b % size])
                .sum::<Complex64>()
                * scale
        })
        .collect();
    StateVector { amplitudes, domain: state.domain }
}

/// Same transform as [`qft_dense`] via an `O(N log N)` FFT.
pub fn qft_fast(state: &StateVector) -> StateVector {
    let size = state.amplitudes.len();
    let mut buf = state.amplitudes.clone();
    // rustfft's inverse transform carries the exp(+i ...) sign, unnormalized
    FftPlanner::new().plan_fft_inverse(size).process(&mut buf);
    let scale = 1.0 / (size as f64).sqrt();
    buf.iter_mut().for_each(|a| *a *= scale);
    StateVector { amplitudes: buf, domain: state.domain }
}

/// Quantum Fourier transform; dense below [`FAST_QFT_FROM`] qubits.
pub fn qft(state: &StateVector) -> StateVector {
    if state.domain.qubits() >= FAST_QFT_FROM {
        qft_fast(state)
    } else {
        qft_dense(state)
    }
}

/// Draws an index with probability proportional to `weights`.
fn sample_weighted(weights: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Samples the comb offset `x0` of a period-`r` function the way a
/// measurement of the second register would: `P(x0) = M(x0) / N`.
pub fn sample_comb_offset(domain: Domain, r: u64, seed: u64) -> Result<MeasurementRecord> {
    domain.check_period(r)?;
    let weights: Vec<f64> = (0..r).map(|x0| preimage_count(domain, r, x0) as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = sample_weighted(&weights, &mut rng) as u64;
    Ok(MeasurementRecord { a0: x0, multiplicity: preimage_count(domain, r, x0), seed: Some(seed) })
}

/// Simulates the circuit up to (not including) the QFT: Hadamards on
/// register 1, the oracle `|x>|y> -> |x>|y xor f(x)>`, and a measurement of
/// register 2. Returns the renormalized first register.
pub fn prepare_first_register(
    domain: Domain,
    f: &PeriodicFunction,
    mode: A0Mode,
) -> Result<(StateVector, MeasurementRecord)> {
    let n = domain.qubits();
    if n > FULL_CIRCUIT_MAX_QUBITS {
        return Err(Error::Capacity { what: "two-register simulation", n, max: FULL_CIRCUIT_MAX_QUBITS });
    }
    let size = domain.size() as usize;
    if f.value_bound() > size as u64 {
        return Err(Error::InvalidOracle(format!(
            "values of {} do not fit in a {n}-qubit second register",
            f.kind()
        )));
    }
    let f = f.with_domain(domain);

    // index = x + N * y: register 1 on the low n qubits
    let zero = Complex64::new(0.0, 0.0);
    let mut amps = vec![zero; size * size];
    amps[0] = Complex64::new(1.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for l in 0..n {
        let bit = 1usize << l;
        for i in (0..size * size).filter(|i| i & bit == 0) {
            let (a, b) = (amps[i], amps[i | bit]);
            amps[i] = (a + b) * h;
            amps[i | bit] = (a - b) * h;
        }
    }

    let mut entangled = vec![zero; size * size];
    for y in 0..size {
        for x in 0..size {
            let fx = f.eval_unchecked(x as u64) as usize;
            entangled[x + size * (y ^ fx)] = amps[x + size * y];
        }
    }

    let marginal: Vec<f64> = (0..size)
        .map(|y| entangled[size * y..size * (y + 1)].iter().map(Complex64::norm_sqr).sum())
        .collect();
    let (a0, seed) = match mode {
        A0Mode::PostSelect { a0 } => {
            if a0 >= size as u64 || marginal[a0 as usize] <= 0.0 {
                return Err(Error::PostSelection(a0));
            }
            (a0, None)
        }
        A0Mode::Sample { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (sample_weighted(&marginal, &mut rng) as u64, Some(seed))
        }
    };

    let norm = marginal[a0 as usize].sqrt();
    let row = a0 as usize * size;
    let amplitudes = entangled[row..row + size].iter().map(|a| a / norm).collect();
    let multiplicity = (0..size as u64).filter(|&x| f.eval_unchecked(x) == a0).count() as u64;
    Ok((StateVector { amplitudes, domain }, MeasurementRecord { a0, multiplicity, seed }))
}

/// Full two-register simulation followed by the QFT on register 1.
pub fn run_full_circuit(
    domain: Domain,
    f: &PeriodicFunction,
    mode: A0Mode,
) -> Result<(StateVector, MeasurementRecord)> {
    let (phi, record) = prepare_first_register(domain, f, mode)?;
    Ok((qft(&phi), record))
}
