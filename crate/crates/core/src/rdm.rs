//! One-qubit reduced density matrices and marginal profiles.

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{BetaSet, Domain};
use crate::error::{Error, Result};
use crate::kernel::{comb_sum, comb_sum_sq, unit_phase};
use crate::state::{preimage_count, StateVector, DIRECT_MAX_QUBITS};
use crate::sum::{sum_complex, sum_real};

/// Bloch vector of a one-qubit density matrix, `rho = I/2 + sigma . a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochCoefficients {
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl BlochCoefficients {
    pub fn norm(&self) -> f64 {
        (self.ax * self.ax + self.ay * self.ay + self.az * self.az).sqrt()
    }
}

/// The 2x2 reduced density matrix of qubit `q`; `rho10 = conj(rho01)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneQubitRDM {
    pub q: u32,
    pub rho00: f64,
    pub rho11: f64,
    pub rho01: Complex64,
}

impl OneQubitRDM {
    pub fn rho10(&self) -> Complex64 {
        self.rho01.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho00 + self.rho11
    }

    /// `rho01 = a_x - i a_y`, `rho00 = 1/2 + a_z`.
    pub fn bloch(&self) -> BlochCoefficients {
        BlochCoefficients { ax: self.rho01.re, ay: 0.0 - self.rho01.im, az: self.rho00 - 0.5 }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * self.trace();
        let half_gap = (0.25 * (self.rho00 - self.rho11).powi(2) + self.rho01.norm_sqr()).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.rho00 * self.rho00 + self.rho11 * self.rho11 + 2.0 * self.rho01.norm_sqr()
    }
}

/// `a_z^(q)` for every first-register qubit at one period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalProfile {
    pub n: u32,
    pub r_true: Option<u64>,
    pub az: Vec<f64>,
}

impl MarginalProfile {
    pub fn new(az: Vec<f64>, r_true: Option<u64>) -> Result<Self> {
        if az.is_empty() {
            return Err(Error::Argument("empty marginal profile".into()));
        }
        Ok(Self { n: az.len() as u32, r_true, az })
    }
}

/// Partial trace over every qubit except `q`.
pub fn rdm_from_state(state: &StateVector, q: u32) -> Result<OneQubitRDM> {
    let domain = state.domain();
    let beta = BetaSet::new(domain, q)?;
    let amps = state.amplitudes();
    let n = domain.qubits();
    let rho00 = sum_real(n, beta.indices().map(|b| amps[b].norm_sqr()));
    let rho11 = sum_real(n, beta.pairs().map(|(_, xi)| amps[xi].norm_sqr()));
    let rho01 = sum_complex(n, beta.pairs().map(|(b, xi)| amps[b] * amps[xi].conj()));
    // normalize the trace so rho11 = 1 - rho00 holds to rounding
    let trace = rho00 + rho11;
    Ok(OneQubitRDM { q, rho00: rho00 / trace, rho11: rho11 / trace, rho01: rho01 / trace })
}

fn check_direct(domain: Domain, r: u64) -> Result<()> {
    if domain.qubits() > DIRECT_MAX_QUBITS {
        return Err(Error::Capacity { what: "direct marginal", n: domain.qubits(), max: DIRECT_MAX_QUBITS });
    }
    domain.check_period(r)
}

/// Canonical comb length for `x0 = 0`: `ceil(N / r)`, which is `N / r` when
/// `r` divides `N`.
fn canonical_terms(domain: Domain, r: u64) -> u64 {
    preimage_count(domain, r, 0)
}

/// `|C_b|^2` of the canonical output state.
#[inline]
fn output_probability(size: u64, r: u64, terms: u64, b: u64) -> f64 {
    let rb = (r as u128 * b as u128 % size as u128) as u64;
    comb_sum_sq(rb, size, terms) / (size as f64 * terms as f64)
}

/// `rho00^(q)(r) = sum_{b in beta_q} |C_b(r)|^2` from the Dirichlet closed
/// form, without building the state.
pub fn rho00_direct(domain: Domain, r: u64, q: u32) -> Result<f64> {
    check_direct(domain, r)?;
    let beta = BetaSet::new(domain, q)?;
    let (size, terms) = (domain.size(), canonical_terms(domain, r));
    Ok(sum_real(domain.qubits(), beta.indices().map(|b| output_probability(size, r, terms, b as u64))))
}

/// Coherence `rho01^(q)(r)` of the state whose comb starts at offset `a0`:
/// `sum_{b in beta_q} C_b conj(C_xi(b))`, both factors in closed form.
pub fn rho01_direct(domain: Domain, r: u64, q: u32, a0: u64) -> Result<Complex64> {
    check_direct(domain, r)?;
    let beta = BetaSet::new(domain, q)?;
    if a0 >= r {
        return Err(Error::Argument(format!("offset a0 = {a0} must be below the period {r}")));
    }
    let size = domain.size();
    let terms = preimage_count(domain, r, a0);
    let norm = 1.0 / (size as f64 * terms as f64);
    let coefficient = |b: u64| {
        let rb = (r as u128 * b as u128 % size as u128) as u64;
        let ab = (a0 as u128 * b as u128 % size as u128) as u64;
        unit_phase(ab, size) * comb_sum(rb, size, terms)
    };
    Ok(sum_complex(
        domain.qubits(),
        beta.pairs().map(|(b, xi)| coefficient(b as u64) * coefficient(xi as u64).conj() * norm),
    ))
}

/// Full RDM of qubit `q` for the comb at offset `a0`, from closed forms.
/// At `a0 = 0` the diagonal is bit-identical to [`rho00_direct`].
pub fn rdm_direct(domain: Domain, r: u64, q: u32, a0: u64) -> Result<OneQubitRDM> {
    let rho01 = rho01_direct(domain, r, q, a0)?;
    let beta = BetaSet::new(domain, q)?;
    let (size, terms, n) = (domain.size(), preimage_count(domain, r, a0), domain.qubits());
    let rho00 = sum_real(n, beta.indices().map(|b| output_probability(size, r, terms, b as u64)));
    let rho11 = sum_real(n, beta.pairs().map(|(_, xi)| output_probability(size, r, terms, xi as u64)));
    Ok(OneQubitRDM { q, rho00, rho11, rho01 })
}

/// `a_z^(q) = rho00_direct - 1/2` for all qubits, sharing one table of
/// output probabilities across qubits.
pub fn profile(domain: Domain, r: u64) -> Result<MarginalProfile> {
    check_direct(domain, r)?;
    let (size, terms) = (domain.size(), canonical_terms(domain, r));
    let probs: Vec<f64> = (0..size).map(|b| output_probability(size, r, terms, b)).collect();
    let n = domain.qubits();
    let az = (0..n)
        .map(|q| {
            let beta = BetaSet::new(domain, q).expect("qubit in range");
            sum_real(n, beta.indices().map(|b| probs[b])) - 0.5
        })
        .collect();
    Ok(MarginalProfile { n, r_true: Some(r), az })
}

/// Profile read off an arbitrary state by partial traces.
pub fn profile_from_state(state: &StateVector, r_true: Option<u64>) -> MarginalProfile {
    let n = state.domain().qubits();
    let az = (0..n)
        .map(|q| rdm_from_state(state, q).expect("qubit in range").bloch().az)
        .collect();
    MarginalProfile { n, r_true, az }
}
