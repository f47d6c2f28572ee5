//! Quantum period finding from one-qubit reduced density matrices.
//!
//! The crate simulates the first register of the period-finding circuit
//! exactly, extracts the one-qubit marginals `rho00` for every qubit, and
//! recovers the period from those `n` numbers alone:
//!
//! * [`domain`]: problem size, bit strings, the `beta_q` index sets and the
//!   real intervals they span.
//! * [`oracle`]: periodic functions (sawtooth and modular exponentiation).
//! * [`state`]: the post-measurement comb state and its Fourier transform,
//!   built either from closed forms or from a full two-register simulation.
//! * [`rdm`]: one-qubit reduced density matrices and marginal profiles.
//! * [`model`]: analytic and approximate marginal models, peak patterns.
//! * [`finder`]: candidate narrowing, secant refinement and accuracy sweeps.

pub mod domain;
pub mod error;
pub mod finder;
pub mod kernel;
pub mod model;
pub mod oracle;
pub mod rdm;
pub mod state;
mod sum;

pub use domain::{beta_members, beta_range, complement_string, BetaSet, BitString, Domain, IntervalRange};
pub use error::{Error, Result};
pub use finder::{
    accuracy_sweep, find_period, hypothesize, recover_period, secant_refine, AccuracyReport, FinderConfig,
    FinderResult, PeriodHypothesis, ProfileSource, RoundTrace,
};
pub use model::{
    az_analytic_pow2, az_approx, peak_predicate, peak_set_delta, rho00_counting, ApproxModel, PeakPattern,
};
pub use oracle::{default_samples, fundamental_period, validate_period, OracleKind, PeriodicFunction};
pub use rdm::{
    profile, profile_from_state, rdm_direct, rdm_from_state, rho00_direct, rho01_direct, BlochCoefficients, MarginalProfile,
    OneQubitRDM,
};
pub use state::{
    build_phi_direct, build_psi_direct, preimage_count, prepare_first_register, qft, qft_dense, qft_fast, run_full_circuit, sample_comb_offset, A0Mode,
    MeasurementRecord, StateVector,
};

/// Default threshold separating `a_z > 0` from the zero baseline.
pub const DEFAULT_EPS_ZERO: f64 = 1e-6;
