//! Period recovery from a marginal profile.
//!
//! The search runs in three stages:
//!
//! 1. The first qubit `l` (from qubit 0) with `a_z > eps` fixes the odd part
//!    of the period to `[2^l, 2^(l+1))`.
//! 2. The first qubit from the end, `q* = n - 1 - q'`, with `a_z > eps` fixes
//!    the power of two to `2^q'`.
//! 3. When more than two candidates remain, a secant iteration solves
//!    `a_z^(q*) - 2^q' / (2 rho) = 0` for real `rho`, and the root is rounded
//!    to the nearest candidate.
//!
//! [`find_period`] repeats this with growing qubit counts until two
//! consecutive rounds agree on a validated period.

use rayon::prelude::*;
use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::model::ApproxModel;
use crate::oracle::{default_samples, fundamental_period, validate_period, PeriodicFunction};
use crate::rdm::{profile, profile_from_state, MarginalProfile};
use crate::state::{run_full_circuit, A0Mode, DIRECT_MAX_QUBITS};
use crate::DEFAULT_EPS_ZERO;

/// Secant stops once a step is shorter than this.
pub const SECANT_TOLERANCE: f64 = 0.5;
pub const SECANT_MAX_ITERATIONS: u32 = 50;

/// Candidate periods implied by the signal-bearing qubits of a profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodHypothesis {
    /// First qubit from 0 with `a_z > eps`.
    pub l: u32,
    /// Offset from the last qubit of the first signal-bearing qubit.
    pub qprime: u32,
    /// `n - 1 - q'`.
    pub qstar: u32,
    /// `2^q' * r'` for odd `r'` in `[2^l, 2^(l+1))`, ascending.
    pub candidates: Vec<u64>,
}

/// Log of one recovery attempt at a fixed qubit count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundTrace {
    pub qubits: u32,
    pub l: Option<u32>,
    pub qprime: Option<u32>,
    pub candidate_min: Option<u64>,
    pub candidate_max: Option<u64>,
    pub candidate_count: usize,
    /// `a_z^(q*)`, the value the secant equation is solved against.
    pub condition: Option<f64>,
    pub iterates: Vec<f64>,
    pub period: Option<u64>,
    pub validated: Option<bool>,
    pub error: Option<String>,
}

impl RoundTrace {
    fn empty(qubits: u32) -> Self {
        Self {
            qubits,
            l: None,
            qprime: None,
            candidate_min: None,
            candidate_max: None,
            candidate_count: 0,
            condition: None,
            iterates: Vec::new(),
            period: None,
            validated: None,
            error: None,
        }
    }

    fn with_hypothesis(qubits: u32, hyp: &PeriodHypothesis) -> Self {
        Self {
            l: Some(hyp.l),
            qprime: Some(hyp.qprime),
            candidate_min: hyp.candidates.first().copied(),
            candidate_max: hyp.candidates.last().copied(),
            candidate_count: hyp.candidates.len(),
            ..Self::empty(qubits)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinderResult {
    pub period: Option<u64>,
    /// Secant iterations of the deciding round.
    pub iterations: u32,
    pub qubits_used: u32,
    pub trace: Vec<RoundTrace>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub bits: u32,
    pub extra: u32,
    pub total_periods: u64,
    pub correct: u64,
    pub accuracy: f64,
}

/// Where [`find_period`] gets its profiles from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileSource {
    /// Closed-form marginals of the canonical state (`x0 = 0`).
    Direct,
    /// Partial traces of a full two-register simulation. `None` post-selects
    /// on `f(0)`.
    FullCircuit { a0: Option<A0Mode> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinderConfig {
    pub eps_zero: f64,
    pub source: ProfileSource,
}

impl Default for FinderConfig {
    fn default() -> Self {
        Self { eps_zero: DEFAULT_EPS_ZERO, source: ProfileSource::Direct }
    }
}

/// Narrows the period to a candidate family from the signal-bearing qubits.
pub fn hypothesize(profile: &MarginalProfile, eps: f64) -> Result<PeriodHypothesis> {
    let n = profile.az.len() as u32;
    let l = profile
        .az
        .iter()
        .position(|&a| a > eps)
        .ok_or(Error::DegenerateProfile { eps })? as u32;
    let qprime = profile
        .az
        .iter()
        .rev()
        .position(|&a| a > eps)
        .expect("some qubit carries signal") as u32;
    let limit = 1u64 << n.min(63);
    let candidates: Vec<u64> = if l == 0 {
        vec![1u64 << qprime]
    } else {
        ((1u64 << l) + 1..1u64 << (l + 1)).step_by(2).map(|odd| odd << qprime).collect()
    };
    let candidates: Vec<u64> = candidates.into_iter().filter(|&r| r < limit).collect();
    if candidates.is_empty() {
        return Err(Error::NoCandidates { l, qprime, n });
    }
    Ok(PeriodHypothesis { l, qprime, qstar: n - 1 - qprime, candidates })
}

/// Distances closer than this count as a tie. Secant roots often land
/// exactly between two candidates, where rounding noise would otherwise
/// decide.
const TIE_TOLERANCE: f64 = 1e-9;

/// Nearest element of the ascending slice `candidates`; ties go to the smaller.
fn nearest(candidates: &[u64], key: impl Fn(u64) -> f64) -> u64 {
    let mut best = candidates[0];
    let mut best_key = key(best);
    for &c in &candidates[1..] {
        let k = key(c);
        if k < best_key - TIE_TOLERANCE {
            (best, best_key) = (c, k);
        }
    }
    best
}

/// Picks the period among the hypothesis candidates. Up to two candidates
/// are compared against the approximate model directly; otherwise the
/// secant method runs on the smooth model, seeded at the midpoint of the
/// candidate range.
pub fn secant_refine(profile: &MarginalProfile, hyp: &PeriodHypothesis, eps: f64) -> Result<FinderResult> {
    let n = profile.az.len() as u32;
    let mut trace = RoundTrace::with_hypothesis(n, hyp);
    let (period, iterations) = refine(profile, hyp, eps, &mut trace)?;
    Ok(FinderResult { period: Some(period), iterations, qubits_used: n, trace: vec![trace] })
}

fn refine(profile: &MarginalProfile, hyp: &PeriodHypothesis, eps: f64, trace: &mut RoundTrace) -> Result<(u64, u32)> {
    let n = profile.az.len() as u32;
    let signal = profile.az[hyp.qstar as usize];
    trace.condition = Some(signal);
    if signal <= eps {
        return Err(Error::NoSignal { q: hyp.qstar, az: signal });
    }
    let model = ApproxModel::new(n, hyp.qprime)?;
    let cands = &hyp.candidates;

    if cands.len() <= 2 {
        let p = nearest(cands, |r| (signal - model.az(r).unwrap_or(f64::INFINITY)).abs());
        trace.period = Some(p);
        return Ok((p, 0));
    }

    let g = |rho: f64| signal - model.az_smooth(rho);
    let upper = 4.0 * (1u64 << n.min(61)) as f64;
    let mut prev = 0.5 * (cands[0] + cands[cands.len() - 1]) as f64;
    let mut cur = prev + (2u64 << hyp.qprime) as f64;
    trace.iterates.extend([prev, cur]);
    let mut iterations = 0;
    while iterations < SECANT_MAX_ITERATIONS {
        let (g_prev, g_cur) = (g(prev), g(cur));
        if g_cur == g_prev {
            break;
        }
        let next = cur - g_cur * (cur - prev) / (g_cur - g_prev);
        iterations += 1;
        trace.iterates.push(next);
        if !(next.is_finite() && (1.0..=upper).contains(&next)) {
            return Err(Error::NoConvergence { value: next });
        }
        let step = (next - cur).abs();
        (prev, cur) = (cur, next);
        if step < SECANT_TOLERANCE {
            break;
        }
    }
    let p = nearest(cands, |r| (r as f64 - cur).abs());
    trace.period = Some(p);
    Ok((p, iterations))
}

/// [`hypothesize`] followed by [`secant_refine`]; failures are recorded in
/// the trace and leave the period empty.
pub fn recover_period(profile: &MarginalProfile, eps: f64) -> FinderResult {
    let n = profile.az.len() as u32;
    let failed = |mut trace: RoundTrace, e: Error| {
        trace.error = Some(e.to_string());
        FinderResult { period: None, iterations: 0, qubits_used: n, trace: vec![trace] }
    };
    let hyp = match hypothesize(profile, eps) {
        Ok(hyp) => hyp,
        Err(e) => return failed(RoundTrace::empty(n), e),
    };
    let mut trace = RoundTrace::with_hypothesis(n, &hyp);
    match refine(profile, &hyp, eps, &mut trace) {
        Ok((period, iterations)) => FinderResult { period: Some(period), iterations, qubits_used: n, trace: vec![trace] },
        Err(e) => failed(trace, e),
    }
}

fn build_profile(f: &PeriodicFunction, r_true: u64, domain: Domain, source: ProfileSource) -> Result<MarginalProfile> {
    match source {
        ProfileSource::Direct => profile(domain, r_true),
        ProfileSource::FullCircuit { a0 } => {
            let f = f.with_domain(domain);
            let mode = a0.unwrap_or(A0Mode::PostSelect { a0: f.evaluate(0)? });
            let (state, _) = run_full_circuit(domain, &f, mode)?;
            Ok(profile_from_state(&state, Some(r_true)))
        }
    }
}

/// Recovers the period of `f`, adding qubits until two consecutive rounds
/// return the same validated period.
pub fn find_period(f: &PeriodicFunction, n_base: u32, max_extra: u32, cfg: &FinderConfig) -> Result<FinderResult> {
    let r_true = fundamental_period(f)?;
    let base = Domain::new(n_base)?;
    if r_true >= base.size() {
        return Err(Error::Argument(format!(
            "fundamental period {r_true} does not fit in {n_base} bits"
        )));
    }

    let mut trace = Vec::new();
    let mut previous: Option<u64> = None;
    let mut last_valid: Option<(u64, u32, u32)> = None;
    for extra in 0..=max_extra {
        let domain = Domain::new(n_base + extra)?;
        let n = domain.qubits();
        let profile = build_profile(f, r_true, domain, cfg.source)?;
        let mut round = recover_period(&profile, cfg.eps_zero);
        let mut entry = round.trace.pop().unwrap_or_else(|| RoundTrace::empty(n));

        let Some(p) = round.period else {
            previous = None;
            trace.push(entry);
            continue;
        };
        let valid = validate_period(&f.with_domain(domain), p, default_samples(domain));
        entry.validated = Some(valid);
        trace.push(entry);
        if !valid {
            previous = None;
            continue;
        }
        if previous == Some(p) {
            return Ok(FinderResult { period: Some(p), iterations: round.iterations, qubits_used: n, trace });
        }
        previous = Some(p);
        last_valid = Some((p, round.iterations, n));
    }

    Ok(match last_valid {
        Some((p, iterations, n)) => FinderResult { period: Some(p), iterations, qubits_used: n, trace },
        None => FinderResult { period: None, iterations: 0, qubits_used: n_base + max_extra, trace },
    })
}

/// Fraction of the periods `1..2^bits` recovered exactly with `bits + extra`
/// qubits, for each `extra`.
pub fn accuracy_sweep(bits: u32, extras: &[u32], eps: f64) -> Result<Vec<AccuracyReport>> {
    let base = Domain::new(bits)?;
    extras
        .iter()
        .map(|&extra| {
            let n = bits + extra;
            if n > DIRECT_MAX_QUBITS {
                return Err(Error::Capacity { what: "accuracy sweep", n, max: DIRECT_MAX_QUBITS });
            }
            let domain = Domain::new(n)?;
            let outcomes: Vec<bool> = (1..base.size())
                .into_par_iter()
                .map(|r| {
                    let p = profile(domain, r)?;
                    Ok(recover_period(&p, eps).period == Some(r))
                })
                .collect::<Result<_>>()?;
            let total_periods = base.size() - 1;
            let correct = outcomes.iter().filter(|&&ok| ok).count() as u64;
            Ok(AccuracyReport { bits, extra, total_periods, correct, accuracy: correct as f64 / total_periods as f64 })
        })
        .collect()
}
