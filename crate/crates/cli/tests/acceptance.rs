//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p qpf-rdm-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;

use num_complex::Complex64;
use qpf_rdm::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn d(n: u32) -> Domain {
    Domain::new(n).unwrap()
}

/// Power-of-two periods: every marginal is exactly 1/2 or 0.
fn c1_power_of_two_step() -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=10 {
        for k in 0..n {
            let prof = profile(d(n), 1 << k).map_err(|e| e.to_string())?;
            for q in 0..n {
                let want = if k + q < n { 0.5 } else { 0.0 };
                worst = worst.max((prof.az[q as usize] - want).abs());
                cases += 1;
            }
        }
    }
    if worst <= 1e-12 {
        Ok(format!("{cases} cases, max deviation {worst:.1e}"))
    } else {
        Err(format!("max deviation {worst:e} > 1e-12"))
    }
}

/// Two-register simulation and closed form agree on every marginal.
fn c2_path_equivalence() -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=6 {
        for r in 1..d(n).size() {
            let f = PeriodicFunction::sawtooth(r, d(n)).unwrap();
            let a0 = f.evaluate(0).unwrap();
            let (psi, _) = run_full_circuit(d(n), &f, A0Mode::PostSelect { a0 }).map_err(|e| e.to_string())?;
            for q in 0..n {
                let full = rdm_from_state(&psi, q).unwrap().rho00;
                worst = worst.max((full - rho00_direct(d(n), r, q).unwrap()).abs());
                cases += 1;
            }
        }
    }
    if worst <= 1e-9 {
        Ok(format!("{cases} (n, r, q) triples, max gap {worst:.1e}"))
    } else {
        Err(format!("max gap {worst:e} > 1e-9"))
    }
}

/// Signal-bearing (q, r) pairs are exactly those of the peak rule.
fn c3_peak_pattern() -> Check {
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for n in 1..=8 {
        for r in 1..d(n).size() {
            let prof = profile(d(n), r).unwrap();
            for q in 0..n {
                cases += 1;
                if (prof.az[q as usize] > 1e-6) != peak_predicate(n, q, r) {
                    mismatches.push((n, q, r));
                }
            }
        }
    }
    if mismatches.is_empty() {
        Ok(format!("{cases} cases, 0 mismatches"))
    } else {
        Err(format!("{} mismatches, first {:?}", mismatches.len(), &mismatches[..mismatches.len().min(5)]))
    }
}

/// With `2 * bits` qubits every period below `2^bits` is recovered.
fn c4_unit_accuracy() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for bits in [6, 7, 8] {
        let report = accuracy_sweep(bits, &[bits], DEFAULT_EPS_ZERO).map_err(|e| e.to_string())?[0];
        parts.push(format!("{}/{}", report.correct, report.total_periods));
        ok &= report.accuracy == 1.0 && report.total_periods == (1 << bits) - 1;
    }
    let summary = parts.join(", ");
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

/// Approximate model equals the counting model bit for bit, plus spot values.
fn c5_model_identity() -> Check {
    let mut cases = 0;
    for n in 1..=10 {
        for qprime in 0..n {
            let model = ApproxModel::new(n, qprime).unwrap();
            for r in (1..d(n).size()).filter(|&r| model.is_candidate(r)) {
                let approx = az_approx(n, qprime, r).unwrap();
                let counting = rho00_counting(d(n), r, model.qubit()).unwrap() - 0.5;
                if approx.to_bits() != counting.to_bits() {
                    return Err(format!("n={n} q'={qprime} r={r}: {approx} != {counting}"));
                }
                cases += 1;
            }
        }
    }
    let spots = [(0u32, 7u64), (1, 14)].map(|(qprime, r)| az_approx(6, qprime, r).unwrap());
    if spots.iter().any(|v| (v - 1.0 / 14.0).abs() > 1e-15) {
        return Err(format!("spot values {spots:?} != 1/14"));
    }
    Ok(format!("{cases} candidates identical, spot values 1/14"))
}

/// The offset moves the coherence but not the diagonal of a multiplicity class.
fn c6_offset_dependence() -> Check {
    let mut notes = Vec::new();
    for n in [3u32, 4, 5] {
        let mut biggest = (0.0f64, 0u64, 0u32);
        let mut class_gap: f64 = 0.0;
        for r in 2..d(n).size() {
            let f = PeriodicFunction::sawtooth(r, d(n)).unwrap();
            let rdms: Vec<(u64, Vec<OneQubitRDM>)> = (0..r)
                .map(|a0| {
                    let (psi, rec) = run_full_circuit(d(n), &f, A0Mode::PostSelect { a0 }).unwrap();
                    (rec.multiplicity, (0..n).map(|q| rdm_from_state(&psi, q).unwrap()).collect())
                })
                .collect();
            for (i, (m_i, a)) in rdms.iter().enumerate() {
                for (m_j, b) in &rdms[i + 1..] {
                    for q in 0..n as usize {
                        let moved = (a[q].rho01 - b[q].rho01).norm();
                        if moved > biggest.0 {
                            biggest = (moved, r, q as u32);
                        }
                        if m_i == m_j {
                            class_gap = class_gap.max((a[q].rho00 - b[q].rho00).abs());
                        }
                    }
                }
            }
        }
        if biggest.0 <= 1e-3 {
            return Err(format!("n={n}: coherence never moves by more than 1e-3"));
        }
        if class_gap > 1e-12 {
            return Err(format!("n={n}: rho00 differs by {class_gap:e} inside a class"));
        }
        notes.push(format!("n={n} max |d rho01| {:.3} at r={} q={}", biggest.0, biggest.1, biggest.2));
    }
    Ok(notes.join("; "))
}

struct Draw {
    n: u32,
    r: u64,
    q: u32,
    rdm: OneQubitRDM,
    rho10: Complex64,
}

fn random_draws() -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_015);
    (0..1000)
        .map(|_| {
            let n = rng.gen_range(1..=10u32);
            let r = rng.gen_range(1..1u64 << n);
            let q = rng.gen_range(0..n);
            let psi = build_psi_direct(d(n), r, 0).unwrap();
            let rdm = rdm_from_state(&psi, q).unwrap();
            let amps = psi.amplitudes();
            let bit = 1usize << q;
            let rho10: Complex64 =
                (0..amps.len()).filter(|b| b & bit == 0).map(|b| amps[b | bit] * amps[b].conj()).sum();
            Draw { n, r, q, rdm, rho10 }
        })
        .collect()
}

/// Unit trace, hermiticity and eigenvalues in [0, 1].
fn c7_rdm_sanity_trace_hermiticity_eigenvalues(draws: &[Draw]) -> Check {
    for w in draws {
        let [lo, hi] = w.rdm.eigenvalues();
        let trace_ok = (w.rdm.trace() - 1.0).abs() <= 1e-9;
        let herm_ok = (w.rho10 - w.rdm.rho01.conj()).norm() <= 1e-9;
        let eig_ok = lo >= -1e-9 && hi <= 1.0 + 1e-9;
        if !(trace_ok && herm_ok && eig_ok) {
            return Err(format!("n={} r={} q={} trace={} eig=[{lo}, {hi}]", w.n, w.r, w.q, w.rdm.trace()));
        }
    }
    Ok(format!("{} random draws", draws.len()))
}

/// Every one-qubit marginal on the Bloch sphere surface, `2|a| = 1`.
fn c7_rdm_sanity_purity(draws: &[Draw]) -> Check {
    let bad: Vec<&Draw> = draws.iter().filter(|w| (2.0 * w.rdm.bloch().norm() - 1.0).abs() > 1e-9).collect();
    match bad.first() {
        None => Ok(format!("{} random draws", draws.len())),
        Some(w) => Err(format!(
            "{}/{} draws off the surface, e.g. n={} r={} q={} has 2|a| = {:.6}",
            bad.len(),
            draws.len(),
            w.n,
            w.r,
            w.q,
            2.0 * w.rdm.bloch().norm()
        )),
    }
}

fn run_cli(args: &[&str], out: &Path, threads: &str) -> (i32, Vec<u8>) {
    let status = Command::new(env!("CARGO_BIN_EXE_qpf-rdm"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("QPF_RDM_THREADS", threads)
        .status()
        .expect("binary runs");
    (status.code().unwrap_or(-1), std::fs::read(out).unwrap_or_default())
}

/// Repeated runs, including with different worker counts, are byte-identical.
fn c8_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: &[&[&str]] = &[
        &["simulate", "--n", "6"],
        &["simulate", "--n", "6", "--a0", "sample", "--seed", "11"],
        &["simulate", "--n", "5", "--mode", "full", "--a0", "sample", "--seed", "3", "--format", "json"],
        &["pattern", "--n", "7"],
        &["find-period", "--oracle", "sawtooth:r=21", "--bits", "6", "--max-extra", "6"],
        &["find-period", "--oracle", "modexp:a=2,S=21", "--bits", "5", "--max-extra", "3", "--mode", "full", "--a0", "sample", "--seed", "5"],
        &["accuracy", "--bits", "5", "--extra", "0..5"],
    ];
    for (i, args) in commands.iter().enumerate() {
        let runs: Vec<(i32, Vec<u8>)> = ["1", "4", "4"]
            .iter()
            .enumerate()
            .map(|(j, threads)| run_cli(args, &dir.path().join(format!("{i}-{j}")), threads))
            .collect();
        if runs[0].0 != 0 || runs[0].1.is_empty() {
            return Err(format!("{args:?} exited {}", runs[0].0));
        }
        if runs.iter().any(|r| r != &runs[0]) {
            return Err(format!("{args:?} output differs between runs"));
        }
    }
    Ok(format!("{} commands x 3 runs identical", commands.len()))
}

fn main() {
    // silence the default hook; failures are reported on the criterion line
    panic::set_hook(Box::new(|_| {}));
    let draws = random_draws();
    let criteria: Vec<Criterion> = vec![
        ("c1_power_of_two_step", Box::new(c1_power_of_two_step)),
        ("c2_path_equivalence", Box::new(c2_path_equivalence)),
        ("c3_peak_pattern", Box::new(c3_peak_pattern)),
        ("c4_unit_accuracy", Box::new(c4_unit_accuracy)),
        ("c5_model_identity", Box::new(c5_model_identity)),
        ("c6_offset_dependence", Box::new(c6_offset_dependence)),
        ("c7_rdm_sanity_trace_hermiticity_eigenvalues", Box::new(|| c7_rdm_sanity_trace_hermiticity_eigenvalues(&draws))),
        ("c7_rdm_sanity_purity", Box::new(|| c7_rdm_sanity_purity(&draws))),
        ("c8_determinism", Box::new(c8_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
