use rayon::prelude::*;
use serde::Serialize;

use qpf_rdm::state::FULL_CIRCUIT_MAX_QUBITS;
use qpf_rdm::{
    accuracy_sweep, find_period, peak_predicate, profile, rdm_direct, rdm_from_state, run_full_circuit,
    sample_comb_offset, A0Mode, Domain, Error, FinderConfig, OneQubitRDM, PeriodicFunction, ProfileSource, RoundTrace,
};

use crate::args::{A0Arg, AccuracyArgs, FindPeriodArgs, Format, Mode, PatternArgs, SimulateArgs};
use crate::format::{float, Csv, SCHEMA};
use crate::{CliError, Outcome, EXIT_MISMATCH, EXIT_NOT_FOUND, EXIT_OK};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct RdmRow {
    n: u32,
    r: u64,
    q: u32,
    rho00: f64,
    rho01_re: f64,
    rho01_im: f64,
    ax: f64,
    ay: f64,
    az: f64,
}

impl RdmRow {
    fn new(n: u32, r: u64, rdm: &OneQubitRDM) -> Self {
        let b = rdm.bloch();
        Self { n, r, q: rdm.q, rho00: rdm.rho00, rho01_re: rdm.rho01.re, rho01_im: rdm.rho01.im, ax: b.ax, ay: b.ay, az: b.az }
    }
}

fn sample_seed(seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Usage("--a0 sample requires --seed".into()))
}

fn rows_for_period(args: &SimulateArgs, domain: Domain, r: u64) -> Result<Vec<RdmRow>, CliError> {
    let n = domain.qubits();
    let rdms: Vec<OneQubitRDM> = match args.mode {
        Mode::Direct => {
            let x0 = match args.a0 {
                A0Arg::PostSelect => 0,
                A0Arg::PostSelectOn(v) if v >= r => return Err(Error::PostSelection(v).into()),
                A0Arg::PostSelectOn(v) => v,
                A0Arg::Sample => sample_comb_offset(domain, r, sample_seed(args.seed)?.wrapping_add(r))?.a0,
            };
            (0..n).map(|q| rdm_direct(domain, r, q, x0)).collect::<Result<_, _>>()?
        }
        Mode::Full => {
            let f = PeriodicFunction::sawtooth(r, domain)?;
            let mode = match args.a0 {
                A0Arg::PostSelect => A0Mode::PostSelect { a0: 0 },
                A0Arg::PostSelectOn(a0) => A0Mode::PostSelect { a0 },
                A0Arg::Sample => A0Mode::Sample { seed: sample_seed(args.seed)?.wrapping_add(r) },
            };
            let (psi, _) = run_full_circuit(domain, &f, mode)?;
            (0..n).map(|q| rdm_from_state(&psi, q)).collect::<Result<_, _>>()?
        }
    };
    Ok(rdms.iter().map(|rdm| RdmRow::new(n, r, rdm)).collect())
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let domain = Domain::new(args.n)?;
    if args.mode == Mode::Full && args.n > FULL_CIRCUIT_MAX_QUBITS {
        return Err(Error::Capacity { what: "--mode full", n: args.n, max: FULL_CIRCUIT_MAX_QUBITS }.into());
    }
    if args.a0 == A0Arg::Sample {
        sample_seed(args.seed)?;
    }
    let periods: Vec<u64> = match args.r {
        Some(r) => {
            domain.check_period(r)?;
            vec![r]
        }
        None => (1..domain.size()).collect(),
    };
    let rows: Vec<Vec<RdmRow>> =
        periods.par_iter().map(|&r| rows_for_period(args, domain, r)).collect::<Result<_, _>>()?;
    let rows = rows.into_iter().flatten();

    let bytes = match args.format {
        Format::Csv => {
            let mut csv = Csv::new(&["n", "r", "q", "rho00", "rho01_re", "rho01_im", "ax", "ay", "az"]);
            for w in rows {
                csv.row(&[
                    &w.n,
                    &w.r,
                    &w.q,
                    &float(w.rho00),
                    &float(w.rho01_re),
                    &float(w.rho01_im),
                    &float(w.ax),
                    &float(w.ay),
                    &float(w.az),
                ]);
            }
            csv.into_bytes()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                schema: &'static str,
                rows: Vec<RdmRow>,
            }
            json(&Doc { schema: SCHEMA, rows: rows.collect() })
        }
    };
    Ok(Outcome { bytes, code: EXIT_OK })
}

pub fn pattern(args: &PatternArgs) -> Result<Outcome, CliError> {
    if args.n > args.limit {
        return Err(Error::Capacity { what: "pattern check", n: args.n, max: args.limit }.into());
    }
    let domain = Domain::new(args.n)?;
    let n = args.n;
    let profiles: Vec<Vec<f64>> =
        (1..domain.size()).into_par_iter().map(|r| profile(domain, r).map(|p| p.az)).collect::<Result<_, _>>()?;

    let mut csv = Csv::new(&["n", "q", "r", "predicted", "observed", "match"]);
    let mut mismatches = 0;
    for q in 0..n {
        for (i, az) in profiles.iter().enumerate() {
            let r = i as u64 + 1;
            let predicted = peak_predicate(n, q, r);
            let observed = az[q as usize] > args.eps_zero;
            mismatches += usize::from(predicted != observed);
            csv.row(&[&n, &q, &r, &predicted, &observed, &(predicted == observed)]);
        }
    }
    let code = if mismatches == 0 { EXIT_OK } else { EXIT_MISMATCH };
    Ok(Outcome { bytes: csv.into_bytes(), code })
}

pub fn find(args: &FindPeriodArgs) -> Result<Outcome, CliError> {
    let source = match (args.mode, args.a0) {
        (Mode::Direct, A0Arg::PostSelect) => ProfileSource::Direct,
        (Mode::Direct, _) => return Err(CliError::Usage("--a0 only applies to --mode full".into())),
        (Mode::Full, A0Arg::PostSelect) => ProfileSource::FullCircuit { a0: None },
        (Mode::Full, A0Arg::PostSelectOn(a0)) => ProfileSource::FullCircuit { a0: Some(A0Mode::PostSelect { a0 }) },
        (Mode::Full, A0Arg::Sample) => {
            ProfileSource::FullCircuit { a0: Some(A0Mode::Sample { seed: sample_seed(args.seed)? }) }
        }
    };
    let max_extra = args.max_extra.unwrap_or(args.bits);
    if args.mode == Mode::Full && args.bits + max_extra > FULL_CIRCUIT_MAX_QUBITS {
        return Err(Error::Capacity { what: "--mode full", n: args.bits + max_extra, max: FULL_CIRCUIT_MAX_QUBITS }.into());
    }
    let f = PeriodicFunction::new(args.oracle, Domain::new(args.bits)?)?;
    let cfg = FinderConfig { eps_zero: args.eps_zero, source };
    let result = find_period(&f, args.bits, max_extra, &cfg)?;

    #[derive(Serialize)]
    struct Doc<'a> {
        schema: &'static str,
        oracle: String,
        period: Option<u64>,
        qubits_used: u32,
        iterations: u32,
        trace: &'a [RoundTrace],
    }
    let doc = Doc {
        schema: SCHEMA,
        oracle: args.oracle.to_string(),
        period: result.period,
        qubits_used: result.qubits_used,
        iterations: result.iterations,
        trace: &result.trace,
    };
    let code = if result.period.is_some() { EXIT_OK } else { EXIT_NOT_FOUND };
    Ok(Outcome { bytes: json(&doc), code })
}

pub fn accuracy(args: &AccuracyArgs) -> Result<Outcome, CliError> {
    let reports = accuracy_sweep(args.bits, &args.extra.0, args.eps_zero)?;
    let mut csv = Csv::new(&["bits", "extra", "total", "correct", "accuracy"]);
    for a in reports {
        csv.row(&[&a.bits, &a.extra, &a.total_periods, &a.correct, &float(a.accuracy)]);
    }
    Ok(Outcome { bytes: csv.into_bytes(), code: EXIT_OK })
}

fn json(value: &impl Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}
