use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpf_rdm::{OracleKind, DEFAULT_EPS_ZERO};

#[derive(Debug, Parser)]
#[command(name = "qpf-rdm", version, about = "Period finding from one-qubit reduced density matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the one-qubit RDMs of every qubit, for one period or all of them.
    Simulate(SimulateArgs),
    /// Check which (q, r) carry signal against the peak rule.
    Pattern(PatternArgs),
    /// Recover the period of an oracle from its marginals.
    FindPeriod(FindPeriodArgs),
    /// Fraction of periods recovered as a function of extra qubits.
    Accuracy(AccuracyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Closed-form marginals.
    Direct,
    /// Two-register state-vector simulation (n <= 13).
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// How the second-register measurement is resolved: `postselect`,
/// `postselect:<value>` or `sample`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum A0Arg {
    /// Post-select on `f(0)` when no value is given.
    #[default]
    PostSelect,
    PostSelectOn(u64),
    Sample,
}

impl FromStr for A0Arg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "postselect" => Ok(Self::PostSelect),
            None if s == "sample" => Ok(Self::Sample),
            Some(("postselect", v)) => v.parse().map(Self::PostSelectOn).map_err(|_| format!("bad a0 value {v:?}")),
            _ => Err(format!("expected postselect, postselect:<int> or sample, got {s:?}")),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: u32,
    /// Single period; every r in [1, 2^n) when absent.
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long, value_enum, default_value = "direct")]
    pub mode: Mode,
    #[arg(long, default_value = "postselect")]
    pub a0: A0Arg,
    /// Base seed for `--a0 sample`; period r uses seed + r.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = DEFAULT_EPS_ZERO)]
    pub eps_zero: f64,
    /// Largest n accepted for the exhaustive check.
    #[arg(long, default_value_t = 10)]
    pub limit: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FindPeriodArgs {
    /// `sawtooth:r=<int>` or `modexp:a=<int>,S=<int>`.
    #[arg(long)]
    pub oracle: OracleKind,
    #[arg(long)]
    pub bits: u32,
    /// Extra qubits allowed on top of `bits`; defaults to `bits`.
    #[arg(long)]
    pub max_extra: Option<u32>,
    #[arg(long, value_enum, default_value = "direct")]
    pub mode: Mode,
    #[arg(long, default_value = "postselect")]
    pub a0: A0Arg,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_EPS_ZERO)]
    pub eps_zero: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AccuracyArgs {
    #[arg(long)]
    pub bits: u32,
    /// Extra qubits: `3`, `0..6` (inclusive) or `0,2,4`.
    #[arg(long, value_parser = parse_extras)]
    pub extra: Extras,
    #[arg(long, default_value_t = DEFAULT_EPS_ZERO)]
    pub eps_zero: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extras(pub Vec<u32>);

pub fn parse_extras(s: &str) -> Result<Extras, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad extra-qubit count {t:?}"));
    let values = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    Ok(Extras(values))
}
