//! Periodic functions driving the circuit, and period validation.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};

/// Domain-free description of a periodic function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OracleKind {
    /// `f(x) = x mod r`.
    Sawtooth { r: u64 },
    /// `f(x) = a^x mod S`.
    #[serde(rename = "modexp")]
    ModExp { a: u64, modulus: u64 },
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sawtooth { r } => write!(f, "sawtooth:r={r}"),
            Self::ModExp { a, modulus } => write!(f, "modexp:a={a},S={modulus}"),
        }
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    /// Parses `sawtooth:r=<int>` or `modexp:a=<int>,S=<int>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidOracle(format!("cannot parse oracle spec {s:?}"));
        let (kind, params) = s.split_once(':').ok_or_else(bad)?;
        let mut fields = std::collections::BTreeMap::new();
        for part in params.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            if fields.insert(k.trim(), v).is_some() {
                return Err(bad());
            }
        }
        let take = |fields: &mut std::collections::BTreeMap<&str, u64>, key| fields.remove(key).ok_or_else(bad);
        let kind = match kind.trim() {
            "sawtooth" => Self::Sawtooth { r: take(&mut fields, "r")? },
            "modexp" => Self::ModExp { a: take(&mut fields, "a")?, modulus: take(&mut fields, "S")? },
            _ => return Err(bad()),
        };
        if !fields.is_empty() {
            return Err(bad());
        }
        Ok(kind)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut result = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// A periodic function on the integers of a [`Domain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodicFunction {
    kind: OracleKind,
    #[serde(skip)]
    domain: Domain,
}

impl PeriodicFunction {
    pub fn new(kind: OracleKind, domain: Domain) -> Result<Self> {
        match kind {
            OracleKind::Sawtooth { r: 0 } => {
                return Err(Error::InvalidOracle("sawtooth period must be positive".into()))
            }
            OracleKind::ModExp { a, modulus } => {
                if modulus < 2 {
                    return Err(Error::InvalidOracle(format!("modulus {modulus} must be at least 2")));
                }
                if gcd(a, modulus) != 1 {
                    return Err(Error::InvalidOracle(format!("gcd({a}, {modulus}) != 1")));
                }
            }
            _ => {}
        }
        Ok(Self { kind, domain })
    }

    pub fn sawtooth(r: u64, domain: Domain) -> Result<Self> {
        Self::new(OracleKind::Sawtooth { r }, domain)
    }

    pub fn modexp(a: u64, modulus: u64, domain: Domain) -> Result<Self> {
        Self::new(OracleKind::ModExp { a, modulus }, domain)
    }

    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// The same function on another domain.
    pub fn with_domain(&self, domain: Domain) -> Self {
        Self { kind: self.kind, domain }
    }

    pub fn evaluate(&self, x: u64) -> Result<u64> {
        if x >= self.domain.size() {
            return Err(Error::Argument(format!("x = {x} outside [0, {})", self.domain.size())));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: u64) -> u64 {
        match self.kind {
            OracleKind::Sawtooth { r } => x % r,
            OracleKind::ModExp { a, modulus } => mod_pow(a, x, modulus),
        }
    }

    /// Exclusive upper bound on the values of `f`.
    pub fn value_bound(&self) -> u64 {
        match self.kind {
            OracleKind::Sawtooth { r } => r,
            OracleKind::ModExp { modulus, .. } => modulus,
        }
    }
}

/// Smallest `r > 0` with `f(x + r) = f(x)` for all `x`; brute force for modexp.
pub fn fundamental_period(f: &PeriodicFunction) -> Result<u64> {
    match f.kind {
        OracleKind::Sawtooth { r } => Ok(r),
        OracleKind::ModExp { a, modulus } => {
            if gcd(a, modulus) != 1 {
                return Err(Error::InvalidOracle(format!("gcd({a}, {modulus}) != 1")));
            }
            let a = a % modulus;
            let mut acc = a;
            let mut order = 1;
            while acc != 1 % modulus {
                acc = (acc as u128 * a as u128 % modulus as u128) as u64;
                order += 1;
            }
            Ok(order)
        }
    }
}

/// Default number of sample points for [`validate_period`]: every `x` up to
/// `N = 2^16`, 1024 evenly spaced points beyond.
pub fn default_samples(domain: Domain) -> u64 {
    if domain.size() <= 1 << 16 {
        domain.size()
    } else {
        1024
    }
}

fn shift_invariant(f: &PeriodicFunction, r: u64, samples: u64) -> bool {
    let size = f.domain.size();
    if r == 0 || r >= size {
        return false;
    }
    let span = size - r;
    let count = samples.clamp(1, span);
    (0..count).all(|i| {
        let x = (i as u128 * span as u128 / count as u128) as u64;
        f.eval_unchecked(x) == f.eval_unchecked(x + r)
    })
}

/// True iff `r` passes the shift check on `samples` points and no proper
/// divisor of `r` does, i.e. `r` looks like the fundamental period.
pub fn validate_period(f: &PeriodicFunction, r: u64, samples: u64) -> bool {
    if !shift_invariant(f, r, samples) {
        return false;
    }
    let mut d = 1;
    while d * d <= r {
        if r.is_multiple_of(d) {
            for div in [d, r / d] {
                if div < r && shift_invariant(f, div, samples) {
                    return false;
                }
            }
        }
        d += 1;
    }
    true
}
