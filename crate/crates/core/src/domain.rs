//! Domain bookkeeping and bit-string index sets.
//!
//! Bit `l` of an integer is qubit `l`; qubit `n - 1` is the most significant
//! bit. Every other module relies on this convention.

use serde::Serialize;

use crate::error::{Error, Result};

/// Problem size: `n` qubits spanning the integers `[0, 2^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Domain {
    n: u32,
}

impl Domain {
    pub const MAX_QUBITS: u32 = 62;

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > Self::MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        Ok(Self { n })
    }

    pub fn qubits(&self) -> u32 {
        self.n
    }

    /// `N = 2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn check_qubit(&self, q: u32) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitIndex { q, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Periods must satisfy `1 <= r <= N - 1`.
    pub fn check_period(&self, r: u64) -> Result<()> {
        if r == 0 || r >= self.size() {
            Err(Error::Period { r, max: self.size() - 1 })
        } else {
            Ok(())
        }
    }
}

/// An `n`-bit string read as the integer `sum_l b_l 2^l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    n: u32,
}

impl BitString {
    pub fn new(domain: Domain, value: u64) -> Result<Self> {
        if value >= domain.size() {
            return Err(Error::Argument(format!(
                "bit string {value} does not fit in {} bits",
                domain.qubits()
            )));
        }
        Ok(Self { value, n: domain.qubits() })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bit(&self, q: u32) -> bool {
        (self.value >> q) & 1 == 1
    }
}

/// Inserts a zero bit at position `q` of `counter`, shifting the higher
/// bits up by one. Enumerating `counter` over `[0, 2^(n-1))` visits every
/// string with bit `q` clear, in ascending order.
#[inline]
pub(crate) fn insert_zero_bit(counter: usize, q: u32) -> usize {
    let low_mask = (1usize << q) - 1;
    ((counter & !low_mask) << 1) | (counter & low_mask)
}

/// The strings with bit `q` equal to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BetaSet {
    domain: Domain,
    q: u32,
}

impl BetaSet {
    pub fn new(domain: Domain, q: u32) -> Result<Self> {
        domain.check_qubit(q)?;
        Ok(Self { domain, q })
    }

    pub fn qubit(&self) -> u32 {
        self.q
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn contains(&self, b: u64) -> bool {
        b < self.domain.size() && (b >> self.q) & 1 == 0
    }

    /// `|beta_q| = 2^(n-1)`.
    pub fn len(&self) -> u64 {
        self.domain.size() / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Members as raw indices, ascending.
    pub fn indices(&self) -> impl Iterator<Item = usize> + Clone {
        let q = self.q;
        (0..self.len() as usize).map(move |c| insert_zero_bit(c, q))
    }

    /// Pairs `(b, xi(b))` of each member with its complement at qubit `q`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + Clone {
        let bit = 1usize << self.q;
        self.indices().map(move |b| (b, b | bit))
    }
}

/// Enumerates `beta_q` in ascending order.
pub fn beta_members(domain: Domain, q: u32) -> Result<impl Iterator<Item = BitString>> {
    let set = BetaSet::new(domain, q)?;
    let n = domain.qubits();
    Ok(set.indices().map(move |b| BitString { value: b as u64, n }))
}

/// `xi(b)`: the string `b` with bit `q` raised from 0 to 1.
pub fn complement_string(b: BitString, q: u32) -> Result<BitString> {
    if q >= b.n {
        return Err(Error::QubitIndex { q, n: b.n });
    }
    if b.bit(q) {
        return Err(Error::Argument(format!("bit {q} of {} is already set", b.value)));
    }
    Ok(BitString { value: b.value | (1 << q), n: b.n })
}

/// Half-open interval `[lo, hi)` on the real line with integer endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: u64,
}

impl Interval {
    /// Whether the rational `num / den` lies in `[lo, hi)`; exact.
    pub fn contains_ratio(&self, num: u64, den: u64) -> bool {
        let (num, den) = (num as u128, den as u128);
        self.lo as u128 * den <= num && num < self.hi as u128 * den
    }

    pub fn width(&self) -> u64 {
        self.hi - self.lo
    }
}

/// The union of real intervals spanned by a `beta_q` set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalRange {
    pub intervals: Vec<Interval>,
}

impl IntervalRange {
    pub fn contains(&self, x: u64) -> bool {
        self.contains_ratio(x, 1)
    }

    pub fn contains_ratio(&self, num: u64, den: u64) -> bool {
        self.intervals.iter().any(|iv| iv.contains_ratio(num, den))
    }

    /// Total length of the union.
    pub fn measure(&self) -> u64 {
        self.intervals.iter().map(Interval::width).sum()
    }
}

/// The `2^q'` runs of width `N / 2^(q'+1)` covering `beta_q`, `q' = n - 1 - q`.
pub fn beta_range(domain: Domain, q: u32) -> Result<IntervalRange> {
    domain.check_qubit(q)?;
    let qprime = domain.qubits() - 1 - q;
    let spacing = domain.size() >> qprime;
    let width = spacing / 2;
    let intervals = (0..1u64 << qprime)
        .map(|i| Interval { lo: i * spacing, hi: i * spacing + width })
        .collect();
    Ok(IntervalRange { intervals })
}
