//! Analytic and approximate models of the marginals `a_z^(q)(r)`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::domain::{beta_range, Domain};
use crate::error::{Error, Result};

/// Largest observed `|az_approx - a_z|` over the first quarter of the
/// domain (`r < N/4`) for `n = 6` and the last two qubits. Regression bound
/// for the approximate model; the exhaustive maximum is `1/140`.
pub const FIRST_QUARTER_BOUND: f64 = 0.00715;

/// Splits `r > 0` into `(k, r')` with `r = 2^k r'` and `r'` odd.
pub fn split_odd(r: u64) -> (u32, u64) {
    let k = r.trailing_zeros();
    (k, r >> k)
}

fn check_nq(n: u32, q: u32) -> Result<()> {
    Domain::new(n)?.check_qubit(q)
}

/// Marginal for `r = 2^k`: `1/2` while `k <= n - q - 1`, zero above.
pub fn az_analytic_pow2(n: u32, k: u32, q: u32) -> Result<f64> {
    check_nq(n, q)?;
    if k >= n {
        return Err(Error::Argument(format!("exponent k = {k} must be below n = {n}")));
    }
    Ok(if k + q < n { 0.5 } else { 0.0 })
}

/// Whether `a_z^(q)(r) > 0`: `r = 2^k r'` with odd `r' < 2^(q+1)` and
/// `k <= n - 1 - q`.
pub fn peak_predicate(n: u32, q: u32, r: u64) -> bool {
    if r == 0 || q >= n || n > 63 {
        return false;
    }
    let (k, odd) = split_odd(r);
    odd < (1u64 << (q + 1)) && k + q < n
}

/// Periods with a predicted peak on one qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeakPattern {
    pub n: u32,
    pub q: u32,
    pub peaks: BTreeSet<u64>,
}

impl PeakPattern {
    pub fn new(n: u32, q: u32) -> Result<Self> {
        let domain = Domain::new(n)?;
        domain.check_qubit(q)?;
        let peaks = (1..domain.size()).filter(|&r| peak_predicate(n, q, r)).collect();
        Ok(Self { n, q, peaks })
    }
}

/// Peaks gained and lost when moving from qubit `q - 1` to `q`:
/// added `2^k r'` for odd `r'` in `(2^q, 2^(q+1))`, `k <= n - 1 - q`;
/// removed `2^(n-q) r'` for odd `r' < 2^q`.
pub fn peak_set_delta(n: u32, q: u32) -> Result<(BTreeSet<u64>, BTreeSet<u64>)> {
    check_nq(n, q)?;
    if q == 0 {
        return Err(Error::Argument("qubit 0 has no predecessor".into()));
    }
    let added = ((1u64 << q) + 1..1u64 << (q + 1))
        .step_by(2)
        .flat_map(|odd| (0..n - q).map(move |k| odd << k))
        .collect();
    let removed = (1..1u64 << q).step_by(2).map(|odd| odd << (n - q)).collect();
    Ok((added, removed))
}

/// Counting model: the fraction of the points `j N / r`, `j < r`, that fall
/// inside the intervals spanned by `beta_q`.
pub fn rho00_counting(domain: Domain, r: u64, q: u32) -> Result<f64> {
    domain.check_period(r)?;
    let range = beta_range(domain, q)?;
    let size = domain.size() as u128;
    let count = (0..r as u128)
        .filter(|&j| {
            // last interval whose start is <= j N / r
            let idx = range.intervals.partition_point(|iv| iv.lo as u128 * r as u128 <= j * size);
            idx > 0 && range.intervals[idx - 1].contains_ratio((j * size) as u64, r)
        })
        .count();
    Ok(count as f64 / r as f64)
}

/// Approximate marginal on qubit `n - 1 - q'` for the candidate family
/// `r = 2^q' r'` (odd `r' < 2^(n - q')`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ApproxModel {
    pub n: u32,
    pub qprime: u32,
}

impl ApproxModel {
    pub fn new(n: u32, qprime: u32) -> Result<Self> {
        check_nq(n, qprime)?;
        Ok(Self { n, qprime })
    }

    /// The qubit this model describes.
    pub fn qubit(&self) -> u32 {
        self.n - 1 - self.qprime
    }

    pub fn is_candidate(&self, r: u64) -> bool {
        r != 0 && {
            let (k, odd) = split_odd(r);
            k == self.qprime && odd < 1u64 << (self.n - self.qprime)
        }
    }

    /// `(2^q' / r) * ceil((r / 2^q') / 2) - 1/2`.
    pub fn az(&self, r: u64) -> Result<f64> {
        if !self.is_candidate(r) {
            return Err(Error::NotCandidate { r, qprime: self.qprime, limit: 1u64 << (self.n - self.qprime) });
        }
        let odd = r >> self.qprime;
        let matches = (odd.div_ceil(2)) << self.qprime;
        Ok(matches as f64 / r as f64 - 0.5)
    }

    /// Smooth continuation `2^q' / (2 rho)` over real `rho`; equal to
    /// [`ApproxModel::az`] on the candidate family.
    pub fn az_smooth(&self, rho: f64) -> f64 {
        (1u64 << self.qprime) as f64 / (2.0 * rho)
    }
}

/// Approximate `a_z` on qubit `n - 1 - q'` for `r = 2^q' r'`.
pub fn az_approx(n: u32, qprime: u32, r: u64) -> Result<f64> {
    ApproxModel::new(n, qprime)?.az(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdm::{profile, rho00_direct};

    fn d(n: u32) -> Domain {
        Domain::new(n).unwrap()
    }

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn analytic_pow2_examples() {
        assert_eq!(az_analytic_pow2(3, 0, 2), Ok(0.5));
        assert_eq!(az_analytic_pow2(3, 2, 2), Ok(0.0));
        assert_eq!(az_analytic_pow2(5, 4, 0), Ok(0.5));
        assert!(az_analytic_pow2(3, 3, 0).is_err());
        assert!(az_analytic_pow2(3, 0, 3).is_err());
    }

    #[test]
    fn peak_examples() {
        for r in 1..8 {
            assert_eq!(peak_predicate(3, 0, r), [1, 2, 4].contains(&r), "r={r}");
        }
        assert!(peak_predicate(5, 3, 22));
        assert!(!peak_predicate(5, 3, 44));
        assert_eq!(PeakPattern::new(3, 0).unwrap().peaks, set(&[1, 2, 4]));
        assert_eq!(PeakPattern::new(3, 1).unwrap().peaks, set(&[1, 2, 3, 6]));
        // new odd parts per qubit for n = 5
        let odd_parts = |q| {
            let prev = if q == 0 { BTreeSet::new() } else { PeakPattern::new(5, q - 1).unwrap().peaks };
            PeakPattern::new(5, q)
                .unwrap()
                .peaks
                .difference(&prev)
                .map(|&r| split_odd(r).1)
                .collect::<BTreeSet<_>>()
        };
        assert_eq!(odd_parts(2), set(&[5, 7]));
        assert_eq!(odd_parts(3), set(&[9, 11, 13, 15]));
        assert_eq!(odd_parts(4), (17..32).step_by(2).collect());
    }

    #[test]
    fn last_qubit_peaks_are_the_odd_periods() {
        for n in 1..=10 {
            let odd: BTreeSet<u64> = (1..1u64 << n).step_by(2).collect();
            assert_eq!(PeakPattern::new(n, n - 1).unwrap().peaks, odd);
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(peak_set_delta(3, 1).unwrap(), (set(&[3, 6]), set(&[4])));
        assert_eq!(peak_set_delta(3, 2).unwrap(), (set(&[5, 7]), set(&[2, 6])));
        assert_eq!(peak_set_delta(5, 1).unwrap(), (set(&[3, 6, 12, 24]), set(&[16])));
        assert!(peak_set_delta(3, 0).is_err());
    }

    #[test]
    fn delta_agrees_with_predicate() {
        for n in 2..=10 {
            for q in 1..n {
                let now = PeakPattern::new(n, q).unwrap().peaks;
                let before = PeakPattern::new(n, q - 1).unwrap().peaks;
                let (added, removed) = peak_set_delta(n, q).unwrap();
                assert_eq!(added, now.difference(&before).copied().collect());
                assert_eq!(removed, before.difference(&now).copied().collect());
            }
        }
    }

    #[test]
    fn predicate_matches_exact_marginals() {
        for n in 1..=8 {
            let dom = d(n);
            for r in 1..dom.size() {
                let az = profile(dom, r).unwrap().az;
                for q in 0..n {
                    assert_eq!(peak_predicate(n, q, r), az[q as usize] > 1e-6, "n={n} q={q} r={r}");
                }
            }
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(rho00_counting(d(6), 7, 5).unwrap(), 4.0 / 7.0);
        assert_eq!(rho00_counting(d(6), 6, 5).unwrap(), 0.5);
        assert_eq!(rho00_counting(d(6), 14, 4).unwrap(), 8.0 / 14.0);
    }

    #[test]
    fn counting_brute_force() {
        // float positions j N / r: exact when integral, and otherwise at least 1/r from any endpoint
        for n in 1..=7 {
            let dom = d(n);
            for q in 0..n {
                let range = beta_range(dom, q).unwrap();
                for r in 1..dom.size() {
                    let hits = (0..r)
                        .filter(|&j| {
                            let x = j as f64 * dom.size() as f64 / r as f64;
                            range.intervals.iter().any(|iv| iv.lo as f64 <= x && x < iv.hi as f64)
                        })
                        .count();
                    assert_eq!(rho00_counting(dom, r, q).unwrap(), hits as f64 / r as f64, "n={n} q={q} r={r}");
                }
            }
        }
    }

    #[test]
    fn approx_examples() {
        assert!((az_approx(6, 0, 7).unwrap() - 1.0 / 14.0).abs() < 1e-15);
        assert!((az_approx(6, 1, 14).unwrap() - 1.0 / 14.0).abs() < 1e-15);
        assert_eq!(az_approx(6, 0, 1), Ok(0.5));
        assert!(matches!(az_approx(6, 0, 6), Err(Error::NotCandidate { .. })));
        assert!(matches!(az_approx(6, 1, 7), Err(Error::NotCandidate { .. })));
        assert!(az_approx(6, 6, 64).is_err());
    }

    #[test]
    fn approx_equals_counting_model_exactly() {
        for n in 1..=10 {
            let dom = d(n);
            for qprime in 0..n {
                let model = ApproxModel::new(n, qprime).unwrap();
                for odd in (1..1u64 << (n - qprime)).step_by(2) {
                    let r = odd << qprime;
                    let counted = rho00_counting(dom, r, model.qubit()).unwrap();
                    assert_eq!(model.az(r).unwrap(), counted - 0.5, "n={n} q'={qprime} r={r}");
                }
            }
        }
    }

    #[test]
    fn approx_simplifies_to_reciprocal() {
        for n in 1..=12 {
            for qprime in 0..n {
                let model = ApproxModel::new(n, qprime).unwrap();
                for odd in (1..1u64 << (n - qprime)).step_by(2) {
                    let r = odd << qprime;
                    // 2 * 2^q' * ceil(r'/2) - r == 2^q'  <=>  az == 2^q' / (2 r)
                    assert_eq!(2 * (odd.div_ceil(2) << qprime) - r, 1 << qprime);
                    let smooth = model.az_smooth(r as f64);
                    assert!((model.az(r).unwrap() - smooth).abs() <= 4.0 * f64::EPSILON * smooth.max(0.5));
                }
            }
        }
    }

    #[test]
    fn first_quarter_regression_bound() {
        let n = 6;
        let dom = d(n);
        let mut worst: f64 = 0.0;
        for qprime in 0..2 {
            let model = ApproxModel::new(n, qprime).unwrap();
            for r in (1..dom.size() / 4).filter(|&r| model.is_candidate(r)) {
                let exact = rho00_direct(dom, r, model.qubit()).unwrap() - 0.5;
                worst = worst.max((model.az(r).unwrap() - exact).abs());
            }
        }
        assert!((worst - 1.0 / 140.0).abs() < 1e-12, "worst = {worst}");
        assert!(worst <= FIRST_QUARTER_BOUND);
    }
}
