use num_complex::Complex64;

/// Qubit count from which sums over `beta_q` switch to compensated
/// accumulation.
pub(crate) const COMPENSATED_FROM: u32 = 16;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums reals, compensated when `n >= COMPENSATED_FROM`.
pub(crate) fn sum_real(n: u32, values: impl Iterator<Item = f64>) -> f64 {
    if n >= COMPENSATED_FROM {
        let mut acc = Neumaier::default();
        values.for_each(|v| acc.add(v));
        acc.value()
    } else {
        values.sum()
    }
}

/// Sums complex numbers componentwise, compensated when `n >= COMPENSATED_FROM`.
pub(crate) fn sum_complex(n: u32, values: impl Iterator<Item = Complex64>) -> Complex64 {
    if n >= COMPENSATED_FROM {
        let (mut re, mut im) = (Neumaier::default(), Neumaier::default());
        values.for_each(|v| {
            re.add(v.re);
            im.add(v.im);
        });
        Complex64::new(re.value(), im.value())
    } else {
        values.sum()
    }
}
