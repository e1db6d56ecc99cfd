/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// First, second and fourth moments of a stream of errors.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ErrorMoments {
    pub(crate) n: u64,
    s1: CompensatedSum,
    s2: CompensatedSum,
    s4: CompensatedSum,
}

impl ErrorMoments {
    pub(crate) fn push(&mut self, e: f64) {
        let e2 = e * e;
        self.n += 1;
        self.s1.add(e);
        self.s2.add(e2);
        self.s4.add(e2 * e2);
    }

    pub(crate) fn mean(&self) -> f64 {
        self.s1.value() / self.n as f64
    }

    pub(crate) fn mean_sq(&self) -> f64 {
        self.s2.value() / self.n as f64
    }

    /// Standard error of the mean error.
    pub(crate) fn mean_stderr(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return f64::NAN;
        }
        let var = (self.s2.value() - n * self.mean().powi(2)) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }

    /// Standard error of the mean squared error.
    pub(crate) fn mean_sq_stderr(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return f64::NAN;
        }
        let var = (self.s4.value() - n * self.mean_sq().powi(2)) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

/// Binomial standard error of a proportion.
pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
