//! Logarithmic and natural density of a positivity set that only changes at
//! jump points, integrated exactly over the intervals between jumps.

/// Tracks `∫_{[1,x] ∩ P} dx/x` and `∫_{[1,x] ∩ P} dx` for a set `P` given by
/// its sign after each jump.
#[derive(Clone, Debug)]
pub struct PositivityIntegrator {
    last: f64,
    positive: bool,
    log_measure: f64,
    lin_measure: f64,
}

impl Default for PositivityIntegrator {
    fn default() -> Self {
        PositivityIntegrator {
            last: 1.0,
            positive: false,
            log_measure: 0.0,
            lin_measure: 0.0,
        }
    }
}

impl PositivityIntegrator {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set is `positive_after` on `[at, next jump)`. Jumps must not decrease.
    pub fn jump(&mut self, at: f64, positive_after: bool) {
        debug_assert!(at >= self.last);
        if positive_after == self.positive {
            return;
        }
        if self.positive {
            self.log_measure += (at / self.last).ln();
            self.lin_measure += at - self.last;
        }
        self.last = at;
        self.positive = positive_after;
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn log_measure(&self, x: f64) -> f64 {
        if self.positive && x > self.last {
            self.log_measure + (x / self.last).ln()
        } else {
            self.log_measure
        }
    }

    pub fn lin_measure(&self, x: f64) -> f64 {
        if self.positive && x > self.last {
            self.lin_measure + (x - self.last)
        } else {
            self.lin_measure
        }
    }

    /// `(1/log x) ∫_{[1,x] ∩ P} dt/t`.
    pub fn log_density(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 0.0;
        }
        self.log_measure(x) / x.ln()
    }

    /// `(1/x) ∫_{[1,x] ∩ P} dt`.
    pub fn natural_density(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 0.0;
        }
        self.lin_measure(x) / x
    }
}
