//! Compensated accumulation primitives.
//!
//! All long reductions in this crate run through one of these accumulators in
//! a fixed (ascending-index) order, so results are independent of thread
//! count and reproducible bit-for-bit.

use num_complex::Complex64;

/// Kahan–Babuška–Neumaier compensated sum: the compensation also captures the
/// case where the incoming term is larger than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.comp += (self.sum - t) + term;
        } else {
            self.comp += (term - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Component-wise compensated complex sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl KahanComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: Complex64) {
        self.re.add(term.re);
        self.im.add(term.im);
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Error-free transformation: a + b = hi + lo exactly, |lo| <= ulp(hi)/2.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let hi = a + b;
    let a_prime = hi - b;
    let b_prime = hi - a_prime;
    let lo = (a - a_prime) + (b - b_prime);
    (hi, lo)
}

/// Unevaluated double-double value hi + lo with |lo| <= ulp(hi)/2.
/// Used as the extended-precision accumulation mode for very long prime sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, term: f64) {
        let (s, e) = two_sum(self.hi, term);
        let lo = self.lo + e;
        let (hi, lo) = quick_two_sum(s, lo);
        self.hi = hi;
        self.lo = lo;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// Requires |a| >= |b| (guaranteed after a two_sum renormalization step).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let hi = a + b;
    let lo = b - (hi - a);
    (hi, lo)
}

/// Runtime-selected accumulation strategy for real reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SumMode {
    Kahan,
    DoubleDouble,
}

/// Accumulator dispatching on [`SumMode`].
#[derive(Debug, Clone, Copy)]
pub enum Accumulator {
    Kahan(KahanSum),
    DoubleDouble(DoubleDouble),
}

impl Accumulator {
    pub fn new(mode: SumMode) -> Self {
        match mode {
            SumMode::Kahan => Accumulator::Kahan(KahanSum::new()),
            SumMode::DoubleDouble => Accumulator::DoubleDouble(DoubleDouble::new()),
        }
    }

    #[inline]
    pub fn add(&mut self, term: f64) {
        match self {
            Accumulator::Kahan(k) => k.add(term),
            Accumulator::DoubleDouble(d) => d.add(term),
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        match self {
            Accumulator::Kahan(k) => k.value(),
            Accumulator::DoubleDouble(d) => d.value(),
        }
    }
}
