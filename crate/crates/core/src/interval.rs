//! Outward-rounded f64 intervals and a compensated accumulator with certified bounds.
//!
//! Basic arithmetic is correctly rounded under IEEE 754, so widening a result
//! by one ulp on each side encloses the exact value. `exp` and `ln` come from
//! the platform libm, which is faithful but not correctly rounded; their
//! results are widened by [`TRANSCENDENTAL_ULPS`].

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Widening applied to libm `exp`/`ln` results.
pub const TRANSCENDENTAL_ULPS: u32 = 2;

pub fn down(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_down())
}

pub fn up(x: f64, ulps: u32) -> f64 {
    (0..ulps).fold(x, |v, _| v.next_up())
}

/// Closed interval `[lo, hi]` known to contain an exact real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn ln_2() -> Interval {
    let x = std::f64::consts::LN_2;
    Interval::new(x.next_down(), x.next_up())
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// A `u64` exactly when it fits in 53 bits.
    pub fn from_u64(n: u64) -> Self {
        let x = n as f64;
        if n < (1 << 53) {
            Interval::point(x)
        } else {
            Interval::new(down(x, 1), up(x, 1))
        }
    }

    /// Keeps the top 53 bits `q`, so `n ∈ [q·2^s, (q+1)·2^s]`.
    pub fn from_biguint(n: &BigUint) -> Self {
        let bits = n.bits();
        if bits <= 53 {
            return Interval::point(n.to_u64().expect("fits") as f64);
        }
        let shift = bits - 53;
        let q = (n >> shift).to_u64().expect("53 bits") as f64;
        let scale = pow2(shift as i64);
        let lo = q * scale;
        let hi = (q + 1.0) * scale;
        Interval::new(if lo.is_finite() { lo } else { f64::MAX }, hi)
    }

    /// Enclosure of `ln n` for `n >= 1`, valid far beyond the f64 range of `n`.
    pub fn ln_biguint(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "ln of zero");
        let bits = n.bits();
        if bits <= 53 {
            return Interval::point(n.to_u64().expect("fits") as f64).ln();
        }
        let shift = bits - 53;
        let q = (n >> shift).to_u64().expect("53 bits") as f64;
        let mantissa = Interval::new(q, q + 1.0).ln();
        mantissa + ln_2().scale(shift as f64)
    }

    pub fn from_ratio(numer: &BigUint, denom: &BigUint) -> Self {
        Interval::from_biguint(numer) / Interval::from_biguint(denom)
    }

    /// Nonnegative rationals only.
    pub fn from_big_rational(r: &BigRational) -> Self {
        assert!(!r.is_negative(), "negative rational");
        Interval::from_ratio(
            &r.numer().to_biguint().expect("nonnegative"),
            &r.denom().to_biguint().expect("positive"),
        )
    }

    /// Multiply by an exactly representable scalar.
    pub fn scale(self, k: f64) -> Self {
        self * Interval::point(k)
    }

    pub fn exp(self) -> Self {
        let lo = down(self.lo.exp(), TRANSCENDENTAL_ULPS).max(0.0);
        let hi = up(self.hi.exp(), TRANSCENDENTAL_ULPS);
        Interval::new(lo, hi)
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "ln of a non-positive interval");
        Interval::new(
            down(self.lo.ln(), TRANSCENDENTAL_ULPS),
            up(self.hi.ln(), TRANSCENDENTAL_ULPS),
        )
    }

    pub fn sqr(self) -> Self {
        if self.lo >= 0.0 {
            Interval::new(down(self.lo * self.lo, 1), up(self.hi * self.hi, 1))
        } else {
            self * self
        }
    }

    /// `x^k` for a point exponent, through `exp(k ln x)`.
    pub fn powf(self, k: f64) -> Self {
        (self.ln() * Interval::point(k)).exp()
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else {
        f64::from_bits(((e + 1023) as u64) << 52)
    }
}

fn widen(lo: f64, hi: f64, exact: bool) -> Interval {
    if exact {
        Interval::new(lo, hi)
    } else {
        Interval::new(down(lo, 1), up(hi, 1))
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        widen(self.lo + rhs.lo, self.hi + rhs.hi, false)
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        widen(self.lo - rhs.hi, self.hi - rhs.lo, false)
    }
}

impl std::ops::Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let products = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        // 0 * inf shows up only for degenerate zero intervals; treat as 0.
        let products = products.map(|p| if p.is_nan() { 0.0 } else { p });
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exact = self.lo == self.hi && rhs.lo == rhs.hi && lo == 0.0;
        widen(lo, hi, exact)
    }
}

impl std::ops::Div for Interval {
    type Output = Interval;
    /// Positive denominators only.
    fn div(self, rhs: Interval) -> Interval {
        assert!(rhs.lo > 0.0, "division by an interval that is not positive");
        let quotients = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let lo = quotients.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = quotients.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi, false)
    }
}

/// Error-free transformation: `a + b = s + e` exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Compensated running sum. Rounding errors of the main sum are captured
/// exactly by `two_sum` and accumulated with directed rounding, so
/// [`Accumulator::bounds`] encloses the exact sum of the inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    err_lo: f64,
    err_hi: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.sum, x);
        self.sum = s;
        if e != 0.0 {
            self.err_lo = (self.err_lo + e).next_down();
            self.err_hi = (self.err_hi + e).next_up();
        }
    }

    pub fn estimate(&self) -> f64 {
        self.sum + (self.err_lo + self.err_hi) / 2.0
    }

    pub fn bounds(&self) -> Interval {
        Interval::new(
            (self.sum + self.err_lo).next_down(),
            (self.sum + self.err_hi).next_up(),
        )
    }
}

/// Sums enclosures of terms: lower endpoints and upper endpoints are
/// accumulated separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntervalSum {
    lo: Accumulator,
    hi: Accumulator,
    mid: Accumulator,
}

impl IntervalSum {
    pub fn add(&mut self, term: Interval) {
        self.lo.add(term.lo);
        self.hi.add(term.hi);
        self.mid.add(term.mid());
    }

    /// Compensated sum of term midpoints.
    pub fn estimate(&self) -> f64 {
        self.mid.estimate()
    }

    pub fn bounds(&self) -> Interval {
        Interval::new(self.lo.bounds().lo, self.hi.bounds().hi)
    }
}
