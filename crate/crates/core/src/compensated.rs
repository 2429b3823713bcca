//! Double-double arithmetic and compensated summation.
//!
//! Series terms are carried as unevaluated sums `hi + lo` built from the
//! error-free transformations `two_sum` and `two_prod`, which gives roughly
//! 106 bits of working precision. Alternating series with heavy cancellation
//! (Bessel J at moderate arguments) keep full double accuracy this way.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A double-double number `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TwoFloat {
    hi: f64,
    lo: f64,
}

impl TwoFloat {
    pub const ZERO: TwoFloat = TwoFloat { hi: 0.0, lo: 0.0 };
    pub const ONE: TwoFloat = TwoFloat { hi: 1.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        TwoFloat { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    /// Nearest double.
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        TwoFloat { hi, lo }
    }

    /// Exact sum of two doubles.
    pub fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        TwoFloat { hi, lo }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn square(self) -> Self {
        self * self
    }

    /// Multiplies by `2^exp`; exact unless the result leaves the normal range.
    pub fn scale_pow2(self, exp: i32) -> Self {
        TwoFloat {
            hi: ldexp(self.hi, exp),
            lo: ldexp(self.lo, exp),
        }
    }
}

/// `x * 2^exp` without intermediate overflow of the power.
pub fn ldexp(mut x: f64, mut exp: i32) -> f64 {
    const STEP: i32 = 1000;
    while exp > STEP {
        x *= 2f64.powi(STEP);
        exp -= STEP;
        if !x.is_finite() || x == 0.0 {
            return x;
        }
    }
    while exp < -STEP {
        x *= 2f64.powi(-STEP);
        exp += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(exp)
}

impl From<f64> for TwoFloat {
    fn from(hi: f64) -> Self {
        TwoFloat { hi, lo: 0.0 }
    }
}

impl Neg for TwoFloat {
    type Output = TwoFloat;
    fn neg(self) -> TwoFloat {
        TwoFloat {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for TwoFloat {
    type Output = TwoFloat;
    fn add(self, rhs: TwoFloat) -> TwoFloat {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        TwoFloat { hi, lo }
    }
}

impl Add<f64> for TwoFloat {
    type Output = TwoFloat;
    fn add(self, rhs: f64) -> TwoFloat {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (hi, lo) = quick_two_sum(s1, s2 + self.lo);
        TwoFloat { hi, lo }
    }
}

impl Sub for TwoFloat {
    type Output = TwoFloat;
    fn sub(self, rhs: TwoFloat) -> TwoFloat {
        self + (-rhs)
    }
}

impl Mul for TwoFloat {
    type Output = TwoFloat;
    fn mul(self, rhs: TwoFloat) -> TwoFloat {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        TwoFloat { hi, lo }
    }
}

impl Mul<f64> for TwoFloat {
    type Output = TwoFloat;
    fn mul(self, rhs: f64) -> TwoFloat {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        TwoFloat { hi, lo }
    }
}

impl Div for TwoFloat {
    type Output = TwoFloat;
    fn div(self, rhs: TwoFloat) -> TwoFloat {
        let q1 = self.hi / rhs.hi;
        if !q1.is_finite() || q1 == 0.0 {
            return TwoFloat::from(q1);
        }
        let r = self - rhs * q1;
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * q2;
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        TwoFloat { hi, lo } + q3
    }
}

impl Div<f64> for TwoFloat {
    type Output = TwoFloat;
    fn div(self, rhs: f64) -> TwoFloat {
        self / TwoFloat::from(rhs)
    }
}

impl PartialOrd for TwoFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Running sum accumulated in double-double precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    total: TwoFloat,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        self.total = self.total + x;
    }

    pub fn add_two(&mut self, x: TwoFloat) {
        self.total = self.total + x;
    }

    pub fn total(&self) -> TwoFloat {
        self.total
    }

    pub fn value(&self) -> f64 {
        self.total.to_f64()
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut sum = CompensatedSum::new();
        for x in iter {
            sum.add(x);
        }
        sum
    }
}
