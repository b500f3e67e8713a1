//! Double-double floating point.
//!
//! A value is the unevaluated sum `hi + lo` of two `f64` with
//! `|lo| <= ulp(hi) / 2`, giving roughly 106 bits of significand. Only the
//! operations needed by the factorial and Stirling computations are
//! provided: the four arithmetic operations, `ln`, `exp`, and ordering.
//!
//! The algorithms are the classic error-free transformations (two-sum,
//! fused-multiply-add two-product) with exponential evaluation by
//! argument reduction and squaring, and the logarithm by Newton
//! iteration on `exp`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };
const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
/// 2^-104
const EPS: f64 = 4.930380657631324e-32;

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
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    /// Builds a normalized value from two components.
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn is_nan(self) -> bool {
        self.hi.is_nan()
    }

    fn mul_pow2(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd { hi: self.hi * s, lo: self.lo * s }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let lo = self.lo.floor();
            let (hi, lo) = quick_two_sum(hi, lo);
            Dd { hi, lo }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    pub fn trunc(self) -> Self {
        if self.hi >= 0.0 {
            self.floor()
        } else {
            -(-self).floor()
        }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn exp(self) -> Self {
        if self.hi.is_nan() {
            return self;
        }
        if self.hi > 709.78 {
            return Dd { hi: f64::INFINITY, lo: 0.0 };
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }

        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).mul_pow2(-9);

        // expm1(r) by Taylor series; |r| <= ln2 / 1024.
        let mut term = r * r * Dd::from(0.5);
        let mut s = r + term;
        let mut i = 3.0;
        loop {
            term = term * r / Dd::from(i);
            s += term;
            if term.hi.abs() <= EPS * 1e-3 * s.hi.abs() {
                break;
            }
            i += 1.0;
        }

        // expm1(2x) = 2 expm1(x) + expm1(x)^2
        for _ in 0..9 {
            s = s.mul_pow2(1) + s * s;
        }
        (s + Dd::ONE).mul_pow2(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi.is_nan() || self.hi < 0.0 {
            return Dd { hi: f64::NAN, lo: f64::NAN };
        }
        if self.hi == 0.0 {
            return Dd { hi: f64::NEG_INFINITY, lo: 0.0 };
        }
        if self.hi.is_infinite() {
            return self;
        }
        if self == Dd::ONE {
            return Dd::ZERO;
        }
        // Newton on f(x) = exp(x) - a; each step doubles the correct digits.
        let mut x = Dd::from(self.hi.ln());
        for _ in 0..2 {
            x = x + self * (-x).exp() - Dd::ONE;
        }
        x
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl From<u64> for Dd {
    fn from(k: u64) -> Self {
        let hi = k as f64;
        let rest = k as i128 - hi as i128;
        Dd::new(hi, rest as f64)
    }
}

impl From<Dd> for f64 {
    fn from(x: Dd) -> f64 {
        x.hi + x.lo
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        self - (self / b).trunc() * b
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Dd {
            fn $m(&mut self, rhs: Dd) {
                *self = *self $op rhs;
            }
        }
    };
}

assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for Dd {
    fn one() -> Dd {
        Dd::ONE
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;

    /// Parses through `f64`; only radix 10 is meaningful.
    fn from_str_radix(s: &str, _radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Dd::from)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Dd> {
        let hi = n as f64;
        let rest = n as i128 - hi as i128;
        Some(Dd::new(hi, rest as f64))
    }
    fn from_u64(n: u64) -> Option<Dd> {
        Some(Dd::from(n))
    }
    fn from_f64(x: f64) -> Option<Dd> {
        Some(Dd::from(x))
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        let t = self.trunc();
        let v = t.hi as i128 + t.lo as i128;
        i64::try_from(v).ok()
    }
    fn to_u64(&self) -> Option<u64> {
        let t = self.trunc();
        let v = t.hi as i128 + t.lo as i128;
        u64::try_from(v).ok()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl fmt::Display for Dd {
    /// Scientific notation with 32 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hi.is_finite() {
            return write!(f, "{}", self.hi);
        }
        if self.is_zero() {
            return write!(f, "0");
        }
        let neg = *self < Dd::ZERO;
        let mut x = self.abs();
        let mut exp10 = x.hi.log10().floor() as i32;
        x /= pow10(exp10);
        if x.hi >= 10.0 {
            x /= Dd::from(10.0);
            exp10 += 1;
        } else if x.hi < 1.0 {
            x *= Dd::from(10.0);
            exp10 -= 1;
        }
        let mut digits = String::with_capacity(34);
        for i in 0..32 {
            let d = x.hi.floor().clamp(0.0, 9.0);
            digits.push(char::from(b'0' + d as u8));
            if i == 0 {
                digits.push('.');
            }
            x = (x - Dd::from(d)) * Dd::from(10.0);
        }
        write!(f, "{}{}e{}", if neg { "-" } else { "" }, digits, exp10)
    }
}

fn pow10(e: i32) -> Dd {
    let mut r = Dd::ONE;
    let ten = Dd::from(10.0);
    for _ in 0..e.unsigned_abs() {
        r *= ten;
    }
    if e < 0 {
        Dd::ONE / r
    } else {
        r
    }
}

impl Real for Dd {
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn pi() -> Self {
        PI
    }
    fn epsilon() -> Self {
        Dd::from(EPS)
    }
}
