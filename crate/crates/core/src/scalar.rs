//! Scalar abstraction for the log-domain and analytic computations.
//!
//! Everything that evaluates logarithms of factorials is generic over
//! [`Real`], so the same formula can be run in `f32`, `f64`, or the
//! double-double [`Dd`](crate::Dd) when `f64` rounding is larger than the
//! margin being measured.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssignOps, ToPrimitive};

/// Real scalar used by the bound and lemma formulas.
pub trait Real:
    Num
    + NumAssignOps
    + Copy
    + PartialOrd
    + std::ops::Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
{
    fn ln(self) -> Self;
    fn exp(self) -> Self;
    fn abs(self) -> Self;
    fn pi() -> Self;

    /// Unit roundoff of the type, used to scale comparison margins.
    fn epsilon() -> Self;

    fn from_u64_exact(k: u64) -> Self {
        Self::from_u64(k).expect("every u64 is representable as a real")
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

macro_rules! impl_real_for_float {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn ln(self) -> Self {
                Float::ln(self)
            }
            #[inline]
            fn exp(self) -> Self {
                Float::exp(self)
            }
            #[inline]
            fn abs(self) -> Self {
                Float::abs(self)
            }
            #[inline]
            fn pi() -> Self {
                <$t as FloatConst>::PI()
            }
            #[inline]
            fn epsilon() -> Self {
                <$t as Float>::epsilon()
            }
        }
    };
}

impl_real_for_float!(f32);
impl_real_for_float!(f64);

/// Neumaier-compensated accumulator.
///
/// Tracks the rounding error of every addition in a separate term; the
/// final value is `sum + compensation`.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<R> {
    sum: R,
    compensation: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        Self { sum: R::zero(), compensation: R::zero() }
    }

    pub fn add(&mut self, x: R) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> R {
        self.sum + self.compensation
    }
}

impl<R: Real> FromIterator<R> for CompensatedSum<R> {
    fn from_iter<I: IntoIterator<Item = R>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
