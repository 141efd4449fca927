//! Numeric scalar abstraction.
//!
//! Every algorithm in this crate is written against [`Scalar`]. Exact
//! rational types are the intended instantiation: trimming compares sums of
//! Gromov products for equality, so inexact arithmetic changes the answer.
//! Floating point types implement the trait as well and give correct results
//! whenever all intermediate values are exactly representable (e.g. small
//! dyadic coordinates).

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Ordered field element used for coordinates, distances and weights.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed {
    /// Converts a small integer into the scalar type.
    fn from_int(v: i64) -> Self;

    /// Whether arithmetic on this type is exact.
    fn is_exact() -> bool;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    /// Best-effort conversion for rendering.
    fn to_f64(&self) -> f64;

    /// The value as an `i64` if it is an integer in range.
    fn to_exact_int(&self) -> Option<i64>;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + Debug + Display + Integer + Signed + FromPrimitive + ToPrimitive,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer out of range for scalar type"))
    }

    fn is_exact() -> bool {
        true
    }

    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) => n / d,
            _ => f64::NAN,
        }
    }

    fn to_exact_int(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_int(v: i64) -> Self {
                v as $t
            }

            fn is_exact() -> bool {
                false
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn to_exact_int(&self) -> Option<i64> {
                let v = *self as f64;
                if v.fract() == 0.0 && v.abs() < 9.0e15 {
                    Some(v as i64)
                } else {
                    None
                }
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// Total comparison; incomparable values (NaN) compare equal.
pub fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

pub fn min<S: Scalar>(a: &S, b: &S) -> S {
    if b < a {
        b.clone()
    } else {
        a.clone()
    }
}

pub fn max<S: Scalar>(a: &S, b: &S) -> S {
    if b > a {
        b.clone()
    } else {
        a.clone()
    }
}

/// Clamps `v` into the closed interval `[lo, hi]`.
pub fn clamp<S: Scalar>(v: &S, lo: &S, hi: &S) -> S {
    if v < lo {
        lo.clone()
    } else if v > hi {
        hi.clone()
    } else {
        v.clone()
    }
}

/// Whether `v` lies in the closed interval spanned by `a` and `b` (in either order).
pub fn in_span<S: Scalar>(v: &S, a: &S, b: &S) -> bool {
    (a <= v && v <= b) || (b <= v && v <= a)
}
