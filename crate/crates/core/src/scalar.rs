//! Value types for class functions.
//!
//! Class functions are generic over [`ClassValue`], so the same machinery runs
//! over exact Gaussian rationals (the default used by every identity check),
//! plain rationals, or floating point when only approximate values matter.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

/// A field-like scalar usable as the value of a class function.
pub trait ClassValue:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_i64(v: i64) -> Self;

    /// Division by a positive integer. Exact for rational types.
    fn div_int(&self, n: u64) -> Self;

    /// Complex conjugate; the identity on real types.
    fn conj(&self) -> Self;

    /// Real part as a float, used when exact weights meet floating logs.
    fn re_f64(&self) -> f64;

    fn im_f64(&self) -> f64 {
        0.0
    }
}

/// Scalars that contain a square root of -1, needed for characters of
/// abelian groups of exponent dividing 4.
pub trait HasImaginaryUnit: ClassValue {
    fn imaginary_unit() -> Self;
}

macro_rules! impl_float {
    ($f:ty) => {
        impl ClassValue for $f {
            fn from_i64(v: i64) -> Self {
                v as $f
            }
            fn div_int(&self, n: u64) -> Self {
                *self / n as $f
            }
            fn conj(&self) -> Self {
                *self
            }
            fn re_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_float!(f32);
impl_float!(f64);

impl ClassValue for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn div_int(&self, n: u64) -> Self {
        self / Ratio::from_integer(n as i64)
    }
    fn conj(&self) -> Self {
        *self
    }
    fn re_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl ClassValue for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn div_int(&self, n: u64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn re_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> ClassValue for Complex<T>
where
    T: ClassValue + num_traits::Num,
{
    fn from_i64(v: i64) -> Self {
        Complex::new(T::from_i64(v), T::zero())
    }
    fn div_int(&self, n: u64) -> Self {
        Complex::new(self.re.div_int(n), self.im.div_int(n))
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn re_f64(&self) -> f64 {
        self.re.re_f64()
    }
    fn im_f64(&self) -> f64 {
        self.im.re_f64()
    }
}

impl<T> HasImaginaryUnit for Complex<T>
where
    T: ClassValue + num_traits::Num,
{
    fn imaginary_unit() -> Self {
        Complex::new(T::zero(), T::one())
    }
}

/// `i^k` for `k` taken modulo 4.
pub fn unit_power<S: HasImaginaryUnit>(k: u64) -> S {
    match k % 4 {
        0 => S::one(),
        1 => S::imaginary_unit(),
        2 => -S::one(),
        _ => -S::imaginary_unit(),
    }
}

/// Formats a Gaussian rational as `re±im*i`, e.g. `3/2-1*i`.
pub fn format_gaussian(v: &Complex<BigRational>) -> String {
    let im = &v.im;
    if im.is_zero() {
        return v.re.to_string();
    }
    let sign = if *im < BigRational::zero() { '-' } else { '+' };
    let mag = if *im < BigRational::zero() { -im.clone() } else { im.clone() };
    format!("{}{}{}*i", v.re, sign, mag)
}
