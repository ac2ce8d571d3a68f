//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64` literals and quadrature results.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize is representable in every Real")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: f64, im: f64) -> Cx<T> {
    Complex::new(T::of(re), T::of(im))
}

#[inline]
pub(crate) fn cast_cx<T: Real>(z: Complex<f64>) -> Cx<T> {
    Complex::new(T::of(z.re), T::of(z.im))
}

#[inline]
pub(crate) fn to_c64<T: Real>(z: Cx<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// `exp(-2 pi i * num / den)`.
///
/// The numerator is reduced to `(-den/2, den/2]` first, so `num` and `-num`
/// give exact conjugates and the real and imaginary axes are hit exactly.
#[inline]
pub(crate) fn root_of_unity<T: Real>(num: i64, den: i64) -> Cx<T> {
    let mut r = num.rem_euclid(den);
    if 2 * r > den {
        r -= den;
    }
    if r == 0 {
        return cx(1.0, 0.0);
    }
    if 2 * r == den {
        return cx(-1.0, 0.0);
    }
    if 4 * r == den {
        return cx(0.0, -1.0);
    }
    if 4 * r == -den {
        return cx(0.0, 1.0);
    }
    let angle = -2.0 * std::f64::consts::PI * (r as f64) / (den as f64);
    cx(angle.cos(), angle.sin())
}
