//! Precision abstraction. The library runs in any [`Real`] working precision;
//! each working precision names a [`Wide`] carrier with roughly twice the
//! significand, used while plan factors are built and then rounded away.

use std::fmt;

use num_complex::Complex;
use num_traits::Float;

use crate::dd::Dd;

/// A floating-point working precision (implemented for `f32` and `f64`).
pub trait Real: Float + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Extended-precision carrier for plan construction.
    type Wide: Wide;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;

    /// Unit roundoff `u` of this format (2^-24 for single, 2^-53 for double).
    fn unit_roundoff() -> f64;
}

impl Real for f32 {
    type Wide = f64;

    #[inline]
    fn from_f64(x: f64) -> f32 {
        x as f32
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }

    fn unit_roundoff() -> f64 {
        (0.5f64).powi(24)
    }
}

impl Real for f64 {
    type Wide = Dd;

    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    fn unit_roundoff() -> f64 {
        (0.5f64).powi(53)
    }
}

/// Rounds a double-precision complex value into the working precision.
#[inline]
pub(crate) fn complex_from_f64<T: Real>(v: Complex<f64>) -> Complex<T> {
    Complex::new(T::from_f64(v.re), T::from_f64(v.im))
}

/// Scalar operations needed during plan construction.
pub trait Wide: Copy + fmt::Debug {
    const ZERO: Self;
    const ONE: Self;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
}

impl Wide for f64 {
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;

    #[inline]
    fn from_f64(x: f64) -> f64 {
        x
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    #[inline]
    fn add(self, rhs: f64) -> f64 {
        self + rhs
    }

    #[inline]
    fn sub(self, rhs: f64) -> f64 {
        self - rhs
    }

    #[inline]
    fn mul(self, rhs: f64) -> f64 {
        self * rhs
    }

    #[inline]
    fn neg(self) -> f64 {
        -self
    }
}

impl Wide for Dd {
    const ZERO: Dd = Dd::ZERO;
    const ONE: Dd = Dd::ONE;

    #[inline]
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }

    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        Dd::add(self, rhs)
    }

    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        Dd::sub(self, rhs)
    }

    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        Dd::mul(self, rhs)
    }

    #[inline]
    fn neg(self) -> Dd {
        Dd::neg(self)
    }
}

/// Complex number over a [`Wide`] carrier.
#[derive(Clone, Copy, Debug)]
pub(crate) struct WComplex<W: Wide> {
    pub re: W,
    pub im: W,
}

impl<W: Wide> WComplex<W> {
    pub const ZERO: WComplex<W> = WComplex {
        re: W::ZERO,
        im: W::ZERO,
    };
    pub const ONE: WComplex<W> = WComplex {
        re: W::ONE,
        im: W::ZERO,
    };

    #[inline]
    pub fn lift(v: Complex<f64>) -> Self {
        WComplex {
            re: W::from_f64(v.re),
            im: W::from_f64(v.im),
        }
    }

    /// Rounds to the working precision, one rounding per component.
    #[inline]
    pub fn round<T: Real>(self) -> Complex<T> {
        Complex::new(T::from_f64(self.re.to_f64()), T::from_f64(self.im.to_f64()))
    }

    #[inline]
    #[allow(dead_code)]
    pub fn add(self, rhs: Self) -> Self {
        WComplex {
            re: self.re.add(rhs.re),
            im: self.im.add(rhs.im),
        }
    }

    #[inline]
    pub fn sub(self, rhs: Self) -> Self {
        WComplex {
            re: self.re.sub(rhs.re),
            im: self.im.sub(rhs.im),
        }
    }

    #[inline]
    pub fn mul(self, rhs: Self) -> Self {
        WComplex {
            re: self.re.mul(rhs.re).sub(self.im.mul(rhs.im)),
            im: self.re.mul(rhs.im).add(self.im.mul(rhs.re)),
        }
    }

    #[inline]
    pub fn conj(self) -> Self {
        WComplex {
            re: self.re,
            im: self.im.neg(),
        }
    }
}
