//! Complex-operation tallies and the counting convention.

use std::ops::{Add, AddAssign};

use num_complex::Complex;
use serde::Serialize;

use crate::scalar::Real;

/// Complex additions and multiplications performed by a counted computation.
///
/// Convention: subtractions count as additions; multiplications whose
/// constant operand is exactly ±1 or ±i are free, as are permutations.
/// Products of two data values are always charged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpCount {
    pub adds: u64,
    pub mults: u64,
}

impl OpCount {
    pub const ZERO: OpCount = OpCount { adds: 0, mults: 0 };

    pub fn new(adds: u64, mults: u64) -> OpCount {
        OpCount { adds, mults }
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            adds: self.adds + rhs.adds,
            mults: self.mults + rhs.mults,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        self.adds += rhs.adds;
        self.mults += rhs.mults;
    }
}

/// Arithmetic context threaded through the recursive algorithms so the same
/// code path serves plain evaluation and instrumented counting.
pub(crate) trait Arith<T: Real> {
    fn add(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T>;
    /// A subtraction tallies exactly like an addition.
    #[allow(dead_code)]
    fn sub(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T>;
    /// Product of a plan constant and a data value.
    fn mul_const(&mut self, constant: Complex<T>, x: Complex<T>) -> Complex<T>;
    /// Product of two data values; always charged when counting.
    fn mul_data(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T>;
}

/// Uncounted arithmetic.
pub(crate) struct Plain;

impl<T: Real> Arith<T> for Plain {
    #[inline]
    fn add(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T> {
        a + b
    }

    #[inline]
    fn sub(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T> {
        a - b
    }

    #[inline]
    fn mul_const(&mut self, constant: Complex<T>, x: Complex<T>) -> Complex<T> {
        constant * x
    }

    #[inline]
    fn mul_data(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T> {
        a * b
    }
}

/// Whether a constant is one of ±1, ±i (value comparison, so -0.0 == 0.0).
#[inline]
fn trivial_unit<T: Real>(c: Complex<T>) -> bool {
    let zero = T::zero();
    let one = T::one();
    (c.im == zero && (c.re == one || c.re == -one))
        || (c.re == zero && (c.im == one || c.im == -one))
}

/// Counting arithmetic.
pub(crate) struct Tally {
    pub count: OpCount,
}

impl Tally {
    pub fn new() -> Tally {
        Tally {
            count: OpCount::ZERO,
        }
    }
}

impl<T: Real> Arith<T> for Tally {
    #[inline]
    fn add(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T> {
        self.count.adds += 1;
        a + b
    }

    #[inline]
    fn sub(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T> {
        self.count.adds += 1;
        a - b
    }

    #[inline]
    fn mul_const(&mut self, constant: Complex<T>, x: Complex<T>) -> Complex<T> {
        if !trivial_unit(constant) {
            self.count.mults += 1;
        }
        constant * x
    }

    #[inline]
    fn mul_data(&mut self, a: Complex<T>, b: Complex<T>) -> Complex<T> {
        self.count.mults += 1;
        a * b
    }
}
