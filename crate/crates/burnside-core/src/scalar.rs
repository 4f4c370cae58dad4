//! The field trait shared by every matrix and class-function routine.
//!
//! Logic paths instantiate it with [`Cyc`] or [`Q`]; the float impls exist
//! for approximate display and quick experiments and are never used to
//! decide a rank or an equality in the verification suites.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use crate::cyclotomic::{Cyc, Q};

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn recip_checked(&self) -> Option<Self>;

    fn from_q(q: &Q) -> Self;

    /// Zero test used for pivot selection.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }

    /// self -= a·b
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let t = std::mem::replace(self, Self::zero());
        *self = t - a.mul_ref(b);
    }

    fn from_i64(v: i64) -> Self {
        Self::from_q(&Q::from_integer(v.into()))
    }
}

impl Scalar for Q {
    fn recip_checked(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
}

impl Scalar for Cyc {
    fn recip_checked(&self) -> Option<Self> {
        self.inv()
    }
    fn from_q(q: &Q) -> Self {
        Cyc::from_rational(q.clone())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Cyc::mul_ref(self, o)
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        let p = Cyc::mul_ref(a, b);
        if !p.is_zero() {
            *self = self.add_ref(&-p);
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            fn recip_checked(&self) -> Option<Self> {
                (!self.is_negligible()).then(|| 1.0 / self)
            }
            fn from_q(q: &Q) -> Self {
                q.to_f64().unwrap_or(f64::NAN) as $t
            }
            fn is_negligible(&self) -> bool {
                self.abs() < $eps
            }
        }
    };
}

float_scalar!(f64, 1e-10);
float_scalar!(f32, 1e-5);
