use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used by the geometry and interpolation code: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; exact for `f64` itself.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to every float type")
    }

    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize converts to every float type")
    }

    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Product of the coordinates, `|x| = x^1 ... x^d`.
pub fn volume<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::one(), |acc, &v| acc * v)
}

pub fn euclidean_norm<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt()
}

pub fn euclidean_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&p, &q)| acc + (p - q) * (p - q))
        .sqrt()
}
