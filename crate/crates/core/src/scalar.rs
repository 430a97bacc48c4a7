//! Exact ordered fields used for every coordinate and coefficient.
//!
//! All geometry in this crate is written against [`ExactField`]. The trait is
//! implemented for `Ratio<T>` over any signed machine or arbitrary-precision
//! integer, so the same predicates run on [`BigRational`](num_rational::BigRational)
//! (the default, see [`crate::Scalar`]) or on `Ratio<i64>` when the inputs are
//! known to stay small.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::ToBigInt;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// An exact, totally ordered field with access to its integer ring.
pub trait ExactField:
    Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    type Int: Integer + Signed + Clone + Hash + Debug + Display + Send + Sync + 'static;

    fn numer_int(&self) -> Self::Int;
    fn denom_int(&self) -> Self::Int;
    fn from_int(i: Self::Int) -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// The exact square root, when `self` is the square of a rational.
    fn rational_sqrt(&self) -> Option<Self>;

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    fn is_integral(&self) -> bool {
        self.denom_int().is_one()
    }
}

impl<T> ExactField for Ratio<T>
where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + ToBigInt
        + Roots
        + Send
        + Sync
        + 'static,
{
    type Int = T;

    fn numer_int(&self) -> T {
        self.numer().clone()
    }

    fn denom_int(&self) -> T {
        self.denom().clone()
    }

    fn from_int(i: T) -> Self {
        Ratio::from_integer(i)
    }

    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer type cannot hold i64 value"))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn rational_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(n.clone() * n.clone()) == self.numer() && &(d.clone() * d.clone()) == self.denom() {
            Some(Ratio::new(n, d))
        } else {
            None
        }
    }
}

/// Scales a rational vector to the primitive integer vector on the same ray
/// (gcd 1) and flips it so that the first nonzero entry is positive.
///
/// Returns `None` for the zero vector.
pub fn primitive_direction<F: ExactField>(v: &[F]) -> Option<Vec<F>> {
    let mut v = primitive_ray(v)?;
    let first = v.iter().find(|c| !c.is_zero())?;
    if first.is_negative() {
        for c in v.iter_mut() {
            *c = -c.clone();
        }
    }
    Some(v)
}

/// Like [`primitive_direction`] but keeps the sign of the input.
pub fn primitive_ray<F: ExactField>(v: &[F]) -> Option<Vec<F>> {
    if v.iter().all(|c| c.is_zero()) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(F::Int::one(), |acc, c| acc.lcm(&c.denom_int()));
    let ints: Vec<F::Int> = v
        .iter()
        .map(|c| c.numer_int() * (lcm.clone() / c.denom_int()))
        .collect();
    let g = ints
        .iter()
        .fold(F::Int::zero(), |acc, c| acc.gcd(c));
    Some(ints.into_iter().map(|c| F::from_int(c / g.clone())).collect())
}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn to_rational_string<F: ExactField>(v: &F) -> String {
    format!("{}/{}", v.numer_int(), v.denom_int())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_frac(n, d)
    }

    #[test]
    fn primitive_direction_normalizes() {
        let v = primitive_direction(&[q(2, 1), q(2, 1), q(2, 1), q(-2, 1)]).unwrap();
        assert_eq!(v, vec![q(1, 1), q(1, 1), q(1, 1), q(-1, 1)]);
        let v = primitive_direction(&[q(0, 1), q(0, 1), q(-3, 1)]).unwrap();
        assert_eq!(v, vec![q(0, 1), q(0, 1), q(1, 1)]);
        let v = primitive_direction(&[q(1, 2), q(-1, 3), q(0, 1)]).unwrap();
        assert_eq!(v, vec![q(3, 1), q(-2, 1), q(0, 1)]);
        assert!(primitive_direction::<BigRational>(&[q(0, 1), q(0, 1)]).is_none());
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(q(9, 4).rational_sqrt(), Some(q(3, 2)));
        assert_eq!(q(3, 4).rational_sqrt(), None);
        assert_eq!(q(-1, 1).rational_sqrt(), None);
        assert_eq!(<Rational64 as ExactField>::from_frac(25, 1).rational_sqrt(), Some(<Rational64 as ExactField>::from_i64(5)));
        assert_eq!(q(0, 1).rational_sqrt(), Some(q(0, 1)));
    }

    #[test]
    fn rational_strings_carry_denominator() {
        assert_eq!(to_rational_string(&q(3, 1)), "3/1");
        assert_eq!(to_rational_string(&q(-6, 8)), "-3/4");
    }
}
