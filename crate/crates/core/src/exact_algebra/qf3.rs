use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

use super::quad::QuadSum;
use super::scalar::Scalar;

/// `r0 + r1*sqrt(3)`, an element of `X = Q + sqrt(3) Q`.
///
/// Equality is componentwise since `{1, sqrt 3}` is linearly independent
/// over the rationals; the order is the one inherited from the reals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Qf3<T> {
    pub r0: T,
    pub r1: T,
}

impl<T: Scalar> Qf3<T> {
    pub fn new(r0: T, r1: T) -> Self {
        Qf3 { r0, r1 }
    }

    pub fn rational(r0: T) -> Self {
        Qf3::new(r0, T::zero())
    }

    pub fn zero() -> Self {
        Qf3::rational(T::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.r1.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Qf3::new(self.r0.clone(), -self.r1.clone())
    }

    pub fn scale(&self, k: &T) -> Self {
        Qf3::new(self.r0.clone() * k.clone(), self.r1.clone() * k.clone())
    }

    pub fn to_quad(&self) -> QuadSum<T> {
        QuadSum::new(self.r0.clone(), T::zero(), self.r1.clone(), T::zero())
    }
}

pub fn qf3_compare<T: Scalar>(a: &Qf3<T>, b: &Qf3<T>) -> Ordering {
    if a.r1 == b.r1 {
        return a.r0.cmp(&b.r0);
    }
    (a.to_quad() - b.to_quad()).signum()
}

pub fn qf3_conjugate<T: Scalar>(v: &Qf3<T>) -> Qf3<T> {
    v.conjugate()
}

impl<T: Scalar> Ord for Qf3<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        qf3_compare(self, other)
    }
}

impl<T: Scalar> PartialOrd for Qf3<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Add for Qf3<T> {
    type Output = Qf3<T>;
    fn add(self, o: Self) -> Self {
        Qf3::new(self.r0 + o.r0, self.r1 + o.r1)
    }
}

impl<T: Scalar> Sub for Qf3<T> {
    type Output = Qf3<T>;
    fn sub(self, o: Self) -> Self {
        Qf3::new(self.r0 - o.r0, self.r1 - o.r1)
    }
}

impl<T: Scalar> Neg for Qf3<T> {
    type Output = Qf3<T>;
    fn neg(self) -> Self {
        Qf3::new(-self.r0, -self.r1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(a: i64, b: i64) -> Qf3<BigRational> {
        Qf3::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    #[test]
    fn compare_examples() {
        assert_eq!(qf3_compare(&q(0, 0), &q(0, 0)), Ordering::Equal);
        assert_eq!(qf3_compare(&q(2, 0), &q(0, 1)), Ordering::Greater);
        assert_eq!(qf3_compare(&q(0, 1), &q(1, 0)), Ordering::Greater);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(qf3_conjugate(&q(0, 0)), q(0, 0));
        assert_eq!(qf3_conjugate(&q(1, 2)), q(1, -2));
        let v = Qf3::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-5).into()));
        assert_eq!(qf3_conjugate(&qf3_conjugate(&v)), v);
    }
}
