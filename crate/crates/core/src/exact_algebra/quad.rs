use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::scalar::Scalar;

/// `p + q*sqrt(2) + r*sqrt(3) + s*sqrt(6)`, an element of `Q(sqrt 2, sqrt 3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSum<T> {
    pub p: T,
    pub q: T,
    pub r: T,
    pub s: T,
}

impl<T: Scalar> QuadSum<T> {
    pub fn new(p: T, q: T, r: T, s: T) -> Self {
        QuadSum { p, q, r, s }
    }

    pub fn rational(p: T) -> Self {
        QuadSum::new(p, T::zero(), T::zero(), T::zero())
    }

    /// `{1, sqrt 2, sqrt 3, sqrt 6}` is a basis, so zero is a coordinate test.
    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.r.is_zero() && self.s.is_zero()
    }

    pub fn scale(&self, k: &T) -> Self {
        QuadSum::new(
            self.p.clone() * k.clone(),
            self.q.clone() * k.clone(),
            self.r.clone() * k.clone(),
            self.s.clone() * k.clone(),
        )
    }

    /// Rational enclosure of the real value using root enclosures refined by
    /// `steps` bisections.
    pub fn enclosure(&self, steps: u32) -> (T, T) {
        let mut lo = self.p.clone();
        let mut hi = self.p.clone();
        for (coef, radicand) in [(&self.q, 2u32), (&self.r, 3), (&self.s, 6)] {
            if coef.is_zero() {
                continue;
            }
            let (rlo, rhi) = T::sqrt_enclosure(radicand, steps);
            if coef.is_positive() {
                lo = lo + coef.clone() * rlo;
                hi = hi + coef.clone() * rhi;
            } else {
                lo = lo + coef.clone() * rhi;
                hi = hi + coef.clone() * rlo;
            }
        }
        (lo, hi)
    }

    /// Exact sign of the real value.
    pub fn signum(&self) -> Ordering {
        if self.q.is_zero() && self.r.is_zero() && self.s.is_zero() {
            return self.p.cmp(&T::zero());
        }
        if self.is_zero() {
            return Ordering::Equal;
        }
        T::quad_signum(self)
    }

    /// Enclosure refinement shared by every scalar: widen the bisection
    /// depth until the enclosure excludes zero.
    pub(crate) fn signum_by_enclosure(&self) -> Ordering {
        let mut steps = 12;
        loop {
            let (lo, hi) = self.enclosure(steps);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            steps = steps * 3 / 2 + 8;
        }
    }
}

/// Sign of `w` as `-1`, `0` or `+1`.
pub fn sign_quadsum<T: Scalar>(w: &QuadSum<T>) -> i8 {
    match w.signum() {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

impl<T: Scalar> Add for QuadSum<T> {
    type Output = QuadSum<T>;
    fn add(self, o: Self) -> Self {
        QuadSum::new(self.p + o.p, self.q + o.q, self.r + o.r, self.s + o.s)
    }
}

impl<T: Scalar> Sub for QuadSum<T> {
    type Output = QuadSum<T>;
    fn sub(self, o: Self) -> Self {
        QuadSum::new(self.p - o.p, self.q - o.q, self.r - o.r, self.s - o.s)
    }
}

impl<T: Scalar> Neg for QuadSum<T> {
    type Output = QuadSum<T>;
    fn neg(self) -> Self {
        QuadSum::new(-self.p, -self.q, -self.r, -self.s)
    }
}

impl<T: Scalar> Mul for QuadSum<T> {
    type Output = QuadSum<T>;
    fn mul(self, o: Self) -> Self {
        let two = T::one() + T::one();
        let three = two.clone() + T::one();
        let six = three.clone() * two.clone();
        let (a, b, c, d) = (self.p, self.q, self.r, self.s);
        let (e, f, g, h) = (o.p, o.q, o.r, o.s);
        // sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2
        let p = a.clone() * e.clone()
            + two.clone() * b.clone() * f.clone()
            + three.clone() * c.clone() * g.clone()
            + six * d.clone() * h.clone();
        let q = a.clone() * f.clone()
            + b.clone() * e.clone()
            + three.clone() * (c.clone() * h.clone() + d.clone() * g.clone());
        let r = a.clone() * g.clone() + c.clone() * e.clone() + two * (b.clone() * h.clone() + d.clone() * f.clone());
        let s = a * h + d * e + b * g + c * f;
        QuadSum::new(p, q, r, s)
    }
}

impl<T: Scalar> Zero for QuadSum<T> {
    fn zero() -> Self {
        QuadSum::rational(T::zero())
    }
    fn is_zero(&self) -> bool {
        QuadSum::is_zero(self)
    }
}
