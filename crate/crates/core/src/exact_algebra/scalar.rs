use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

use super::quad::QuadSum;

/// An exact ordered field the algebra can be instantiated over.
///
/// Every operation in this crate is decided exactly, so the scalar must be a
/// field with exact arithmetic and a total order. Floating point types do not
/// qualify. Fixed-width ratios work until their denominators overflow.
pub trait Scalar: Clone + Debug + Ord + Hash + Num + Signed + FromPrimitive {
    /// Rational enclosure `[lo, hi]` of `sqrt(radicand)` after `steps`
    /// bisection halvings of the integer enclosure `[floor, floor + 1]`.
    ///
    /// `radicand` must not be a perfect square.
    fn sqrt_enclosure(radicand: u32, steps: u32) -> (Self, Self) {
        let n = Self::from_u32(radicand).expect("radicand fits the scalar");
        let mut base = 1u32;
        while (base + 1) * (base + 1) <= radicand {
            base += 1;
        }
        let mut lo = Self::from_u32(base).expect("small integer");
        let mut hi = lo.clone() + Self::one();
        let two = Self::from_u8(2).expect("small integer");
        for _ in 0..steps {
            let mid = (lo.clone() + hi.clone()) / two.clone();
            if mid.clone() * mid.clone() < n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    /// Sign of a nonzero `w`. The default refines rational enclosures.
    fn quad_signum(w: &QuadSum<Self>) -> Ordering {
        w.signum_by_enclosure()
    }

    fn half() -> Self {
        Self::one() / Self::from_u8(2).expect("small integer")
    }
}

impl Scalar for BigRational {
    /// Closed form of the bisection: after `k` halvings the enclosure is the
    /// dyadic grid cell `[a / 2^k, (a + 1) / 2^k]` with `a = floor(sqrt(n) 2^k)`.
    fn sqrt_enclosure(radicand: u32, steps: u32) -> (Self, Self) {
        let scale = BigInt::one() << steps;
        let scaled: BigInt = BigInt::from(radicand) * &scale * &scale;
        let a = scaled.sqrt();
        let lo = BigRational::new(a.clone(), scale.clone());
        let hi = BigRational::new(a + 1, scale);
        (lo, hi)
    }

    /// The same enclosures, computed on integers: with `L` the common
    /// denominator, `L w 2^k` is enclosed by `P 2^k + sum C [a, a + 1]`
    /// where `a = floor(sqrt(m) 2^k)` for each coefficient `C` of `sqrt m`.
    fn quad_signum(w: &QuadSum<Self>) -> Ordering {
        let (ints, _) = integer_coordinates(w);
        let mut steps = 16u32;
        loop {
            let (lo, hi) = integer_enclosure(&ints, steps);
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

/// Coordinates of `w` times the least common denominator, and that
/// denominator.
pub(crate) fn integer_coordinates(w: &QuadSum<BigRational>) -> ([BigInt; 4], BigInt) {
    let l = [&w.p, &w.q, &w.r, &w.s].iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = [&w.p, &w.q, &w.r, &w.s].map(|x| x.numer() * (&l / x.denom()));
    (ints, l)
}

/// Integer enclosure `[lo, hi]` of `(P + Q sqrt2 + R sqrt3 + S sqrt6) 2^k`.
pub(crate) fn integer_enclosure(c: &[BigInt; 4], k: u32) -> (BigInt, BigInt) {
    let mut lo = &c[0] << k;
    let mut hi = lo.clone();
    for (coef, m) in [(&c[1], 2u32), (&c[2], 3), (&c[3], 6)] {
        if coef.is_zero() {
            continue;
        }
        let a = (BigInt::from(m) << (2 * k)).sqrt();
        let (l, h) = (coef * &a, coef * (&a + 1));
        if coef.is_positive() {
            lo += l;
            hi += h;
        } else {
            lo += h;
            hi += l;
        }
    }
    (lo, hi)
}

impl Scalar for Ratio<i64> {}
impl Scalar for Ratio<i128> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_matches_bisection() {
        for &n in &[2u32, 3, 6] {
            for steps in 0..40 {
                let (lo, hi) = <Ratio<i128> as Scalar>::sqrt_enclosure(n, steps);
                let (blo, bhi) = BigRational::sqrt_enclosure(n, steps);
                assert_eq!(BigInt::from(*lo.numer()) * blo.denom(), blo.numer() * BigInt::from(*lo.denom()));
                assert_eq!(BigInt::from(*hi.numer()) * bhi.denom(), bhi.numer() * BigInt::from(*hi.denom()));
            }
        }
    }

    #[test]
    fn enclosure_brackets_root() {
        for &n in &[2u32, 3, 6] {
            let (lo, hi) = BigRational::sqrt_enclosure(n, 50);
            let nn = BigRational::from_integer(n.into());
            assert!(&lo * &lo < nn && nn < &hi * &hi);
        }
    }
}
