use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::nbhd::nbhd_closure_contains;
use super::{BasicNbhd, Point, TopologyError};
use crate::exact_algebra::rational::rat;
use crate::{Qf3Value, Rational};

/// Witness that a finite set is theta-discrete: projection values of
/// distinct points are at least `min_gap` apart, and closures of the
/// basic neighbourhoods of radius `radius <= min_gap / 3` around the
/// points contain no other point of the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaWitness {
    pub discrete: bool,
    pub min_gap: Option<Qf3Value>,
    pub radius: Option<Rational>,
}

impl ThetaWitness {
    /// Re-checks the separation claim pairwise.
    pub fn separates(&self, points: &[Point]) -> Result<(), (Point, Point)> {
        let Some(radius) = &self.radius else {
            return if points.len() <= 1 { Ok(()) } else { Err((points[0].clone(), points[1].clone())) };
        };
        separation_check(points, radius)
    }
}

fn abs(v: Qf3Value) -> Qf3Value {
    if v < Qf3Value::zero() {
        -v
    } else {
        v
    }
}

pub fn theta_discrete_finite(points: &[Point]) -> ThetaWitness {
    let mut gap: Option<Qf3Value> = None;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if a == b {
                continue;
            }
            for u in [a.minus(), a.plus()] {
                for v in [b.minus(), b.plus()] {
                    let d = abs(u.clone() - v);
                    if gap.as_ref().is_none_or(|g| &d < g) {
                        gap = Some(d);
                    }
                }
            }
        }
    }
    let radius = gap.as_ref().map(|g| {
        if g.is_rational() {
            &g.r0 / rat(3)
        } else {
            // largest power of two not exceeding g / 3
            let third = g.scale(&(Rational::one() / rat(3)));
            let mut r = Rational::one();
            while Qf3Value::rational(r.clone()) > third {
                r /= rat(2);
            }
            while Qf3Value::rational(&r * rat(2)) <= third {
                r *= rat(2);
            }
            r
        }
    });
    ThetaWitness { discrete: true, min_gap: gap, radius }
}

/// Pairwise check that no closure of radius `radius` around one point
/// catches another.
pub fn separation_check(points: &[Point], radius: &Rational) -> Result<(), (Point, Point)> {
    for a in points {
        let n = BasicNbhd::new(a.clone(), radius.clone()).expect("positive radius");
        for b in points {
            if a != b && nbhd_closure_contains(&n, b) {
                return Err((a.clone(), b.clone()));
            }
        }
    }
    Ok(())
}

/// `a_k = (0, 1/k)`, converging to the origin in the Euclidean sense.
pub fn example1_family(k: u64) -> Result<Point, TopologyError> {
    if k < 1 {
        return Err(TopologyError::InvalidIndex);
    }
    Point::new(rat(0), Rational::new(1.into(), k.into()))
}

/// Least `K >= 1` with `3 <= eps^2 K^2`: from `K` on, every `a_k` lies in
/// the closure of `N((0,0), eps)`.
pub fn example1_audit(eps: &Rational) -> Result<BigInt, TopologyError> {
    if !eps.is_positive() {
        return Err(TopologyError::NonPositiveRadius(crate::exact_algebra::format_rational(eps)));
    }
    let target = rat(3) / (eps * eps);
    let mut k = target.floor().to_integer().sqrt();
    if k < BigInt::one() {
        k = BigInt::one();
    }
    let ok = |k: &BigInt| Rational::from_integer(k * k) >= target;
    while k > BigInt::one() && ok(&(&k - 1)) {
        k -= 1;
    }
    while !ok(&k) {
        k += 1;
    }
    Ok(k)
}

/// `Z x {0}` restricted to `[lo, hi]`.
pub fn example2_window(lo: i64, hi: i64) -> Vec<Point> {
    (lo..=hi).map(|k| Point::base(rat(k))).collect()
}
