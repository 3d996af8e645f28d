use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{Point, TopologyError};
use crate::exact_algebra::rational::{format_rational, serde_rational};
use crate::{Qf3Value, Rational};

/// `N(z, eps) = {z} u {w in B0 : |w - z-| < eps} u {w in B0 : |w - z+| < eps}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasicNbhd {
    center: Point,
    #[serde(with = "serde_rational")]
    radius: Rational,
}

impl BasicNbhd {
    pub fn new(center: Point, radius: Rational) -> Result<Self, TopologyError> {
        if !radius.is_positive() {
            return Err(TopologyError::NonPositiveRadius(format_rational(&radius)));
        }
        Ok(BasicNbhd { center, radius })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    fn strip_centers(&self) -> [Qf3Value; 2] {
        [self.center.minus(), self.center.plus()]
    }

    /// True when `v` lies in one of the two open base strips.
    pub fn strip_contains(&self, v: &Qf3Value) -> bool {
        self.strip_centers().iter().any(|c| dist_lt(v, c, &self.radius))
    }
}

/// `|a - b| < eps`
pub(crate) fn dist_lt(a: &Qf3Value, b: &Qf3Value, eps: &Rational) -> bool {
    let d = a.clone() - b.clone();
    let e = Qf3Value::rational(eps.clone());
    -e.clone() < d && d < e
}

/// `|a - b| <= eps`
pub(crate) fn dist_le(a: &Qf3Value, b: &Qf3Value, eps: &Rational) -> bool {
    let d = a.clone() - b.clone();
    let e = Qf3Value::rational(eps.clone());
    -e.clone() <= d && d <= e
}

pub fn nbhd_contains(n: &BasicNbhd, w: &Point) -> bool {
    if w == &n.center {
        return true;
    }
    w.is_base() && n.strip_contains(&w.minus())
}

/// Membership in the closure of `N`: some projection of `b` is within
/// `eps` (non-strict) of some projection of the center.
pub fn nbhd_closure_contains(n: &BasicNbhd, b: &Point) -> bool {
    if b == &n.center {
        return true;
    }
    let centers = n.strip_centers();
    [b.minus(), b.plus()].iter().any(|p| centers.iter().any(|c| dist_le(p, c, &n.radius)))
}

/// Membership in the interior of the closure of `N`: both projections of
/// `b` lie in the open strips.
pub fn ritter_regular_nbhd_contains(n: &BasicNbhd, b: &Point) -> bool {
    if b == &n.center {
        return true;
    }
    n.strip_contains(&b.minus()) && n.strip_contains(&b.plus())
}

/// The same predicate for a finite union of basic neighbourhoods, with the
/// union of all open strips as the trace.
pub fn ritter_union_contains(ns: &[BasicNbhd], b: &Point) -> bool {
    if ns.iter().any(|n| &n.center == b) {
        return true;
    }
    let in_trace = |v: &Qf3Value| ns.iter().any(|n| n.strip_contains(v));
    in_trace(&b.minus()) && in_trace(&b.plus())
}

/// `(x, y) -> (a x + b, a y)` for `a > 0`.
pub fn affine_map(a: &Rational, b: &Rational, z: &Point) -> Result<Point, TopologyError> {
    if !a.is_positive() {
        return Err(TopologyError::NonPositiveScale(format_rational(a)));
    }
    Point::new(a * z.x() + b, a * z.y())
}

/// Image of `N(z, eps)` under the affine map: `N(f(z), a eps)`.
pub fn affine_nbhd(a: &Rational, b: &Rational, n: &BasicNbhd) -> Result<BasicNbhd, TopologyError> {
    BasicNbhd::new(affine_map(a, b, &n.center)?, a * &n.radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::{rat, ratio};

    fn p(x: Rational, y: Rational) -> Point {
        Point::new(x, y).unwrap()
    }

    fn n(x: i64, y: i64, r: i64) -> BasicNbhd {
        BasicNbhd::new(p(rat(x), rat(y)), rat(r)).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(nbhd_contains(&n(0, 1, 1), &p(rat(0), rat(1))));
        assert!(!nbhd_contains(&n(0, 1, 1), &Point::base(rat(0))));
        assert!(nbhd_contains(&n(0, 1, 2), &Point::base(ratio(-3, 2))));
        // non-base points other than the center are never in N
        assert!(!nbhd_contains(&n(0, 1, 2), &p(rat(0), ratio(1, 2))));
    }

    #[test]
    fn closure_examples() {
        assert!(nbhd_closure_contains(&n(0, 1, 1), &p(rat(0), rat(1))));
        assert!(!nbhd_closure_contains(&n(0, 0, 1), &p(rat(0), rat(1))));
        assert!(nbhd_closure_contains(&n(0, 0, 2), &p(rat(0), rat(1))));
        // boundary is included: |1 - 0| <= 1
        assert!(nbhd_closure_contains(&n(0, 0, 1), &Point::base(rat(1))));
        assert!(!nbhd_contains(&n(0, 0, 1), &Point::base(rat(1))));
    }

    #[test]
    fn regular_interior_examples() {
        assert!(ritter_regular_nbhd_contains(&n(0, 0, 2), &p(rat(0), rat(0))));
        assert!(ritter_regular_nbhd_contains(&n(0, 0, 2), &p(rat(0), rat(1))));
        assert!(!ritter_regular_nbhd_contains(&n(0, 0, 1), &p(rat(0), rat(1))));
        let union = [n(-2, 0, 1), n(2, 0, 1)];
        // projections -sqrt3, sqrt3 sit in different members of the union
        assert!(ritter_union_contains(&union, &p(rat(0), rat(1))));
        assert!(!ritter_regular_nbhd_contains(&union[0], &p(rat(0), rat(1))));
    }

    #[test]
    fn affine_examples() {
        let z = p(rat(3), rat(7));
        assert_eq!(affine_map(&rat(1), &rat(0), &z).unwrap(), z);
        assert_eq!(affine_map(&rat(2), &rat(1), &p(rat(1), rat(1))).unwrap(), p(rat(3), rat(2)));
        assert!(affine_map(&rat(0), &rat(1), &z).is_err());
        assert!(BasicNbhd::new(z, rat(0)).is_err());
    }
}
