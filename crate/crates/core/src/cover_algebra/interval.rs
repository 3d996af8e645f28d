use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exact_algebra::rational::{serde_rational, simplest_in};
use crate::exact_algebra::Cut;
use crate::{Qf3Value, Rational};

/// The order-convex clopen set `{t in X : lo + sqrt2 < t < hi + sqrt2}`,
/// stored by its rational offsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutInterval {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

impl CutInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo < hi, "empty cut interval");
        CutInterval { lo, hi }
    }

    pub fn lo_cut(&self) -> Cut<Rational> {
        Cut::new(self.lo.clone())
    }

    pub fn hi_cut(&self) -> Cut<Rational> {
        Cut::new(self.hi.clone())
    }

    /// Length of the interval, which is also the diameter of its trace on
    /// the dense set `X`.
    pub fn diameter(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Qf3Value) -> bool {
        self.lo_cut().lt_value(v) && self.hi_cut().gt_value(v)
    }

    /// `Less` if `v` is below the interval, `Greater` if above.
    pub fn locate(&self, v: &Qf3Value) -> Ordering {
        if self.lo_cut().gt_value(v) {
            Ordering::Less
        } else if self.hi_cut().lt_value(v) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }

    pub fn contains_interval(&self, other: &CutInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn disjoint(&self, other: &CutInterval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }

    /// The least-height rational inside the interval.
    pub fn representative(&self) -> Rational {
        simplest_in(|x: &Rational| self.locate(&Qf3Value::rational(x.clone())))
    }
}

/// A dyadic offset `q` with `a < q + sqrt2 < b`, searched by bisection of
/// `[lo, hi]` where `lo + sqrt2 < a < b < hi + sqrt2`.
pub fn cut_between(a: &Qf3Value, b: &Qf3Value, lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(a < b);
    let two = Rational::from_integer(2.into());
    let (mut l, mut h) = (lo.clone(), hi.clone());
    loop {
        let mid = (&l + &h) / &two;
        let c = Cut::new(mid.clone());
        if c.lt_value(a) {
            l = mid;
        } else if c.gt_value(b) {
            h = mid;
        } else {
            return mid;
        }
        debug_assert!(!(&h - &l).is_zero());
    }
}
