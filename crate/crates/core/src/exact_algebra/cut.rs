use std::cmp::Ordering;

use super::qf3::Qf3;
use super::quad::QuadSum;
use super::scalar::Scalar;

/// The irrational cut point `q + sqrt(2)`.
///
/// No cut lies in `Q + sqrt(3) Q`, so an interval between two cuts is
/// simultaneously open and closed in `X`. Cuts compare by `q` alone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut<T> {
    pub q: T,
}

impl<T: Scalar> Cut<T> {
    pub fn new(q: T) -> Self {
        Cut { q }
    }

    pub fn to_quad(&self) -> QuadSum<T> {
        QuadSum::new(self.q.clone(), T::one(), T::zero(), T::zero())
    }

    /// Strict comparison against an element of `X`; never equal.
    pub fn cmp_value(&self, v: &Qf3<T>) -> Ordering {
        cut_compare_qf3(self, v)
    }

    pub fn lt_value(&self, v: &Qf3<T>) -> bool {
        self.cmp_value(v) == Ordering::Less
    }

    pub fn gt_value(&self, v: &Qf3<T>) -> bool {
        self.cmp_value(v) == Ordering::Greater
    }
}

pub fn cut_compare_qf3<T: Scalar>(c: &Cut<T>, v: &Qf3<T>) -> Ordering {
    let w = QuadSum::new(c.q.clone() - v.r0.clone(), T::one(), -v.r1.clone(), T::zero());
    let sign = w.signum();
    debug_assert_ne!(sign, Ordering::Equal, "a cut never lies in Q + sqrt(3) Q");
    sign
}

/// A number that is either an element of `X` or a cut.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderedValue<T> {
    Point(Qf3<T>),
    Cut(Cut<T>),
}

impl<T: Scalar> OrderedValue<T> {
    pub fn to_quad(&self) -> QuadSum<T> {
        match self {
            OrderedValue::Point(v) => v.to_quad(),
            OrderedValue::Cut(c) => c.to_quad(),
        }
    }
}

impl<T: Scalar> Ord for OrderedValue<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (OrderedValue::Point(a), OrderedValue::Point(b)) => a.cmp(b),
            (OrderedValue::Cut(a), OrderedValue::Cut(b)) => a.cmp(b),
            (OrderedValue::Cut(c), OrderedValue::Point(v)) => cut_compare_qf3(c, v),
            (OrderedValue::Point(v), OrderedValue::Cut(c)) => cut_compare_qf3(c, v).reverse(),
        }
    }
}

impl<T: Scalar> PartialOrd for OrderedValue<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
