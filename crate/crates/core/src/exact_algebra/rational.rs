//! Concrete helpers over arbitrary-precision rationals: text encoding,
//! heights, exact floors and simplest rationals in intervals.

use std::cmp::Ordering;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::quad::QuadSum;
use super::scalar::{integer_coordinates, integer_enclosure};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Canonical `"p/q"` with `q > 0`, always carrying the denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let bad = || ParseRationalError::Malformed(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(n).map_err(|_| bad())?;
    if d.starts_with('-') || d.starts_with('+') {
        return Err(bad());
    }
    let denom = BigInt::from_str(d).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// `max(|p|, q)` for `p/q` in lowest terms.
pub fn height(x: &Rational) -> BigInt {
    let p = x.numer().abs();
    if &p > x.denom() {
        p
    } else {
        x.denom().clone()
    }
}

/// Exact `floor` of an element of `Q(sqrt 2, sqrt 3)`.
pub fn floor_quad(w: &QuadSum<Rational>) -> BigInt {
    if w.q.is_zero() && w.r.is_zero() && w.s.is_zero() {
        return w.p.floor().to_integer();
    }
    let (ints, l) = integer_coordinates(w);
    let mut steps = 16u32;
    loop {
        let (lo, hi) = integer_enclosure(&ints, steps);
        let unit = &l << steps;
        let (fl, fh) = (lo.div_floor(&unit), hi.div_floor(&unit));
        if fl == fh {
            return fl;
        }
        if fh == &fl + 1 {
            let at = QuadSum::rational(Rational::from_integer(fh.clone()));
            return if (w.clone() - at).signum() == Ordering::Less { fl } else { fh };
        }
        steps = steps * 3 / 2 + 8;
    }
}

/// Least-height rational inside an open interval given by a locator:
/// `locate(x)` is `Less` when `x` is at or below the interval, `Greater`
/// when at or above it, and `Equal` inside. Ties in height go to the
/// smaller value. The interval must be nonempty.
pub fn simplest_in<F>(locate: F) -> Rational
where
    F: Fn(&Rational) -> Ordering,
{
    let small: Vec<Rational> =
        [-1, 0, 1].iter().map(|&k| Rational::from_integer(k.into())).filter(|x| locate(x) == Ordering::Equal).collect();
    if let Some(first) = small.into_iter().next() {
        return first;
    }
    if locate(&Rational::zero()) == Ordering::Greater {
        let mirrored = |x: &Rational| locate(&-x).reverse();
        return -stern_brocot(&mirrored);
    }
    stern_brocot(&locate)
}

/// Simplest rational of a positive open interval by Stern-Brocot descent
/// with galloping over runs of equal direction.
fn stern_brocot<F>(locate: &F) -> Rational
where
    F: Fn(&Rational) -> Ordering,
{
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), BigInt::zero());
    loop {
        let at = |k: &BigInt, toward_right: bool| -> Rational {
            if toward_right {
                Rational::new(&a + k * &c, &b + k * &d)
            } else {
                Rational::new(k * &a + &c, k * &b + &d)
            }
        };
        let mediant = Rational::new(&a + &c, &b + &d);
        let dir = locate(&mediant);
        if dir == Ordering::Equal {
            return mediant;
        }
        // Too small: walk L + kR to the right. Too big: walk kL + R left.
        let toward_right = dir == Ordering::Less;
        let stuck = if toward_right { Ordering::Less } else { Ordering::Greater };
        let moved = |k: &BigInt| locate(&at(k, toward_right)) != stuck;
        let mut hi = BigInt::from(2);
        while !moved(&hi) {
            hi <<= 1;
        }
        let mut lo = &hi >> 1;
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1;
            if moved(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let candidate = at(&hi, toward_right);
        if locate(&candidate) == Ordering::Equal {
            return candidate;
        }
        let (na, nb, nc, nd);
        if toward_right {
            na = &a + &lo * &c;
            nb = &b + &lo * &d;
            nc = &a + &hi * &c;
            nd = &b + &hi * &d;
        } else {
            nc = &lo * &a + &c;
            nd = &lo * &b + &d;
            na = &hi * &a + &c;
            nb = &hi * &b + &d;
        }
        a = na;
        b = nb;
        c = nc;
        d = nd;
        debug_assert!(a.gcd(&b).is_one() || b.is_zero());
    }
}

/// All rationals of height exactly `h`, in increasing order.
pub fn rationals_of_height(h: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    if h == 0 {
        return out;
    }
    let hb = BigInt::from(h);
    for q in 1..=h {
        let qb = BigInt::from(q);
        for p in 0..=h {
            let pb = BigInt::from(p);
            if (p != h && q != h) || !pb.gcd(&qb).is_one() {
                continue;
            }
            let x = Rational::new(pb.clone(), qb.clone());
            if !x.is_zero() {
                out.push(-x.clone());
            }
            out.push(x);
        }
    }
    debug_assert!(out.iter().all(|x| height(x) == hb));
    out.sort();
    out
}

/// Locator for the open rational interval `(lo, hi)`.
pub fn open_interval(lo: Rational, hi: Rational) -> impl Fn(&Rational) -> Ordering {
    move |x: &Rational| {
        if x <= &lo {
            Ordering::Less
        } else if x >= &hi {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    }
}

pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}
