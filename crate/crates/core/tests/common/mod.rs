//! Shared helpers for the integration tests: seeded generators and an
//! independent fixed-point oracle for signs in Q(sqrt 2, sqrt 3).
#![allow(dead_code)]

use std::cmp::Ordering;

use bing_core::bing_topology::Point;
use bing_core::exact_algebra::{Cut, Qf3};
use bing_core::{Qf3Value, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn pt(x: Rational, y: Rational) -> Point {
    Point::new(x, y).unwrap()
}

/// Parses `"x;y"`.
pub fn p(s: &str) -> Point {
    s.parse().unwrap()
}

/// A rational with numerator and denominator bounded by `h`.
pub fn rand_rat(r: &mut impl Rng, h: i64) -> Rational {
    q(r.gen_range(-h..=h), r.gen_range(1..=h))
}

pub fn rand_nonneg(r: &mut impl Rng, h: i64) -> Rational {
    q(r.gen_range(0..=h), r.gen_range(1..=h))
}

/// A random point, on the base line with probability `p_base`.
pub fn rand_point(r: &mut impl Rng, h: i64, p_base: f64) -> Point {
    let base = r.gen_bool(p_base);
    let y = if base { q(0, 1) } else { q(r.gen_range(1..=h), r.gen_range(1..=h)) };
    pt(rand_rat(r, h), y)
}

pub fn rand_qf3(r: &mut impl Rng, h: i64) -> Qf3Value {
    Qf3::new(rand_rat(r, h), rand_rat(r, h))
}

/// Random finite bijection with `n` pairs and coordinates of height at
/// most `h`. `mixed` forces at least one base/non-base crossing.
pub fn rand_bijection(r: &mut impl Rng, n: usize, h: i64, mixed: bool) -> Vec<(Point, Point)> {
    loop {
        let mut from: Vec<Point> = Vec::new();
        let mut to: Vec<Point> = Vec::new();
        while from.len() < n {
            let a = rand_point(r, h, 0.5);
            let b = rand_point(r, h, 0.5);
            if !from.contains(&a) && !to.contains(&b) {
                from.push(a);
                to.push(b);
            }
        }
        let pairs: Vec<(Point, Point)> = from.into_iter().zip(to).collect();
        let crosses = pairs.iter().any(|(a, b)| a.is_base() != b.is_base());
        if !mixed || crosses {
            return pairs;
        }
    }
}

/// `floor(sqrt(k) 2^bits)`, independent of the crate's own enclosures.
fn sqrt_fixed(k: u32, bits: u32) -> BigInt {
    (BigInt::from(k) << (2 * bits)).sqrt()
}

/// Enclosure `[lo, hi] / 2^bits` of `p + q sqrt2 + r sqrt3 + s sqrt6`
/// scaled by the common denominator.
fn enclose(c: [&Rational; 4], bits: u32) -> (BigInt, BigInt) {
    let den = c.iter().fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let unit = BigInt::from(1) << bits;
    let roots = [None, Some(2), Some(3), Some(6)];
    for (x, root) in c.iter().zip(roots) {
        let n = x.numer() * (&den / x.denom());
        let (a, b) = match root {
            None => (unit.clone(), unit.clone()),
            Some(k) => {
                let f = sqrt_fixed(k, bits);
                (f.clone(), f + 1)
            }
        };
        if n.is_negative() {
            lo += &n * &b;
            hi += &n * &a;
        } else {
            lo += &n * &a;
            hi += &n * &b;
        }
    }
    (lo, hi)
}

/// Sign of `p + q sqrt2 + r sqrt3 + s sqrt6` when the oracle is decisive at
/// 512 bits; `None` otherwise.
pub fn oracle_sign(c: [&Rational; 4]) -> Option<Ordering> {
    if c.iter().all(|x| x.is_zero()) {
        return Some(Ordering::Equal);
    }
    let (lo, hi) = enclose(c, 512);
    if lo.is_positive() {
        Some(Ordering::Greater)
    } else if hi.is_negative() {
        Some(Ordering::Less)
    } else {
        None
    }
}

pub enum Val {
    V(Qf3Value),
    C(Cut<Rational>),
}

impl Val {
    /// Coordinates over `1, sqrt2, sqrt3, sqrt6`.
    pub fn coords(&self) -> [Rational; 4] {
        let z = Rational::zero();
        match self {
            Val::V(v) => [v.r0.clone(), z.clone(), v.r1.clone(), z],
            Val::C(c) => [c.q.clone(), Rational::from_integer(1.into()), z.clone(), z],
        }
    }
}

/// Oracle comparison of two values.
pub fn oracle_cmp(a: &Val, b: &Val) -> Option<Ordering> {
    let (x, y) = (a.coords(), b.coords());
    let d: Vec<Rational> = x.iter().zip(&y).map(|(u, v)| u - v).collect();
    oracle_sign([&d[0], &d[1], &d[2], &d[3]])
}
