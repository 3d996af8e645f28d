use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{CoverError, CutInterval};
use crate::exact_algebra::rational::{floor_quad, height, rationals_of_height};
use crate::{Qf3Value, QuadValue, Rational};

/// The first `count` values of `X` ordered by `(max(H(r0), H(r1)), r0, r1)`.
pub fn enumerate_x(count: usize) -> Vec<Qf3Value> {
    let mut out = Vec::with_capacity(count);
    let mut below: Vec<Rational> = Vec::new();
    let mut h = 1u64;
    while out.len() < count {
        let shell = rationals_of_height(h);
        let mut layer: Vec<Qf3Value> = Vec::new();
        for a in &shell {
            for b in below.iter().chain(&shell) {
                layer.push(Qf3Value::new(a.clone(), b.clone()));
            }
            for b in &below {
                layer.push(Qf3Value::new(b.clone(), a.clone()));
            }
        }
        layer.sort_by(|x, y| (&x.r0, &x.r1).cmp(&(&y.r0, &y.r1)));
        out.extend(layer.into_iter().take(count - out.len()));
        below.extend(shell);
        h += 1;
    }
    debug_assert!(out.iter().all(|v| height(&v.r0).max(height(&v.r1)) >= BigInt::one()));
    out
}

/// `floor((v - sqrt2) 2^d)`.
fn dyadic_floor(v: &Qf3Value, d: u32) -> BigInt {
    let s = Rational::from_integer(BigInt::one() << d);
    floor_quad(&QuadValue::new(&v.r0 * &s, -s.clone(), &v.r1 * &s, Rational::zero()))
}

fn ceil_scaled(q: &Rational, d: u32) -> BigInt {
    let v = q * Rational::from_integer(BigInt::one() << d);
    v.numer().div_ceil(v.denom())
}

fn floor_scaled(q: &Rational, d: u32) -> BigInt {
    let v = q * Rational::from_integer(BigInt::one() << d);
    v.numer().div_floor(v.denom())
}

/// Greedy disjoint refinement by order intervals.
///
/// `values[i]` must lie in `allowed[i]`. Step `k` takes the least index
/// `n_k` not yet covered and picks `B_k` inside `allowed[n_k]`, clear of the
/// earlier intervals and of every other listed value, with dyadic offsets of
/// least denominator and, among those, the widest. Returns up to `count`
/// pairs `(n_k, B_k)`; fewer when all listed values are covered.
pub fn convex_refine(
    values: &[Qf3Value],
    allowed: &[CutInterval],
    count: usize,
) -> Result<Vec<(usize, CutInterval)>, CoverError> {
    if values.len() != allowed.len() {
        return Err(CoverError::MalformedAssignment { index: values.len().min(allowed.len()) });
    }
    if let Some(index) = (0..values.len()).find(|&i| !allowed[i].contains(&values[i])) {
        return Err(CoverError::MalformedAssignment { index });
    }
    let mut sorted: Vec<&Qf3Value> = values.iter().collect();
    sorted.sort();
    sorted.dedup();
    let mut chosen: Vec<(usize, CutInterval)> = Vec::new();
    let mut covered = vec![false; values.len()];
    while chosen.len() < count {
        let Some(n) = covered.iter().position(|c| !c) else {
            break;
        };
        let x = &values[n];
        let mut glo = allowed[n].lo.clone();
        let mut ghi = allowed[n].hi.clone();
        for (_, b) in &chosen {
            if b.hi_cut().lt_value(x) {
                glo = glo.max(b.hi.clone());
            } else {
                ghi = ghi.min(b.lo.clone());
            }
        }
        // only the nearest listed values on either side constrain B
        let at = sorted.binary_search(&x).expect("listed value");
        let below = at.checked_sub(1).map(|i| sorted[i]);
        let above = sorted.get(at + 1).copied();
        let mut d = 0u32;
        let b = loop {
            let fx = dyadic_floor(x, d);
            let mut lo = ceil_scaled(&glo, d);
            let mut hi = floor_scaled(&ghi, d);
            if let Some(v) = below {
                lo = lo.max(dyadic_floor(v, d) + 1);
            }
            if let Some(v) = above {
                hi = hi.min(dyadic_floor(v, d));
            }
            if lo <= fx && fx < hi {
                let s = Rational::from_integer(BigInt::one() << d);
                break CutInterval::new(Rational::from_integer(lo) / &s, Rational::from_integer(hi) / &s);
            }
            d += 1;
        };
        // B holds no other listed value, so it covers exactly the copies of x
        for (c, v) in covered.iter_mut().zip(values) {
            *c = *c || v == x;
        }
        chosen.push((n, b));
    }
    Ok(chosen)
}
