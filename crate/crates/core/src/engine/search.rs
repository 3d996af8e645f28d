use std::cmp::Ordering;

use num_traits::Signed;

use super::EngineError;
use crate::bing_topology::Point;
use crate::cover_algebra::{diamond_contains, CutInterval, DiamondCell};
use crate::exact_algebra::rational::{height, open_interval, simplest_in};
use crate::exact_algebra::{Cut, Scalar};
use crate::{Qf3Value, Rational};

#[derive(Clone, Debug)]
enum Bound {
    Cut(Rational),
    Rat(Rational),
}

/// Position of `x` relative to the open interval `(lo, hi)`.
fn locate(lo: &Bound, hi: &Bound, x: &Rational) -> Ordering {
    let v = Qf3Value::rational(x.clone());
    let above_lo = match lo {
        Bound::Cut(c) => Cut::new(c.clone()).lt_value(&v),
        Bound::Rat(r) => x > r,
    };
    if !above_lo {
        return Ordering::Less;
    }
    let below_hi = match hi {
        Bound::Cut(c) => Cut::new(c.clone()).gt_value(&v),
        Bound::Rat(r) => x < r,
    };
    if below_hi {
        Ordering::Equal
    } else {
        Ordering::Greater
    }
}

fn base_key(x: &Rational) -> (num_bigint::BigInt, Rational) {
    (height(x), x.clone())
}

/// Least rational (by height, then value) in `(lo, hi)` outside `forbid`.
fn least_rational(
    lo: Bound,
    hi: Bound,
    forbid: &dyn Fn(&Rational) -> bool,
    budget: &mut usize,
) -> Result<Rational, EngineError> {
    if *budget == 0 {
        return Err(EngineError::SearchExhausted);
    }
    *budget -= 1;
    let s = simplest_in(|x| locate(&lo, &hi, x));
    if !forbid(&s) {
        return Ok(s);
    }
    let left = least_rational(lo, Bound::Rat(s.clone()), forbid, budget)?;
    let right = least_rational(Bound::Rat(s), hi, forbid, budget)?;
    Ok(if base_key(&left) <= base_key(&right) { left } else { right })
}

/// The well-order least base point in the union of `parts` outside `forbid`.
pub fn least_base_point(
    parts: &[CutInterval],
    forbid: &dyn Fn(&Point) -> bool,
    cap: usize,
) -> Result<Point, EngineError> {
    let mut budget = cap;
    let f = |x: &Rational| forbid(&Point::base(x.clone()));
    let mut best: Option<Rational> = None;
    for part in parts {
        let r = least_rational(Bound::Cut(part.lo.clone()), Bound::Cut(part.hi.clone()), &f, &mut budget)?;
        if best.as_ref().is_none_or(|b| base_key(&r) < base_key(b)) {
            best = Some(r);
        }
    }
    best.map(Point::base).ok_or(EngineError::SearchExhausted)
}

/// A non-base point `z` with `z- in i` and `z+ in j`, where `i` does not lie
/// above `j`.
///
/// The point is taken from a box around a fixed inner target: with
/// `s_c = a1 + (min(a2, b2) - a1) / 4` and `t_c = b2 - (b2 - max(a1, b1)) / 4`
/// in cut offsets, the box is `|x - x_c| < rho/2`, `|sqrt3 (y - y_c)| < rho/2`
/// where `rho` bounds the distance of `s_c`, `t_c` to the interval ends and
/// half their gap. Inside a rational inner box the simplest `y`, then the
/// simplest `x`, is chosen; forbidden points push `y` upwards.
pub fn box_point(
    i: &CutInterval,
    j: &CutInterval,
    forbid: &dyn Fn(&Point) -> bool,
    cap: usize,
) -> Result<Point, EngineError> {
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let (a1, a2, b1, b2) = (&i.lo, &i.hi, &j.lo, &j.hi);
    let sc = a1 + (a2.min(b2) - a1) / &four;
    let tc = b2 - (b2 - a1.max(b1)) / &four;
    let gap = &tc - &sc;
    let rho = [&sc - a1, a2 - &sc, &tc - b1, b2 - &tc, &gap / &two].into_iter().min().expect("nonempty");
    assert!(rho.is_positive(), "degenerate projection box");
    let mid = (&sc + &tc) / &two;
    let mut k = 4;
    let (xlo, xhi, ylo0, yhi) = loop {
        let (r2l, r2h) = Rational::sqrt_enclosure(2, k);
        let (r3l, r3h) = Rational::sqrt_enclosure(3, k);
        let xlo = &mid + &r2h - &rho / &two;
        let xhi = &mid + &r2l + &rho / &two;
        let ylo = (&gap - &rho) / (&two * &r3l);
        let yhi = (&gap + &rho) / (&two * &r3h);
        if xlo < xhi && ylo < yhi {
            break (xlo, xhi, ylo, yhi);
        }
        k += 4;
    };
    let x = simplest_in(open_interval(xlo, xhi));
    let mut ylo = ylo0;
    for _ in 0..cap {
        let y = simplest_in(open_interval(ylo.clone(), yhi.clone()));
        let z = Point::new(x.clone(), y.clone()).expect("y > 0");
        if !forbid(&z) {
            return Ok(z);
        }
        ylo = y;
    }
    Err(EngineError::SearchExhausted)
}

/// A point of the diamond `d` outside `forbid` with the requested parity.
///
/// Base points are the well-order least. Non-base points come from
/// [`box_point`] on the first pair of parts that can carry both
/// projections.
pub fn candidate_in_diamond(
    d: &DiamondCell,
    forbid: &dyn Fn(&Point) -> bool,
    want_base: bool,
    cap: usize,
) -> Result<Point, EngineError> {
    let z = if want_base {
        if !d.is_degenerate() {
            return Err(EngineError::EmptyDiamond);
        }
        least_base_point(&d.u.parts, forbid, cap)?
    } else {
        let (i, j) = if d.is_degenerate() {
            (&d.u.parts[0], d.u.parts.last().expect("cells have parts"))
        } else {
            let (i, j) = (&d.u.parts[0], &d.v.parts[0]);
            if i.lo <= j.lo {
                (i, j)
            } else {
                (j, i)
            }
        };
        box_point(i, j, forbid, cap)?
    };
    if !diamond_contains(d, &z) || z.is_base() != want_base || forbid(&z) {
        return Err(EngineError::Internal(format!("candidate {z} fails its diamond")));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover_algebra::{diamond_of, LazyPartition};
    use crate::exact_algebra::rational::{rat, ratio};

    #[test]
    fn least_base_in_cell_of_zero() {
        let p = LazyPartition::lattice(ratio(1, 2));
        let d = diamond_of(&p, &Point::base(rat(0)));
        let z = candidate_in_diamond(&d, &|_| false, true, 100).unwrap();
        assert_eq!(z, Point::base(rat(0)));
        let z2 = candidate_in_diamond(&d, &|p| p == &z, true, 100).unwrap();
        assert_ne!(z2, z);
        assert!(d.u.contains(&z2.minus()));
    }

    #[test]
    fn least_base_matches_brute_force() {
        let p = LazyPartition::lattice(ratio(1, 4));
        for k in -8..8 {
            let c = p.root_cell_at(k);
            let d = DiamondCell::new(c.clone(), c.clone());
            let z = candidate_in_diamond(&d, &|_| false, true, 100).unwrap();
            let mut all: Vec<Rational> = (1..=40u64)
                .flat_map(crate::exact_algebra::rational::rationals_of_height)
                .filter(|x| c.contains(&Qf3Value::rational(x.clone())))
                .collect();
            all.sort_by_key(base_key);
            assert_eq!(z.x(), &all[0]);
        }
    }

    #[test]
    fn nonbase_candidate_hits_both_cells() {
        let p = LazyPartition::lattice(rat(4));
        let d = diamond_of(&p, &Point::new(rat(0), rat(1)).unwrap());
        let z = candidate_in_diamond(&d, &|_| false, false, 100).unwrap();
        assert!(z.y().is_positive());
        assert!(d.u.contains(&z.minus()) && d.v.contains(&z.plus()));
        let z2 = candidate_in_diamond(&d, &|p| p == &z, false, 100).unwrap();
        assert_ne!(z, z2);
    }

    #[test]
    fn nonbase_in_single_cell() {
        let p = LazyPartition::lattice(ratio(1, 8));
        let c = p.root_cell_at(3);
        let d = DiamondCell::new(c.clone(), c);
        let z = candidate_in_diamond(&d, &|_| false, false, 100).unwrap();
        assert!(!z.is_base());
    }
}
