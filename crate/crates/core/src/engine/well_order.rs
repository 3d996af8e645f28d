use std::sync::Mutex;

use num_traits::{Signed, ToPrimitive};

use crate::bing_topology::Point;
use crate::exact_algebra::rational::{height, rationals_of_height};
use crate::Rational;

/// Height of a point: `max(|p|, q, |r|, s)` for `x = p/q`, `y = r/s`.
pub fn point_height(z: &Point) -> u64 {
    height(z.x()).max(height(z.y())).to_u64().expect("height fits in u64")
}

/// Rationals of height at most `h`, sorted, with the nonnegative ones kept
/// separately.
#[derive(Debug, Default)]
struct Shells {
    /// `all[k]` lists rationals of height `k + 1`.
    all: Vec<Vec<Rational>>,
    /// Cumulative point counts: `starts[k]` points have height `<= k`.
    starts: Vec<u64>,
}

impl Shells {
    fn ensure(&mut self, h: u64) {
        if self.starts.is_empty() {
            self.starts.push(0);
        }
        while (self.all.len() as u64) < h {
            let k = self.all.len() as u64 + 1;
            self.all.push(rationals_of_height(k));
            let le = self.upto(k);
            let nonneg = le.iter().filter(|r| !r.is_negative()).count();
            self.starts.push((le.len() * nonneg) as u64);
        }
    }

    fn upto(&self, h: u64) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.all[..h as usize].iter().flatten().cloned().collect();
        v.sort();
        v
    }

    /// Points of height exactly `h`, ordered by `(x, y)`.
    fn shell(&self, h: u64) -> Vec<Point> {
        let exact = &self.all[h as usize - 1];
        let le = self.upto(h);
        let mut out = Vec::new();
        for x in &le {
            let x_exact = exact.binary_search(x).is_ok();
            for y in le.iter().filter(|y| !y.is_negative()) {
                if x_exact || exact.binary_search(y).is_ok() {
                    out.push(Point::new(x.clone(), y.clone()).expect("y >= 0"));
                }
            }
        }
        out
    }
}

/// The well-order of the Bing space by height, then `x`, then `y`. Every
/// initial segment is finite.
#[derive(Debug, Default)]
pub struct WellOrder {
    shells: Mutex<Shells>,
    prefix: Mutex<Vec<Point>>,
}

impl WellOrder {
    pub fn new() -> Self {
        WellOrder::default()
    }

    /// Sort key of the order.
    pub fn key(z: &Point) -> (u64, Rational, Rational) {
        (point_height(z), z.x().clone(), z.y().clone())
    }

    /// The point with the given index.
    pub fn point(&self, index: u64) -> Point {
        {
            let prefix = self.prefix.lock().unwrap();
            if let Some(p) = prefix.get(index as usize) {
                return p.clone();
            }
        }
        let mut shells = self.shells.lock().unwrap();
        let mut prefix = self.prefix.lock().unwrap();
        while prefix.len() as u64 <= index {
            let h = shells.all.len() as u64 + 1;
            shells.ensure(h);
            let s = shells.shell(h);
            prefix.extend(s);
        }
        prefix[index as usize].clone()
    }

    /// Index of `z`: the number of points strictly before it.
    pub fn index(&self, z: &Point) -> u64 {
        let h = point_height(z);
        let mut shells = self.shells.lock().unwrap();
        shells.ensure(h);
        let before = shells.starts[h as usize - 1];
        let exact = &shells.all[h as usize - 1];
        let le = shells.upto(h);
        let nonneg: Vec<&Rational> = le.iter().filter(|y| !y.is_negative()).collect();
        let nonneg_exact = nonneg.iter().filter(|y| exact.binary_search(y).is_ok()).count() as u64;
        let mut count = 0u64;
        for x in le.iter().take_while(|x| *x < z.x()) {
            count += if exact.binary_search(x).is_ok() { nonneg.len() as u64 } else { nonneg_exact };
        }
        let x_exact = exact.binary_search(z.x()).is_ok();
        count += nonneg.iter().take_while(|y| **y < z.y()).filter(|y| x_exact || exact.binary_search(y).is_ok()).count()
            as u64;
        before + count
    }

    /// The least point outside `taken`.
    pub fn min_excluding(&self, taken: impl Fn(&Point) -> bool) -> Point {
        (0u64..).map(|i| self.point(i)).find(|p| !taken(p)).expect("taken sets are finite")
    }
}

/// Compares two points in the well-order.
pub fn precedes(a: &Point, b: &Point) -> bool {
    WellOrder::key(a) < WellOrder::key(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::{rat, ratio};

    #[test]
    fn first_points() {
        let w = WellOrder::new();
        let first: Vec<String> = (0..6).map(|i| w.point(i).to_string()).collect();
        assert_eq!(first, ["-1/1;0/1", "-1/1;1/1", "0/1;0/1", "0/1;1/1", "1/1;0/1", "1/1;1/1"]);
    }

    #[test]
    fn index_inverts_point() {
        let w = WellOrder::new();
        for i in 0..400 {
            assert_eq!(w.index(&w.point(i)), i);
        }
        let z = Point::new(ratio(-2, 3), ratio(3, 4)).unwrap();
        assert_eq!(w.point(w.index(&z)), z);
    }

    #[test]
    fn order_matches_key() {
        let w = WellOrder::new();
        for i in 0..200 {
            assert!(precedes(&w.point(i), &w.point(i + 1)));
        }
        assert!(precedes(&Point::base(rat(5)), &Point::base(ratio(1, 6))));
    }
}
