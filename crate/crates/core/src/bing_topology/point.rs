use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::TopologyError;
use crate::exact_algebra::rational::{format_rational, parse_rational, serde_rational};
use crate::exact_algebra::Qf3;
use crate::{Qf3Value, Rational};

/// A point `(x, y)` of the Bing space, `y >= 0`. Derived order is
/// lexicographic on `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    x: Rational,
    y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Result<Self, TopologyError> {
        if y.is_negative() {
            return Err(TopologyError::NegativeHeight { x: format_rational(&x), y: format_rational(&y) });
        }
        Ok(Point { x, y })
    }

    pub fn base(x: Rational) -> Self {
        Point { x, y: Rational::zero() }
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    /// True on the base line `Q x {0}`.
    pub fn is_base(&self) -> bool {
        self.y.is_zero()
    }

    pub fn minus(&self) -> Qf3Value {
        proj_minus(self)
    }

    pub fn plus(&self) -> Qf3Value {
        proj_plus(self)
    }

    pub fn projections(&self) -> ProjectionPair {
        ProjectionPair { lo: self.minus(), hi: self.plus() }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", format_rational(&self.x), format_rational(&self.y))
    }
}

/// Parses the command-line form `"x;y"`.
impl FromStr for Point {
    type Err = TopologyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TopologyError::Malformed(s.to_string());
        let (x, y) = s.split_once(';').ok_or_else(bad)?;
        let x = parse_rational(x).map_err(|_| bad())?;
        let y = parse_rational(y).map_err(|_| bad())?;
        Point::new(x, y)
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    #[serde(with = "serde_rational")]
    x: Rational,
    #[serde(with = "serde_rational")]
    y: Rational,
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointRepr { x: self.x.clone(), y: self.y.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PointRepr::deserialize(d)?;
        Point::new(r.x, r.y).map_err(serde::de::Error::custom)
    }
}

/// The doubleton `{z-, z+}` of a point, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectionPair {
    pub lo: Qf3Value,
    pub hi: Qf3Value,
}

impl ProjectionPair {
    pub fn values(&self) -> [&Qf3Value; 2] {
        [&self.lo, &self.hi]
    }
}

/// `x - sqrt(3) y`
pub fn proj_minus(z: &Point) -> Qf3Value {
    Qf3::new(z.x.clone(), -z.y.clone())
}

/// `x + sqrt(3) y`
pub fn proj_plus(z: &Point) -> Qf3Value {
    Qf3::new(z.x.clone(), z.y.clone())
}

/// Inverse of the projection pair: the point `z` with `z- = s`, `z+ = t`,
/// when one exists.
pub fn point_from_projections(s: &Qf3Value, t: &Qf3Value) -> Result<Option<Point>, TopologyError> {
    if s > t {
        return Err(TopologyError::ProjectionOrder);
    }
    // s = x - sqrt3 y and t = x + sqrt3 y are conjugates.
    if s.r0 != t.r0 || s.r1 != -t.r1.clone() {
        return Ok(None);
    }
    Ok(Some(Point { x: t.r0.clone(), y: t.r1.clone() }))
}
