//! Exact arithmetic for `Q`, `Q + sqrt(3) Q`, the cut points `q + sqrt(2)`
//! and the sign computations in `Q(sqrt 2, sqrt 3)` that order them.

mod cut;
mod qf3;
mod quad;
pub mod rational;
mod scalar;

pub use cut::{cut_compare_qf3, Cut, OrderedValue};
pub use qf3::{qf3_compare, qf3_conjugate, Qf3};
pub use quad::{sign_quadsum, QuadSum};
pub use rational::{format_rational, parse_rational, ParseRationalError, Rational};
pub use scalar::Scalar;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Qf3Repr {
    #[serde(with = "rational::serde_rational")]
    r0: Rational,
    #[serde(with = "rational::serde_rational")]
    r1: Rational,
}

impl Serialize for Qf3<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Qf3Repr { r0: self.r0.clone(), r1: self.r1.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Qf3<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Qf3Repr::deserialize(d)?;
        Ok(Qf3::new(r.r0, r.r1))
    }
}

#[derive(Serialize, Deserialize)]
struct CutRepr {
    #[serde(with = "rational::serde_rational")]
    q: Rational,
}

impl Serialize for Cut<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CutRepr { q: self.q.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cut<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Cut::new(CutRepr::deserialize(d)?.q))
    }
}

#[cfg(test)]
mod tests {
    use super::rational::ratio;
    use super::*;

    #[test]
    fn json_encoding() {
        let v = Qf3::new(ratio(1, 2), ratio(-3, 1));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"r0":"1/2","r1":"-3/1"}"#);
        assert_eq!(serde_json::from_str::<Qf3<Rational>>(&s).unwrap(), v);
        let c = Cut::new(ratio(-5, 4));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"q":"-5/4"}"#);
    }
}
