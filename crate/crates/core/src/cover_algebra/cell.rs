use std::fmt;

use serde::{Deserialize, Serialize};

use super::interval::CutInterval;
use crate::Qf3Value;

/// One refinement step in a cell's path.
///
/// `Lattice(k, piece)` is a piece of the root lattice interval `k`;
/// `Child(rung, part, sub, piece)` is a piece of ladder rung `rung` in part
/// `part` of the parent cell, after the uniform split `sub`. The derived
/// order is the canonical enumeration order among siblings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Step {
    Lattice(i64, u32),
    Child(u32, u8, u32, u32),
}

/// Path of a cell from the root partition; the prefix is the parent cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CellId(pub Vec<Step>);

impl CellId {
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn parent(&self) -> Option<CellId> {
        if self.0.len() <= 1 {
            None
        } else {
            Some(CellId(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> &Step {
        self.0.last().expect("cell ids are never empty")
    }

    pub fn child(&self, step: Step) -> CellId {
        let mut v = self.0.clone();
        v.push(step);
        CellId(v)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// A member of a disjoint clopen cover: one order-convex interval, or two
/// merged intervals isolating both projections of a checked point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    pub parts: Vec<CutInterval>,
}

impl Cell {
    pub fn single(id: CellId, part: CutInterval) -> Self {
        Cell { id, parts: vec![part] }
    }

    pub fn is_double(&self) -> bool {
        self.parts.len() == 2
    }

    pub fn contains(&self, v: &Qf3Value) -> bool {
        self.parts.iter().any(|p| p.contains(v))
    }

    pub fn part_of(&self, v: &Qf3Value) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(v))
    }

    pub fn disjoint(&self, other: &Cell) -> bool {
        self.parts.iter().all(|a| other.parts.iter().all(|b| a.disjoint(b)))
    }

    /// Every part lies inside some part of `outer`.
    pub fn inside(&self, outer: &Cell) -> bool {
        self.parts.iter().all(|p| outer.parts.iter().any(|o| o.contains_interval(p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_json_shape() {
        let id = CellId(vec![Step::Lattice(-3, 0), Step::Child(2, 1, 0, 1)]);
        let s = serde_json::to_string(&id).unwrap();
        assert_eq!(s, "[[-3,0],[2,1,0,1]]");
        assert_eq!(serde_json::from_str::<CellId>(&s).unwrap(), id);
        assert_eq!(id.parent(), Some(CellId(vec![Step::Lattice(-3, 0)])));
    }

    #[test]
    fn sibling_order_is_rung_major() {
        assert!(Step::Child(0, 1, 0, 0) < Step::Child(1, 0, 0, 0));
        assert!(Step::Child(1, 0, 0, 5) < Step::Child(1, 1, 0, 0));
    }
}
