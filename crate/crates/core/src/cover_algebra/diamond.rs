use serde::{Deserialize, Serialize};

use super::{Cell, CellBijection, CoverError, LazyPartition};
use crate::bing_topology::Point;

/// The set `U <> V` of points whose projections lie in `U u V` and hit
/// both `U` and `V`. Stored with `u.id <= v.id`, so equal pairs compare
/// equal regardless of the order they were given in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiamondCell {
    pub u: Cell,
    pub v: Cell,
}

impl DiamondCell {
    pub fn new(a: Cell, b: Cell) -> Self {
        if a.id <= b.id {
            DiamondCell { u: a, v: b }
        } else {
            DiamondCell { u: b, v: a }
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.u.id == self.v.id
    }
}

pub fn diamond_of(p: &LazyPartition, z: &Point) -> DiamondCell {
    DiamondCell::new(p.cell_of(&z.minus()), p.cell_of(&z.plus()))
}

pub fn diamond_contains(d: &DiamondCell, z: &Point) -> bool {
    let (lo, hi) = (z.minus(), z.plus());
    let within = |c: &Cell| c.contains(&lo) || c.contains(&hi);
    let covered = |v| d.u.contains(v) || d.v.contains(v);
    covered(&lo) && covered(&hi) && within(&d.u) && within(&d.v)
}

pub fn phi_diamond(phi: &CellBijection, d: &DiamondCell) -> Result<DiamondCell, CoverError> {
    Ok(DiamondCell::new(phi.apply(&d.u.id)?, phi.apply(&d.v.id)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rational::rat;

    #[test]
    fn base_point_diamond_is_degenerate() {
        let p = LazyPartition::lattice(rat(1));
        let w = Point::base(rat(3));
        let d = diamond_of(&p, &w);
        assert!(d.is_degenerate());
        assert!(diamond_contains(&d, &w));
    }

    #[test]
    fn coarse_lattice_separates_projections() {
        let p = LazyPartition::lattice(rat(4));
        let z = Point::new(rat(0), rat(1)).unwrap();
        let d = diamond_of(&p, &z);
        assert!(!d.is_degenerate());
        assert!(d.u.contains(&z.minus()) && d.v.contains(&z.plus()));
        assert!(diamond_contains(&d, &z));
        // both projections of 0 sit in the cell of -sqrt3
        assert!(!diamond_contains(&d, &Point::base(rat(0))));
    }
}
