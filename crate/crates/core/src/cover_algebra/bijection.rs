use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use super::{Cell, CellId, CoverError, LazyPartition};

/// Position in a sibling enumeration: root cells are indexed by `Z`,
/// children of a cell by `N`.
type Pos = i64;

/// `i - #{s in S : s < i}`, a bijection from the complement of `S` onto the
/// index set.
fn rank(sorted: &[Pos], i: Pos) -> Pos {
    i - sorted.partition_point(|s| *s < i) as Pos
}

/// Inverse of [`rank`] over `T`.
fn unrank(sorted: &[Pos], r: Pos) -> Pos {
    let mut t = r;
    for s in sorted {
        if *s <= t {
            t += 1;
        } else {
            break;
        }
    }
    t
}

/// A bijection between the cells of two partitions of the same level.
///
/// Finitely many pairs are fixed explicitly. Every other cell is paired by
/// rank: among the siblings of its parent that are not override sources it
/// has some rank `r`, and it maps to the sibling of rank `r` among the
/// children of the parent's image that are not override targets. At the
/// root the siblings are all root cells, indexed by `Z`.
#[derive(Debug)]
pub struct CellBijection {
    domain: Arc<LazyPartition>,
    range: Arc<LazyPartition>,
    parent: Option<Arc<CellBijection>>,
    forward: BTreeMap<CellId, CellId>,
    backward: BTreeMap<CellId, CellId>,
    sources: BTreeMap<Option<CellId>, Vec<Pos>>,
    targets: BTreeMap<Option<CellId>, Vec<Pos>>,
    fwd_cache: Mutex<HashMap<CellId, Cell>>,
    bwd_cache: Mutex<HashMap<CellId, Cell>>,
}

impl CellBijection {
    pub fn new(
        domain: Arc<LazyPartition>,
        range: Arc<LazyPartition>,
        parent: Option<Arc<CellBijection>>,
        overrides: impl IntoIterator<Item = (CellId, CellId)>,
    ) -> Result<Self, CoverError> {
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for (a, b) in overrides {
            let da = domain.cell_by_id(&a).filter(|c| c.id == a);
            let db = range.cell_by_id(&b).filter(|c| c.id == b);
            if da.is_none() {
                return Err(CoverError::UnknownCell(a));
            }
            if db.is_none() {
                return Err(CoverError::UnknownCell(b));
            }
            match (forward.get(&a), backward.get(&b)) {
                (None, None) => {}
                (Some(x), _) if x == &b => continue,
                _ => return Err(CoverError::OverrideConflict(a, b)),
            }
            forward.insert(a.clone(), b.clone());
            backward.insert(b, a);
        }
        let mut phi = CellBijection {
            domain,
            range,
            parent,
            forward,
            backward,
            sources: BTreeMap::new(),
            targets: BTreeMap::new(),
            fwd_cache: Mutex::new(HashMap::new()),
            bwd_cache: Mutex::new(HashMap::new()),
        };
        let pairs: Vec<(CellId, CellId)> = phi.forward.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        for (a, b) in pairs {
            if let Some(parent) = &phi.parent {
                let pa = a.parent().ok_or_else(|| CoverError::UnknownCell(a.clone()))?;
                let pb = b.parent().ok_or_else(|| CoverError::UnknownCell(b.clone()))?;
                if parent.apply(&pa)?.id != pb {
                    return Err(CoverError::OverrideAcrossParents(a, b));
                }
            }
            let (ka, pa) = phi.sibling_position(&phi.domain, &a)?;
            let (kb, pb) = phi.sibling_position(&phi.range, &b)?;
            phi.sources.entry(ka).or_default().push(pa);
            phi.targets.entry(kb).or_default().push(pb);
        }
        for v in phi.sources.values_mut().chain(phi.targets.values_mut()) {
            v.sort_unstable();
        }
        Ok(phi)
    }

    pub fn domain(&self) -> &Arc<LazyPartition> {
        &self.domain
    }

    pub fn range(&self) -> &Arc<LazyPartition> {
        &self.range
    }

    pub fn overrides(&self) -> impl Iterator<Item = (&CellId, &CellId)> {
        self.forward.iter()
    }

    fn sibling_position(&self, p: &LazyPartition, id: &CellId) -> Result<(Option<CellId>, Pos), CoverError> {
        let unknown = || CoverError::UnknownCell(id.clone());
        match id.parent() {
            None => Ok((None, p.root_position(id).ok_or_else(unknown)?)),
            Some(pid) => {
                let parent = p.parent().ok_or_else(unknown)?;
                let pcell = parent.cell_by_id(&pid).filter(|c| c.id == pid).ok_or_else(unknown)?;
                let pos = p.child_position(&pcell, id).ok_or_else(unknown)?;
                Ok((Some(pid), pos as Pos))
            }
        }
    }

    fn canonical(p: &LazyPartition, id: &CellId) -> Result<Cell, CoverError> {
        p.cell_by_id(id).filter(|c| &c.id == id).ok_or_else(|| CoverError::UnknownCell(id.clone()))
    }

    /// Image of the cell with path `id`.
    pub fn apply(&self, id: &CellId) -> Result<Cell, CoverError> {
        if let Some(c) = self.fwd_cache.lock().unwrap().get(id) {
            return Ok(c.clone());
        }
        let cell = self.map_one(id, true)?;
        self.fwd_cache.lock().unwrap().insert(id.clone(), cell.clone());
        Ok(cell)
    }

    /// Preimage of the cell with path `id`.
    pub fn inverse(&self, id: &CellId) -> Result<Cell, CoverError> {
        if let Some(c) = self.bwd_cache.lock().unwrap().get(id) {
            return Ok(c.clone());
        }
        let cell = self.map_one(id, false)?;
        self.bwd_cache.lock().unwrap().insert(id.clone(), cell.clone());
        Ok(cell)
    }

    fn map_one(&self, id: &CellId, forward: bool) -> Result<Cell, CoverError> {
        let (from, to, fixed, skip, land) = if forward {
            (&self.domain, &self.range, &self.forward, &self.sources, &self.targets)
        } else {
            (&self.range, &self.domain, &self.backward, &self.targets, &self.sources)
        };
        Self::canonical(from, id)?;
        if let Some(t) = fixed.get(id) {
            return Self::canonical(to, t);
        }
        let (key, pos) = self.sibling_position(from, id)?;
        let empty = Vec::new();
        let r = rank(skip.get(&key).unwrap_or(&empty), pos);
        match key {
            None => {
                let t = unrank(land.get(&None).unwrap_or(&empty), r);
                Ok(to.root_cell_at(t))
            }
            Some(pid) => {
                let parent = self.parent.as_ref().ok_or_else(|| CoverError::UnknownCell(id.clone()))?;
                let pimg = if forward { parent.apply(&pid)? } else { parent.inverse(&pid)? };
                let t = unrank(land.get(&Some(pimg.id.clone())).unwrap_or(&empty), r);
                let to_parent = to.parent().ok_or_else(|| CoverError::UnknownCell(id.clone()))?;
                debug_assert!(to_parent.cell_by_id(&pimg.id).is_some());
                Ok(to.child_at(&pimg, t as u64))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bing_topology::Point;
    use crate::cover_algebra::admissible_cover;
    use crate::exact_algebra::rational::{rat, ratio};
    use crate::exact_algebra::Qf3;

    #[test]
    fn rank_unrank_round_trip() {
        let s = [-3, 0, 1, 7];
        for i in -10..20 {
            if s.contains(&i) {
                continue;
            }
            let r = rank(&s, i);
            assert_eq!(unrank(&s, r), i);
        }
    }

    #[test]
    fn identity_without_overrides() {
        let p = Arc::new(LazyPartition::lattice(ratio(1, 2)));
        let phi = CellBijection::new(p.clone(), p.clone(), None, []).unwrap();
        let c = p.cell_of(&Qf3::zero());
        assert_eq!(phi.apply(&c.id).unwrap(), c);
    }

    #[test]
    fn overrides_and_default_rule_stay_injective() {
        let a = [Point::base(rat(0)), Point::base(rat(3))];
        let b = [Point::base(rat(-5))];
        let dom = Arc::new(admissible_cover(&a, &[], &[], &rat(1), None).unwrap());
        let ran = Arc::new(admissible_cover(&[], &b, &[], &rat(1), None).unwrap());
        let src = dom.cell_of(&a[1].minus()).id;
        let dst = ran.cell_of(&b[0].minus()).id;
        let phi = CellBijection::new(dom.clone(), ran.clone(), None, [(src.clone(), dst.clone())]).unwrap();
        assert_eq!(phi.apply(&src).unwrap().id, dst);
        let mut seen = std::collections::BTreeSet::new();
        for pos in -20..20 {
            let c = dom.root_cell_at(pos);
            let img = phi.apply(&c.id).unwrap();
            assert!(seen.insert(img.id.clone()));
            assert_eq!(phi.inverse(&img.id).unwrap(), c);
        }

        let dom1 = Arc::new(admissible_cover(&a, &[], &[], &ratio(1, 2), Some(dom.clone())).unwrap());
        let ran1 = Arc::new(admissible_cover(&[], &b, &[], &ratio(1, 2), Some(ran.clone())).unwrap());
        let phi = Arc::new(phi);
        let s1 = dom1.cell_of(&a[1].minus()).id;
        let t1 = ran1.cell_of(&b[0].minus()).id;
        let phi1 =
            CellBijection::new(dom1.clone(), ran1.clone(), Some(phi.clone()), [(s1.clone(), t1.clone())]).unwrap();
        let parent = dom.cell_of(&a[1].minus());
        let mut seen = std::collections::BTreeSet::new();
        for c in dom1.children(&parent).take(12) {
            let img = phi1.apply(&c.id).unwrap();
            assert!(img.inside(&phi.apply(&parent.id).unwrap()));
            assert!(seen.insert(img.id.clone()));
            assert_eq!(phi1.inverse(&img.id).unwrap(), c);
        }
    }

    #[test]
    fn conflicting_overrides_rejected() {
        let p = Arc::new(LazyPartition::lattice(rat(1)));
        let u = p.root_cell_at(0).id;
        let v = p.root_cell_at(1).id;
        let w = p.root_cell_at(2).id;
        let err = CellBijection::new(p.clone(), p, None, [(u.clone(), v.clone()), (w, v.clone())]).unwrap_err();
        assert!(matches!(err, CoverError::OverrideConflict(..)));
    }
}
