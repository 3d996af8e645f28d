use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cell::{Cell, CellId, Step};
use super::interval::{cut_between, CutInterval};
use super::CoverError;
use crate::bing_topology::Point;
use crate::exact_algebra::rational::floor_quad;
use crate::{Qf3Value, QuadValue, Rational};

/// Region of `X` before the marked-value splits: a root lattice interval,
/// or one uniform piece of a ladder rung inside a part of a parent cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum SlotKey {
    Root(i64),
    Child { parent: CellId, rung: u32, part: u8, sub: u32 },
}

impl SlotKey {
    fn piece_id(&self, piece: u32) -> CellId {
        match self {
            SlotKey::Root(k) => CellId(vec![Step::Lattice(*k, piece)]),
            SlotKey::Child { parent, rung, part, sub } => parent.child(Step::Child(*rung, *part, *sub, piece)),
        }
    }

    fn of_piece_id(id: &CellId) -> Option<(SlotKey, u32)> {
        match (id.last(), id.parent()) {
            (Step::Lattice(k, piece), None) => Some((SlotKey::Root(*k), *piece)),
            (Step::Child(rung, part, sub, piece), Some(parent)) => {
                Some((SlotKey::Child { parent, rung: *rung, part: *part, sub: *sub }, *piece))
            }
            _ => None,
        }
    }
}

/// A disjoint clopen cover of `X` kept as rules plus finite overrides.
///
/// Without a parent the cover is the lattice of intervals
/// `(k mu + sqrt2, (k+1) mu + sqrt2)`. With a parent every part `(lo, hi)`
/// of every parent cell is cut into the ladder of rungs
/// `(hi - w 2^-j, hi - w 2^-(j+1))`, `w = hi - lo`, each rung split
/// uniformly until its pieces are shorter than the mesh. On top of either
/// rule, finitely many slots carry extra cuts separating marked values, and
/// pairs of pieces are merged into double cells for checked points.
///
/// Cells are computed on demand and memoised; the caches sit behind a
/// mutex so lookups may be issued from several threads.
#[derive(Debug)]
pub struct LazyPartition {
    level: u32,
    mesh: Rational,
    lattice: Rational,
    parent: Option<Arc<LazyPartition>>,
    splits: BTreeMap<SlotKey, Vec<Rational>>,
    double_of: BTreeMap<CellId, CellId>,
    doubles: BTreeMap<CellId, [CellId; 2]>,
    value_cache: Mutex<HashMap<Qf3Value, Cell>>,
    id_cache: Mutex<HashMap<CellId, Option<Cell>>>,
}

fn pow2(e: u32) -> Rational {
    Rational::from_integer(BigInt::one() << e)
}

impl LazyPartition {
    fn bare(level: u32, mesh: Rational, lattice: Rational, parent: Option<Arc<LazyPartition>>) -> Self {
        LazyPartition {
            level,
            mesh,
            lattice,
            parent,
            splits: BTreeMap::new(),
            double_of: BTreeMap::new(),
            doubles: BTreeMap::new(),
            value_cache: Mutex::new(HashMap::new()),
            id_cache: Mutex::new(HashMap::new()),
        }
    }

    /// The pure lattice with step `mu`; its mesh is `2 mu`.
    pub fn lattice(mu: Rational) -> Self {
        assert!(mu.is_positive());
        LazyPartition::bare(0, &mu * Rational::from_integer(2.into()), mu, None)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Every convex cell is strictly shorter than this.
    pub fn mesh(&self) -> &Rational {
        &self.mesh
    }

    pub fn lattice_step(&self) -> Option<&Rational> {
        self.parent.is_none().then_some(&self.lattice)
    }

    pub fn parent(&self) -> Option<&Arc<LazyPartition>> {
        self.parent.as_ref()
    }

    /// Number of extra split cuts, summed over all slots.
    pub fn split_count(&self) -> usize {
        self.splits.values().map(Vec::len).sum()
    }

    pub fn double_ids(&self) -> impl Iterator<Item = &CellId> {
        self.doubles.keys()
    }

    /// Exponent `s` of the uniform split of a rung of length `width`.
    fn sub_exponent(&self, width: &Rational) -> u32 {
        let mut s = 0;
        while width / pow2(s) >= self.mesh {
            s += 1;
        }
        s
    }

    fn rung_interval(part: &CutInterval, rung: u32) -> CutInterval {
        let w = part.diameter();
        CutInterval::new(&part.hi - &w / pow2(rung), &part.hi - &w / pow2(rung + 1))
    }

    fn sub_interval(rung: &CutInterval, s: u32, sub: u32) -> CutInterval {
        let step = rung.diameter() / pow2(s);
        let lo = &rung.lo + &step * Rational::from_integer(sub.into());
        let hi = &lo + &step;
        CutInterval::new(lo, hi)
    }

    fn slot_interval(&self, key: &SlotKey) -> Option<CutInterval> {
        match key {
            SlotKey::Root(k) => {
                if self.parent.is_some() {
                    return None;
                }
                let lo = &self.lattice * Rational::from_integer((*k).into());
                let hi = &lo + &self.lattice;
                Some(CutInterval::new(lo, hi))
            }
            SlotKey::Child { parent, rung, part, sub } => {
                let pcell = self.parent.as_ref()?.cell_by_id(parent)?;
                if &pcell.id != parent {
                    return None;
                }
                let ppart = pcell.parts.get(*part as usize)?;
                let r = Self::rung_interval(ppart, *rung);
                let s = self.sub_exponent(&r.diameter());
                if (*sub as u64) >= (1u64 << s) {
                    return None;
                }
                Some(Self::sub_interval(&r, s, *sub))
            }
        }
    }

    fn locate_slot(&self, v: &Qf3Value) -> (SlotKey, CutInterval) {
        match &self.parent {
            None => {
                // k = floor((v - sqrt2) / mu)
                let inv = Rational::one() / &self.lattice;
                let w = QuadValue::new(&v.r0 * &inv, -inv.clone(), &v.r1 * &inv, Rational::zero());
                let k = floor_quad(&w).to_i64().expect("lattice index fits in i64");
                let key = SlotKey::Root(k);
                let iv = self.slot_interval(&key).expect("root slot");
                (key, iv)
            }
            Some(parent) => {
                let pcell = parent.cell_of(v);
                let part = pcell.part_of(v).expect("parent cell contains the value");
                let ppart = &pcell.parts[part];
                let mut rung = 0u32;
                let r = loop {
                    let r = Self::rung_interval(ppart, rung);
                    if r.hi_cut().gt_value(v) {
                        break r;
                    }
                    rung += 1;
                };
                let s = self.sub_exponent(&r.diameter());
                let step = r.diameter() / pow2(s);
                let inv = Rational::one() / &step;
                let w = QuadValue::new((&v.r0 - &r.lo) * &inv, -inv.clone(), &v.r1 * &inv, Rational::zero());
                let sub = floor_quad(&w).to_u32().expect("sub index in range");
                let iv = Self::sub_interval(&r, s, sub);
                debug_assert!(iv.contains(v));
                let key = SlotKey::Child { parent: pcell.id.clone(), rung, part: part as u8, sub };
                (key, iv)
            }
        }
    }

    fn piece_bounds(&self, key: &SlotKey, slot: &CutInterval, piece: u32) -> Option<CutInterval> {
        let cuts = self.splits.get(key).map(Vec::as_slice).unwrap_or(&[]);
        let i = piece as usize;
        if i > cuts.len() {
            return None;
        }
        let lo = if i == 0 { slot.lo.clone() } else { cuts[i - 1].clone() };
        let hi = if i == cuts.len() { slot.hi.clone() } else { cuts[i].clone() };
        Some(CutInterval::new(lo, hi))
    }

    fn piece_of(&self, v: &Qf3Value) -> (CellId, CutInterval) {
        let (key, slot) = self.locate_slot(v);
        let cuts = self.splits.get(&key).map(Vec::as_slice).unwrap_or(&[]);
        let piece = cuts.iter().take_while(|c| crate::exact_algebra::Cut::new((*c).clone()).lt_value(v)).count() as u32;
        let iv = self.piece_bounds(&key, &slot, piece).expect("piece in range");
        (key.piece_id(piece), iv)
    }

    /// The unique cell containing `v`.
    pub fn cell_of(&self, v: &Qf3Value) -> Cell {
        if let Some(c) = self.value_cache.lock().unwrap().get(v) {
            return c.clone();
        }
        let (id, iv) = self.piece_of(v);
        let cell = match self.double_of.get(&id) {
            Some(did) => self.cell_by_id(did).expect("double cell exists"),
            None => Cell::single(id, iv),
        };
        self.value_cache.lock().unwrap().insert(v.clone(), cell.clone());
        cell
    }

    fn piece_interval_by_id(&self, id: &CellId) -> Option<CutInterval> {
        let (key, piece) = SlotKey::of_piece_id(id)?;
        let slot = self.slot_interval(&key)?;
        self.piece_bounds(&key, &slot, piece)
    }

    /// The cell containing the piece with path `id`, or `None` when the
    /// path does not name a piece of this partition. For the second piece
    /// of a double cell this is the double cell itself.
    pub fn cell_by_id(&self, id: &CellId) -> Option<Cell> {
        if let Some(c) = self.id_cache.lock().unwrap().get(id) {
            return c.clone();
        }
        let cell = if let Some(did) = self.double_of.get(id) {
            let pieces = &self.doubles[did];
            let mut parts: Vec<CutInterval> =
                pieces.iter().map(|p| self.piece_interval_by_id(p)).collect::<Option<_>>()?;
            parts.sort();
            Some(Cell { id: did.clone(), parts })
        } else {
            self.piece_interval_by_id(id).map(|iv| Cell::single(id.clone(), iv))
        };
        self.id_cache.lock().unwrap().insert(id.clone(), cell.clone());
        cell
    }

    /// The cell of the parent partition whose path prefixes `cell`.
    pub fn parent_cell(&self, cell: &Cell) -> Option<Cell> {
        self.parent.as_ref()?.cell_by_id(&cell.id.parent()?)
    }

    /// Children of `parent` (a cell of the parent partition) in canonical
    /// order: rung, then part, then uniform piece, then split piece. A
    /// double child appears once, at its first piece. The sequence is
    /// infinite.
    pub fn children<'a>(&'a self, parent: &'a Cell) -> impl Iterator<Item = Cell> + 'a {
        (0u32..).flat_map(move |rung| {
            (0..parent.parts.len()).flat_map(move |part| {
                let r = Self::rung_interval(&parent.parts[part], rung);
                let s = self.sub_exponent(&r.diameter());
                (0..(1u32 << s)).flat_map(move |sub| {
                    let key = SlotKey::Child { parent: parent.id.clone(), rung, part: part as u8, sub };
                    let n = self.splits.get(&key).map_or(0, Vec::len) as u32;
                    (0..=n).filter_map(move |piece| {
                        let id = key.piece_id(piece);
                        match self.double_of.get(&id) {
                            Some(did) if did != &id => None,
                            _ => self.cell_by_id(&id),
                        }
                    })
                })
            })
        })
    }

    /// Position of `child` among the children of its parent cell.
    pub fn child_position(&self, parent: &Cell, child: &CellId) -> Option<u64> {
        if child.parent().as_ref() != Some(&parent.id) {
            return None;
        }
        let Step::Child(rung, ..) = child.last() else { return None };
        let stop = *rung;
        for (i, c) in self.children(parent).enumerate() {
            if &c.id == child {
                return Some(i as u64);
            }
            if let Step::Child(r, ..) = c.id.last() {
                if *r > stop {
                    break;
                }
            }
        }
        None
    }

    pub fn child_at(&self, parent: &Cell, position: u64) -> Cell {
        self.children(parent).nth(position as usize).expect("children are infinite")
    }

    /// Lattice indices spanned by root slots that carry splits or doubles.
    fn root_window(&self) -> Option<(i64, i64)> {
        let mut ks = self.splits.keys().filter_map(|k| match k {
            SlotKey::Root(k) => Some(*k),
            _ => None,
        });
        let first = ks.next();
        let mut lo = first;
        let mut hi = first;
        let doubled = self.double_of.keys().filter_map(|id| match id.0.as_slice() {
            [Step::Lattice(k, _)] => Some(*k),
            _ => None,
        });
        for k in ks.chain(doubled) {
            lo = Some(lo.map_or(k, |l: i64| l.min(k)));
            hi = Some(hi.map_or(k, |h: i64| h.max(k)));
        }
        Some((lo?, hi?))
    }

    fn window_cells(&self, lo: i64, hi: i64) -> Vec<CellId> {
        let mut out = Vec::new();
        for k in lo..=hi {
            let key = SlotKey::Root(k);
            let n = self.splits.get(&key).map_or(0, Vec::len) as u32;
            for piece in 0..=n {
                let id = key.piece_id(piece);
                match self.double_of.get(&id) {
                    Some(did) if did != &id => {}
                    _ => out.push(id),
                }
            }
        }
        out
    }

    /// Integer position of a root cell; consecutive cells in value order
    /// get consecutive positions.
    pub fn root_position(&self, cell: &CellId) -> Option<i64> {
        let [Step::Lattice(k, _)] = cell.0.as_slice() else { return None };
        let Some((lo, hi)) = self.root_window() else { return Some(*k) };
        if *k < lo {
            return Some(k - lo);
        }
        let window = self.window_cells(lo, hi);
        if *k > hi {
            return Some(window.len() as i64 + (k - hi - 1));
        }
        window.iter().position(|c| c == cell).map(|i| i as i64)
    }

    pub fn root_cell_at(&self, position: i64) -> Cell {
        let id = match self.root_window() {
            None => CellId(vec![Step::Lattice(position, 0)]),
            Some((lo, hi)) => {
                let window = self.window_cells(lo, hi);
                let w = window.len() as i64;
                if position < 0 {
                    CellId(vec![Step::Lattice(lo + position, 0)])
                } else if position >= w {
                    CellId(vec![Step::Lattice(hi + 1 + (position - w), 0)])
                } else {
                    window[position as usize].clone()
                }
            }
        };
        self.cell_by_id(&id).expect("root cell exists")
    }
}

/// The power of two `mu <= eps / 2` used as the root lattice step.
pub fn lattice_step_for(eps: &Rational) -> Rational {
    let half = eps / Rational::from_integer(2.into());
    let mut mu = Rational::one();
    while mu > half {
        mu /= Rational::from_integer(2.into());
    }
    while &mu * Rational::from_integer(2.into()) <= half {
        mu *= Rational::from_integer(2.into());
    }
    mu
}

/// Builds an `(A', B'; eps)`-admissible cover, refining `parent` when given.
///
/// Marked values are the projections of `a_marks` and `b_marks`. Every
/// slot holding two or more marked values is cut between consecutive ones,
/// so each piece holds at most one. For each checked point the pieces of
/// its two projections are merged into a double cell.
pub fn admissible_cover(
    a_marks: &[Point],
    b_marks: &[Point],
    checked: &[Point],
    eps: &Rational,
    parent: Option<Arc<LazyPartition>>,
) -> Result<LazyPartition, CoverError> {
    if !eps.is_positive() {
        return Err(CoverError::NonPositiveMesh);
    }
    let mut part = match parent {
        Some(p) => LazyPartition::bare(p.level + 1, eps.clone(), Rational::zero(), Some(p)),
        None => {
            let mu = lattice_step_for(eps);
            LazyPartition::bare(0, eps.clone(), mu, None)
        }
    };
    let marks: BTreeSet<Qf3Value> = a_marks.iter().chain(b_marks).flat_map(|p| [p.minus(), p.plus()]).collect();

    let mut by_slot: BTreeMap<SlotKey, (CutInterval, Vec<Qf3Value>)> = BTreeMap::new();
    for v in &marks {
        let (key, iv) = part.locate_slot(v);
        by_slot.entry(key).or_insert_with(|| (iv, Vec::new())).1.push(v.clone());
    }
    for (key, (iv, values)) in by_slot {
        if values.len() < 2 {
            continue;
        }
        let cuts: Vec<Rational> = values.windows(2).map(|w| cut_between(&w[0], &w[1], &iv.lo, &iv.hi)).collect();
        debug_assert!(cuts.windows(2).all(|w| w[0] < w[1]));
        part.splits.insert(key, cuts);
    }

    for z in checked {
        if z.is_base() {
            return Err(CoverError::CheckedOnBase(z.clone()));
        }
        if !marks.contains(&z.minus()) {
            return Err(CoverError::CheckedNotMarked(z.clone()));
        }
        let (lo_id, _) = part.piece_of(&z.minus());
        let (hi_id, _) = part.piece_of(&z.plus());
        if lo_id.parent() != hi_id.parent() {
            return Err(CoverError::CheckedAcrossParents(z.clone()));
        }
        debug_assert_ne!(lo_id, hi_id);
        let (first, second) = if lo_id < hi_id { (lo_id, hi_id) } else { (hi_id, lo_id) };
        part.double_of.insert(first.clone(), first.clone());
        part.double_of.insert(second.clone(), first.clone());
        part.doubles.insert(first.clone(), [first, second]);
    }
    Ok(part)
}
