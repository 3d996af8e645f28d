use std::collections::BTreeMap;

use serde::Serialize;

use super::{Cell, CellId, CutInterval, LazyPartition};
use crate::bing_topology::Point;
use crate::{Qf3Value, Rational};

/// Siblings examined per touched parent cell, and root cells examined on
/// each side of the marked window.
const WINDOW: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1, 2, 3 for the admissibility conditions, 11 and 12 for refinement.
    pub condition: u8,
    pub cell: Option<Cell>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub cells_examined: usize,
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn condition_passed(&self, condition: u8) -> bool {
        self.violations.iter().all(|v| v.condition != condition)
    }

    fn fail(&mut self, condition: u8, cell: Option<&Cell>, detail: String) {
        self.violations.push(Violation { condition, cell: cell.cloned(), detail });
    }
}

/// Exact check of admissibility for `(a_marks, b_marks; eps)` on every
/// materialized cell: the cells of all marked values, a band of root cells
/// around them and the first siblings under each touched parent. With a
/// parent partition, refinement and the ladder structure are checked too.
pub fn check_admissible(
    p: &LazyPartition,
    a_marks: &[Point],
    b_marks: &[Point],
    checked: &[Point],
    eps: &Rational,
    parent: Option<&LazyPartition>,
) -> AdmissibilityReport {
    let mut report = AdmissibilityReport::default();
    let marks: Vec<Qf3Value> = {
        let mut v: Vec<Qf3Value> = a_marks.iter().chain(b_marks).flat_map(|z| [z.minus(), z.plus()]).collect();
        v.sort();
        v.dedup();
        v
    };

    let mut cells: BTreeMap<CellId, Cell> = BTreeMap::new();
    for v in &marks {
        let c = p.cell_of(v);
        cells.insert(c.id.clone(), c);
    }
    match p.parent() {
        None => {
            let positions: Vec<i64> = cells.keys().filter_map(|id| p.root_position(id)).collect();
            let lo = positions.iter().min().copied().unwrap_or(0) - WINDOW as i64;
            let hi = positions.iter().max().copied().unwrap_or(0) + WINDOW as i64;
            for pos in lo..=hi {
                let c = p.root_cell_at(pos);
                cells.insert(c.id.clone(), c);
            }
        }
        Some(pp) => {
            let mut parents: BTreeMap<CellId, Cell> = BTreeMap::new();
            for c in cells.values() {
                if let Some(pc) = p.parent_cell(c) {
                    parents.insert(pc.id.clone(), pc);
                }
            }
            for v in &marks {
                let pc = pp.cell_of(v);
                parents.insert(pc.id.clone(), pc);
            }
            for pc in parents.values() {
                let kids: Vec<Cell> = p.children(pc).take(WINDOW).collect();
                let mut ids: Vec<&CellId> = kids.iter().map(|k| &k.id).collect();
                ids.sort();
                ids.dedup();
                if ids.len() < kids.len() {
                    report.fail(12, Some(pc), "sibling enumeration repeats a cell".into());
                }
                for k in kids {
                    cells.insert(k.id.clone(), k);
                }
            }
        }
    }
    report.cells_examined = cells.len();

    // marks are sorted, so each part holds a contiguous run of them
    let marked_in = |c: &Cell| {
        c.parts
            .iter()
            .map(|iv| {
                let (lo, hi) = (iv.lo_cut(), iv.hi_cut());
                marks.partition_point(|v| hi.gt_value(v)) - marks.partition_point(|v| lo.gt_value(v))
            })
            .sum::<usize>()
    };

    // (1) disjoint cover: parts of distinct cells never overlap, every cell
    // is the one its path names, and parts of marked cells are located
    // back into their own cell
    let mut parts: Vec<(&CutInterval, &Cell)> = Vec::new();
    for c in cells.values() {
        if p.cell_by_id(&c.id).as_ref() != Some(c) {
            report.fail(1, Some(c), "path names a different cell".into());
        }
        let located = marked_in(c) > 0;
        for part in &c.parts {
            parts.push((part, c));
            if located {
                let rep = Qf3Value::rational(part.representative());
                if p.cell_of(&rep).id != c.id {
                    report.fail(1, Some(c), "representative lies in another cell".into());
                }
            }
        }
    }
    parts.sort_by(|x, y| x.0.lo.cmp(&y.0.lo));
    for w in parts.windows(2) {
        if w[0].0.hi > w[1].0.lo {
            report.fail(1, Some(w[0].1), format!("overlaps cell {}", w[1].1.id));
        }
    }

    // (2) checked points sit in double cells isolating their projections
    let mut double_ids = Vec::new();
    for z in checked {
        let c = p.cell_of(&z.minus());
        let c2 = p.cell_of(&z.plus());
        if c.id != c2.id || !c.is_double() {
            report.fail(2, Some(&c), format!("projections of {z} are not merged"));
            continue;
        }
        if c.part_of(&z.minus()) == c.part_of(&z.plus()) {
            report.fail(2, Some(&c), format!("projections of {z} share a part"));
        }
        if c.parts.iter().any(|iv| iv.diameter() >= *eps) {
            report.fail(2, Some(&c), "part diameter not below mesh".into());
        }
        if marked_in(&c) != 2 {
            report.fail(2, Some(&c), "double cell holds another marked value".into());
        }
        double_ids.push(c.id.clone());
    }

    // (3) remaining cells are small and hold at most one marked value
    for c in cells.values() {
        if c.is_double() {
            if !double_ids.contains(&c.id) {
                report.fail(2, Some(c), "double cell without a checked point".into());
            }
            continue;
        }
        if c.parts[0].diameter() >= *eps {
            report.fail(3, Some(c), "diameter not below mesh".into());
        }
        if marked_in(c) > 1 {
            report.fail(3, Some(c), "more than one marked value".into());
        }
    }

    if let Some(pp) = parent {
        for c in cells.values() {
            let Some(outer) = c.id.parent().and_then(|id| pp.cell_by_id(&id)) else {
                report.fail(11, Some(c), "path has no parent cell".into());
                continue;
            };
            if !c.inside(&outer) {
                report.fail(11, Some(c), format!("not inside parent cell {}", outer.id));
            }
            if marked_in(c) > 0 {
                let located = pp.cell_of(&Qf3Value::rational(c.parts[0].representative()));
                if located.id != outer.id {
                    report.fail(11, Some(c), format!("located in parent cell {}", located.id));
                }
            }
        }
    }
    report
}
