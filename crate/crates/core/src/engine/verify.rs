use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::stage::{Chosen, Stage};
use super::well_order::WellOrder;
use crate::bing_topology::Point;
use crate::cover_algebra::{check_admissible, diamond_contains, Cell, CellId, LazyPartition};

/// Sibling cells examined under each touched parent for condition (13).
const SIBLINGS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    /// One of the inductive conditions (1)-(14).
    Inductive(u8),
    /// One of the admissibility conditions (1)-(3) of a stage cover.
    Admissible(u8),
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::Inductive(k) => write!(f, "({k})"),
            Condition::Admissible(k) => write!(f, "admissible ({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub condition: Condition,
    pub point: Option<Point>,
    pub cell: Option<CellId>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub n: u32,
    pub failures: Vec<Failure>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failed(&self, c: Condition) -> bool {
        self.failures.iter().any(|f| f.condition == c)
    }

    pub fn failed_inductive(&self, k: u8) -> bool {
        self.failed(Condition::Inductive(k))
    }

    pub fn summary(&self) -> String {
        match self.failures.first() {
            None => "all conditions hold".into(),
            Some(f) => {
                let at = f.point.as_ref().map(|p| format!(" at {p}")).unwrap_or_default();
                format!("condition {} fails{at}: {}", f.condition, f.detail)
            }
        }
    }

    fn fail(&mut self, condition: Condition, point: Option<&Point>, cell: Option<&CellId>, detail: impl Into<String>) {
        self.failures.push(Failure { condition, point: point.cloned(), cell: cell.cloned(), detail: detail.into() });
    }
}

fn check_covers(report: &mut StageReport, s: &Stage, prev: Option<&Stage>) {
    let eps = s.mesh();
    let a_check: Vec<Point> = s.classes.a_check.iter().cloned().collect();
    let b_check: Vec<Point> = s.classes.b_check.iter().cloned().collect();
    let covers = [
        (&s.domain, &s.a[..], &[][..], &a_check, prev.map(|p| &*p.domain)),
        (&s.range, &[][..], &s.b[..], &b_check, prev.map(|p| &*p.range)),
    ];
    for (cover, am, bm, checked, parent) in covers {
        let r = check_admissible(cover, am, bm, checked, &eps, parent);
        for v in r.violations {
            let cond = match v.condition {
                k @ 1..=3 => Condition::Admissible(k),
                k => Condition::Inductive(k),
            };
            report.fail(cond, None, v.cell.as_ref().map(|c| &c.id), v.detail);
        }
    }
}

/// Condition (14): `f(x)` lies in `phi^<>(U^<>(x))` for every enrolled `x`.
fn check_fourteen(report: &mut StageReport, s: &Stage) {
    for x in &s.a {
        let y = &s.f[x];
        match s.target_diamond(x) {
            Ok(d) if diamond_contains(&d, y) => {}
            Ok(_) => report.fail(Condition::Inductive(14), Some(x), None, format!("image {y} leaves its diamond")),
            Err(e) => report.fail(Condition::Inductive(14), Some(x), None, e.to_string()),
        }
    }
}

/// Domain cells examined for condition (13): the cells of all enrolled
/// projections and the first siblings under each of their parents.
fn materialized(s: &Stage) -> Vec<Cell> {
    let mut ids = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |c: Cell, out: &mut Vec<Cell>| {
        if ids.insert(c.id.clone()) {
            out.push(c);
        }
    };
    let dom: &LazyPartition = &s.domain;
    let marks: Vec<Cell> = s.a.iter().flat_map(|x| [dom.cell_of(&x.minus()), dom.cell_of(&x.plus())]).collect();
    let mut parents = BTreeSet::new();
    for c in marks {
        if let Some(p) = dom.parent_cell(&c) {
            if parents.insert(p.id.clone()) {
                for k in dom.children(&p).take(SIBLINGS) {
                    push(k, &mut out);
                }
            }
        }
        push(c, &mut out);
    }
    out
}

/// Stage 0: both covers admissible and `f_0(a)` in `phi_0^<>(U_0^<>(a))`.
pub fn verify_initial(s: &Stage, f0: &[(Point, Point)]) -> StageReport {
    let mut report = StageReport { n: s.n, failures: Vec::new() };
    check_covers(&mut report, s, None);
    for (x, y) in f0 {
        if s.f.get(x) != Some(y) {
            report.fail(Condition::Inductive(10), Some(x), None, "stage 0 differs from the initial map");
        }
    }
    check_fourteen(&mut report, s);
    report
}

/// Conditions (1)-(7): the four chosen points against the previous stage.
pub fn verify_choice(order: &WellOrder, prev: &Stage, c: &Chosen) -> StageReport {
    let mut report = StageReport { n: prev.n + 1, failures: Vec::new() };
    let fail = |r: &mut StageReport, k: u8, p: &Point, d: &str| r.fail(Condition::Inductive(k), Some(p), None, d);
    // (1)
    let a_min = order.min_excluding(|p| prev.f.contains_key(p));
    if c.a != a_min {
        fail(&mut report, 1, &c.a, &format!("least point outside A is {a_min}"));
    }
    // (2)
    if prev.f_inv.contains_key(&c.b) {
        fail(&mut report, 2, &c.b, "b already in B");
    }
    match prev.target_diamond(&c.a) {
        Ok(d) if diamond_contains(&d, &c.b) => {}
        Ok(_) => fail(&mut report, 2, &c.b, "b outside the image diamond of a"),
        Err(e) => fail(&mut report, 2, &c.b, &e.to_string()),
    }
    // (3)
    if c.a.is_base() != c.b.is_base() {
        fail(&mut report, 3, &c.b, "parity of b differs from a");
    }
    // (4)
    let b_min = order.min_excluding(|p| prev.f_inv.contains_key(p) || p == &c.b);
    if c.b_prime != b_min {
        fail(&mut report, 4, &c.b_prime, &format!("least point outside B is {b_min}"));
    }
    // (5)
    if prev.f.contains_key(&c.a_prime) || c.a_prime == c.a {
        fail(&mut report, 5, &c.a_prime, "a' already enrolled");
    }
    // (6)
    if c.a_prime.is_base() != c.b_prime.is_base() {
        fail(&mut report, 6, &c.a_prime, "parity of a' differs from b'");
    }
    // (7)
    match prev.target_diamond(&c.a_prime) {
        Ok(d) if diamond_contains(&d, &c.b_prime) => {}
        Ok(_) => fail(&mut report, 7, &c.b_prime, "b' outside the image diamond of a'"),
        Err(e) => fail(&mut report, 7, &c.b_prime, &e.to_string()),
    }
    report
}

/// Exact check of conditions (1)-(14) for the step from `prev` to `next`.
pub fn verify_stage(order: &WellOrder, prev: &Stage, next: &Stage) -> StageReport {
    let mut report = StageReport { n: next.n, failures: Vec::new() };
    let Some(c) = &next.chosen else {
        report.fail(Condition::Inductive(1), None, None, "no chosen points recorded");
        return report;
    };
    let fail = |r: &mut StageReport, k: u8, p: &Point, d: &str| r.fail(Condition::Inductive(k), Some(p), None, d);

    if next.n != prev.n + 1 {
        report.fail(Condition::Inductive(8), None, None, "stage numbers are not consecutive");
    }
    report.failures.extend(verify_choice(order, prev, c).failures);
    // (8), (9)
    let expect_a: BTreeSet<&Point> = prev.a.iter().chain([&c.a, &c.a_prime]).collect();
    let have_a: BTreeSet<&Point> = next.a.iter().collect();
    if expect_a != have_a || next.a.len() != prev.a.len() + 2 {
        fail(&mut report, 8, &c.a, "A_n is not A_{n-1} with a and a' added");
    }
    let expect_b: BTreeSet<&Point> = prev.b.iter().chain([&c.b, &c.b_prime]).collect();
    let have_b: BTreeSet<&Point> = next.b.iter().collect();
    if expect_b != have_b || next.b.len() != prev.b.len() + 2 {
        fail(&mut report, 9, &c.b, "B_n is not B_{n-1} with b and b' added");
    }
    // (10)
    for (x, y) in &prev.f {
        if next.f.get(x) != Some(y) {
            fail(&mut report, 10, x, "f_n does not extend f_{n-1}");
        }
    }
    if next.f.get(&c.a) != Some(&c.b) || next.f.get(&c.a_prime) != Some(&c.b_prime) {
        fail(&mut report, 10, &c.a, "f_n misses a chosen pair");
    }
    let images: BTreeSet<&Point> = next.f.values().collect();
    if images.len() != next.f.len() || images != have_b || next.f.len() != have_a.len() {
        fail(&mut report, 10, &c.a, "f_n is not a bijection A_n -> B_n");
    }
    // (11), (12) and admissibility
    check_covers(&mut report, next, Some(prev));
    // (13)
    for v in materialized(next) {
        let Some(u) = next.domain.parent_cell(&v) else {
            report.fail(Condition::Inductive(11), None, Some(&v.id), "cell has no parent");
            continue;
        };
        match (next.phi.apply(&v.id), prev.phi.apply(&u.id)) {
            (Ok(img), Ok(outer)) if img.inside(&outer) => {}
            (Ok(_), Ok(_)) => report.fail(Condition::Inductive(13), None, Some(&v.id), "image leaves the parent image"),
            (Err(e), _) | (_, Err(e)) => report.fail(Condition::Inductive(13), None, Some(&v.id), e.to_string()),
        }
    }
    // (14)
    check_fourteen(&mut report, next);
    report
}
