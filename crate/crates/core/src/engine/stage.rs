use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::search::candidate_in_diamond;
use super::verify::{verify_initial, verify_stage};
use super::well_order::WellOrder;
use super::EngineError;
use crate::bing_topology::Point;
use crate::cover_algebra::{
    admissible_cover, diamond_of, phi_diamond, CellBijection, CellId, DiamondCell, LazyPartition,
};
use crate::Rational;

/// Mesh `2^-n` of stage `n`.
pub fn mesh(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EngineConfig {
    /// Budget for each candidate search.
    pub search_cap: usize,
    /// Verify every stage as it is built.
    pub verify: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { search_cap: 4096, verify: true }
    }
}

/// The four points picked in a step: `a_n`, `a'_n`, `b_n`, `b'_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chosen {
    pub a: Point,
    pub a_prime: Point,
    pub b: Point,
    pub b_prime: Point,
}

/// Split of `A_n` and `B_n` by how points cross the base line.
///
/// `a_check`: non-base points of `A_0` sent to base points; `a_hat`: base
/// points of `A_0` sent off the base line; `a_dot`: the remaining base
/// points; `a_ddot`: the remaining non-base points. Likewise for `B_n`
/// with `f^-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub a_check: BTreeSet<Point>,
    pub a_hat: BTreeSet<Point>,
    pub a_dot: BTreeSet<Point>,
    pub a_ddot: BTreeSet<Point>,
    pub b_check: BTreeSet<Point>,
    pub b_hat: BTreeSet<Point>,
    pub b_dot: BTreeSet<Point>,
    pub b_ddot: BTreeSet<Point>,
}

impl Classification {
    fn new(f0: &[(Point, Point)], a: &[Point], b: &[Point]) -> Self {
        let mut c = Classification::default();
        for (x, y) in f0 {
            match (x.is_base(), y.is_base()) {
                (false, true) => {
                    c.a_check.insert(x.clone());
                    c.b_hat.insert(y.clone());
                }
                (true, false) => {
                    c.a_hat.insert(x.clone());
                    c.b_check.insert(y.clone());
                }
                _ => {}
            }
        }
        for x in a {
            if !c.a_check.contains(x) && !c.a_hat.contains(x) {
                if x.is_base() { &mut c.a_dot } else { &mut c.a_ddot }.insert(x.clone());
            }
        }
        for y in b {
            if !c.b_check.contains(y) && !c.b_hat.contains(y) {
                if y.is_base() { &mut c.b_dot } else { &mut c.b_ddot }.insert(y.clone());
            }
        }
        c
    }
}

/// One stage of the construction. `domain` carries the marks of `A_n`,
/// `range` those of `B_n`; `phi` maps the cells of the first onto the
/// cells of the second.
#[derive(Debug)]
pub struct Stage {
    pub n: u32,
    pub a: Vec<Point>,
    pub b: Vec<Point>,
    pub f: BTreeMap<Point, Point>,
    pub f_inv: BTreeMap<Point, Point>,
    pub domain: Arc<LazyPartition>,
    pub range: Arc<LazyPartition>,
    pub phi: Arc<CellBijection>,
    pub overrides: Vec<(CellId, CellId)>,
    pub chosen: Option<Chosen>,
    pub classes: Classification,
}

impl Stage {
    pub fn mesh(&self) -> Rational {
        mesh(self.n)
    }

    pub fn image(&self, z: &Point) -> Option<&Point> {
        self.f.get(z)
    }

    pub fn preimage(&self, w: &Point) -> Option<&Point> {
        self.f_inv.get(w)
    }

    /// `phi_n^<>(U_n^<>(x))`, the diamond that must hold `f_n(x)`.
    pub fn target_diamond(&self, x: &Point) -> Result<DiamondCell, EngineError> {
        Ok(phi_diamond(&self.phi, &diamond_of(&self.domain, x))?)
    }

    /// Replaces the override table, keeping everything else. Used to audit
    /// the verifier against damaged maps.
    pub fn replace_overrides(
        &mut self,
        prev: Option<&Stage>,
        overrides: Vec<(CellId, CellId)>,
    ) -> Result<(), EngineError> {
        self.phi = Arc::new(CellBijection::new(
            self.domain.clone(),
            self.range.clone(),
            prev.map(|p| p.phi.clone()),
            overrides.clone(),
        )?);
        self.overrides = overrides;
        Ok(())
    }

    fn build(
        n: u32,
        a: Vec<Point>,
        b: Vec<Point>,
        f: BTreeMap<Point, Point>,
        f0: &[(Point, Point)],
        prev: Option<&Stage>,
        chosen: Option<Chosen>,
    ) -> Result<Stage, EngineError> {
        let classes = Classification::new(f0, &a, &b);
        let eps = mesh(n);
        let a_check: Vec<Point> = classes.a_check.iter().cloned().collect();
        let b_check: Vec<Point> = classes.b_check.iter().cloned().collect();
        let domain = Arc::new(admissible_cover(&a, &[], &a_check, &eps, prev.map(|p| p.domain.clone()))?);
        let range = Arc::new(admissible_cover(&[], &b, &b_check, &eps, prev.map(|p| p.range.clone()))?);
        let f_inv: BTreeMap<Point, Point> = f.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        let overrides = phi_overrides(&a, &f, &classes, &domain, &range, prev)?;
        let phi = Arc::new(CellBijection::new(
            domain.clone(),
            range.clone(),
            prev.map(|p| p.phi.clone()),
            overrides.clone(),
        )?);
        Ok(Stage { n, a, b, f, f_inv, domain, range, phi, overrides, chosen, classes })
    }
}

/// The explicit part of `phi_n`, one pair per marked domain cell.
///
/// Checked domain points send their double cell to the cell of their base
/// image; base points sent off the line go to the double cell of their
/// image; other base points go to the cell of their image. For a non-base
/// point `a` with image `b`, the cell of `a-` goes to the cell of whichever
/// of `b-`, `b+` lies in the image of the parent cell of `a-` (`b-` when
/// both do, and always at stage 0), and the cell of `a+` to the other.
fn phi_overrides(
    a: &[Point],
    f: &BTreeMap<Point, Point>,
    classes: &Classification,
    domain: &LazyPartition,
    range: &LazyPartition,
    prev: Option<&Stage>,
) -> Result<Vec<(CellId, CellId)>, EngineError> {
    let mut out = Vec::new();
    for x in a {
        let y = &f[x];
        if classes.a_check.contains(x) || x.is_base() {
            out.push((domain.cell_of(&x.minus()).id, range.cell_of(&y.minus()).id));
            continue;
        }
        let straight = match prev {
            None => true,
            Some(p) => {
                let parent = p.domain.cell_of(&x.minus());
                p.phi.apply(&parent.id)?.contains(&y.minus())
            }
        };
        let (lo, hi) = if straight { (y.minus(), y.plus()) } else { (y.plus(), y.minus()) };
        out.push((domain.cell_of(&x.minus()).id, range.cell_of(&lo).id));
        out.push((domain.cell_of(&x.plus()).id, range.cell_of(&hi).id));
    }
    Ok(out)
}

/// A run of the construction from a finite bijection `f0`.
#[derive(Debug)]
pub struct Engine {
    config: EngineConfig,
    order: WellOrder,
    f0: Vec<(Point, Point)>,
    stages: Vec<Stage>,
}

impl Engine {
    /// Builds stage 0. Fails when `f0` repeats a point on either side.
    pub fn new(f0: Vec<(Point, Point)>, config: EngineConfig) -> Result<Engine, EngineError> {
        let mut f = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (x, y) in &f0 {
            if f.insert(x.clone(), y.clone()).is_some() {
                return Err(EngineError::InvalidInput(format!("point {x} appears twice in the domain")));
            }
            if !seen.insert(y.clone()) {
                return Err(EngineError::InvalidInput(format!("point {y} appears twice in the range")));
            }
        }
        let a: Vec<Point> = f0.iter().map(|(x, _)| x.clone()).collect();
        let b: Vec<Point> = f0.iter().map(|(_, y)| y.clone()).collect();
        let stage = Stage::build(0, a, b, f, &f0, None, None)?;
        if config.verify {
            let report = verify_initial(&stage, &f0);
            if !report.passed() {
                return Err(EngineError::Verification(Box::new(report)));
            }
        }
        Ok(Engine { config, order: WellOrder::new(), f0, stages: vec![stage] })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Turns per-stage verification on or off for later steps.
    pub fn set_verify(&mut self, verify: bool) {
        self.config.verify = verify;
    }

    pub fn f0(&self) -> &[(Point, Point)] {
        &self.f0
    }

    pub fn well_order(&self) -> &WellOrder {
        &self.order
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn stages_mut(&mut self) -> &mut [Stage] {
        &mut self.stages
    }

    pub fn last(&self) -> &Stage {
        self.stages.last().expect("stage 0 always exists")
    }

    /// Picks `a_n`, `b_n`, `b'_n`, `a'_n` from the last stage.
    pub fn choose(&self) -> Result<Chosen, EngineError> {
        let prev = self.last();
        let cap = self.config.search_cap;
        let a = self.order.min_excluding(|p| prev.f.contains_key(p));
        let target = prev.target_diamond(&a)?;
        let b = candidate_in_diamond(&target, &|p| prev.f_inv.contains_key(p), a.is_base(), cap)?;
        let b_prime = self.order.min_excluding(|p| prev.f_inv.contains_key(p) || p == &b);
        let d = diamond_of(&prev.range, &b_prime);
        let pulled = DiamondCell::new(prev.phi.inverse(&d.u.id)?, prev.phi.inverse(&d.v.id)?);
        let a_prime = candidate_in_diamond(&pulled, &|p| prev.f.contains_key(p) || p == &a, b_prime.is_base(), cap)?;
        Ok(Chosen { a, a_prime, b, b_prime })
    }

    /// Builds the stage determined by `chosen` on top of the last stage.
    pub fn assemble(&self, chosen: Chosen) -> Result<Stage, EngineError> {
        let prev = self.last();
        let mut a = prev.a.clone();
        let mut b = prev.b.clone();
        let mut f = prev.f.clone();
        a.push(chosen.a.clone());
        a.push(chosen.a_prime.clone());
        b.push(chosen.b.clone());
        b.push(chosen.b_prime.clone());
        f.insert(chosen.a.clone(), chosen.b.clone());
        f.insert(chosen.a_prime.clone(), chosen.b_prime.clone());
        Stage::build(prev.n + 1, a, b, f, &self.f0, Some(prev), Some(chosen))
    }

    /// Runs one inductive step, verifying it when configured to.
    pub fn step(&mut self) -> Result<&Stage, EngineError> {
        let chosen = self.choose()?;
        let next = self.assemble(chosen)?;
        if self.config.verify {
            let report = verify_stage(&self.order, self.last(), &next);
            if !report.passed() {
                return Err(EngineError::Verification(Box::new(report)));
            }
        }
        self.stages.push(next);
        Ok(self.last())
    }

    /// Appends a stage built by [`Engine::assemble`] without verifying it.
    pub fn push_stage(&mut self, stage: Stage) {
        assert_eq!(stage.n, self.last().n + 1, "stages are appended in order");
        self.stages.push(stage);
    }

    /// Runs steps until `n` stages after stage 0 exist.
    pub fn run_to(&mut self, n: u32) -> Result<(), EngineError> {
        while self.last().n < n {
            self.step()?;
        }
        Ok(())
    }

    /// `f(z)`, stepping until `z` is enrolled; at most `max_stages` stages
    /// beyond stage 0 are built.
    pub fn evaluate(&mut self, z: &Point, max_stages: u32) -> Result<Point, EngineError> {
        loop {
            if let Some(w) = self.last().image(z) {
                return Ok(w.clone());
            }
            if self.last().n >= max_stages {
                return Err(EngineError::StageCap(max_stages));
            }
            self.step()?;
        }
    }

    /// `f^-1(w)`, stepping until `w` is enrolled in the range.
    pub fn inverse_evaluate(&mut self, w: &Point, max_stages: u32) -> Result<Point, EngineError> {
        loop {
            if let Some(z) = self.last().preimage(w) {
                return Ok(z.clone());
            }
            if self.last().n >= max_stages {
                return Err(EngineError::StageCap(max_stages));
            }
            self.step()?;
        }
    }

    /// First stage whose domain holds `z`, if built.
    pub fn enrolled_at(&self, z: &Point) -> Option<u32> {
        self.stages.iter().find(|s| s.f.contains_key(z)).map(|s| s.n)
    }
}
