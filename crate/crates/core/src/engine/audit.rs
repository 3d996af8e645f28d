use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::stage::Engine;
use super::EngineError;
use crate::bing_topology::{nbhd_closure_contains, nbhd_contains, BasicNbhd, Point};
use crate::cover_algebra::{Cell, CutInterval};
use crate::exact_algebra::rational::{rationals_of_height, serde_rational};
use crate::exact_algebra::Cut;
use crate::{Qf3Value, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AuditOutcome {
    /// Every sampled `w` in `N(z, delta)` has `f(w)` in the closure of
    /// `N(f(z), eps)`.
    Passed {
        #[serde(with = "serde_rational")]
        delta: Rational,
        stage: u32,
        samples: usize,
    },
    /// A sampled `w` whose image escapes; `image` is `None` when `w` was
    /// not enrolled and its stage cell was not one of the cells of `z`.
    Counterexample { w: Point, image: Option<Point> },
}

fn pow2_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// Largest `2^-k`, `k >= 0`, not exceeding the distance from `v` to the
/// ends of `part`.
fn boundary_gap(v: &Qf3Value, part: &CutInterval) -> Rational {
    let mut k = 0;
    loop {
        let d = pow2_inv(k);
        if Cut::new(&part.lo + &d).lt_value(v) && Cut::new(&part.hi - &d).gt_value(v) {
            return d;
        }
        k += 1;
    }
}

/// Every part of `cell` lies within distance `eps` of one of `centers`.
fn within(cell: &Cell, centers: &[Qf3Value], eps: &Rational) -> bool {
    let e = Qf3Value::rational(eps.clone());
    cell.parts.iter().all(|part| {
        centers.iter().any(|c| {
            part.lo_cut().gt_value(&(c.clone() - e.clone())) && part.hi_cut().lt_value(&(c.clone() + e.clone()))
        })
    })
}

/// Searches for `delta` with `f(N(z, delta))` inside the closure of
/// `N(f(z), eps)`, and checks it on base points of height at most
/// `sample_height`.
///
/// `delta` comes from the first stage `m` at which the images of both
/// projection cells of `z` lie within `eps` of the projections of `f(z)`:
/// the least of `eps` and, for each projection of `z`, the largest power of
/// two keeping a ball around it inside its stage-`m` cell.
pub fn continuity_audit(
    engine: &mut Engine,
    z: &Point,
    eps: &Rational,
    sample_height: u64,
    max_stages: u32,
) -> Result<AuditOutcome, EngineError> {
    let fz = engine.evaluate(z, max_stages)?;
    let centers = [fz.minus(), fz.plus()];
    let mut m = engine.enrolled_at(z).expect("evaluated points are enrolled");
    let (cells, delta) = loop {
        if m > max_stages {
            return Err(EngineError::StageCap(max_stages));
        }
        engine.run_to(m)?;
        let s = &engine.stages()[m as usize];
        let cells = [s.domain.cell_of(&z.minus()), s.domain.cell_of(&z.plus())];
        let good = cells
            .iter()
            .map(|c| s.phi.apply(&c.id).map(|img| within(&img, &centers, eps)))
            .collect::<Result<Vec<bool>, _>>()?;
        if good.iter().all(|g| *g) {
            let mut delta = eps.clone();
            for (v, c) in [(z.minus(), &cells[0]), (z.plus(), &cells[1])] {
                let part = &c.parts[c.part_of(&v).expect("cell holds the projection")];
                delta = delta.min(boundary_gap(&v, part));
            }
            break (cells, delta);
        }
        m += 1;
    };

    let near = BasicNbhd::new(z.clone(), delta.clone()).expect("delta > 0");
    let target = BasicNbhd::new(fz.clone(), eps.clone()).expect("eps > 0");
    let stage = &engine.stages()[m as usize];
    let mut samples = 0;
    for h in 1..=sample_height {
        for x in rationals_of_height(h) {
            let w = Point::base(x);
            if !nbhd_contains(&near, &w) {
                continue;
            }
            samples += 1;
            if let Some(fw) = engine.last().image(&w) {
                if !nbhd_closure_contains(&target, fw) {
                    return Ok(AuditOutcome::Counterexample { w, image: Some(fw.clone()) });
                }
                continue;
            }
            let cw = stage.domain.cell_of(&w.minus());
            if cells.iter().all(|c| c.id != cw.id) {
                return Ok(AuditOutcome::Counterexample { w, image: None });
            }
        }
    }
    Ok(AuditOutcome::Passed { delta, stage: m, samples })
}
