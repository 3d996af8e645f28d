//! The certificate file: a replayable JSON record of one engine run.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::CliError;
use crate::bing_topology::Point;
use crate::cover_algebra::{Cell, CellId, LazyPartition};
use crate::engine::{
    verify_choice, verify_initial, verify_stage, Chosen, Engine, EngineConfig, EngineError, Stage, StageReport,
};

pub const SCHEMA: &str = "bing-certificate/1";

/// One pair of the initial bijection, also the element type of a pairs file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub from: Point,
    pub to: Point,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub stages: u32,
    pub search_cap: usize,
    /// Always `"2^-n"`: stage `n` uses mesh `2^-n`.
    pub mesh: String,
}

/// The stage cells holding the two projections of a marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedCells {
    pub point: Point,
    pub minus: Cell,
    pub plus: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRecord {
    pub n: u32,
    pub chosen: Option<Chosen>,
    pub domain_cells: Vec<MarkedCells>,
    pub range_cells: Vec<MarkedCells>,
    pub overrides: Vec<(CellId, CellId)>,
    pub verified: bool,
    /// `sha256(previous digest, record with an empty digest)`, hex.
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema: String,
    pub config: RunConfig,
    pub f0: Vec<Pair>,
    pub stages: Vec<StageRecord>,
    /// `sha256` over the header and every stage digest, hex.
    pub digest: String,
}

/// A verification failure located at a stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyFailure {
    pub stage: u32,
    pub condition: String,
    pub detail: String,
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage {}: condition {} failed: {}", self.stage, self.condition, self.detail)
    }
}

fn sha_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_be_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn marked(p: &LazyPartition, points: &[Point]) -> Vec<MarkedCells> {
    points
        .iter()
        .map(|z| MarkedCells { point: z.clone(), minus: p.cell_of(&z.minus()), plus: p.cell_of(&z.plus()) })
        .collect()
}

fn record(stage: &Stage, verified: bool, prev_digest: &str) -> StageRecord {
    let mut r = StageRecord {
        n: stage.n,
        chosen: stage.chosen.clone(),
        domain_cells: marked(&stage.domain, &stage.a),
        range_cells: marked(&stage.range, &stage.b),
        overrides: stage.overrides.clone(),
        verified,
        digest: String::new(),
    };
    let body = serde_json::to_vec(&r).expect("records serialize");
    r.digest = sha_hex(&[prev_digest.as_bytes(), &body]);
    r
}

pub fn pairs_of(f0: &[(Point, Point)]) -> Vec<Pair> {
    f0.iter().map(|(x, y)| Pair { from: x.clone(), to: y.clone() }).collect()
}

pub fn f0_of(pairs: &[Pair]) -> Vec<(Point, Point)> {
    pairs.iter().map(|p| (p.from.clone(), p.to.clone())).collect()
}

impl Certificate {
    /// Records every stage the engine has built.
    pub fn from_engine(engine: &Engine) -> Certificate {
        let verified = engine.config().verify;
        let mut stages = Vec::new();
        let mut prev = String::new();
        for s in engine.stages() {
            let r = record(s, verified, &prev);
            prev = r.digest.clone();
            stages.push(r);
        }
        let mut cert = Certificate {
            schema: SCHEMA.to_string(),
            config: RunConfig {
                stages: engine.last().n,
                search_cap: engine.config().search_cap,
                mesh: "2^-n".to_string(),
            },
            f0: pairs_of(engine.f0()),
            stages,
            digest: String::new(),
        };
        cert.digest = cert.compute_digest();
        cert
    }

    fn compute_digest(&self) -> String {
        let header = serde_json::to_vec(&(&self.schema, &self.config, &self.f0)).expect("header serializes");
        let mut parts: Vec<&[u8]> = vec![&header];
        parts.extend(self.stages.iter().map(|s| s.digest.as_bytes()));
        sha_hex(&parts)
    }

    /// Pretty JSON with a trailing newline; this is the file format.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("certificates serialize");
        out.push(b'\n');
        out
    }

    /// Parses and checks the shape: schema tag, stage count and numbering.
    pub fn parse(bytes: &[u8]) -> Result<Certificate, CliError> {
        let cert: Certificate =
            serde_json::from_slice(bytes).map_err(|e| CliError::Input(format!("malformed certificate: {e}")))?;
        if cert.schema != SCHEMA {
            return Err(CliError::Input(format!("unsupported schema {:?}, expected {SCHEMA:?}", cert.schema)));
        }
        if cert.config.mesh != "2^-n" {
            return Err(CliError::Input(format!("unsupported mesh schedule {:?}", cert.config.mesh)));
        }
        if cert.stages.len() as u64 != u64::from(cert.config.stages) + 1 {
            return Err(CliError::Input(format!(
                "certificate declares {} stages but records {}",
                cert.config.stages,
                cert.stages.len().saturating_sub(1)
            )));
        }
        for (i, s) in cert.stages.iter().enumerate() {
            if s.n as usize != i {
                return Err(CliError::Input(format!("stage record {i} is numbered {}", s.n)));
            }
            if (i == 0) != s.chosen.is_none() {
                return Err(CliError::Input(format!("stage record {i} has the wrong chosen-point shape")));
            }
        }
        Ok(cert)
    }

    pub fn engine_config(&self, verify: bool) -> EngineConfig {
        EngineConfig { search_cap: self.config.search_cap, verify }
    }

    /// Re-runs the engine from `f0` without verification and checks that it
    /// reproduces this certificate's digest. Used by the query commands.
    pub fn replay(&self) -> Result<Engine, CliError> {
        let mut engine = Engine::new(f0_of(&self.f0), self.engine_config(false)).map_err(CliError::from)?;
        engine.run_to(self.config.stages).map_err(CliError::from)?;
        engine.set_verify(true);
        if Certificate::from_engine(&engine).digest != self.digest {
            return Err(CliError::Verification(
                "certificate does not match its replay; run `verify` for details".into(),
            ));
        }
        Ok(engine)
    }

    /// Rebuilds every stage from the recorded choices and override tables,
    /// checks all inductive and admissibility conditions, then checks that
    /// the recorded choices are the engine's own and that re-serializing
    /// reproduces `bytes` exactly.
    pub fn verify(&self, bytes: &[u8]) -> Result<Vec<StageReport>, VerifyFailure> {
        let fail = |stage: u32, condition: &str, detail: String| VerifyFailure {
            stage,
            condition: condition.to_string(),
            detail,
        };
        let from_report = |r: &StageReport| {
            let f = &r.failures[0];
            let mut detail = f.detail.clone();
            if let Some(p) = &f.point {
                detail = format!("{detail} (point {p})");
            }
            fail(r.n, &f.condition.to_string(), detail)
        };
        let from_engine = |stage: u32, e: EngineError| match e {
            EngineError::Verification(r) => from_report(&r),
            EngineError::InvalidInput(s) => fail(stage, "(10)", s),
            other => fail(stage, "build", other.to_string()),
        };

        let mut engine = Engine::new(f0_of(&self.f0), self.engine_config(false)).map_err(|e| from_engine(0, e))?;
        let mut reports = Vec::new();
        let own_overrides;
        {
            let f0 = engine.f0().to_vec();
            let s0 = &mut engine.stages_mut()[0];
            own_overrides = s0.overrides.clone();
            if s0.overrides != self.stages[0].overrides {
                s0.replace_overrides(None, self.stages[0].overrides.clone())
                    .map_err(|e| fail(0, "(14)", e.to_string()))?;
            }
            let r = verify_initial(s0, &f0);
            if !r.passed() {
                return Err(from_report(&r));
            }
            reports.push(r);
        }
        if own_overrides != self.stages[0].overrides {
            return Err(fail(0, "replay", "override table differs from the engine's".into()));
        }
        for rec in &self.stages[1..] {
            let chosen = rec.chosen.clone().expect("shape checked on parse");
            let pre = verify_choice(engine.well_order(), engine.last(), &chosen);
            if !pre.passed() {
                return Err(from_report(&pre));
            }
            let expected = engine.choose();
            let mut next = engine.assemble(chosen.clone()).map_err(|e| from_engine(rec.n, e))?;
            let own = next.overrides.clone();
            if next.overrides != rec.overrides {
                next.replace_overrides(Some(engine.last()), rec.overrides.clone())
                    .map_err(|e| fail(rec.n, "(13)", e.to_string()))?;
            }
            let r = verify_stage(engine.well_order(), engine.last(), &next);
            if !r.passed() {
                return Err(from_report(&r));
            }
            match expected {
                Ok(c) if c == chosen => {}
                Ok(c) => {
                    return Err(fail(
                        rec.n,
                        "replay",
                        format!("engine chooses a={} a'={} b={} b'={}", c.a, c.a_prime, c.b, c.b_prime),
                    ))
                }
                Err(e) => return Err(fail(rec.n, "replay", e.to_string())),
            }
            if own != rec.overrides {
                return Err(fail(rec.n, "replay", "override table differs from the engine's".into()));
            }
            engine.push_stage(next);
            reports.push(r);
        }
        engine.set_verify(true);
        let rebuilt = Certificate::from_engine(&engine);
        for (mine, theirs) in rebuilt.stages.iter().zip(&self.stages) {
            if mine != theirs {
                let what = if mine.domain_cells != theirs.domain_cells || mine.range_cells != theirs.range_cells {
                    "materialized cells differ from the rebuilt covers"
                } else {
                    "stage digest differs"
                };
                return Err(fail(mine.n, "replay", what.into()));
            }
        }
        if rebuilt.digest != self.digest {
            return Err(fail(self.config.stages, "replay", "certificate digest differs".into()));
        }
        if rebuilt.to_bytes() != bytes {
            return Err(fail(self.config.stages, "replay", "file is not the canonical serialization".into()));
        }
        Ok(reports)
    }
}
