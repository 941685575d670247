//! End-to-end runs through the reduction chain
//! SAT → generalized Wang → ordinary Wang → relational Wang (irreflexive) → rectangles,
//! with a manifest of the counts observed at each stage.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::{count_gadget_tilings, load_tileset_2sat, load_tileset_t, load_tileset_tprime, GadgetTileset};
use crate::io::{Document, GenWangInstance, OrdWangInstance, PolyInstance, RectInstance, RectRegion, RelWangInstance, WangToRectDoc};
use crate::naive::{count_gen_wang_tilings, count_polyomino_tilings};
use crate::oracles::{count_1in3, count_2sat, verify_parsimony, ParsimonyEntry};
use crate::rect_reduction::{build_expanded_region, build_perturbed_tileset, tileset_size, validate_params, ExpansionParams, Profile, RectReductionError};
use crate::rect_solver::count_rect_tilings_outline;
use crate::reductions::{colored_region_to_polyomino_region, gen_instance_to_ordinary, gen_to_polyomino, make_irreflexive, rect_to_polyomino, ZigzagParams};
use crate::sat::{build_region, build_region_2sat, decompose_adjacent_transpositions, expression_to_permutation, Expr2SAT, Expression1in3};
use crate::solve::{SolveLimits, TilingCount};
use crate::wang::{BoundaryTileMap, ColoredRegion, GenWangTile, RelWangSystem};
use crate::wang_solver::{colored_to_relational_instance, count_wang_tilings_ordered, Boundary, ScanOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Gen,
    Ord,
    Rel,
    Irr,
    Rect,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Gen => "gen",
            Stage::Ord => "ord",
            Stage::Rel => "rel",
            Stage::Irr => "irr",
            Stage::Rect => "rect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputKind {
    #[serde(rename = "1in3")]
    OneInThree,
    #[serde(rename = "2sat")]
    TwoSat,
    #[serde(rename = "wang")]
    Wang,
    #[serde(rename = "rect")]
    Rect,
}

/// Gadget tileset for 1-in-3 inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SatTileset {
    /// Parity-tracking tiles: one tiling per satisfying assignment.
    #[default]
    TPrime,
    /// Plain tiles without parity tracking: exactly one tiling per expression.
    T,
}

#[derive(Debug, Clone)]
pub enum PipelineInput {
    OneInThree(Expression1in3),
    TwoSat(Expr2SAT),
    GenWang(GenWangInstance),
    OrdWang(OrdWangInstance),
    RelWang(RelWangInstance),
    Rect(RectInstance),
}

impl PipelineInput {
    pub fn kind(&self) -> InputKind {
        match self {
            PipelineInput::OneInThree(_) => InputKind::OneInThree,
            PipelineInput::TwoSat(_) => InputKind::TwoSat,
            PipelineInput::GenWang(_) | PipelineInput::OrdWang(_) | PipelineInput::RelWang(_) => InputKind::Wang,
            PipelineInput::Rect(_) => InputKind::Rect,
        }
    }

    /// First stage of the chain this input enters at.
    pub fn entry_stage(&self) -> Stage {
        match self {
            PipelineInput::OneInThree(_) | PipelineInput::TwoSat(_) | PipelineInput::GenWang(_) => Stage::Gen,
            PipelineInput::OrdWang(_) => Stage::Ord,
            PipelineInput::RelWang(_) => Stage::Rel,
            PipelineInput::Rect(_) => Stage::Rect,
        }
    }

    /// Wraps a parsed Wang or rectangle document.
    pub fn from_document(d: Document) -> Result<Self, PipelineError> {
        match d {
            Document::GenWang(x) => Ok(PipelineInput::GenWang(x)),
            Document::OrdWang(x) => Ok(PipelineInput::OrdWang(x)),
            Document::RelWang(x) => Ok(PipelineInput::RelWang(x)),
            Document::Rect(x) => Ok(PipelineInput::Rect(x)),
            other => Err(PipelineError::Input(format!("a {} document is not a pipeline input", other.kind()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Last stage to build.
    pub stage: Stage,
    pub profile: Profile,
    pub limits: SolveLimits,
    /// Build every stage but count nothing.
    pub construct_only: bool,
    /// Compare consecutive counts.
    pub verify: bool,
    pub tileset: SatTileset,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stage: Stage::Irr,
            profile: Profile::Desk,
            limits: SolveLimits::default().count_only(),
            construct_only: false,
            verify: true,
            tileset: SatTileset::TPrime,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input error: {0}")]
    Input(String),
    #[error("budget exhausted at stage {0}")]
    Budget(String),
    #[error("stage {stage} failed: {msg}")]
    Stage { stage: String, msg: String },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Budget(_) => 3,
            PipelineError::Input(_) | PipelineError::Stage { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Input(_) => "input",
            PipelineError::Budget(_) => "budget",
            PipelineError::Stage { .. } => "stage",
        }
    }
}

fn stage_err(stage: &str, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Stage { stage: stage.into(), msg: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    /// File name of the emitted instance, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artifact: Option<String>,
    pub tiles: usize,
    /// Area of the region when it fits in `u64`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area: Option<u64>,
    #[serde(default, with = "crate::bignum::opt", skip_serializing_if = "Option::is_none")]
    pub count: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Size of the rectangle tileset against the `2(n+1)²` bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectSize {
    pub wang_tiles: usize,
    pub rect_tiles: usize,
    pub bound: usize,
    pub params_valid: bool,
}

/// Counts and sizes from one run. Contains no timings, so equal inputs give equal bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub input: InputKind,
    pub config: PipelineConfig,
    #[serde(default, with = "crate::bignum::opt", skip_serializing_if = "Option::is_none")]
    pub oracle: Option<BigUint>,
    pub stages: Vec<StageRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rect_size: Option<RectSize>,
    pub parsimony: Vec<ParsimonyEntry>,
}

impl Manifest {
    pub fn parsimonious(&self) -> bool {
        self.parsimony.iter().all(|p| p.pass)
    }

    /// 0 when every comparison holds, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.parsimonious() {
            0
        } else {
            2
        }
    }

    pub fn count(&self, stage: &str) -> Option<&BigUint> {
        self.stages.iter().find(|s| s.stage == stage)?.count.as_ref()
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub manifest: Manifest,
    /// `(file name, document)` for every intermediate instance.
    pub artifacts: Vec<(String, Document)>,
}

fn exact<W>(c: TilingCount<W>, stage: &str) -> Result<BigUint, PipelineError> {
    if c.exhausted {
        Ok(c.count)
    } else {
        Err(PipelineError::Budget(stage.into()))
    }
}

fn naive_exact(c: crate::naive::NaiveCount, stage: &str) -> Result<BigUint, PipelineError> {
    if c.complete {
        Ok(BigUint::from(c.count))
    } else {
        Err(PipelineError::Budget(stage.into()))
    }
}

struct Run<'a> {
    cfg: &'a PipelineConfig,
    stages: Vec<StageRecord>,
    artifacts: Vec<(String, Document)>,
}

impl Run<'_> {
    fn counting(&self) -> bool {
        !self.cfg.construct_only
    }

    fn record(&mut self, stage: &str, doc: Option<Document>, tiles: usize, area: Option<u64>, count: Option<BigUint>, note: Option<String>) {
        let artifact = doc.map(|d| {
            let name = format!("{}.json", stage);
            self.artifacts.push((name.clone(), d));
            name
        });
        self.stages.push(StageRecord { stage: stage.into(), artifact, tiles, area, count, note });
    }
}

fn chi(tiles: &[GenWangTile], region: &ColoredRegion) -> usize {
    tiles.iter().filter_map(|t| t.max_color()).chain(region.boundary.entries().iter().map(|p| p.1)).max().map_or(1, |m| m as usize + 1)
}

fn sat_tileset(kind: InputKind, choice: SatTileset) -> Result<GadgetTileset, PipelineError> {
    let ts = match (kind, choice) {
        (InputKind::TwoSat, _) => load_tileset_2sat(),
        (_, SatTileset::TPrime) => load_tileset_tprime(),
        (_, SatTileset::T) => load_tileset_t(),
    };
    ts.map_err(|e| stage_err("gen", e))
}

/// Runs the chain from the input's entry stage up to `cfg.stage`.
pub fn run_pipeline(input: &PipelineInput, cfg: &PipelineConfig) -> Result<PipelineOutput, PipelineError> {
    let entry = input.entry_stage();
    if cfg.stage < entry {
        return Err(PipelineError::Input(format!("stage {} precedes the input's entry stage {}", cfg.stage.name(), entry.name())));
    }
    let mut run = Run { cfg, stages: Vec::new(), artifacts: Vec::new() };
    let limits = cfg.limits;
    let mut oracle = None;
    // SAT regions are two-row bands; scanning them band by band keeps the frontier small
    let mut order = ScanOrder::RowMajor;

    // generalized stage
    let mut gen: Option<GenWangInstance> = None;
    match input {
        PipelineInput::OneInThree(_) | PipelineInput::TwoSat(_) => {
            let ts = sat_tileset(input.kind(), cfg.tileset)?;
            let region = match input {
                PipelineInput::OneInThree(e) => {
                    if run.counting() {
                        oracle = Some(BigUint::from(count_1in3(e, false).map_err(|e| PipelineError::Input(e.to_string()))?.count));
                    }
                    let word = decompose_adjacent_transpositions(&expression_to_permutation(e));
                    build_region(e, &word).map_err(|e| stage_err("gen", e))?
                }
                PipelineInput::TwoSat(e) => {
                    if run.counting() {
                        oracle = Some(BigUint::from(count_2sat(e, false).map_err(|e| PipelineError::Input(e.to_string()))?.count));
                    }
                    build_region_2sat(e).map_err(|e| stage_err("gen", e))?
                }
                _ => unreachable!(),
            };
            let count = if run.counting() { Some(exact(count_gadget_tilings(&ts, &region, limits), "gen")?) } else { None };
            let inst = GenWangInstance { tiles: ts.tiles.clone(), region };
            run.record("gen", Some(Document::GenWang(inst.clone())), inst.tiles.len(), Some(inst.region.region.len() as u64), count, Some(format!("tileset {}", ts.name)));
            order = ScanOrder::Bands(2);
            gen = Some(inst);
        }
        PipelineInput::GenWang(inst) => {
            let count = if run.counting() { Some(naive_exact(count_gen_wang_tilings(&inst.tiles, &inst.region, limits.node_budget), "gen")?) } else { None };
            run.record("gen", Some(Document::GenWang(inst.clone())), inst.tiles.len(), Some(inst.region.region.len() as u64), count, None);
            // zig-zag side branch: polyomino tiles with no colors
            let zp = ZigzagParams::for_colors(chi(&inst.tiles, &inst.region));
            let polys = gen_to_polyomino(&inst.tiles, &zp).map_err(|e| stage_err("poly", e))?;
            let preg = colored_region_to_polyomino_region(&inst.region, &zp).map_err(|e| stage_err("poly", e))?;
            let count = if run.counting() { Some(naive_exact(count_polyomino_tilings(&polys, &preg, limits.node_budget), "poly")?) } else { None };
            let area = preg.len() as u64;
            run.record("poly", Some(Document::Poly(PolyInstance { tiles: polys, region: preg })), inst.tiles.len(), Some(area), count, None);
            gen = Some(inst.clone());
        }
        _ => {}
    }
    if cfg.stage == Stage::Gen {
        return Ok(finish(run, input, oracle));
    }

    // ordinary stage
    let ord: Option<OrdWangInstance> = match (input, &gen) {
        (PipelineInput::OrdWang(o), _) => Some(o.clone()),
        (_, Some(g)) => Some(OrdWangInstance { tiles: gen_instance_to_ordinary(&g.tiles, &g.region).tiles, region: g.region.clone() }),
        _ => None,
    };
    if let Some(o) = &ord {
        // SAT instances are too large for the backtracking counter; their count is taken at the relational stage
        let count = if run.counting() && order == ScanOrder::RowMajor {
            let units: Vec<GenWangTile> = o.tiles.iter().enumerate().map(|(i, &t)| GenWangTile::unit(&format!("o{i}"), t)).collect();
            Some(naive_exact(count_gen_wang_tilings(&units, &o.region, limits.node_budget), "ord")?)
        } else {
            None
        };
        run.record("ord", Some(Document::OrdWang(o.clone())), o.tiles.len(), Some(o.region.region.len() as u64), count, None);
    }
    if cfg.stage == Stage::Ord {
        return Ok(finish(run, input, oracle));
    }

    // relational stage
    let rel: Option<RelWangInstance> = match (input, &ord) {
        (PipelineInput::RelWang(r), _) => Some(r.clone()),
        (_, Some(o)) => {
            let (system, region, b) = colored_to_relational_instance(&o.tiles, &o.region);
            Some(RelWangInstance { system, region, boundary: Some(b) })
        }
        _ => None,
    };
    let count_rel = |sys: &RelWangSystem, r: &RelWangInstance, b: Option<&BoundaryTileMap>, stage: &str| -> Result<BigUint, PipelineError> {
        let bd = b.map_or(Boundary::Free, Boundary::Tiles);
        exact(count_wang_tilings_ordered(sys, &r.region, bd, limits, order), stage)
    };
    let mut irr: Option<RelWangInstance> = None;
    if let Some(r) = &rel {
        let count = if run.counting() { Some(count_rel(&r.system, r, r.boundary.as_ref(), "rel")?) } else { None };
        run.record("rel", Some(Document::RelWang(r.clone())), r.system.n, Some(r.region.len() as u64), count, None);
        if cfg.stage >= Stage::Irr {
            let b = r.boundary.clone().unwrap_or_default();
            let (sys2, b2) = make_irreflexive(&r.system, &r.region, &b);
            let inst = RelWangInstance { system: sys2, region: r.region.clone(), boundary: r.boundary.as_ref().map(|_| b2) };
            let count = if run.counting() { Some(count_rel(&inst.system, &inst, inst.boundary.as_ref(), "irr")?) } else { None };
            run.record("irr", Some(Document::RelWang(inst.clone())), inst.system.n, Some(inst.region.len() as u64), count, None);
            irr = Some(inst);
        }
    }
    if cfg.stage < Stage::Rect {
        return Ok(finish(run, input, oracle));
    }

    // rectangle stage
    let mut rect_size = None;
    match (input, &irr) {
        (PipelineInput::Rect(ri), _) => {
            let outline = ri.region.to_outline().map_err(|e| PipelineError::Input(e.to_string()))?;
            let count = if run.counting() { Some(exact(count_rect_tilings_outline(&ri.tiles, &outline, limits), "rect")?) } else { None };
            run.record("rect", Some(Document::Rect(ri.clone())), ri.tiles.len(), Some(outline.area()), count, None);
            if let RectRegion::Cells(cells) = &ri.region {
                let polys = rect_to_polyomino(&ri.tiles);
                let count = if run.counting() { Some(naive_exact(count_polyomino_tilings(&polys, cells, limits.node_budget), "poly")?) } else { None };
                run.record("poly", Some(Document::Poly(PolyInstance { tiles: polys, region: cells.clone() })), ri.tiles.len(), Some(cells.len() as u64), count, None);
            }
        }
        (_, Some(inst)) => {
            let b = inst.boundary.as_ref().ok_or_else(|| PipelineError::Input("the rectangle stage needs boundary tiles".into()))?;
            let p = ExpansionParams::for_profile(cfg.profile, inst.system.n);
            let ts = build_perturbed_tileset(&inst.system, &p).map_err(|e| stage_err("rect", e))?;
            let (rect_tiles, bound) = tileset_size(&inst.system);
            debug_assert_eq!(rect_tiles, ts.len());
            rect_size = Some(RectSize { wang_tiles: inst.system.n, rect_tiles, bound, params_valid: validate_params(&p).valid() });
            let concrete = ts.to_rect_tiles().ok();
            match build_expanded_region(&inst.region, b, &p) {
                Ok(er) => {
                    let count = match (&concrete, run.counting()) {
                        (Some(tiles), true) => Some(exact(count_rect_tilings_outline(tiles, &er.outline, limits), "rect")?),
                        (None, true) => return Err(stage_err("rect", "tile sizes exceed 64 bits; use --construct-only")),
                        _ => None,
                    };
                    let area = er.outline.area();
                    let doc = WangToRectDoc { tileset: ts, region: er, tiles: concrete };
                    run.record("rect", Some(Document::WangToRect(doc)), rect_tiles, Some(area), count, None);
                }
                Err(RectReductionError::TooLarge(what)) if cfg.construct_only => {
                    run.record("rect", None, rect_tiles, None, None, Some(format!("region not materialized: {what} exceeds machine integers")));
                }
                Err(e) => return Err(stage_err("rect", e)),
            }
        }
        _ => {}
    }
    let mut out = finish(run, input, oracle);
    out.manifest.rect_size = rect_size;
    if cfg.verify {
        out.manifest.parsimony = parsimony(&out.manifest);
    }
    Ok(out)
}

fn parsimony(m: &Manifest) -> Vec<ParsimonyEntry> {
    let mut seq: Vec<(String, &BigUint)> = Vec::new();
    if let Some(o) = &m.oracle {
        seq.push(("oracle".into(), o));
    }
    seq.extend(m.stages.iter().filter_map(|s| Some((s.stage.clone(), s.count.as_ref()?))));
    seq.windows(2)
        .map(|w| verify_parsimony(w[0].1, w[1].1, &format!("{} -> {}", w[0].0, w[1].0)))
        .collect()
}

fn finish(run: Run, input: &PipelineInput, oracle: Option<BigUint>) -> PipelineOutput {
    let mut manifest = Manifest { input: input.kind(), config: run.cfg.clone(), oracle, stages: run.stages, rect_size: None, parsimony: vec![] };
    if run.cfg.verify {
        manifest.parsimony = parsimony(&manifest);
    }
    PipelineOutput { manifest, artifacts: run.artifacts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Region;
    use crate::wang::uniform_boundary;

    #[test]
    fn one_in_three_fixture_through_wang() {
        let e = Expression1in3::parse("x y x\nx y y\n").unwrap();
        let cfg = PipelineConfig { stage: Stage::Irr, ..Default::default() };
        let out = run_pipeline(&PipelineInput::OneInThree(e.clone()), &cfg).unwrap();
        let m = &out.manifest;
        let oracle = BigUint::from(count_1in3(&e, false).unwrap().count);
        assert_eq!(m.oracle.as_ref(), Some(&oracle));
        assert_eq!(m.count("rel"), Some(&oracle));
        assert_eq!(m.count("irr"), Some(&oracle));
        assert!(m.parsimonious(), "{:?}", m.parsimony);
        assert_eq!(m.exit_code(), 0);
        assert_eq!(out.artifacts.len(), 4);
    }

    #[test]
    fn one_tile_system_at_desk_profile() {
        let region = Region::rectangle(0, 0, 1, 1);
        let inst = RelWangInstance { system: RelWangSystem::complete(1), region: region.clone(), boundary: Some(uniform_boundary(&region, 0)) };
        let cfg = PipelineConfig { stage: Stage::Rect, ..Default::default() };
        let out = run_pipeline(&PipelineInput::RelWang(inst), &cfg).unwrap();
        let m = &out.manifest;
        assert_eq!(m.count("rel"), Some(&BigUint::from(1u32)));
        assert_eq!(m.count("rect"), m.count("irr"));
        assert!(m.parsimonious());
        let size = m.rect_size.as_ref().unwrap();
        assert_eq!(size.wang_tiles, 2);
        assert!(size.rect_tiles <= size.bound && size.params_valid);
    }

    #[test]
    fn stage_before_entry_is_an_input_error() {
        let region = Region::rectangle(0, 0, 1, 1);
        let inst = RelWangInstance { system: RelWangSystem::complete(1), region, boundary: None };
        let cfg = PipelineConfig { stage: Stage::Gen, ..Default::default() };
        let err = run_pipeline(&PipelineInput::RelWang(inst), &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }

    #[test]
    fn budget_exit_code() {
        let e = Expression1in3::new(3, vec![[0, 1, 2]; 3]).unwrap();
        let cfg = PipelineConfig { stage: Stage::Gen, limits: SolveLimits::default().count_only().with_nodes(10), ..Default::default() };
        let err = run_pipeline(&PipelineInput::OneInThree(e), &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn manifest_bytes_are_stable() {
        let e = Expression1in3::parse("x y x\nx y y\n").unwrap();
        let cfg = PipelineConfig::default();
        let a = Document::Manifest(run_pipeline(&PipelineInput::OneInThree(e.clone()), &cfg).unwrap().manifest).to_json();
        let b = Document::Manifest(run_pipeline(&PipelineInput::OneInThree(e), &cfg).unwrap().manifest).to_json();
        assert_eq!(a, b);
        assert!(!a.contains("\"nodes\""));
        assert_eq!(Document::from_json(&a).unwrap().to_json(), a);
    }
}
