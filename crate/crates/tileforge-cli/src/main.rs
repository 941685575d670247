use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tileforge::gadgets::{load_tileset_2sat, load_tileset_t, load_tileset_tprime, validate_gadget_tileset, GadgetTileset};
use tileforge::geometry::Region;
use tileforge::io::{self, Document, GenWangInstance, OracleDoc, OrdWangInstance, PolyInstance, RectInstance, RectRegion, RelWangInstance, TilingsDoc, WangToRectDoc};
use tileforge::oracles::{count_1in3, count_2sat};
use tileforge::pipeline::{run_pipeline, PipelineConfig, PipelineInput, SatTileset, Stage};
use tileforge::random::{planted_boundary, random_1in3, random_2sat, random_gen_wang_instance, random_rel_system, rng};
use tileforge::rect_reduction::{reduce_wang_to_rect, ExpansionParams, Profile};
use tileforge::rect_solver::{count_rect_tilings_outline, RectTile};
use tileforge::reductions::{colored_region_to_polyomino_region, gen_instance_to_ordinary, gen_to_polyomino, make_irreflexive, ZigzagParams};
use tileforge::render::{render_document, RenderOptions};
use tileforge::sat::{build_region, build_region_2sat, decompose_adjacent_transpositions, expression_to_permutation, Expr2SAT, Expression1in3};
use tileforge::solve::{with_thread_pool, SolveLimits};
use tileforge::wang::{BoundaryTileMap, RelWangSystem};
use tileforge::wang_solver::{colored_to_relational_instance, count_wang_tilings_ordered, Boundary, ScanOrder};

/// Exact tiling counters and parsimonious reductions between tiling problems.
#[derive(Parser)]
#[command(name = "tileforge", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply one reduction and emit the resulting instance.
    Reduce {
        #[command(subcommand)]
        which: Reduce,
    },
    /// Count tilings of an instance.
    Solve {
        #[command(subcommand)]
        which: Solve,
    },
    /// Brute-force model count of a SAT expression.
    Oracle {
        #[arg(value_enum)]
        problem: SatKind,
        #[arg(long = "in")]
        input: PathBuf,
        /// Also list the satisfying assignments.
        #[arg(long)]
        list: bool,
    },
    /// Gadget tileset utilities.
    Gadgets {
        #[command(subcommand)]
        which: Gadgets,
    },
    /// Run the reduction chain and write every stage plus a manifest.
    Pipeline(PipelineArgs),
    /// Draw an instance (and optionally a tiling) as SVG.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        /// A tilings document; its first witness is drawn.
        #[arg(long)]
        tiling: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = RenderOptions::default().max_elements)]
        max_elements: usize,
    },
    /// Generate a random test instance.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Variables (1in3, 2sat) or tiles (rel).
        #[arg(long, default_value_t = 2)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum Reduce {
    /// Generalized Wang instance to ordinary Wang tiles.
    GenToOrd(InOut),
    /// Ordinary Wang instance to a relational system with boundary tiles.
    OrdToRel(InOut),
    /// Doubles a relational system so that no tile may touch itself.
    MakeIrreflexive(InOut),
    /// Generalized Wang instance to uncolored polyominoes.
    GenToPoly(InOut),
    /// SAT expression to a generalized Wang instance over a gadget tileset.
    SatToWang {
        #[command(flatten)]
        io: InOut,
        /// Input syntax; 2sat reads DIMACS.
        #[arg(long, value_enum, default_value_t = SatKind::OneInThree)]
        problem: SatKind,
        #[arg(long, value_enum, default_value_t = TilesetName::Tprime)]
        tileset: TilesetName,
    },
    /// Irreflexive relational instance to a rectangle-tiling instance.
    WangToRect {
        #[command(flatten)]
        wang: WangInput,
        #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
        profile: ProfileArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Solve {
    /// Relational Wang instance (or a generalized/ordinary one, converted first).
    Wang {
        #[command(flatten)]
        wang: WangInput,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rectangle-tiling instance.
    Rect {
        /// A rect-instance or wang-to-rect document.
        #[arg(long = "in", conflicts_with_all = ["tiles", "region"])]
        input: Option<PathBuf>,
        /// JSON list of `{height, width, label}`.
        #[arg(long, requires = "region")]
        tiles: Option<PathBuf>,
        /// `{"cells": ...}` or `{"outline": ...}`.
        #[arg(long, requires = "tiles")]
        region: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Gadgets {
    /// Check the forcing, trigger, closure and parity properties up to a depth.
    Validate {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = TilesetName::Tprime)]
        tileset: TilesetName,
        /// A tileset file instead of a built-in one.
        #[arg(long = "file")]
        file: Option<PathBuf>,
    },
    /// Print a built-in tileset.
    Show {
        #[arg(value_enum)]
        tileset: TilesetName,
    },
}

#[derive(Args)]
struct InOut {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WangInput {
    /// A Wang instance document of any kind.
    #[arg(long = "in", conflicts_with_all = ["system", "region", "boundary"])]
    input: Option<PathBuf>,
    /// A relational system `{n, h, v}`.
    #[arg(long, requires = "region")]
    system: Option<PathBuf>,
    #[arg(long, requires = "system")]
    region: Option<PathBuf>,
    /// Boundary tiles as `[[[x, y, side], tile], ...]`; free boundary if omitted.
    #[arg(long, requires = "system")]
    boundary: Option<PathBuf>,
    /// Cell scan order; inferred from the input when omitted.
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Row,
    Column,
    /// Two-row bands, as used by gadget regions.
    Bands2,
}

#[derive(Args)]
struct LimitArgs {
    /// Count every tiling without keeping witnesses.
    #[arg(long)]
    count_all: bool,
    /// Witnesses to keep.
    #[arg(long)]
    max: Option<u64>,
    #[arg(long, default_value_t = 0)]
    max_nodes: u64,
    #[arg(long, default_value_t = 0)]
    time_ms: u64,
}

impl LimitArgs {
    fn limits(&self) -> SolveLimits {
        let mut l = SolveLimits { max_solutions: self.max.unwrap_or(0), node_budget: self.max_nodes, time_budget_ms: self.time_ms, witnesses: true };
        if self.count_all {
            l.witnesses = false;
        }
        l
    }
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum)]
    input_kind: InputKindArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = StageArg::Irr)]
    stage: StageArg,
    #[arg(long, value_enum, default_value_t = ProfileArg::Desk)]
    profile: ProfileArg,
    /// Gadget tileset for 1-in-3 input.
    #[arg(long, value_enum, default_value_t = TilesetName::Tprime)]
    tileset: TilesetName,
    /// Build all stages without counting.
    #[arg(long)]
    construct_only: bool,
    /// Compare the counts of consecutive stages; exit 2 on any mismatch.
    #[arg(long)]
    verify: bool,
    /// Directory for the stage documents and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    max_nodes: u64,
    #[arg(long, default_value_t = 0)]
    time_ms: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SatKind {
    #[value(name = "1in3")]
    OneInThree,
    #[value(name = "2sat")]
    TwoSat,
}

#[derive(Clone, Copy, ValueEnum)]
enum TilesetName {
    Tprime,
    T,
    #[value(name = "2sat")]
    TwoSat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Full,
    Desk,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Full => Profile::Full,
            ProfileArg::Desk => Profile::Desk,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InputKindArg {
    #[value(name = "1in3")]
    OneInThree,
    #[value(name = "2sat")]
    TwoSat,
    Wang,
    Rect,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Gen,
    Ord,
    Rel,
    Irr,
    Rect,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Self {
        match s {
            StageArg::Gen => Stage::Gen,
            StageArg::Ord => Stage::Ord,
            StageArg::Rel => Stage::Rel,
            StageArg::Irr => Stage::Irr,
            StageArg::Rect => Stage::Rect,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    /// Generalized Wang instance.
    GenWang,
    /// Irreflexive relational system on a 2x2 region with a planted boundary.
    Rel,
    #[value(name = "1in3")]
    OneInThree,
    #[value(name = "2sat")]
    TwoSat,
}

/// An error with its exit code and machine-readable kind.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

fn failure(code: u8, kind: &'static str, e: impl Into<anyhow::Error>) -> anyhow::Error {
    let e = e.into();
    if e.downcast_ref::<Failure>().is_some() {
        return e;
    }
    anyhow::Error::new(Failure { code, kind, message: format!("{e:#}") })
}

fn input_err(e: impl Into<anyhow::Error>) -> anyhow::Error {
    failure(4, "input", e)
}

fn read(p: &Path) -> anyhow::Result<String> {
    if p == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading stdin").map_err(input_err);
    }
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(input_err)
}

fn read_doc(p: &Path) -> anyhow::Result<Document> {
    Document::from_json(&read(p)?).with_context(|| format!("parsing {}", p.display())).map_err(input_err)
}

fn read_json<T: serde::de::DeserializeOwned>(p: &Path) -> anyhow::Result<T> {
    serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display())).map_err(input_err)
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => stdout(text),
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn stdout(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.context("writing stdout"),
    }
}

fn emit_doc(d: Document, out: Option<&Path>) -> anyhow::Result<()> {
    emit(&d.to_json(), out)
}

fn tileset(name: TilesetName) -> anyhow::Result<GadgetTileset> {
    let ts = match name {
        TilesetName::Tprime => load_tileset_tprime(),
        TilesetName::T => load_tileset_t(),
        TilesetName::TwoSat => load_tileset_2sat(),
    };
    Ok(ts?)
}

fn parse_sat(kind: SatKind, text: &str) -> anyhow::Result<PipelineInput> {
    Ok(match kind {
        SatKind::OneInThree => PipelineInput::OneInThree(Expression1in3::parse(text).map_err(input_err)?),
        SatKind::TwoSat => PipelineInput::TwoSat(Expr2SAT::parse_dimacs(text).map_err(input_err)?),
    })
}

/// Any Wang document, or the three-file form, as a relational instance.
fn relational(w: &WangInput) -> anyhow::Result<(RelWangInstance, ScanOrder)> {
    if let Some(p) = &w.input {
        return Ok(match read_doc(p)? {
            Document::RelWang(r) => (r, ScanOrder::RowMajor),
            Document::OrdWang(o) => (ord_to_rel(&o), ScanOrder::RowMajor),
            Document::GenWang(g) => {
                let o = OrdWangInstance { tiles: gen_instance_to_ordinary(&g.tiles, &g.region).tiles, region: g.region.clone() };
                // gadget regions are wire bands two cells tall
                let order = if g.tiles.iter().all(|t| t.area() == 1) { ScanOrder::RowMajor } else { ScanOrder::Bands(2) };
                (ord_to_rel(&o), order)
            }
            other => return Err(input_err(anyhow!("expected a Wang instance, got {}", other.format()))),
        });
    }
    let (Some(s), Some(r)) = (&w.system, &w.region) else {
        return Err(input_err(anyhow!("give --in or --system with --region")));
    };
    let system: RelWangSystem = read_json(s)?;
    let region: Region = read_json(r)?;
    let boundary: Option<BoundaryTileMap> = w.boundary.as_deref().map(read_json).transpose()?;
    let inst = RelWangInstance { system, region, boundary };
    Document::RelWang(inst.clone()).validate().map_err(input_err)?;
    Ok((inst, ScanOrder::RowMajor))
}

fn ord_to_rel(o: &OrdWangInstance) -> RelWangInstance {
    let (system, region, b) = colored_to_relational_instance(&o.tiles, &o.region);
    RelWangInstance { system, region, boundary: Some(b) }
}

fn budget_check(d: &TilingsDoc) -> anyhow::Result<()> {
    if d.exhausted {
        Ok(())
    } else {
        Err(failure(3, "budget", anyhow!("node or time budget exhausted after {} nodes", d.nodes)))
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Command::Reduce { which } => reduce(which)?,
        Command::Solve { which } => solve(which)?,
        Command::Oracle { problem, input, list } => {
            let text = read(&input)?;
            let (vars, result) = match parse_sat(problem, &text)? {
                PipelineInput::OneInThree(e) => (e.n, count_1in3(&e, list).map_err(input_err)?),
                PipelineInput::TwoSat(e) => (e.vars, count_2sat(&e, list).map_err(input_err)?),
                _ => unreachable!(),
            };
            let name = match problem {
                SatKind::OneInThree => "1in3",
                SatKind::TwoSat => "2sat",
            };
            emit_doc(Document::Oracle(OracleDoc { problem: name.into(), variables: vars, result }), None)?;
        }
        Command::Gadgets { which } => match which {
            Gadgets::Validate { depth, tileset: name, file } => {
                let ts = match file {
                    Some(p) => io::read_gadgets(&read(&p)?).map_err(input_err)?,
                    None => tileset(name)?,
                };
                let report = validate_gadget_tileset(&ts, depth);
                let ok = report.passed();
                emit_doc(Document::GadgetReport(report), None)?;
                if !ok {
                    return Ok(2);
                }
            }
            Gadgets::Show { tileset: name } => emit_doc(Document::Gadgets(tileset(name)?), None)?,
        },
        Command::Pipeline(a) => return pipeline(a),
        Command::Render { input, tiling, out, max_elements } => {
            let doc = read_doc(&input)?;
            let t = tiling.as_deref().map(|p| read(p).and_then(|s| io::read_tilings(&s).map_err(input_err))).transpose()?;
            let opts = RenderOptions { max_elements, ..Default::default() };
            let svg = render_document(&doc, t.as_ref(), &opts).map_err(input_err)?;
            emit(&svg, out.as_deref())?;
        }
        Command::Random { kind, seed, size } => {
            let mut g = rng(seed);
            match kind {
                RandomKind::GenWang => {
                    let (tiles, region) = random_gen_wang_instance(&mut g);
                    emit_doc(Document::GenWang(GenWangInstance { tiles, region }), None)?;
                }
                RandomKind::Rel => {
                    let region = Region::rectangle(0, 0, 2, 2);
                    let system = random_rel_system(&mut g, size.max(1), 0.8, true);
                    let boundary = Some(planted_boundary(&mut g, &system, &region));
                    emit_doc(Document::RelWang(RelWangInstance { system, region, boundary }), None)?;
                }
                RandomKind::OneInThree => emit(&random_1in3(&mut g, size.max(1)).to_text(), None)?,
                RandomKind::TwoSat => emit(&random_2sat(&mut g, size.max(1), 2 * size.max(1)).to_dimacs(), None)?,
            }
        }
    }
    Ok(0)
}

fn reduce(which: Reduce) -> anyhow::Result<()> {
    match which {
        Reduce::GenToOrd(a) => {
            let g = io::read_gen_wang(&read(&a.input)?).map_err(input_err)?;
            let o = OrdWangInstance { tiles: gen_instance_to_ordinary(&g.tiles, &g.region).tiles, region: g.region };
            emit_doc(Document::OrdWang(o), a.out.as_deref())
        }
        Reduce::OrdToRel(a) => {
            let o = io::read_ord_wang(&read(&a.input)?).map_err(input_err)?;
            emit_doc(Document::RelWang(ord_to_rel(&o)), a.out.as_deref())
        }
        Reduce::MakeIrreflexive(a) => {
            let r = io::read_rel_wang(&read(&a.input)?).map_err(input_err)?;
            let b = r.boundary.clone().unwrap_or_default();
            let (system, b2) = make_irreflexive(&r.system, &r.region, &b);
            let boundary = r.boundary.as_ref().map(|_| b2);
            emit_doc(Document::RelWang(RelWangInstance { system, region: r.region, boundary }), a.out.as_deref())
        }
        Reduce::GenToPoly(a) => {
            let g = io::read_gen_wang(&read(&a.input)?).map_err(input_err)?;
            let chi = g.tiles.iter().filter_map(|t| t.max_color()).chain(g.region.boundary.entries().iter().map(|p| p.1)).max().map_or(1, |m| m as usize + 1);
            let zp = ZigzagParams::for_colors(chi);
            let tiles = gen_to_polyomino(&g.tiles, &zp).map_err(input_err)?;
            let region = colored_region_to_polyomino_region(&g.region, &zp).map_err(input_err)?;
            emit_doc(Document::Poly(PolyInstance { tiles, region }), a.out.as_deref())
        }
        Reduce::SatToWang { io: a, problem, tileset: name } => {
            let text = read(&a.input)?;
            let (region, ts) = match parse_sat(problem, &text)? {
                PipelineInput::OneInThree(e) => {
                    let word = decompose_adjacent_transpositions(&expression_to_permutation(&e));
                    (build_region(&e, &word).map_err(input_err)?, tileset(name)?)
                }
                PipelineInput::TwoSat(e) => (build_region_2sat(&e).map_err(input_err)?, tileset(TilesetName::TwoSat)?),
                _ => unreachable!(),
            };
            emit_doc(Document::GenWang(GenWangInstance { tiles: ts.tiles, region }), a.out.as_deref())
        }
        Reduce::WangToRect { wang, profile, out } => {
            let (r, _) = relational(&wang)?;
            let b = r.boundary.as_ref().ok_or_else(|| input_err(anyhow!("the reduction needs boundary tiles")))?;
            let p = ExpansionParams::for_profile(profile.into(), r.system.n);
            let (tileset, region) = reduce_wang_to_rect(&r.system, &r.region, b, &p).map_err(input_err)?;
            let tiles = tileset.to_rect_tiles().ok();
            emit_doc(Document::WangToRect(WangToRectDoc { tileset, region, tiles }), out.as_deref())
        }
    }
}

fn solve(which: Solve) -> anyhow::Result<()> {
    let (doc, out): (TilingsDoc, Option<PathBuf>) = match which {
        Solve::Wang { wang, limits, out } => {
            let (r, inferred) = relational(&wang)?;
            let order = match wang.order {
                None => inferred,
                Some(OrderArg::Row) => ScanOrder::RowMajor,
                Some(OrderArg::Column) => ScanOrder::ColumnMajor,
                Some(OrderArg::Bands2) => ScanOrder::Bands(2),
            };
            let bd = r.boundary.as_ref().map_or(Boundary::Free, Boundary::Tiles);
            (count_wang_tilings_ordered(&r.system, &r.region, bd, limits.limits(), order).into(), out)
        }
        Solve::Rect { input, tiles, region, limits, out } => {
            let (tiles, region): (Vec<RectTile>, RectRegion) = match (input, tiles, region) {
                (Some(p), _, _) => match read_doc(&p)? {
                    Document::Rect(RectInstance { tiles, region }) => (tiles, region),
                    Document::WangToRect(w) => match w.rect_instance() {
                        Some(ri) => (ri.tiles, ri.region),
                        None => return Err(input_err(anyhow!("tile sizes exceed 64 bits"))),
                    },
                    other => return Err(input_err(anyhow!("expected a rectangle instance, got {}", other.format()))),
                },
                (None, Some(t), Some(r)) => (read_json(&t)?, read_json(&r)?),
                _ => return Err(input_err(anyhow!("give --in or --tiles with --region"))),
            };
            let outline = region.to_outline().map_err(input_err)?;
            (count_rect_tilings_outline(&tiles, &outline, limits.limits()).into(), out)
        }
    };
    emit_doc(Document::Tilings(doc.clone()), out.as_deref())?;
    budget_check(&doc)
}

fn pipeline(a: PipelineArgs) -> anyhow::Result<u8> {
    let input = match a.input_kind {
        InputKindArg::OneInThree => parse_sat(SatKind::OneInThree, &read(&a.input)?)?,
        InputKindArg::TwoSat => parse_sat(SatKind::TwoSat, &read(&a.input)?)?,
        InputKindArg::Wang | InputKindArg::Rect => {
            let input = PipelineInput::from_document(read_doc(&a.input)?).map_err(input_err)?;
            let is_rect = matches!(input, PipelineInput::Rect(_));
            if is_rect != matches!(a.input_kind, InputKindArg::Rect) {
                return Err(input_err(anyhow!("document kind does not match --input-kind")));
            }
            input
        }
    };
    let cfg = PipelineConfig {
        stage: a.stage.into(),
        profile: a.profile.into(),
        limits: SolveLimits { max_solutions: 0, node_budget: a.max_nodes, time_budget_ms: a.time_ms, witnesses: false },
        construct_only: a.construct_only,
        verify: a.verify,
        tileset: match a.tileset {
            TilesetName::T => SatTileset::T,
            _ => SatTileset::TPrime,
        },
    };
    let out = run_pipeline(&input, &cfg).map_err(|e| failure(e.exit_code() as u8, e.kind(), e))?;
    let manifest = Document::Manifest(out.manifest.clone()).to_json();
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, doc) in &out.artifacts {
            fs::write(dir.join(name), doc.to_json()).with_context(|| format!("writing {name}"))?;
        }
        fs::write(dir.join("manifest.json"), &manifest)?;
    }
    stdout(&manifest)?;
    Ok(if a.verify { out.manifest.exit_code() as u8 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_thread_pool(|| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let (code, kind) = e.downcast_ref::<Failure>().map_or((1, "internal"), |f| (f.code, f.kind));
            eprintln!("{}", json!({ "error": kind, "message": format!("{e:#}") }));
            ExitCode::from(code)
        }
    }
}
