//! Gadget tilesets for the SAT reductions and their behavioral validator.
//!
//! Geometry. A wire is a band two unit rows tall. Small tiles are skew
//! tetrominoes: in band-local coordinates the upper cells are `(1,0),(2,0)` and
//! the lower cells `(0,1),(1,1)`. A tile at slot `m` of a section sits at
//! section column `2m`. Its top edges read the second bottom color of the tile
//! above and the first bottom color of the tile above-right, which is how
//! control sequences shift between bands.
//!
//! The two horizontal "step" edges of a small tile (top of `(0,1)`, bottom of
//! `(2,0)`) meet the neighbouring tiles of the same band and carry a mode flag
//! that separates a crossover row from an ordinary row. Vertical edges carry
//! the wire's parity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Cell, Edge, Region, Side};
use crate::reductions::{decode_ordinary_tiling, gen_instance_to_ordinary};
use crate::solve::{SolveLimits, TilingCount};
use crate::wang::{Color, ColoredRegion, EdgeMap, GenWangTile, RelWangSystem, TileId};
use crate::wang_solver::{colored_to_relational_instance, count_wang_tilings_ordered, Boundary, ScanOrder};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("gadget asset is corrupt: {0}")]
    AssetCorrupt(String),
    #[error("invalid counts r={r}, s={s}: both must be at least 1")]
    InvalidCounts { r: usize, s: usize },
}

/// A named tileset with parity bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetTileset {
    pub format: String,
    pub name: String,
    pub tiles: Vec<GenWangTile>,
    /// Colors that may appear on region boundaries.
    pub boundary_color_count: usize,
    /// Small-tile base name to its parity-0 and parity-1 tile indices.
    pub parity_pairs: BTreeMap<String, (usize, usize)>,
}

pub const TILESET_FORMAT: &str = "tileforge/gadget-tileset/v1";

impl GadgetTileset {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.tiles.iter().position(|t| t.name == name)
    }

    pub fn total_area(&self) -> usize {
        self.tiles.iter().map(|t| t.area()).sum()
    }

    /// Distinct colors used on any tile edge.
    pub fn colors_used(&self) -> Vec<Color> {
        let mut v: Vec<Color> = self.tiles.iter().flat_map(|t| t.colors.entries().iter().map(|p| p.1)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Small tiles: name, top pair, bottom pair, left step, right step.
pub const SMALL_TILES: [(&str, [Color; 2], [Color; 2], Color, Color); 7] = [
    ("L", [1, 0], [0, 1], 0, 0),
    ("W", [2, 0], [0, 2], 0, 0),
    ("S", [2, 6], [6, 2], 0, 0),
    ("R", [3, 0], [6, 3], 0, 0),
    ("B", [2, 6], [0, 8], 1, 1),
    ("K", [3, 0], [0, 8], 1, 0),
    ("F", [8, 0], [0, 8], 0, 0),
];

/// Builds a tile from cells, explicit horizontal edge colors (default 0) and
/// per-row parity colors on west and east edges.
fn build(name: &str, cells: &[(i64, i64)], horiz: &[((i64, i64), Side, Color)], west: impl Fn(i64) -> Color, east: impl Fn(i64) -> Color) -> GenWangTile {
    let f = |e: Edge| -> Color {
        match e.side {
            Side::West => west(e.cell.y),
            Side::East => east(e.cell.y),
            _ => horiz
                .iter()
                .find(|(c, s, _)| *c == (e.cell.x, e.cell.y) && *s == e.side)
                .map_or(0, |h| h.2),
        }
    };
    GenWangTile::from_fn(name, cells, f).expect("gadget tiles are valid")
}

fn small(name: &str, top: [Color; 2], bot: [Color; 2], ls: Color, rs: Color, p: Color) -> GenWangTile {
    build(
        name,
        &[(1, 0), (2, 0), (0, 1), (1, 1)],
        &[
            ((1, 0), Side::North, top[0]),
            ((2, 0), Side::North, top[1]),
            ((0, 1), Side::South, bot[0]),
            ((1, 1), Side::South, bot[1]),
            ((0, 1), Side::North, ls),
            ((2, 0), Side::South, rs),
        ],
        |_| p,
        |_| p,
    )
}

/// Crossover spanning two bands; left parities `(a, b)` leave as `(b, a)`.
fn crossover(a: Color, b: Color) -> GenWangTile {
    build(
        &format!("X{a}{b}"),
        &[(1, 0), (2, 0), (0, 1), (1, 1), (1, 2), (2, 2), (0, 3), (1, 3)],
        &[
            ((1, 0), Side::North, 1),
            ((2, 0), Side::North, 6),
            ((2, 0), Side::South, 1),
            ((1, 3), Side::South, 8),
        ],
        |y| if y < 2 { a } else { b },
        |y| if y < 2 { b } else { a },
    )
}

/// Variable tile over three bands emitting parity `p` on all of them.
fn variable(p: Color) -> GenWangTile {
    let mut cells: Vec<(i64, i64)> = (0..6).map(|y| (0, y)).collect();
    cells.extend([(1, 0), (1, 2), (1, 4)]);
    build(&format!("V{p}"), &cells, &[((0, 0), Side::North, 7), ((0, 5), Side::South, 7)], |_| 0, |_| p)
}

/// Clause tile over `wires` bands; `inputs[w]` is the parity it accepts on band `w`.
fn clause(name: &str, inputs: &[Color]) -> GenWangTile {
    let wires = inputs.len() as i64;
    let mut cells = Vec::new();
    for w in 0..wires {
        cells.extend([(1, 2 * w), (0, 2 * w + 1), (1, 2 * w + 1)]);
    }
    let last = 2 * wires - 1;
    let inputs = inputs.to_vec();
    build(name, &cells, &[((1, 0), Side::North, 7), ((1, last), Side::South, 7)], move |y| inputs[(y / 2) as usize], |_| 0)
}

fn parity_pairs(tiles: &[GenWangTile]) -> BTreeMap<String, (usize, usize)> {
    let mut m = BTreeMap::new();
    for (base, ..) in SMALL_TILES {
        let i0 = tiles.iter().position(|t| t.name == format!("{base}0"));
        let i1 = tiles.iter().position(|t| t.name == format!("{base}1"));
        if let (Some(a), Some(b)) = (i0, i1) {
            m.insert(base.to_string(), (a, b));
        }
    }
    m
}

fn small_tiles(parities: &[Color]) -> Vec<GenWangTile> {
    let mut v = Vec::new();
    for (name, top, bot, ls, rs) in SMALL_TILES {
        for &p in parities {
            v.push(small(&format!("{name}{p}"), top, bot, ls, rs, p));
        }
    }
    v
}

/// Tileset without parity variants: every vertical edge is 0.
pub fn build_tileset_t() -> GadgetTileset {
    let mut tiles = small_tiles(&[0]);
    tiles.push(crossover(0, 0));
    tiles.push(variable(0));
    tiles.push(clause("C0", &[0, 0, 0]));
    finish("T", tiles)
}

/// The 1-in-3 tileset: 14 small tiles, 4 crossovers, 2 variables, 3 clauses.
pub fn build_tileset_tprime() -> GadgetTileset {
    let mut tiles = small_tiles(&[0, 1]);
    for a in 0..2 {
        for b in 0..2 {
            tiles.push(crossover(a, b));
        }
    }
    tiles.push(variable(0));
    tiles.push(variable(1));
    for w in 0..3 {
        let mut inp = [0; 3];
        inp[w] = 1;
        tiles.push(clause(&format!("C{}", w + 1), &inp));
    }
    finish("Tprime", tiles)
}

/// Variable-column tokens for 2SAT. Each straddles a band boundary, reads the
/// carried value from above and passes it on below.
///
/// Left colors: start `5`, middle `2,6`, switch `3,6`, end `4`. The carry is
/// `4 + value` on the edge between tokens; the switch negates it.
fn token(kind: &str, v: Color) -> GenWangTile {
    let carry = |x: Color| 4 + x;
    match kind {
        "start" => build(&format!("Start{v}"), &[(0, 0), (1, 0)], &[((0, 0), Side::North, 7), ((0, 0), Side::South, carry(v))], |_| 5, move |_| v),
        "mid" | "switch" => {
            let out = if kind == "switch" { 1 - v } else { v };
            let first_left = if kind == "switch" { 3 } else { 2 };
            let name = if kind == "switch" { format!("Sw{v}") } else { format!("Mid{v}") };
            build(
                &name,
                &[(0, 0), (0, 1), (1, 1)],
                &[((0, 0), Side::North, carry(v)), ((0, 1), Side::South, carry(out))],
                move |y| if y == 0 { first_left } else { 6 },
                move |y| if y == 0 { v } else { out },
            )
        }
        _ => build(&format!("End{v}"), &[(0, 0)], &[((0, 0), Side::North, carry(v)), ((0, 0), Side::South, 7)], |_| 4, move |_| v),
    }
}

/// The 2SAT tileset: 14 small tiles, 4 crossovers, 8 variable tokens, 3 clauses.
pub fn build_tileset_2sat() -> GadgetTileset {
    let mut tiles = small_tiles(&[0, 1]);
    for a in 0..2 {
        for b in 0..2 {
            tiles.push(crossover(a, b));
        }
    }
    for kind in ["start", "mid", "switch", "end"] {
        for v in 0..2 {
            tiles.push(token(kind, v));
        }
    }
    for (name, inp) in [("D10", [1, 0]), ("D01", [0, 1]), ("D11", [1, 1])] {
        tiles.push(clause(name, &inp));
    }
    finish("2sat", tiles)
}

fn finish(name: &str, tiles: Vec<GenWangTile>) -> GadgetTileset {
    let parity_pairs = parity_pairs(&tiles);
    GadgetTileset { format: TILESET_FORMAT.into(), name: name.into(), tiles, boundary_color_count: 9, parity_pairs }
}

const ASSET_T: &str = include_str!("../assets/tileset_t.json");
const ASSET_TPRIME: &str = include_str!("../assets/tileset_tprime.json");
const ASSET_2SAT: &str = include_str!("../assets/tileset_2sat.json");

fn load(src: &str) -> Result<GadgetTileset, GadgetError> {
    let ts: GadgetTileset = serde_json::from_str(src).map_err(|e| GadgetError::AssetCorrupt(e.to_string()))?;
    if ts.format != TILESET_FORMAT {
        return Err(GadgetError::AssetCorrupt(format!("unexpected format {}", ts.format)));
    }
    for t in &ts.tiles {
        GenWangTile::new(t.name.clone(), t.shape.clone(), t.colors.clone()).map_err(|e| GadgetError::AssetCorrupt(format!("{}: {e}", t.name)))?;
    }
    Ok(ts)
}

pub fn load_tileset_t() -> Result<GadgetTileset, GadgetError> {
    load(ASSET_T)
}

pub fn load_tileset_tprime() -> Result<GadgetTileset, GadgetError> {
    load(ASSET_TPRIME)
}

pub fn load_tileset_2sat() -> Result<GadgetTileset, GadgetError> {
    load(ASSET_2SAT)
}

/// Left-edge colors of a 2SAT variable column: `5 (26)^(r-1) 36 (26)^(s-1) 4`.
pub fn build_2sat_variable_column(r: usize, s: usize) -> Result<Vec<Color>, GadgetError> {
    if r == 0 || s == 0 {
        return Err(GadgetError::InvalidCounts { r, s });
    }
    let mut v = vec![5];
    for _ in 1..r {
        v.extend([2, 6]);
    }
    v.extend([3, 6]);
    for _ in 1..s {
        v.extend([2, 6]);
    }
    v.push(4);
    Ok(v)
}

/// Cell of a tile in region coordinates, given the tile's placement offset.
pub fn placed_cells(t: &GenWangTile, dx: i64, dy: i64) -> Vec<Cell> {
    t.shape.cells().iter().map(|c| c.translate(dx, dy)).collect()
}

/// The tile shape used for a small tile, for building regions.
pub fn small_shape() -> Region {
    Region::new(vec![Cell::new(1, 0), Cell::new(2, 0), Cell::new(0, 1), Cell::new(1, 1)]).expect("connected")
}

/// Builds edge colors for `region` from a function, for region builders.
pub fn color_region(region: &Region, f: impl Fn(Edge) -> Color) -> EdgeMap<Color> {
    EdgeMap::from_entries(region.exterior_edges().into_iter().map(|e| (e, f(e))).collect())
}

/// Generalized tile placements `(tile index, anchor)`, sorted by anchor row then column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetTiling {
    pub placements: Vec<(usize, Cell)>,
}

impl GadgetTiling {
    pub fn names<'a>(&self, ts: &'a GadgetTileset) -> Vec<&'a str> {
        self.placements.iter().map(|&(t, _)| ts.tiles[t].name.as_str()).collect()
    }
}

/// Boundary color marking an edge whose outside is unconstrained.
pub const FREE_COLOR: Color = 999;

/// Counts tilings of a colored region by the gadget tiles.
///
/// Boundary edges colored [`FREE_COLOR`] accept any tile edge that lies on
/// the outline of its generalized tile.
pub fn count_gadget_tilings(ts: &GadgetTileset, region: &ColoredRegion, limits: SolveLimits) -> TilingCount<GadgetTiling> {
    let ord = gen_instance_to_ordinary(&ts.tiles, region);
    let (mut sys, r, mut b) = colored_to_relational_instance(&ord.tiles, region);
    let free: Vec<Edge> = region.boundary.entries().iter().filter(|p| p.1 == FREE_COLOR).map(|p| p.0).collect();
    if !free.is_empty() {
        let mut h: Vec<_> = sys.h.iter().copied().collect();
        let mut v: Vec<_> = sys.v.iter().copied().collect();
        let mut n = sys.n;
        let mut ids: BTreeMap<Side, TileId> = BTreeMap::new();
        for &e in &free {
            if ids.contains_key(&e.side) {
                continue;
            }
            let u = n as TileId;
            n += 1;
            ids.insert(e.side, u);
            for (j, &(ti, c)) in ord.origin.iter().enumerate() {
                if ts.tiles[ti].shape.contains(c.step(e.side)) {
                    continue;
                }
                let j = j as TileId;
                match e.side {
                    Side::North => v.push((u, j)),
                    Side::South => v.push((j, u)),
                    Side::West => h.push((u, j)),
                    Side::East => h.push((j, u)),
                }
            }
        }
        sys = RelWangSystem::new(n, h, v).expect("indices in range");
        b = EdgeMap::from_entries(b.entries().iter().map(|&(e, t)| (e, if free.contains(&e) { ids[&e.side] } else { t })).collect());
    }
    count_wang_tilings_ordered(&sys, &r, Boundary::Tiles(&b), limits, ScanOrder::Bands(2))
        .map_witnesses(|w| GadgetTiling { placements: decode_ordinary_tiling(&ord, &r, &w.assignment) })
}

/// One behavioral check of [`validate_gadget_tileset`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetCheck {
    /// `a` row forcing, `b` crossover trigger, `c` filler closure, `d` parity transport.
    pub property: String,
    pub case: String,
    pub pass: bool,
    /// Observed count and the first tiling found, as tile names.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetValidationReport {
    pub tileset: String,
    pub depth: usize,
    pub checks: Vec<GadgetCheck>,
}

impl GadgetValidationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GadgetCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// A strip of `bands` wire bands and `slots` small-tile slots in one section.
///
/// `above` is the bottom color sequence of the row over the strip; `west` and
/// `east` give one parity per band. The last band's bottom is `bottom`, or
/// unconstrained when `None`.
pub fn strip_region(slots: usize, bands: usize, above: &[Color], west: &[Color], east: &[Color], bottom: Option<&[Color]>) -> ColoredRegion {
    let t = 2 * slots as i64;
    let mut cells = Vec::new();
    for b in 0..bands as i64 {
        cells.extend((1..=t).map(|x| Cell::new(x, 2 * b)));
        cells.extend((0..t).map(|x| Cell::new(x, 2 * b + 1)));
    }
    let region = Region::new(cells).expect("strip is connected");
    let last = 2 * bands as i64 - 1;
    let boundary = color_region(&region, |e| {
        let (x, y) = (e.cell.x, e.cell.y);
        match e.side {
            Side::North if y == 0 && x < t => above[x as usize],
            Side::South if y == last => bottom.map_or(FREE_COLOR, |b| b[x as usize]),
            Side::West => west[(y / 2) as usize],
            Side::East => east[(y / 2) as usize],
            _ => 0,
        }
    });
    ColoredRegion { region, boundary }
}

/// The column of a variable gadget over `wires` bands: `west` per unit row,
/// `east` per band, 7 on the top and bottom ends.
pub fn column_region(wires: usize, west: &[Color], east: &[Color]) -> ColoredRegion {
    let h = 2 * wires as i64;
    let mut cells: Vec<Cell> = (0..h).map(|y| Cell::new(0, y)).collect();
    cells.extend((0..wires as i64).map(|w| Cell::new(1, 2 * w)));
    let region = Region::new(cells).expect("column is connected");
    let boundary = color_region(&region, |e| match e.side {
        Side::North if e.cell == Cell::new(0, 0) => 7,
        Side::South if e.cell == Cell::new(0, h - 1) => 7,
        Side::West => west[e.cell.y as usize],
        Side::East => east[(e.cell.y / 2) as usize],
        _ => 0,
    });
    ColoredRegion { region, boundary }
}

/// The clause column over `inputs.len()` bands with the given input parities.
pub fn clause_region(inputs: &[Color]) -> ColoredRegion {
    let wires = inputs.len() as i64;
    let mut cells = Vec::new();
    for w in 0..wires {
        cells.extend([Cell::new(1, 2 * w), Cell::new(0, 2 * w + 1), Cell::new(1, 2 * w + 1)]);
    }
    let region = Region::new(cells).expect("clause is connected");
    let last = 2 * wires - 1;
    let boundary = color_region(&region, |e| match e.side {
        Side::North if e.cell == Cell::new(1, 0) => 7,
        Side::South if e.cell == Cell::new(1, last) => 7,
        Side::West => inputs[(e.cell.y / 2) as usize],
        _ => 0,
    });
    ColoredRegion { region, boundary }
}

fn seq(parts: &[(&[Color], usize)]) -> Vec<Color> {
    parts.iter().flat_map(|&(p, k)| std::iter::repeat(p).take(k).flatten().copied()).collect()
}

fn names(parts: &[(&str, usize)]) -> Vec<String> {
    parts.iter().flat_map(|&(n, k)| std::iter::repeat(n.to_string()).take(k)).collect()
}

struct Checker<'a> {
    ts: &'a GadgetTileset,
    checks: Vec<GadgetCheck>,
}

impl Checker<'_> {
    fn run(&self, region: &ColoredRegion) -> (u64, Option<Vec<String>>) {
        let limits = SolveLimits { max_solutions: 1, node_budget: 50_000_000, ..SolveLimits::default() };
        let res = count_gadget_tilings(self.ts, region, limits);
        let count = if res.exhausted { res.count_u64().unwrap_or(u64::MAX) } else { u64::MAX };
        let first = res.witnesses.first().map(|w| w.names(self.ts).into_iter().map(String::from).collect());
        (count, first)
    }

    fn push(&mut self, property: &str, case: String, pass: bool, count: u64, first: Option<Vec<String>>) {
        let shown = if count == u64::MAX { "budget exceeded".to_string() } else { count.to_string() };
        let detail = match first {
            Some(f) => format!("count {shown}, first tiling {}", f.join(" ")),
            None => format!("count {shown}"),
        };
        self.checks.push(GadgetCheck { property: property.into(), case, pass, detail });
    }

    /// Exactly one tiling whose placements, in reading order, have the given names.
    fn unique(&mut self, property: &str, case: String, region: &ColoredRegion, expected: &[String]) {
        let (count, first) = self.run(region);
        let pass = count == 1 && first.as_deref() == Some(expected);
        self.push(property, case, pass, count, first);
    }

    fn exact(&mut self, property: &str, case: String, region: &ColoredRegion, expected: u64) {
        let (count, first) = self.run(region);
        self.push(property, case, count == expected, count, first);
    }
}

/// Checks the behavior the SAT reductions rely on, on small strip regions,
/// for every `k + l <= depth`:
///
/// * (a) under a row `L W^k S^l R` the next row is forced to `L W^(k-1) S^(l+1) R`;
/// * (b) under `L S^l R` the next two bands are forced to `X B^l K` over fillers;
/// * (c) below a crossover only fillers fit, down to the bottom string;
/// * (d) small rows keep their parity, `X` swaps the parities of its two wires,
///   a variable gadget emits one parity on all its wires, and each clause
///   accepts exactly the intended input parities.
pub fn validate_gadget_tileset(ts: &GadgetTileset, depth: usize) -> GadgetValidationReport {
    let mut ck = Checker { ts, checks: Vec::new() };
    if depth < 2 {
        ck.checks.push(GadgetCheck { property: "depth".into(), case: format!("K={depth}"), pass: false, detail: "depth must be at least 2".into() });
    }
    let (l, w, s, r): (&[Color], &[Color], &[Color], &[Color]) = (&[0, 1], &[0, 2], &[6, 2], &[6, 3]);
    let f: &[Color] = &[0, 8];

    for k in 1..=depth {
        for ell in 0..=depth - k {
            let above = seq(&[(l, 1), (w, k), (s, ell), (r, 1)]);
            let region = strip_region(k + ell + 2, 1, &above, &[0], &[0], None);
            let want = names(&[("L0", 1), ("W0", k - 1), ("S0", ell + 1), ("R0", 1)]);
            ck.unique("a", format!("k={k} l={ell}"), &region, &want);
        }
    }
    for ell in 0..=depth {
        let slots = ell + 2;
        let above = seq(&[(l, 1), (s, ell), (r, 1)]);
        let region = strip_region(slots, 2, &above, &[0, 0], &[0, 0], None);
        let want = names(&[("X00", 1), ("B0", ell), ("K0", 1), ("F0", slots - 1)]);
        ck.unique("b", format!("l={ell}"), &region, &want);

        let filler = seq(&[(f, slots)]);
        let region = strip_region(slots, 1, &filler, &[0], &[0], None);
        ck.unique("c", format!("filler row, {slots} slots"), &region, &names(&[("F0", slots)]));
        for extra in 1..=depth.saturating_sub(1).max(1) {
            let bands = 2 + extra;
            let region = strip_region(slots, bands, &above, &vec![0; bands], &vec![0; bands], Some(&filler));
            let want = names(&[("X00", 1), ("B0", ell), ("K0", 1), ("F0", (slots - 1) + slots * extra)]);
            ck.unique("c", format!("l={ell}, {extra} filler bands to the bottom string"), &region, &want);
        }
    }

    let has = |n: &str| ts.index(n).is_some();
    if ts.parity_pairs.len() < SMALL_TILES.len() {
        ck.checks.push(GadgetCheck {
            property: "d".into(),
            case: "parity variants".into(),
            pass: false,
            detail: format!("{} of {} small tiles have both parities", ts.parity_pairs.len(), SMALL_TILES.len()),
        });
    } else {
        let above = seq(&[(l, 1), (w, 1), (r, 1)]);
        for p in 0..2 {
            for q in 0..2 {
                let region = strip_region(3, 1, &above, &[p], &[q], None);
                ck.exact("d", format!("small row, parity in {p} out {q}"), &region, u64::from(p == q));
            }
        }
        let above = seq(&[(l, 1), (r, 1)]);
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let region = strip_region(2, 2, &above, &[a, b], &[c, d], None);
                        ck.exact("d", format!("crossover, in ({a},{b}) out ({c},{d})"), &region, u64::from((c, d) == (b, a)));
                    }
                }
            }
        }
    }
    if has("V0") && has("V1") {
        let west = vec![0; 6];
        for m in 0..8u16 {
            let east: Vec<Color> = (0..3).map(|i| m >> i & 1).collect();
            let uniform = m == 0 || m == 7;
            ck.exact("d", format!("variable, out {east:?}"), &column_region(3, &west, &east), u64::from(uniform));
        }
    }
    let clause_wires = ts
        .tiles
        .iter()
        .filter(|t| t.name.starts_with('C') || t.name.starts_with('D'))
        .map(|t| (t.shape.len() / 3) as u32)
        .max();
    if let Some(wires) = clause_wires {
        let at_least_one = ts.name == "2sat";
        for m in 0..(1u16 << wires) {
            let inputs: Vec<Color> = (0..wires).map(|i| m >> i & 1).collect();
            let ones = m.count_ones();
            let accept = if at_least_one { ones >= 1 } else { ones == 1 };
            ck.exact("d", format!("clause, in {inputs:?}"), &clause_region(&inputs), u64::from(accept));
        }
    }
    if has("Start0") {
        for (rr, ss) in [(1, 1), (2, 1), (1, 2)] {
            let west = build_2sat_variable_column(rr, ss).expect("counts are positive");
            let wires = rr + ss;
            for m in 0..(1u16 << wires) {
                let east: Vec<Color> = (0..wires).map(|i| m >> i & 1).collect();
                let consistent = east[..rr].iter().all(|&x| x == east[0]) && east[rr..].iter().all(|&x| x == 1 - east[0]);
                ck.exact("d", format!("variable column r={rr} s={ss}, out {east:?}"), &column_region(wires, &west, &east), u64::from(consistent));
            }
        }
    }
    GadgetValidationReport { tileset: ts.name.clone(), depth, checks: ck.checks }
}

#[cfg(test)]
mod validator_tests {
    use super::*;

    #[test]
    fn tprime_and_2sat_pass_depth_4() {
        for ts in [load_tileset_tprime().unwrap(), load_tileset_2sat().unwrap()] {
            let rep = validate_gadget_tileset(&ts, 4);
            let bad: Vec<_> = rep.failures().collect();
            assert!(bad.is_empty(), "{}: {bad:#?}", ts.name);
        }
    }
}

#[cfg(test)]
mod validator_negative_tests {
    use super::*;

    #[test]
    fn report_covers_all_properties() {
        let rep = validate_gadget_tileset(&load_tileset_tprime().unwrap(), 4);
        for p in ["a", "b", "c", "d"] {
            assert!(rep.checks.iter().any(|c| c.property == p), "{p}");
        }
        let first = rep.checks.iter().find(|c| c.case == "k=1 l=0").unwrap();
        assert!(first.detail.ends_with("L0 S0 R0"), "{}", first.detail);
        let b0 = rep.checks.iter().find(|c| c.property == "b" && c.case == "l=0").unwrap();
        assert!(b0.detail.contains("X00 K0"), "{}", b0.detail);
    }

    #[test]
    fn single_parity_tileset_fails_transport_only() {
        let rep = validate_gadget_tileset(&load_tileset_t().unwrap(), 3);
        assert!(!rep.passed());
        assert!(rep.failures().all(|c| c.property == "d"));
    }

    #[test]
    fn dropping_mode_flag_breaks_forcing() {
        // without the flag a straight tile can follow a crossover and vice versa
        let mut tiles = small_tiles(&[0]);
        tiles.retain(|t| t.name != "B0");
        tiles.push(small("B0", [2, 6], [0, 8], 0, 0, 0));
        tiles.push(crossover(0, 0));
        let ts = finish("broken", tiles);
        let rep = validate_gadget_tileset(&ts, 2);
        assert!(rep.failures().any(|c| c.property == "a" || c.property == "b"));
    }

    #[test]
    fn depth_below_two_is_reported() {
        let rep = validate_gadget_tileset(&load_tileset_tprime().unwrap(), 1);
        assert!(rep.failures().any(|c| c.property == "depth"));
    }
}
