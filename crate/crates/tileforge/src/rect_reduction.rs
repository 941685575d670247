//! Relational Wang instances to rectangle tilings.
//!
//! Each Wang cell becomes one copy of the `w` tile in a rigid base tiling of
//! the region `Γ₀(r, c)`. The tile `t_i` (index `i - 1`) is represented by
//! shifting its `w` right and down by `β^i`; the `s`, `h` and `v` tiles around
//! it stretch to absorb the shift, and only the stretches allowed by the Wang
//! relations exist in the tileset. Boundary tiles shift the protrusions and
//! cavities of the region in the same way.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Cell, GeometryError, Outline, Region, Side};
use crate::rect_solver::{RectTile, RectTiling};
use crate::wang::{BoundaryTileMap, RelWangSystem, TileId, WangTiling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RectReductionError {
    #[error("invalid expansion parameters: {0}")]
    InvalidParams(String),
    #[error("the Wang relations are not irreflexive")]
    NotIrreflexive,
    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),
    #[error("cannot decode rectangle tiling: {0}")]
    DecodeFailure(String),
    #[error("cannot encode Wang tiling: {0}")]
    EncodeFailure(String),
    #[error("{0} does not fit in machine integers")]
    TooLarge(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

type Result<T> = std::result::Result<T, RectReductionError>;

/// Base tiles of the rigid tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseTile {
    F,
    W,
    S,
    H,
    V,
}

impl BaseTile {
    pub const ALL: [BaseTile; 5] = [BaseTile::F, BaseTile::W, BaseTile::S, BaseTile::H, BaseTile::V];

    /// `(height, width)` in units of the base parameters.
    pub fn dims(self, a: u64, b: u64) -> (u64, u64) {
        match self {
            BaseTile::F => (3 * a + 4 * b, a + b),
            BaseTile::W => (3 * a + b, a + 4 * b),
            BaseTile::S => (a, a),
            BaseTile::H => (a + b, 3 * a + b),
            BaseTile::V => (a + 4 * b, 3 * a + 4 * b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BaseTile::F => "f",
            BaseTile::W => "w",
            BaseTile::S => "s",
            BaseTile::H => "h",
            BaseTile::V => "v",
        }
    }
}

/// The five base rectangles `f, w, s, h, v`.
pub fn build_r0(a: u64, b: u64) -> Result<Vec<RectTile>> {
    check_ab(a, b)?;
    Ok(BaseTile::ALL
        .iter()
        .map(|t| {
            let (h, w) = t.dims(a, b);
            RectTile::new(h, w, t.name())
        })
        .collect())
}

fn check_ab(a: u64, b: u64) -> Result<()> {
    if b == 0 || a <= 4 * b {
        return Err(RectReductionError::InvalidParams(format!("need a > 4b >= 4, got a={a}, b={b}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionParams {
    pub a: u64,
    pub b: u64,
    /// Perturbation radix β.
    pub base: u64,
    #[serde(with = "crate::bignum")]
    pub eps: BigUint,
    #[serde(with = "crate::bignum")]
    pub m: BigUint,
    /// Number of Wang tiles.
    pub n: usize,
}

/// Named parameter choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// `a = 10, b = 1, β = 5, ε = 5^n, M = 100ε`.
    Full,
    /// The smallest `a` and `M` that pass [`validate_params`] with `b = 1, β = 5, ε = 5^n`.
    Desk,
}

impl ExpansionParams {
    pub fn full(n: usize) -> Self {
        let eps = BigUint::from(5u32).pow(n as u32);
        ExpansionParams { a: 10, b: 1, base: 5, m: &eps * 100u32, eps, n }
    }

    pub fn desk(n: usize) -> Self {
        let eps = BigUint::from(5u32).pow(n as u32);
        let (a, b) = (5, 1);
        // every slack is a multiple of M·min(b, a - 4b) and must exceed 3ε
        let unit = b.min(a - 4 * b);
        let m = (&eps * 3u32) / unit + 1u32;
        ExpansionParams { a, b, base: 5, eps, m, n }
    }

    pub fn for_profile(profile: Profile, n: usize) -> Self {
        match profile {
            Profile::Full => Self::full(n),
            Profile::Desk => Self::desk(n),
        }
    }

    /// Shift `β^i` representing the tile with 1-based index `i`.
    pub fn shift(&self, i: usize) -> BigUint {
        BigUint::from(self.base).pow(i as u32)
    }

    /// Period of the base tiling, `4a + 5b`.
    pub fn period(&self) -> u64 {
        4 * self.a + 5 * self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamReport {
    pub checks: Vec<ParamCheck>,
}

impl ParamReport {
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// A solution of `β^i − β^j = β^k + β^l` with exponents in `0..=max_exp`.
pub fn radix_sum_counterexample(base: u64, max_exp: u32) -> Option<[u32; 4]> {
    let pw: Vec<BigInt> = (0..=max_exp).map(|e| BigInt::from(base).pow(e)).collect();
    let r = 0..=max_exp as usize;
    for i in r.clone() {
        for j in r.clone() {
            let lhs = &pw[i] - &pw[j];
            for k in r.clone() {
                for l in k..=max_exp as usize {
                    if lhs == &pw[k] + &pw[l] {
                        return Some([i as u32, j as u32, k as u32, l as u32]);
                    }
                }
            }
        }
    }
    None
}

/// A solution of `β^i − β^j = β^k − β^l` with `i ≠ j` and `i ≠ k`.
pub fn radix_difference_counterexample(base: u64, max_exp: u32) -> Option<[u32; 4]> {
    let pw: Vec<BigInt> = (0..=max_exp).map(|e| BigInt::from(base).pow(e)).collect();
    let r = 0..=max_exp as usize;
    for i in r.clone() {
        for j in r.clone() {
            if i == j {
                continue;
            }
            let lhs = &pw[i] - &pw[j];
            for k in r.clone() {
                if k == i {
                    continue;
                }
                for l in r.clone() {
                    if lhs == &pw[k] - &pw[l] {
                        return Some([i as u32, j as u32, k as u32, l as u32]);
                    }
                }
            }
        }
    }
    None
}

/// Checks the parameter constraints of the forcing argument.
///
/// Every inequality between base dimensions has scaled slack a multiple of
/// `M·b` or `M·(a − kb)`; each must exceed `2ε` of tile stretch plus `ε` of
/// shift. The radix identities are checked exhaustively for exponents `0..=n`.
pub fn validate_params(p: &ExpansionParams) -> ParamReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| checks.push(ParamCheck { name: name.into(), pass, detail });
    push("a > 4b >= 4", p.b >= 1 && p.a > 4 * p.b, format!("a={}, b={}", p.a, p.b));
    push("radix >= 4", p.base >= 4, format!("β={}", p.base));
    let min_eps = BigUint::from(p.base).pow(p.n as u32);
    push("eps >= radix^n", p.eps >= min_eps, format!("ε={}, β^n={}", p.eps, min_eps));
    let need = &p.eps * 3u32;
    if p.b >= 1 && p.a > 4 * p.b {
        for (name, units) in [("slack b", p.b), ("slack a-b", p.a - p.b), ("slack a-3b", p.a - 3 * p.b), ("slack a-4b", p.a - 4 * p.b)] {
            let slack = &p.m * units;
            push(name, slack > need, format!("M·{units} = {slack} vs 3ε = {need}"));
        }
    }
    let e = p.n as u32;
    let sum = radix_sum_counterexample(p.base, e);
    push("radix sums", sum.is_none(), format!("exponents 0..={e}, counterexample {sum:?}"));
    let diff = radix_difference_counterexample(p.base, e);
    push("radix differences", diff.is_none(), format!("exponents 0..={e}, counterexample {diff:?}"));
    ParamReport { checks }
}

/// How a tile differs from its base tile. Indices are 1-based Wang tile indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Perturbation {
    None,
    /// `s(±β^i, ±β^i)`; the flags mark negative height and width changes.
    S { i: usize, neg_h: bool, neg_w: bool },
    /// `h(0, β^j − β^i)` for `H(t_i, t_j)`.
    H { i: usize, j: usize },
    /// `v(β^j − β^i, 0)` for `V(t_i, t_j)`.
    V { i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PerturbedTile {
    pub base: BaseTile,
    pub perturbation: Perturbation,
}

impl PerturbedTile {
    /// `(height, width)` change.
    pub fn delta(&self, p: &ExpansionParams) -> (BigInt, BigInt) {
        let sh = |i: usize| BigInt::from(p.shift(i));
        let sign = |neg: bool, v: BigInt| if neg { -v } else { v };
        match self.perturbation {
            Perturbation::None => (BigInt::zero(), BigInt::zero()),
            Perturbation::S { i, neg_h, neg_w } => (sign(neg_h, sh(i)), sign(neg_w, sh(i))),
            Perturbation::H { i, j } => (BigInt::zero(), sh(j) - sh(i)),
            Perturbation::V { i, j } => (sh(j) - sh(i), BigInt::zero()),
        }
    }

    /// `(height, width)` after scaling and perturbation.
    pub fn dims(&self, p: &ExpansionParams) -> (BigInt, BigInt) {
        let (h, w) = self.base.dims(p.a, p.b);
        let m = BigInt::from(p.m.clone());
        let (dh, dw) = self.delta(p);
        (&m * h + dh, &m * w + dw)
    }

    pub fn label(&self) -> String {
        let b = self.base.name();
        match self.perturbation {
            Perturbation::None => b.to_string(),
            Perturbation::S { i, neg_h, neg_w } => {
                format!("{b}({}{i},{}{i})", if neg_h { '-' } else { '+' }, if neg_w { '-' } else { '+' })
            }
            Perturbation::H { i, j } | Perturbation::V { i, j } => format!("{b}({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbedTileset {
    pub params: ExpansionParams,
    pub tiles: Vec<PerturbedTile>,
}

impl PerturbedTileset {
    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Concrete rectangles, in tileset order.
    pub fn to_rect_tiles(&self) -> Result<Vec<RectTile>> {
        self.tiles
            .iter()
            .map(|t| {
                let (h, w) = t.dims(&self.params);
                let h = h.to_u64().filter(|&v| v > 0).ok_or_else(|| RectReductionError::TooLarge(format!("height of {}", t.label())))?;
                let w = w.to_u64().filter(|&v| v > 0).ok_or_else(|| RectReductionError::TooLarge(format!("width of {}", t.label())))?;
                Ok(RectTile::new(h, w, t.label()))
            })
            .collect()
    }

    fn index(&self) -> HashMap<PerturbedTile, usize> {
        self.tiles.iter().enumerate().map(|(i, &t)| (t, i)).collect()
    }
}

/// `f`, `w`, four `s` per tile, then one `h` per pair in `H` and one `v` per pair in `V`.
pub fn build_perturbed_tileset(sys: &RelWangSystem, p: &ExpansionParams) -> Result<PerturbedTileset> {
    if !sys.is_irreflexive() {
        return Err(RectReductionError::NotIrreflexive);
    }
    if p.n != sys.n {
        return Err(RectReductionError::InvalidParams(format!("parameters are for {} tiles, system has {}", p.n, sys.n)));
    }
    check_ab(p.a, p.b)?;
    let mut tiles = vec![
        PerturbedTile { base: BaseTile::F, perturbation: Perturbation::None },
        PerturbedTile { base: BaseTile::W, perturbation: Perturbation::None },
    ];
    for i in 1..=sys.n {
        for (neg_h, neg_w) in [(false, false), (false, true), (true, false), (true, true)] {
            tiles.push(PerturbedTile { base: BaseTile::S, perturbation: Perturbation::S { i, neg_h, neg_w } });
        }
    }
    for &(x, y) in &sys.h {
        tiles.push(PerturbedTile { base: BaseTile::H, perturbation: Perturbation::H { i: x as usize + 1, j: y as usize + 1 } });
    }
    for &(x, y) in &sys.v {
        tiles.push(PerturbedTile { base: BaseTile::V, perturbation: Perturbation::V { i: x as usize + 1, j: y as usize + 1 } });
    }
    Ok(PerturbedTileset { params: p.clone(), tiles })
}

/// Tile count `2 + 4n + |H| + |V|` and the bound `2(n + 1)²`.
pub fn tileset_size(sys: &RelWangSystem) -> (usize, usize) {
    (2 + 4 * sys.n + sys.h.len() + sys.v.len(), 2 * (sys.n + 1) * (sys.n + 1))
}

/// The irreflexive system of maximal size arising from `k` ordinary tiles with
/// `c` boundary colors: `2(k + 4c − 1)` tiles, every off-diagonal pair related.
pub fn worst_case_system(k: usize, c: usize) -> RelWangSystem {
    let n = 2 * (k + 4 * c - 1);
    let pairs: Vec<(TileId, TileId)> = (0..n as TileId).flat_map(|i| (0..n as TileId).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    RelWangSystem::new(n, pairs.clone(), pairs).expect("indices in range")
}

/// Shift of a `w` tile, or of a boundary tile, in lattice units.
type Shifts = HashMap<(i64, i64), i128>;

/// The scaled layout of `Γ₀(r, c)` with shifts applied.
struct Layout {
    r: i64,
    c: i64,
    m: i128,
    a: i128,
    b: i128,
    p: i128,
}

impl Layout {
    fn new(r: i64, c: i64, params: &ExpansionParams) -> Result<Self> {
        let m = params.m.to_i64().ok_or_else(|| RectReductionError::TooLarge("scale factor M".into()))? as i128;
        Ok(Layout { r, c, m, a: params.a as i128, b: params.b as i128, p: params.period() as i128 })
    }

    /// Outline with protrusion and cavity shifts `west[m], east[m], north[k], south[k]`.
    fn outline(&self, west: &[i128], east: &[i128], north: &[i128], south: &[i128]) -> Result<Outline> {
        let (m, a, b, p) = (self.m, self.a, self.b, self.p);
        let (r, c) = (self.r as i128, self.c as i128);
        let mut v: Vec<(i128, i128)> = vec![(0, 0)];
        for k in 0..c {
            let top = m * a + north[k as usize];
            v.extend([(m * (p * k + a + b), 0), (m * (p * k + a + b), top), (m * p * (k + 1), top), (m * p * (k + 1), 0)]);
        }
        let xr = m * (p * c + a + b);
        v.push((xr, 0));
        for j in 0..r {
            let xe = m * (p * c + 2 * a + b) + east[j as usize];
            let (y0, y1) = (m * (p * j + 3 * a + 4 * b), m * p * (j + 1));
            v.extend([(xr, y0), (xe, y0), (xe, y1), (xr, y1)]);
        }
        let yb = m * (p * r + 3 * a + 4 * b);
        v.push((xr, yb));
        for k in (0..c).rev() {
            let bot = m * (p * r + 2 * a + 4 * b) + south[k as usize];
            v.extend([(m * p * (k + 1), yb), (m * p * (k + 1), bot), (m * (p * k + a + b), bot), (m * (p * k + a + b), yb)]);
        }
        v.push((0, yb));
        for j in (0..r).rev() {
            let xw = -m * a + west[j as usize];
            let (y0, y1) = (m * (p * j + 3 * a + 4 * b), m * p * (j + 1));
            v.extend([(0, y1), (xw, y1), (xw, y0), (0, y0)]);
        }
        let v = v.into_iter().map(|(x, y)| Ok((small(x)?, small(y)?))).collect::<Result<Vec<_>>>()?;
        let mut dedup: Vec<(i64, i64)> = Vec::with_capacity(v.len());
        for q in v {
            if dedup.last() != Some(&q) {
                dedup.push(q);
            }
        }
        if dedup.len() > 1 && dedup.first() == dedup.last() {
            dedup.pop();
        }
        Ok(Outline::new(dedup)?)
    }

    /// Reference anchor of the unshifted `w` in column `k`, row `j`.
    fn w_anchor(&self, k: i128, j: i128) -> (i128, i128) {
        let (m, a, b, p) = (self.m, self.a, self.b, self.p);
        (m * (p * k + 2 * a + b), m * (p * j + 2 * a + 4 * b))
    }
}

fn small(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| RectReductionError::TooLarge(format!("coordinate {x}")))
}

/// A boundary tile applied to a protrusion (west/east) or cavity (north/south).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftEntry {
    pub side: Side,
    /// Row for west/east, column for north/south.
    pub index: usize,
    pub tile: TileId,
    #[serde(with = "crate::bignum")]
    pub shift: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedRegion {
    pub outline: Outline,
    pub rows: usize,
    pub cols: usize,
    /// Top-left cell of the Wang region.
    pub origin: Cell,
    pub log: Vec<ShiftEntry>,
}

/// Scales `Γ₀(r, c)` for a rectangular Wang region and shifts each protrusion
/// and cavity by `β^i` for its boundary tile `t_i`.
pub fn build_expanded_region(region: &Region, boundary: &BoundaryTileMap, p: &ExpansionParams) -> Result<ExpandedRegion> {
    if region.is_empty() || !region.is_rectangle() {
        return Err(RectReductionError::UnsupportedRegion("only rectangular regions are supported".into()));
    }
    let (x0, y0, x1, y1) = region.bbox();
    let (cols, rows) = ((x1 - x0 + 1) as usize, (y1 - y0 + 1) as usize);
    let mut log = Vec::new();
    for e in region.exterior_edges() {
        let t = boundary
            .get(e)
            .ok_or_else(|| RectReductionError::UnsupportedRegion(format!("no boundary tile at {:?} {:?}", e.cell, e.side)))?;
        if t as usize >= p.n {
            return Err(RectReductionError::InvalidParams(format!("boundary tile {t} out of range for {} tiles", p.n)));
        }
        let index = match e.side {
            Side::West | Side::East => (e.cell.y - y0) as usize,
            Side::North | Side::South => (e.cell.x - x0) as usize,
        };
        log.push(ShiftEntry { side: e.side, index, tile: t, shift: p.shift(t as usize + 1) });
    }
    let lay = Layout::new(rows as i64, cols as i64, p)?;
    let pick = |side: Side, len: usize| -> Result<Vec<i128>> {
        let mut v = vec![0i128; len];
        for s in log.iter().filter(|s| s.side == side) {
            v[s.index] = s.shift.to_i128().ok_or_else(|| RectReductionError::TooLarge("shift".into()))?;
        }
        Ok(v)
    };
    let outline = lay.outline(&pick(Side::West, rows)?, &pick(Side::East, rows)?, &pick(Side::North, cols)?, &pick(Side::South, cols)?)?;
    Ok(ExpandedRegion { outline, rows, cols, origin: Cell::new(x0, y0), log })
}

/// `Γ₀(r, c)` at scale 1 with no shifts, as an outline.
pub fn build_gamma0_outline(r: usize, c: usize, a: u64, b: u64) -> Result<Outline> {
    check_ab(a, b)?;
    if r == 0 || c == 0 {
        return Err(RectReductionError::InvalidParams(format!("need r, c >= 1, got {r}x{c}")));
    }
    let p = ExpansionParams { a, b, base: 5, eps: BigUint::zero(), m: BigUint::one(), n: 0 };
    let lay = Layout::new(r as i64, c as i64, &p)?;
    lay.outline(&vec![0; r], &vec![0; r], &vec![0; c], &vec![0; c])
}

/// `Γ₀(r, c)` as a set of unit cells.
pub fn build_gamma0(r: usize, c: usize, a: u64, b: u64) -> Result<Region> {
    let o = build_gamma0_outline(r, c, a, b)?;
    Ok(crate::geometry::outline_to_region(&o, 10_000_000)?)
}

fn shift_map(er: &ExpandedRegion, cells: impl Iterator<Item = ((i64, i64), i128)>) -> Shifts {
    let mut d: Shifts = cells.collect();
    let (r, c) = (er.rows as i64, er.cols as i64);
    for s in &er.log {
        let i = s.index as i64;
        let key = match s.side {
            Side::West => (-1, i),
            Side::East => (c, i),
            Side::North => (i, -1),
            Side::South => (i, r),
        };
        d.insert(key, s.shift.to_i128().unwrap_or(0));
    }
    d
}

/// Builds the rectangle tiling representing a Wang tiling: the scaled base
/// tiling with each `w` shifted by `β^i` for its tile `t_i`.
pub fn encode_wang_tiling(tiling: &WangTiling, ts: &PerturbedTileset, er: &ExpandedRegion) -> Result<RectTiling> {
    let p = &ts.params;
    let lay = Layout::new(er.rows as i64, er.cols as i64, p)?;
    let wang = Region::rectangle(er.origin.x, er.origin.y, er.cols as i64, er.rows as i64);
    if tiling.assignment.len() != wang.len() {
        return Err(RectReductionError::EncodeFailure("assignment length does not match the region".into()));
    }
    let tile_of: HashMap<(i64, i64), usize> = wang
        .cells()
        .iter()
        .zip(&tiling.assignment)
        .map(|(c, &t)| ((c.x - er.origin.x, c.y - er.origin.y), t as usize + 1))
        .collect();
    let shift = |i: usize| p.shift(i).to_i128().ok_or_else(|| RectReductionError::TooLarge("shift".into()));
    let mut cells = Vec::new();
    for (&k, &i) in &tile_of {
        cells.push((k, shift(i)?));
    }
    let d = shift_map(er, cells.into_iter());
    let mut idx_of: HashMap<(i64, i64), usize> = tile_of.clone();
    for s in &er.log {
        let i = s.index as i64;
        let key = match s.side {
            Side::West => (-1, i),
            Side::East => (er.cols as i64, i),
            Side::North => (i, -1),
            Side::South => (i, er.rows as i64),
        };
        idx_of.insert(key, s.tile as usize + 1);
    }
    let index = ts.index();
    let find = |t: PerturbedTile| index.get(&t).copied().ok_or_else(|| RectReductionError::EncodeFailure(format!("tile {} is not in the tileset", t.label())));
    let (m, a, b, per) = (lay.m, lay.a, lay.b, lay.p);
    let (r, c) = (er.rows as i128, er.cols as i128);
    let at = |x: i128, y: i128| -> Result<Cell> { Ok(Cell::new(small(x)?, small(y)?)) };
    let mut out = Vec::new();
    let f = find(PerturbedTile { base: BaseTile::F, perturbation: Perturbation::None })?;
    let w = find(PerturbedTile { base: BaseTile::W, perturbation: Perturbation::None })?;
    for k in 0..=c {
        for j in 0..=r {
            out.push((f, at(m * per * k, m * per * j)?));
        }
    }
    let key = |k: i128, j: i128| (k as i64, j as i64);
    for k in 0..c {
        for j in 0..=r {
            let (up, down) = (key(k, j - 1), key(k, j));
            let t = PerturbedTile { base: BaseTile::V, perturbation: Perturbation::V { i: idx_of[&up], j: idx_of[&down] } };
            out.push((find(t)?, at(m * (per * k + a + b), m * (per * j + a) + d[&up])?));
        }
    }
    for k in -1..c {
        for j in 0..r {
            let (left, right) = (key(k, j), key(k + 1, j));
            let t = PerturbedTile { base: BaseTile::H, perturbation: Perturbation::H { i: idx_of[&left], j: idx_of[&right] } };
            out.push((find(t)?, at(m * (per * k + 3 * a + 5 * b) + d[&left], m * (per * j + 3 * a + 4 * b))?));
        }
    }
    for k in 0..c {
        for j in 0..r {
            let i = idx_of[&key(k, j)];
            let dd = d[&key(k, j)];
            let (wx, wy) = lay.w_anchor(k, j);
            out.push((w, at(wx + dd, wy + dd)?));
            let s = |neg_h, neg_w| find(PerturbedTile { base: BaseTile::S, perturbation: Perturbation::S { i, neg_h, neg_w } });
            let (xl, xr) = (m * (per * k + a + b), m * (per * k + 3 * a + 5 * b) + dd);
            let (yt, yb) = (m * (per * j + 2 * a + 4 * b) + dd, m * per * (j + 1));
            out.push((s(true, false)?, at(xl, yt)?));
            out.push((s(true, true)?, at(xr, yt)?));
            out.push((s(false, true)?, at(xr, yb)?));
            out.push((s(false, false)?, at(xl, yb)?));
        }
    }
    out.sort_by_key(|&(t, c)| (c.y, c.x, t));
    Ok(RectTiling { placements: out })
}

/// Reads each `w` tile's shift from its reference anchor and returns the
/// represented Wang tiling, in the cell order of the Wang region.
pub fn decode_rect_tiling(t: &RectTiling, ts: &PerturbedTileset, er: &ExpandedRegion) -> Result<WangTiling> {
    let p = &ts.params;
    let lay = Layout::new(er.rows as i64, er.cols as i64, p)?;
    let w = ts
        .tiles
        .iter()
        .position(|x| x.base == BaseTile::W)
        .ok_or_else(|| RectReductionError::DecodeFailure("tileset has no w tile".into()))?;
    let shifts: HashMap<i128, usize> = (1..=p.n)
        .map(|i| p.shift(i).to_i128().map(|s| (s, i)).ok_or_else(|| RectReductionError::TooLarge("shift".into())))
        .collect::<Result<_>>()?;
    let (x0, y0) = lay.w_anchor(0, 0);
    let step = lay.m * lay.p;
    let mut found: HashMap<(i128, i128), usize> = HashMap::new();
    for &(ti, a) in &t.placements {
        if ti != w {
            continue;
        }
        let (x, y) = (a.x as i128 - x0, a.y as i128 - y0);
        // shifts are below M, so the nearest lattice point from the left/top is the reference
        let (k, j) = (x.div_euclid(step), y.div_euclid(step));
        let (dx, dy) = (x - k * step, y - j * step);
        if dx != dy {
            return Err(RectReductionError::DecodeFailure(format!("w at {a:?} is shifted by ({dx}, {dy})")));
        }
        let i = *shifts.get(&dx).ok_or_else(|| RectReductionError::DecodeFailure(format!("w at {a:?} has shift {dx}, not a power of the radix")))?;
        if found.insert((k, j), i).is_some() {
            return Err(RectReductionError::DecodeFailure(format!("two w tiles in cell ({k}, {j})")));
        }
    }
    let wang = Region::rectangle(er.origin.x, er.origin.y, er.cols as i64, er.rows as i64);
    let assignment = wang
        .cells()
        .iter()
        .map(|c| {
            let key = ((c.x - er.origin.x) as i128, (c.y - er.origin.y) as i128);
            found
                .get(&key)
                .map(|&i| (i - 1) as TileId)
                .ok_or_else(|| RectReductionError::DecodeFailure(format!("no w tile for cell {c:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WangTiling { assignment })
}

/// Reduces a relational instance on a rectangle to a rectangle-tiling instance.
pub fn reduce_wang_to_rect(sys: &RelWangSystem, region: &Region, boundary: &BoundaryTileMap, p: &ExpansionParams) -> Result<(PerturbedTileset, ExpandedRegion)> {
    let ts = build_perturbed_tileset(sys, p)?;
    let er = build_expanded_region(region, boundary, p)?;
    Ok((ts, er))
}
