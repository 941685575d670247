//! Count-preserving transformations between tiling formalisms.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{is_simply_connected, Cell, Edge, Region, Side};
use crate::rect_solver::RectTile;
use crate::wang::{BoundaryTileMap, Color, ColoredRegion, EdgeMap, GenWangTile, OrdWangTile, RelWangSystem, TileId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("invalid zig-zag parameters: {0}")]
    InvalidParams(String),
    #[error("transformed shape is not a valid region")]
    BadShape,
}

/// Ordinary tiles obtained by cutting generalized tiles into unit squares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdExpansion {
    pub tiles: Vec<OrdWangTile>,
    /// Total number of colors, fresh ones included.
    pub colors: usize,
    pub fresh_colors: usize,
    /// Source tile index and cell (in tile coordinates) of each ordinary tile.
    pub origin: Vec<(usize, Cell)>,
}

/// Cuts each tile into unit squares; every interior edge gets its own fresh color.
pub fn gen_to_ordinary_wang(tiles: &[GenWangTile]) -> OrdExpansion {
    let base = tiles.iter().filter_map(|t| t.max_color()).max().map_or(0, |m| m as usize + 1);
    gen_to_ordinary_wang_from(tiles, base)
}

/// As [`gen_to_ordinary_wang`] with fresh colors starting at `base`.
pub fn gen_to_ordinary_wang_from(tiles: &[GenWangTile], base: usize) -> OrdExpansion {
    let mut next = base;
    let mut out = Vec::new();
    let mut origin = Vec::new();
    for (ti, t) in tiles.iter().enumerate() {
        let mut interior: HashMap<Edge, Color> = HashMap::new();
        for &c in t.shape.cells() {
            for side in [Side::East, Side::South] {
                if t.shape.contains(c.step(side)) {
                    interior.insert(Edge::new(c, side).canonical(), next as Color);
                    next += 1;
                }
            }
        }
        for &c in t.shape.cells() {
            let col = |side: Side| {
                let e = Edge::new(c, side);
                t.colors.get(e).unwrap_or_else(|| interior[&e.canonical()])
            };
            out.push(OrdWangTile::new(col(Side::North), col(Side::East), col(Side::South), col(Side::West)));
            origin.push((ti, c));
        }
    }
    OrdExpansion { tiles: out, colors: next, fresh_colors: next - base, origin }
}

/// Recovers generalized tile placements `(tile, anchor)` from a tiling by the
/// expanded ordinary tiles, sorted by anchor row then column.
pub fn decode_ordinary_tiling(exp: &OrdExpansion, region: &Region, assignment: &[TileId]) -> Vec<(usize, Cell)> {
    let mut out: Vec<(usize, Cell)> = region
        .cells()
        .iter()
        .zip(assignment)
        .filter_map(|(&c, &t)| exp.origin.get(t as usize).map(|&(ti, oc)| (ti, c.translate(-oc.x, -oc.y))))
        .collect();
    out.sort_by_key(|&(t, a)| (a.y, a.x, t));
    out.dedup();
    out
}

/// Converts a generalized instance, keeping fresh colors clear of region colors.
pub fn gen_instance_to_ordinary(tiles: &[GenWangTile], region: &ColoredRegion) -> OrdExpansion {
    let tile_max = tiles.iter().filter_map(|t| t.max_color()).max();
    let reg_max = region.boundary.entries().iter().map(|p| p.1).max();
    let base = tile_max.max(reg_max).map_or(0, |m| m as usize + 1);
    gen_to_ordinary_wang_from(tiles, base)
}

/// Doubles the system with checkerboard subscripts: tile `t` on a cell of parity
/// `p` becomes `2t + p`, and only opposite subscripts may touch.
pub fn make_irreflexive(sys: &RelWangSystem, region: &Region, boundary: &BoundaryTileMap) -> (RelWangSystem, BoundaryTileMap) {
    let lift = |pairs: &std::collections::BTreeSet<(TileId, TileId)>| {
        pairs
            .iter()
            .flat_map(|&(a, b)| [(2 * a, 2 * b + 1), (2 * a + 1, 2 * b)])
            .collect::<Vec<_>>()
    };
    let out = RelWangSystem::new(2 * sys.n, lift(&sys.h), lift(&sys.v)).expect("indices in range");
    // a boundary tile sits on the neighboring cell, whose parity is the opposite one
    let b = EdgeMap::from_entries(
        boundary
            .entries()
            .iter()
            .filter(|(e, _)| region.contains(e.cell))
            .map(|&(e, t)| (e, 2 * t + (1 - parity(e.cell))))
            .collect(),
    );
    (out, b)
}

/// Checkerboard parity of a cell.
pub fn parity(c: Cell) -> TileId {
    (c.x + c.y).rem_euclid(2) as TileId
}

/// Lifts a tiling of the original system to the doubled one.
pub fn lift_irreflexive_tiling(region: &Region, assignment: &[TileId]) -> Vec<TileId> {
    region.cells().iter().zip(assignment).map(|(&c, &t)| 2 * t + parity(c)).collect()
}

/// A simply connected polyomino tile.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyominoTile {
    pub shape: Region,
}

/// Geometry of the edge encoding: each unit edge becomes `scale` lattice units
/// long and carries one unit notch at `offset(color)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagParams {
    pub scale: i64,
    pub notch_depth: i64,
    pub color_offsets: Vec<i64>,
}

impl ZigzagParams {
    /// Scale `2χ + 4` with notches at `2 + 2c`.
    pub fn for_colors(chi: usize) -> Self {
        let chi = chi.max(1);
        ZigzagParams {
            scale: 2 * chi as i64 + 4,
            notch_depth: 1,
            color_offsets: (0..chi as i64).map(|c| 2 + 2 * c).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.notch_depth != 1 {
            return Err(ReductionError::InvalidParams("notch depth must be 1".into()));
        }
        let mut seen = self.color_offsets.clone();
        seen.sort_unstable();
        for w in seen.windows(2) {
            if w[1] - w[0] < 2 {
                return Err(ReductionError::InvalidParams("notches collide".into()));
            }
        }
        if seen.iter().any(|&o| o < 2 || o > self.scale - 3) {
            return Err(ReductionError::InvalidParams("notch touches a corner".into()));
        }
        Ok(())
    }

    fn offset(&self, c: Color) -> Result<i64, ReductionError> {
        self.color_offsets
            .get(c as usize)
            .copied()
            .ok_or_else(|| ReductionError::InvalidParams(format!("no offset for color {c}")))
    }

    /// The notch cell of an edge: a tab outside the cell for North/East, a slot
    /// inside it for South/West.
    fn notch(&self, e: Edge, color: Color) -> Result<Cell, ReductionError> {
        let z = self.scale;
        let (x0, y0) = (e.cell.x * z, e.cell.y * z);
        let o = self.offset(color)?;
        Ok(match e.side {
            Side::North => Cell::new(x0 + o, y0 - 1),
            Side::South => Cell::new(x0 + o, y0 + z - 1),
            Side::East => Cell::new(x0 + z, y0 + o),
            Side::West => Cell::new(x0, y0 + o),
        })
    }
}

/// Tabs on North/East edges, slots on South/West. Applied to a region, this is
/// exactly the shape a tile with the boundary's colors would need.
fn scaled_shape(cells: &[Cell], colors: &EdgeMap<Color>, p: &ZigzagParams) -> Result<Region, ReductionError> {
    p.validate()?;
    let z = p.scale;
    let mut set: std::collections::BTreeSet<(i64, i64)> = std::collections::BTreeSet::new();
    for c in cells {
        for dy in 0..z {
            for dx in 0..z {
                set.insert((c.x * z + dx, c.y * z + dy));
            }
        }
    }
    for &(e, col) in colors.entries() {
        let n = p.notch(e, col)?;
        if matches!(e.side, Side::North | Side::East) {
            set.insert((n.x, n.y));
        } else {
            set.remove(&(n.x, n.y));
        }
    }
    let region = Region::new(set.into_iter().map(|(x, y)| Cell::new(x, y)).collect()).map_err(|_| ReductionError::BadShape)?;
    if !is_simply_connected(&region) {
        return Err(ReductionError::BadShape);
    }
    Ok(region)
}

/// Replaces every colored edge by a notched edge; the tile count is preserved.
pub fn gen_to_polyomino(tiles: &[GenWangTile], p: &ZigzagParams) -> Result<Vec<PolyominoTile>, ReductionError> {
    tiles
        .iter()
        .map(|t| scaled_shape(t.shape.cells(), &t.colors, p).map(|shape| PolyominoTile { shape }))
        .collect()
}

/// The region whose polyomino tilings correspond to Wang tilings of `region`.
pub fn colored_region_to_polyomino_region(region: &ColoredRegion, p: &ZigzagParams) -> Result<Region, ReductionError> {
    scaled_shape(region.region.cells(), &region.boundary, p)
}

pub fn rect_to_polyomino(tiles: &[RectTile]) -> Vec<PolyominoTile> {
    tiles
        .iter()
        .map(|t| PolyominoTile { shape: Region::rectangle(0, 0, t.width as i64, t.height as i64) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::{uniform_boundary, OrdWangTile};

    #[test]
    fn unit_tile_passes_through() {
        let t = GenWangTile::unit("a", OrdWangTile::new(0, 1, 0, 1));
        let e = gen_to_ordinary_wang(&[t]);
        assert_eq!(e.tiles, vec![OrdWangTile::new(0, 1, 0, 1)]);
        assert_eq!(e.fresh_colors, 0);
    }

    #[test]
    fn domino_gets_one_fresh_color() {
        let t = GenWangTile::from_fn("d", &[(0, 0), (1, 0)], |_| 0).unwrap();
        let e = gen_to_ordinary_wang(&[t]);
        assert_eq!(e.tiles.len(), 2);
        assert_eq!(e.fresh_colors, 1);
        assert_eq!(e.tiles[0].east, 1);
        assert_eq!(e.tiles[1].west, 1);
    }

    #[test]
    fn doubling_single_tile() {
        let sys = RelWangSystem::new(1, [(0, 0)], [(0, 0)]).unwrap();
        let r = Region::rectangle(0, 0, 1, 1);
        let (d, _) = make_irreflexive(&sys, &r, &uniform_boundary(&r, 0));
        assert_eq!(d.n, 2);
        assert!(d.is_irreflexive());
        assert_eq!(d.h.iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(d.v, d.h);
    }

    #[test]
    fn zigzag_params_checked() {
        assert!(ZigzagParams::for_colors(3).validate().is_ok());
        let bad = ZigzagParams { scale: 6, notch_depth: 1, color_offsets: vec![2, 3] };
        assert!(bad.validate().is_err());
        let corner = ZigzagParams { scale: 6, notch_depth: 1, color_offsets: vec![1] };
        assert!(corner.validate().is_err());
    }

    #[test]
    fn rect_embedding() {
        let p = rect_to_polyomino(&[RectTile::new(34, 11, "f")]);
        assert_eq!(p[0].shape.len(), 374);
        assert_eq!(p[0].shape.bbox(), (0, 0, 10, 33));
    }
}
