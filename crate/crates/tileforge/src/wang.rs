//! Wang tiles in three flavours: generalized (colored polyominoes), ordinary
//! (colored unit squares) and relational (explicit adjacency relations).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Cell, Edge, Region, Side};

pub type Color = u16;
pub type TileId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WangError {
    #[error("edge {0:?} is not on the boundary of the shape")]
    NotBoundary(Edge),
    #[error("boundary edge {0:?} has no color")]
    MissingColor(Edge),
    #[error("tile index {0} out of range")]
    BadTile(TileId),
    #[error("shape is not simply connected")]
    NotSimplyConnected,
}

/// Sorted `(edge, value)` list keyed by edges in `(inside cell, outward side)` form.
///
/// Serialized as a list of `[[x, y, side], value]` pairs; duplicate edges are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(transparent)]
pub struct EdgeMap<T> {
    entries: Vec<(Edge, T)>,
}

impl<'de, T: Deserialize<'de> + Copy> Deserialize<'de> for EdgeMap<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut entries: Vec<(Edge, T)> = Vec::deserialize(d)?;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(serde::de::Error::custom(format!("edge {:?} listed twice", w[0].0)));
        }
        Ok(EdgeMap { entries })
    }
}

impl<T: Copy> EdgeMap<T> {
    pub fn from_entries(mut entries: Vec<(Edge, T)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        EdgeMap { entries }
    }

    pub fn get(&self, e: Edge) -> Option<T> {
        self.entries
            .binary_search_by(|p| p.0.cmp(&e))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(Edge, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> EdgeMap<U> {
        EdgeMap {
            entries: self.entries.iter().map(|&(e, v)| (e, f(v))).collect(),
        }
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Self {
        EdgeMap {
            entries: self
                .entries
                .iter()
                .map(|&(e, v)| (Edge::new(e.cell.translate(dx, dy), e.side), v))
                .collect(),
        }
    }
}

/// A polyomino with a color on every boundary unit edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenWangTile {
    #[serde(default)]
    pub name: String,
    pub shape: Region,
    pub colors: EdgeMap<Color>,
}

impl GenWangTile {
    pub fn new(name: impl Into<String>, shape: Region, colors: EdgeMap<Color>) -> Result<Self, WangError> {
        if !crate::geometry::is_simply_connected(&shape) {
            return Err(WangError::NotSimplyConnected);
        }
        let ext = shape.exterior_edges();
        for e in &ext {
            if colors.get(*e).is_none() {
                return Err(WangError::MissingColor(*e));
            }
        }
        for (e, _) in colors.entries() {
            if !ext.contains(e) {
                return Err(WangError::NotBoundary(*e));
            }
        }
        Ok(GenWangTile { name: name.into(), shape, colors })
    }

    /// Builds a tile from a cell list and a color function over exterior edges.
    pub fn from_fn(name: &str, cells: &[(i64, i64)], f: impl Fn(Edge) -> Color) -> Result<Self, WangError> {
        let shape = Region::new(cells.iter().map(|&(x, y)| Cell::new(x, y)).collect())
            .map_err(|_| WangError::NotSimplyConnected)?;
        let colors = EdgeMap::from_entries(shape.exterior_edges().into_iter().map(|e| (e, f(e))).collect());
        GenWangTile::new(name, shape, colors)
    }

    pub fn area(&self) -> usize {
        self.shape.len()
    }

    pub fn unit(name: &str, o: OrdWangTile) -> Self {
        let shape = Region::rectangle(0, 0, 1, 1);
        let c = Cell::new(0, 0);
        let colors = EdgeMap::from_entries(vec![
            (Edge::new(c, Side::North), o.north),
            (Edge::new(c, Side::East), o.east),
            (Edge::new(c, Side::South), o.south),
            (Edge::new(c, Side::West), o.west),
        ]);
        GenWangTile { name: name.to_string(), shape, colors }
    }

    pub fn max_color(&self) -> Option<Color> {
        self.colors.entries().iter().map(|p| p.1).max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrdWangTile {
    pub north: Color,
    pub east: Color,
    pub south: Color,
    pub west: Color,
}

impl OrdWangTile {
    pub fn new(north: Color, east: Color, south: Color, west: Color) -> Self {
        OrdWangTile { north, east, south, west }
    }

    pub fn side(&self, s: Side) -> Color {
        match s {
            Side::North => self.north,
            Side::East => self.east,
            Side::South => self.south,
            Side::West => self.west,
        }
    }
}

/// A region with a color on every exterior edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredRegion {
    pub region: Region,
    pub boundary: EdgeMap<Color>,
}

impl ColoredRegion {
    pub fn new(region: Region, boundary: EdgeMap<Color>) -> Result<Self, WangError> {
        for e in region.exterior_edges() {
            if boundary.get(e).is_none() {
                return Err(WangError::MissingColor(e));
            }
        }
        Ok(ColoredRegion { region, boundary })
    }

    /// Every exterior edge gets `color`.
    pub fn uniform(region: Region, color: Color) -> Self {
        let boundary = EdgeMap::from_entries(region.exterior_edges().into_iter().map(|e| (e, color)).collect());
        ColoredRegion { region, boundary }
    }

    pub fn color(&self, e: Edge) -> Option<Color> {
        self.boundary.get(e)
    }
}

/// Tiles `0..n` with "may sit to the right of" (`h`) and "may sit below" (`v`) relations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelWangSystem {
    pub n: usize,
    pub h: BTreeSet<(TileId, TileId)>,
    pub v: BTreeSet<(TileId, TileId)>,
}

impl RelWangSystem {
    pub fn new(n: usize, h: impl IntoIterator<Item = (TileId, TileId)>, v: impl IntoIterator<Item = (TileId, TileId)>) -> Result<Self, WangError> {
        let h: BTreeSet<_> = h.into_iter().collect();
        let v: BTreeSet<_> = v.into_iter().collect();
        for &(a, b) in h.iter().chain(v.iter()) {
            if a as usize >= n {
                return Err(WangError::BadTile(a));
            }
            if b as usize >= n {
                return Err(WangError::BadTile(b));
            }
        }
        Ok(RelWangSystem { n, h, v })
    }

    /// All pairs in both relations.
    pub fn complete(n: usize) -> Self {
        let all: Vec<(TileId, TileId)> = (0..n as TileId)
            .flat_map(|a| (0..n as TileId).map(move |b| (a, b)))
            .collect();
        RelWangSystem::new(n, all.clone(), all).expect("indices in range")
    }

    pub fn is_irreflexive(&self) -> bool {
        self.h.iter().chain(self.v.iter()).all(|&(a, b)| a != b)
    }

    pub fn h_ok(&self, left: TileId, right: TileId) -> bool {
        self.h.contains(&(left, right))
    }

    pub fn v_ok(&self, up: TileId, down: TileId) -> bool {
        self.v.contains(&(up, down))
    }

    /// Relabels tiles by `perm[i]`.
    pub fn permute(&self, perm: &[TileId]) -> RelWangSystem {
        let f = |&(a, b): &(TileId, TileId)| (perm[a as usize], perm[b as usize]);
        RelWangSystem {
            n: self.n,
            h: self.h.iter().map(f).collect(),
            v: self.v.iter().map(f).collect(),
        }
    }
}

/// A boundary tile for every exterior edge of a region.
pub type BoundaryTileMap = EdgeMap<TileId>;

/// One tile per cell, aligned with `Region::cells()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WangTiling {
    pub assignment: Vec<TileId>,
}

/// Boundary map giving every exterior edge of `region` the same tile.
pub fn uniform_boundary(region: &Region, tile: TileId) -> BoundaryTileMap {
    EdgeMap::from_entries(region.exterior_edges().into_iter().map(|e| (e, tile)).collect())
}

/// First violation found by [`check_colored_tiling`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoredViolation {
    BadTile(usize),
    Outside(Cell),
    Overlap(Cell),
    Uncovered(Cell),
    Mismatch(Edge),
}

/// Checks that translated tiles partition the region and all incident edges agree,
/// including against the region boundary.
pub fn check_colored_tiling(
    tiles: &[GenWangTile],
    region: &ColoredRegion,
    placements: &[(usize, (i64, i64))],
) -> Result<(), ColoredViolation> {
    let mut owner: HashMap<Cell, usize> = HashMap::with_capacity(region.region.len());
    for (pi, &(t, (dx, dy))) in placements.iter().enumerate() {
        let tile = tiles.get(t).ok_or(ColoredViolation::BadTile(t))?;
        for c in tile.shape.cells() {
            let c = c.translate(dx, dy);
            if !region.region.contains(c) {
                return Err(ColoredViolation::Outside(c));
            }
            if owner.insert(c, pi).is_some() {
                return Err(ColoredViolation::Overlap(c));
            }
        }
    }
    for &c in region.region.cells() {
        if !owner.contains_key(&c) {
            return Err(ColoredViolation::Uncovered(c));
        }
    }
    for (pi, &(t, (dx, dy))) in placements.iter().enumerate() {
        for &(e, col) in tiles[t].colors.entries() {
            let ge = Edge::new(e.cell.translate(dx, dy), e.side);
            let other = ge.cell.step(ge.side);
            let expect = match owner.get(&other) {
                Some(&pj) => {
                    debug_assert_ne!(pi, pj);
                    let (t2, (dx2, dy2)) = placements[pj];
                    let local = Edge::new(other.translate(-dx2, -dy2), ge.side.opposite());
                    tiles[t2].colors.get(local)
                }
                None => region.color(ge),
            };
            if expect != Some(col) {
                return Err(ColoredViolation::Mismatch(ge));
            }
        }
    }
    Ok(())
}

pub fn validate_colored_tiling(tiles: &[GenWangTile], region: &ColoredRegion, placements: &[(usize, (i64, i64))]) -> bool {
    check_colored_tiling(tiles, region, placements).is_ok()
}

/// Checks every horizontal and vertical adjacency, treating boundary tiles as if
/// they sat across the exterior edge.
pub fn validate_relational_tiling(sys: &RelWangSystem, region: &Region, boundary: &BoundaryTileMap, t: &WangTiling) -> bool {
    if t.assignment.len() != region.len() || t.assignment.iter().any(|&a| a as usize >= sys.n) {
        return false;
    }
    let tile_at = |c: Cell| region.index_of(c).map(|i| t.assignment[i]);
    for (i, &c) in region.cells().iter().enumerate() {
        let me = t.assignment[i];
        for side in Side::ALL {
            let other = match tile_at(c.step(side)) {
                Some(o) => o,
                None => match boundary.get(Edge::new(c, side)) {
                    Some(b) => b,
                    None => return false,
                },
            };
            let ok = match side {
                Side::East => sys.h_ok(me, other),
                Side::West => sys.h_ok(other, me),
                Side::South => sys.v_ok(me, other),
                Side::North => sys.v_ok(other, me),
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_tile(c: [Color; 4]) -> GenWangTile {
        GenWangTile::unit("t", OrdWangTile::new(c[0], c[1], c[2], c[3]))
    }

    #[test]
    fn single_tile_on_own_region() {
        let t = unit_tile([0, 0, 0, 0]);
        let r = ColoredRegion::uniform(Region::rectangle(0, 0, 1, 1), 0);
        assert!(validate_colored_tiling(&[t], &r, &[(0, (0, 0))]));
    }

    #[test]
    fn boundary_mismatch_rejected() {
        let t = unit_tile([0, 0, 0, 0]);
        let reg = Region::rectangle(0, 0, 1, 1);
        let c = Cell::new(0, 0);
        let b = EdgeMap::from_entries(vec![
            (Edge::new(c, Side::North), 1),
            (Edge::new(c, Side::East), 0),
            (Edge::new(c, Side::South), 0),
            (Edge::new(c, Side::West), 0),
        ]);
        let r = ColoredRegion::new(reg, b).unwrap();
        assert_eq!(
            check_colored_tiling(&[t], &r, &[(0, (0, 0))]),
            Err(ColoredViolation::Mismatch(Edge::new(c, Side::North)))
        );
    }

    #[test]
    fn two_tile_square_by_exhaustion() {
        // a: east 1, b: west 1; everything else 0
        let a = unit_tile([0, 1, 0, 0]);
        let b = unit_tile([0, 0, 0, 1]);
        let tiles = [a, b];
        let r = ColoredRegion::uniform(Region::rectangle(0, 0, 2, 2), 0);
        let mut good = Vec::new();
        for mask in 0..16u32 {
            let pl: Vec<(usize, (i64, i64))> = (0..4)
                .map(|i| (((mask >> i) & 1) as usize, ((i % 2) as i64, (i / 2) as i64)))
                .collect();
            if validate_colored_tiling(&tiles, &r, &pl) {
                good.push(mask);
            }
        }
        // each row must read "a b"
        assert_eq!(good, vec![0b1010]);
    }

    #[test]
    fn relational_basics() {
        let sys = RelWangSystem::new(1, [(0, 0)], [(0, 0)]).unwrap();
        let r = Region::rectangle(0, 0, 3, 2);
        let b = uniform_boundary(&r, 0);
        assert!(validate_relational_tiling(&sys, &r, &b, &WangTiling { assignment: vec![0; 6] }));
        let sys2 = RelWangSystem::new(1, [], [(0, 0)]).unwrap();
        let r2 = Region::rectangle(0, 0, 2, 1);
        let b2 = uniform_boundary(&r2, 0);
        assert!(!validate_relational_tiling(&sys2, &r2, &b2, &WangTiling { assignment: vec![0; 2] }));
    }

    #[test]
    fn checkerboard_two_of_sixteen() {
        let sys = RelWangSystem::new(2, [(0, 1), (1, 0)], [(0, 1), (1, 0)]).unwrap();
        let r = Region::rectangle(0, 0, 2, 2);
        // boundary consistent with the checkerboard whose top-left is 0
        let mut entries = Vec::new();
        for e in r.exterior_edges() {
            let parity = ((e.cell.x + e.cell.y) % 2) as TileId;
            entries.push((e, 1 - parity));
        }
        let b = EdgeMap::from_entries(entries);
        let mut ok = 0;
        for mask in 0..16u32 {
            let a: Vec<TileId> = (0..4).map(|i| (mask >> i) & 1).collect();
            if validate_relational_tiling(&sys, &r, &b, &WangTiling { assignment: a }) {
                ok += 1;
            }
        }
        assert_eq!(ok, 1);
    }
}
