//! Lattice geometry: cells, edges, regions and outlines.
//!
//! Coordinates use `x` for columns and `y` for rows, with `y` growing
//! downward. "Below" a cell therefore means `y + 1`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Regions with more cells than this are kept in outline form by default.
pub const DEFAULT_CELL_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("region is empty")]
    Empty,
    #[error("region is not edge-connected")]
    Disconnected,
    #[error("region is not simply connected")]
    NotSimplyConnected,
    #[error("outline area {area} exceeds cell budget {budget}")]
    AreaBudgetExceeded { area: u64, budget: u64 },
    #[error("invalid outline: {0}")]
    InvalidOutline(String),
}

/// A unit square of the lattice, identified by its top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub const fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }

    pub fn step(self, side: Side) -> Cell {
        let (dx, dy) = side.delta();
        Cell::new(self.x + dx, self.y + dy)
    }

    pub fn translate(self, dx: i64, dy: i64) -> Cell {
        Cell::new(self.x + dx, self.y + dy)
    }
}

impl From<(i64, i64)> for Cell {
    fn from((x, y): (i64, i64)) -> Self {
        Cell::new(x, y)
    }
}

impl From<Cell> for (i64, i64) {
    fn from(c: Cell) -> Self {
        (c.x, c.y)
    }
}

/// Reading order: top-most first, then left-most.
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    North,
    East,
    South,
    West,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::North, Side::East, Side::South, Side::West];

    pub fn opposite(self) -> Side {
        match self {
            Side::North => Side::South,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::West => Side::East,
        }
    }

    pub fn delta(self) -> (i64, i64) {
        match self {
            Side::North => (0, -1),
            Side::East => (1, 0),
            Side::South => (0, 1),
            Side::West => (-1, 0),
        }
    }

    pub fn is_horizontal_edge(self) -> bool {
        matches!(self, Side::North | Side::South)
    }
}

/// A unit edge given as one side of a cell.
///
/// `(c, South)` and `(c + (0,1), North)` name the same segment; [`Edge::canonical`]
/// picks the North/West form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64, Side)", into = "(i64, i64, Side)")]
pub struct Edge {
    pub cell: Cell,
    pub side: Side,
}

impl From<(i64, i64, Side)> for Edge {
    fn from((x, y, s): (i64, i64, Side)) -> Self {
        Edge::new(Cell::new(x, y), s)
    }
}

impl From<Edge> for (i64, i64, Side) {
    fn from(e: Edge) -> Self {
        (e.cell.x, e.cell.y, e.side)
    }
}

impl Edge {
    pub fn new(cell: Cell, side: Side) -> Self {
        Edge { cell, side }
    }

    pub fn canonical(self) -> Edge {
        match self.side {
            Side::South => Edge::new(self.cell.step(Side::South), Side::North),
            Side::East => Edge::new(self.cell.step(Side::East), Side::West),
            _ => self,
        }
    }

    /// The same segment seen from the neighbouring cell.
    pub fn flip(self) -> Edge {
        Edge::new(self.cell.step(self.side), self.side.opposite())
    }
}

/// A finite, non-empty, edge-connected set of cells stored sorted in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RegionRepr", into = "RegionRepr")]
pub struct Region {
    cells: Vec<Cell>,
}

/// JSON form `{"cells": [[x, y], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionRepr {
    cells: Vec<Cell>,
}

impl TryFrom<RegionRepr> for Region {
    type Error = GeometryError;
    fn try_from(v: RegionRepr) -> Result<Self, Self::Error> {
        Region::new(v.cells)
    }
}

impl From<Region> for RegionRepr {
    fn from(r: Region) -> Self {
        RegionRepr { cells: r.cells }
    }
}

impl Region {
    pub fn new(mut cells: Vec<Cell>) -> Result<Region, GeometryError> {
        cells.sort();
        cells.dedup();
        if cells.is_empty() {
            return Err(GeometryError::Empty);
        }
        let r = Region { cells };
        if !r.is_connected() {
            return Err(GeometryError::Disconnected);
        }
        Ok(r)
    }

    /// `w` columns by `h` rows with top-left cell at `(x0, y0)`.
    pub fn rectangle(x0: i64, y0: i64, w: i64, h: i64) -> Region {
        assert!(w > 0 && h > 0, "rectangle needs positive size");
        let mut cells = Vec::with_capacity((w * h) as usize);
        for y in y0..y0 + h {
            for x in x0..x0 + w {
                cells.push(Cell::new(x, y));
            }
        }
        Region { cells }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    pub fn index_of(&self, c: Cell) -> Option<usize> {
        self.cells.binary_search(&c).ok()
    }

    /// `(min_x, min_y, max_x, max_y)`, inclusive.
    pub fn bbox(&self) -> (i64, i64, i64, i64) {
        let mut b = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for c in &self.cells {
            b.0 = b.0.min(c.x);
            b.1 = b.1.min(c.y);
            b.2 = b.2.max(c.x);
            b.3 = b.3.max(c.y);
        }
        b
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Region {
        Region {
            cells: self.cells.iter().map(|c| c.translate(dx, dy)).collect(),
        }
    }

    /// True when the region is exactly its bounding box.
    pub fn is_rectangle(&self) -> bool {
        let (x0, y0, x1, y1) = self.bbox();
        ((x1 - x0 + 1) * (y1 - y0 + 1)) as usize == self.cells.len()
    }

    /// Exterior edges in the `(inside cell, side)` form, in reading order of the cell
    /// and then N, E, S, W.
    pub fn exterior_edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for &c in &self.cells {
            for side in Side::ALL {
                if !self.contains(c.step(side)) {
                    out.push(Edge::new(c, side));
                }
            }
        }
        out
    }

    /// Boundary edges of the region in canonical form.
    pub fn boundary_edges_canonical(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.exterior_edges().into_iter().map(Edge::canonical).collect();
        v.sort();
        v
    }

    fn is_connected(&self) -> bool {
        let set: HashSet<Cell> = self.cells.iter().copied().collect();
        let mut seen = HashSet::with_capacity(set.len());
        let mut queue = VecDeque::new();
        queue.push_back(self.cells[0]);
        seen.insert(self.cells[0]);
        while let Some(c) = queue.pop_front() {
            for s in Side::ALL {
                let n = c.step(s);
                if set.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn to_outline(&self) -> Result<Outline, GeometryError> {
        region_to_outline(self)
    }
}

/// True iff the complement of `r` inside its bounding box grown by one cell is
/// edge-connected.
pub fn is_simply_connected(r: &Region) -> bool {
    let (x0, y0, x1, y1) = r.bbox();
    let (bx0, by0, bx1, by1) = (x0 - 1, y0 - 1, x1 + 1, y1 + 1);
    let w = (bx1 - bx0 + 1) as usize;
    let h = (by1 - by0 + 1) as usize;
    let mut blocked = vec![false; w * h];
    for c in r.cells() {
        blocked[(c.y - by0) as usize * w + (c.x - bx0) as usize] = true;
    }
    let free = blocked.iter().filter(|b| !**b).count();
    let mut seen = vec![false; w * h];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 0;
    while let Some(i) = stack.pop() {
        count += 1;
        let (x, y) = (i % w, i / w);
        let mut push = |j: usize| {
            if !blocked[j] && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        };
        if x > 0 {
            push(i - 1);
        }
        if x + 1 < w {
            push(i + 1);
        }
        if y > 0 {
            push(i - w);
        }
        if y + 1 < h {
            push(i + w);
        }
    }
    count == free
}

/// A closed rectilinear curve given by its corner vertices.
///
/// Vertices are lattice points `(x, y)`. The traversal direction is fixed so that the
/// shoelace sum `Σ (x_i y_{i+1} - x_{i+1} y_i)` is positive; with `y` pointing down
/// this keeps the interior on the right-hand side of each directed segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OutlineRepr", into = "OutlineRepr")]
pub struct Outline {
    pub vertices: Vec<(i64, i64)>,
}

/// JSON form `{"outline": [[x, y], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutlineRepr {
    outline: Vec<(i64, i64)>,
}

impl TryFrom<OutlineRepr> for Outline {
    type Error = GeometryError;
    fn try_from(v: OutlineRepr) -> Result<Self, Self::Error> {
        Outline::new(v.outline)
    }
}

impl From<Outline> for OutlineRepr {
    fn from(o: Outline) -> Self {
        OutlineRepr { outline: o.vertices }
    }
}

/// One vertical strip `[x0, x1)` of an outline with the sorted, disjoint
/// `[y0, y1)` intervals covered by the region inside the strip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slab {
    pub x0: i64,
    pub x1: i64,
    pub intervals: Vec<(i64, i64)>,
}

impl Outline {
    /// Builds an outline, checking closure, axis-parallel segments, and non-zero
    /// segment lengths. Collinear interior vertices are merged and the orientation
    /// is normalised.
    pub fn new(vertices: Vec<(i64, i64)>) -> Result<Outline, GeometryError> {
        let n = vertices.len();
        if n < 4 {
            return Err(GeometryError::InvalidOutline(format!("{n} vertices")));
        }
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            if a == b {
                return Err(GeometryError::InvalidOutline(format!("zero-length segment at {a:?}")));
            }
            if a.0 != b.0 && a.1 != b.1 {
                return Err(GeometryError::InvalidOutline(format!("diagonal segment {a:?} -> {b:?}")));
            }
        }
        let mut v = simplify(vertices);
        if v.len() < 4 || v.len() % 2 == 1 {
            return Err(GeometryError::InvalidOutline("degenerate polygon".into()));
        }
        let s = shoelace2(&v);
        if s == 0 {
            return Err(GeometryError::InvalidOutline("zero area".into()));
        }
        if s < 0 {
            v.reverse();
        }
        Ok(Outline { vertices: v })
    }

    /// Axis-aligned rectangle `[x0, x0+w) x [y0, y0+h)`.
    pub fn rectangle(x0: i64, y0: i64, w: i64, h: i64) -> Outline {
        Outline::new(vec![(x0, y0), (x0 + w, y0), (x0 + w, y0 + h), (x0, y0 + h)])
            .expect("rectangle outline")
    }

    pub fn area(&self) -> u64 {
        (shoelace2(&self.vertices) / 2) as u64
    }

    pub fn bbox(&self) -> (i64, i64, i64, i64) {
        let mut b = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for &(x, y) in &self.vertices {
            b.0 = b.0.min(x);
            b.1 = b.1.min(y);
            b.2 = b.2.max(x);
            b.3 = b.3.max(y);
        }
        b
    }

    pub fn translate(&self, dx: i64, dy: i64) -> Outline {
        Outline {
            vertices: self.vertices.iter().map(|&(x, y)| (x + dx, y + dy)).collect(),
        }
    }

    fn vertical_segments(&self) -> Vec<(i64, i64, i64)> {
        let n = self.vertices.len();
        let mut segs = Vec::new();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if a.0 == b.0 {
                segs.push((a.0, a.1.min(b.1), a.1.max(b.1)));
            }
        }
        segs
    }

    fn horizontal_segments(&self) -> Vec<(i64, i64, i64)> {
        let n = self.vertices.len();
        let mut segs = Vec::new();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            if a.1 == b.1 {
                segs.push((a.1, a.0.min(b.0), a.0.max(b.0)));
            }
        }
        segs
    }

    /// Decomposes the enclosed area into vertical strips between consecutive
    /// distinct vertex x-coordinates.
    pub fn slabs(&self) -> Vec<Slab> {
        let mut xs: Vec<i64> = self.vertices.iter().map(|v| v.0).collect();
        xs.sort_unstable();
        xs.dedup();
        let hs = self.horizontal_segments();
        let mut out = Vec::with_capacity(xs.len().saturating_sub(1));
        for w in xs.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let mut ys: Vec<i64> = hs
                .iter()
                .filter(|&&(_, a, b)| a <= x0 && x1 <= b)
                .map(|&(y, _, _)| y)
                .collect();
            ys.sort_unstable();
            let mut intervals: Vec<(i64, i64)> = Vec::with_capacity(ys.len() / 2);
            for p in ys.chunks(2) {
                if let [a, b] = p {
                    if let Some(last) = intervals.last_mut() {
                        if last.1 == *a {
                            last.1 = *b;
                            continue;
                        }
                    }
                    intervals.push((*a, *b));
                }
            }
            out.push(Slab { x0, x1, intervals });
        }
        out
    }

    /// Even-odd membership test for the unit cell with top-left corner `(x, y)`.
    pub fn contains_cell(&self, c: Cell) -> bool {
        let (px2, py2) = (2 * c.x + 1, 2 * c.y + 1);
        let mut inside = false;
        for (x, ya, yb) in self.vertical_segments() {
            if 2 * x > px2 && 2 * ya < py2 && py2 < 2 * yb {
                inside = !inside;
            }
        }
        inside
    }
}

fn shoelace2(v: &[(i64, i64)]) -> i128 {
    let n = v.len();
    let mut s: i128 = 0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        s += a.0 as i128 * b.1 as i128 - b.0 as i128 * a.1 as i128;
    }
    s
}

fn simplify(mut v: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let mut removed = false;
        for i in 0..n {
            let a = v[(i + n - 1) % n];
            let b = v[i];
            let c = v[(i + 1) % n];
            if (a.0 == b.0 && b.0 == c.0) || (a.1 == b.1 && b.1 == c.1) {
                v.remove(i);
                removed = true;
                break;
            }
        }
        if !removed {
            return v;
        }
    }
}

/// Traces the boundary of a simply connected region.
pub fn region_to_outline(r: &Region) -> Result<Outline, GeometryError> {
    if !is_simply_connected(r) {
        return Err(GeometryError::NotSimplyConnected);
    }
    // Directed boundary edges with the region on the right (y down):
    // north sides run east, east sides run south, and so on.
    let mut next: BTreeMap<(i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
    for e in r.exterior_edges() {
        let Cell { x, y } = e.cell;
        let (a, b) = match e.side {
            Side::North => ((x, y), (x + 1, y)),
            Side::East => ((x + 1, y), (x + 1, y + 1)),
            Side::South => ((x + 1, y + 1), (x, y + 1)),
            Side::West => ((x, y + 1), (x, y)),
        };
        next.entry(a).or_default().push(b);
    }
    let start = *next.keys().next().expect("non-empty boundary");
    let total: usize = next.values().map(Vec::len).sum();
    let mut pts = vec![start];
    let mut cur = start;
    let mut dir = (0i64, 0i64);
    for _ in 0..total {
        let outs = next.get_mut(&cur).expect("boundary is closed");
        // At a pinch vertex prefer the right turn so the walk hugs the region.
        let pick = if outs.len() == 1 {
            0
        } else {
            let right = (-dir.1, dir.0);
            outs.iter()
                .position(|&p| (p.0 - cur.0, p.1 - cur.1) == right)
                .unwrap_or(0)
        };
        let nb = outs.swap_remove(pick);
        dir = (nb.0 - cur.0, nb.1 - cur.1);
        cur = nb;
        if cur == start {
            break;
        }
        pts.push(cur);
    }
    Outline::new(pts)
}

/// Fills an outline into cells; refuses areas above `budget`.
pub fn outline_to_region(o: &Outline, budget: u64) -> Result<Region, GeometryError> {
    let o = Outline::new(o.vertices.clone())?;
    let area = o.area();
    if area > budget {
        return Err(GeometryError::AreaBudgetExceeded { area, budget });
    }
    let mut cells = Vec::with_capacity(area as usize);
    for slab in o.slabs() {
        for &(y0, y1) in &slab.intervals {
            for y in y0..y1 {
                for x in slab.x0..slab.x1 {
                    cells.push(Cell::new(x, y));
                }
            }
        }
    }
    Region::new(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(v: &[(i64, i64)]) -> Vec<Cell> {
        v.iter().map(|&(x, y)| Cell::new(x, y)).collect()
    }

    #[test]
    fn single_cell_is_simply_connected() {
        let r = Region::new(cells(&[(0, 0)])).unwrap();
        assert!(is_simply_connected(&r));
    }

    #[test]
    fn ring_is_not_simply_connected() {
        let mut v = Vec::new();
        for y in 0..3 {
            for x in 0..3 {
                if (x, y) != (1, 1) {
                    v.push(Cell::new(x, y));
                }
            }
        }
        let r = Region::new(v).unwrap();
        assert!(!is_simply_connected(&r));
        assert_eq!(region_to_outline(&r), Err(GeometryError::NotSimplyConnected));
    }

    #[test]
    fn l_triomino_outline_has_six_vertices() {
        let r = Region::new(cells(&[(0, 0), (0, 1), (1, 1)])).unwrap();
        assert!(is_simply_connected(&r));
        let o = region_to_outline(&r).unwrap();
        assert_eq!(o.vertices.len(), 6);
        assert_eq!(o.area(), 3);
        assert_eq!(outline_to_region(&o, 100).unwrap(), r);
    }

    #[test]
    fn unit_square_and_domino() {
        let r = Region::new(cells(&[(0, 0)])).unwrap();
        let o = region_to_outline(&r).unwrap();
        assert_eq!(o.vertices.len(), 4);
        let d = Region::new(cells(&[(0, 0), (1, 0)])).unwrap();
        let od = region_to_outline(&d).unwrap();
        assert_eq!(od.vertices.len(), 4);
        assert_eq!(od.bbox(), (0, 0, 2, 1));
    }

    #[test]
    fn rectangle_outline_fills_to_cells() {
        let o = Outline::rectangle(0, 0, 2, 3);
        let r = outline_to_region(&o, 100).unwrap();
        assert_eq!(r.len(), 6);
    }

    #[test]
    fn degenerate_outline_rejected() {
        let e = Outline::new(vec![(0, 0), (0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(matches!(e, Err(GeometryError::InvalidOutline(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let o = Outline::rectangle(0, 0, 100, 100);
        assert_eq!(
            outline_to_region(&o, 50),
            Err(GeometryError::AreaBudgetExceeded { area: 10_000, budget: 50 })
        );
    }

    #[test]
    fn canonical_edges() {
        let c = Cell::new(3, 4);
        assert_eq!(Edge::new(c, Side::South).canonical(), Edge::new(Cell::new(3, 5), Side::North));
        assert_eq!(Edge::new(c, Side::East).canonical(), Edge::new(Cell::new(4, 4), Side::West));
        assert_eq!(Edge::new(c, Side::West).canonical(), Edge::new(c, Side::West));
    }

    #[test]
    fn construction_order_does_not_matter() {
        let a = Region::new(cells(&[(1, 0), (0, 0), (0, 1)])).unwrap();
        let b = Region::new(cells(&[(0, 1), (1, 0), (0, 0), (0, 0)])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slabs_of_l_shape() {
        let o = Outline::new(vec![(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap();
        let s = o.slabs();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].intervals, vec![(0, 2)]);
        assert_eq!(s[1].intervals, vec![(1, 2)]);
    }
}
