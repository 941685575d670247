//! Small exact-cover enumerators for polyomino and generalized Wang tilings.
//!
//! They share no code with the frontier solvers and serve as reference counts
//! on small instances.

use std::collections::HashMap;

use crate::geometry::{Cell, Edge, Region};
use crate::reductions::PolyominoTile;
use crate::wang::{ColoredRegion, GenWangTile};

/// Outcome of a capped enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaiveCount {
    pub count: u64,
    /// False when the node cap stopped the search early.
    pub complete: bool,
}

struct Search<'a> {
    region: &'a Region,
    shapes: Vec<Vec<(i64, i64)>>,
    covered: Vec<Option<(usize, Cell)>>,
    nodes: u64,
    cap: u64,
}

impl<'a> Search<'a> {
    fn new(region: &'a Region, shapes: Vec<&Region>, cap: u64) -> Self {
        // offsets relative to each shape's first cell in (y, x) order
        let shapes = shapes
            .iter()
            .map(|s| {
                let f = s.cells()[0];
                s.cells().iter().map(|c| (c.x - f.x, c.y - f.y)).collect()
            })
            .collect();
        Search { region, shapes, covered: vec![None; region.len()], nodes: 0, cap }
    }

    fn first_free(&self) -> Option<usize> {
        self.covered.iter().position(|c| c.is_none())
    }

    fn place(&mut self, ti: usize, at: Cell) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(self.shapes[ti].len());
        for &(dx, dy) in &self.shapes[ti] {
            match self.region.index_of(at.translate(dx, dy)) {
                Some(i) if self.covered[i].is_none() && !idx.contains(&i) => idx.push(i),
                _ => return None,
            }
        }
        Some(idx)
    }

    fn run(&mut self, accept: &mut dyn FnMut(&Self, usize, Cell) -> bool) -> NaiveCount {
        let mut count = 0;
        let complete = self.rec(accept, &mut count);
        NaiveCount { count, complete }
    }

    fn rec(&mut self, accept: &mut dyn FnMut(&Self, usize, Cell) -> bool, count: &mut u64) -> bool {
        self.nodes += 1;
        if self.cap > 0 && self.nodes > self.cap {
            return false;
        }
        let Some(i) = self.first_free() else {
            *count += 1;
            return true;
        };
        let target = self.region.cells()[i];
        for ti in 0..self.shapes.len() {
            let Some(idx) = self.place(ti, target) else { continue };
            for &j in &idx {
                self.covered[j] = Some((ti, target));
            }
            let ok = accept(self, ti, target);
            if ok && !self.rec(accept, count) {
                return false;
            }
            for &j in &idx {
                self.covered[j] = None;
            }
        }
        true
    }
}

/// Counts tilings of `region` by translated copies of `tiles`.
pub fn count_polyomino_tilings(tiles: &[PolyominoTile], region: &Region, node_cap: u64) -> NaiveCount {
    let mut s = Search::new(region, tiles.iter().map(|t| &t.shape).collect(), node_cap);
    s.run(&mut |_, _, _| true)
}

/// Counts generalized Wang tilings of a colored region.
pub fn count_gen_wang_tilings(tiles: &[GenWangTile], region: &ColoredRegion, node_cap: u64) -> NaiveCount {
    let firsts: Vec<Cell> = tiles.iter().map(|t| t.shape.cells()[0]).collect();
    let mut s = Search::new(&region.region, tiles.iter().map(|t| &t.shape).collect(), node_cap);
    let mut accept = |s: &Search, ti: usize, at: Cell| {
        // tile-local coordinates = global - at + first cell
        let (ox, oy) = (at.x - firsts[ti].x, at.y - firsts[ti].y);
        for &(e, col) in tiles[ti].colors.entries() {
            let g = e.cell.translate(ox, oy);
            let across = g.step(e.side);
            let want = match region.region.index_of(across) {
                None => region.color(Edge::new(g, e.side)),
                Some(j) => match s.covered[j] {
                    None => continue,
                    Some((tj, atj)) => {
                        let (px, py) = (atj.x - firsts[tj].x, atj.y - firsts[tj].y);
                        tiles[tj].colors.get(Edge::new(across.translate(-px, -py), e.side.opposite()))
                    }
                },
            };
            if want != Some(col) {
                return false;
            }
        }
        true
    };
    s.run(&mut accept)
}

/// Placements `(tile, offset)` for every generalized Wang tiling, up to `limit`.
pub fn list_gen_wang_tilings(tiles: &[GenWangTile], region: &ColoredRegion, limit: usize) -> Vec<Vec<(usize, (i64, i64))>> {
    // brute force over the count search, recording placements at the leaves
    let mut out = Vec::new();
    let mut stack: Vec<(usize, (i64, i64))> = Vec::new();
    list_rec(tiles, region, &mut HashMap::new(), &mut stack, &mut out, limit);
    out
}

fn list_rec(
    tiles: &[GenWangTile],
    region: &ColoredRegion,
    owner: &mut HashMap<Cell, usize>,
    stack: &mut Vec<(usize, (i64, i64))>,
    out: &mut Vec<Vec<(usize, (i64, i64))>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let Some(&target) = region.region.cells().iter().find(|c| !owner.contains_key(c)) else {
        if crate::wang::validate_colored_tiling(tiles, region, stack) {
            out.push(stack.clone());
        }
        return;
    };
    for (ti, t) in tiles.iter().enumerate() {
        let f = t.shape.cells()[0];
        let (dx, dy) = (target.x - f.x, target.y - f.y);
        let cells: Vec<Cell> = t.shape.cells().iter().map(|c| c.translate(dx, dy)).collect();
        if cells.iter().any(|c| !region.region.contains(*c) || owner.contains_key(c)) {
            continue;
        }
        for c in &cells {
            owner.insert(*c, stack.len());
        }
        stack.push((ti, (dx, dy)));
        list_rec(tiles, region, owner, stack, out, limit);
        stack.pop();
        for c in &cells {
            owner.remove(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::OrdWangTile;

    #[test]
    fn dominoes() {
        let t = [
            PolyominoTile { shape: Region::rectangle(0, 0, 2, 1) },
            PolyominoTile { shape: Region::rectangle(0, 0, 1, 2) },
        ];
        assert_eq!(count_polyomino_tilings(&t, &Region::rectangle(0, 0, 3, 2), 0).count, 3);
        assert_eq!(count_polyomino_tilings(&t, &Region::rectangle(0, 0, 4, 4), 0).count, 36);
    }

    #[test]
    fn colored_row() {
        let a = GenWangTile::unit("a", OrdWangTile::new(0, 1, 0, 0));
        let b = GenWangTile::unit("b", OrdWangTile::new(0, 0, 0, 1));
        let r = ColoredRegion::uniform(Region::rectangle(0, 0, 2, 2), 0);
        assert_eq!(count_gen_wang_tilings(&[a.clone(), b.clone()], &r, 0).count, 1);
        assert_eq!(list_gen_wang_tilings(&[a, b], &r, 10).len(), 1);
    }

    #[test]
    fn cap_reports_incomplete() {
        let t = [PolyominoTile { shape: Region::rectangle(0, 0, 1, 1) }];
        let r = count_polyomino_tilings(&t, &Region::rectangle(0, 0, 5, 5), 3);
        assert!(!r.complete);
    }
}
