//! Exact counting of relational Wang tilings by a frontier DP.
//!
//! Cells are processed in a fixed scan order. The DP state is the tuple of
//! tiles on the processed cells that still have an unprocessed neighbor. Each
//! layer is expanded in parallel and merged in state order, so the result does
//! not depend on the number of threads.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{Cell, Edge, Region, Side};
use crate::solve::{Budget, SolveLimits, TilingCount};
use crate::wang::{BoundaryTileMap, ColoredRegion, EdgeMap, OrdWangTile, RelWangSystem, TileId, WangTiling};

/// Boundary condition for the solver.
#[derive(Debug, Clone, Copy)]
pub enum Boundary<'a> {
    Tiles(&'a BoundaryTileMap),
    /// Every exterior edge is unconstrained.
    Free,
}

impl Boundary<'_> {
    fn get(&self, e: Edge) -> Option<TileId> {
        match self {
            Boundary::Tiles(m) => m.get(e),
            Boundary::Free => None,
        }
    }
}

#[derive(Clone)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn empty(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and_assign(&mut self, o: &BitSet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a &= *b;
        }
    }

    fn iter_and<'a>(&'a self, o: Option<&'a BitSet>, p: Option<&'a BitSet>) -> impl Iterator<Item = usize> + 'a {
        self.0.iter().enumerate().flat_map(move |(w, &bits)| {
            let mut m = bits;
            if let Some(o) = o {
                m &= o.0[w];
            }
            if let Some(p) = p {
                m &= p.0[w];
            }
            std::iter::from_fn(move || {
                if m == 0 {
                    return None;
                }
                let t = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(w * 64 + t)
            })
        })
    }
}

struct Relations {
    right_of: Vec<BitSet>,
    left_of: Vec<BitSet>,
    below: Vec<BitSet>,
    above: Vec<BitSet>,
}

impl Relations {
    fn new(sys: &RelWangSystem) -> Self {
        let n = sys.n;
        let mut r = Relations {
            right_of: vec![BitSet::empty(n); n],
            left_of: vec![BitSet::empty(n); n],
            below: vec![BitSet::empty(n); n],
            above: vec![BitSet::empty(n); n],
        };
        for &(a, b) in &sys.h {
            r.right_of[a as usize].set(b as usize);
            r.left_of[b as usize].set(a as usize);
        }
        for &(a, b) in &sys.v {
            r.below[a as usize].set(b as usize);
            r.above[b as usize].set(a as usize);
        }
        r
    }
}

/// Cell order of the scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ScanOrder {
    /// Rows top to bottom, each left to right.
    #[default]
    RowMajor,
    /// Columns left to right, each top to bottom.
    ColumnMajor,
    /// Horizontal bands of the given height, top to bottom; inside a band,
    /// columns left to right, each top to bottom.
    Bands(u32),
}

impl ScanOrder {
    fn key(self, c: Cell) -> (i64, i64, i64) {
        match self {
            ScanOrder::RowMajor => (c.y, c.x, 0),
            ScanOrder::ColumnMajor => (c.x, c.y, 0),
            ScanOrder::Bands(h) => {
                let h = h.max(1) as i64;
                (c.y.div_euclid(h), c.x, c.y)
            }
        }
    }

    /// Region cell indices in scan order.
    pub fn order(self, region: &Region) -> Vec<usize> {
        let mut v: Vec<usize> = (0..region.len()).collect();
        v.sort_by_key(|&i| self.key(region.cells()[i]));
        v
    }
}

/// A neighbor already placed when a cell is processed: frontier slot and
/// the relation mask table to use.
#[derive(Clone, Copy)]
enum Dir {
    /// Neighbor is above: candidates = below[t].
    Below,
    Above,
    RightOf,
    LeftOf,
}

struct CellPlan {
    /// Candidates allowed by boundary tiles on every side.
    static_mask: BitSet,
    checks: Vec<(usize, Dir)>,
    /// For each slot of the outgoing frontier, where it comes from:
    /// `Some(i)` = incoming slot `i`, `None` = the tile just placed.
    next: Vec<Option<usize>>,
}

fn plan(sys: &RelWangSystem, rel: &Relations, region: &Region, boundary: Boundary, order: &[usize]) -> Option<Vec<CellPlan>> {
    let cells = region.cells();
    let n = sys.n;
    let idx = |c: Cell| region.index_of(c);
    let mut step_of = vec![0usize; cells.len()];
    for (s, &i) in order.iter().enumerate() {
        step_of[i] = s;
    }
    // a processed cell stays in the frontier until its last neighbor is processed
    let last_need: Vec<usize> = (0..cells.len())
        .map(|i| Side::ALL.iter().filter_map(|&s| idx(cells[i].step(s)).map(|j| step_of[j])).max().unwrap_or(0))
        .collect();
    let mut active: Vec<usize> = Vec::new();
    let mut plans = Vec::with_capacity(cells.len());
    for (step, &i) in order.iter().enumerate() {
        let c = cells[i];
        let mut mask = BitSet::full(n);
        let mut checks = Vec::new();
        for side in Side::ALL {
            match idx(c.step(side)) {
                Some(j) => {
                    if step_of[j] < step {
                        let slot = active.iter().position(|&a| a == j).expect("placed neighbor is in the frontier");
                        let dir = match side {
                            Side::North => Dir::Below,
                            Side::South => Dir::Above,
                            Side::West => Dir::RightOf,
                            Side::East => Dir::LeftOf,
                        };
                        checks.push((slot, dir));
                    }
                }
                None => {
                    if let Some(b) = boundary.get(Edge::new(c, side)) {
                        if b as usize >= n {
                            return None;
                        }
                        let b = b as usize;
                        let m = match side {
                            Side::North => &rel.below[b],
                            Side::South => &rel.above[b],
                            Side::West => &rel.right_of[b],
                            Side::East => &rel.left_of[b],
                        };
                        mask.and_assign(m);
                    }
                }
            }
        }
        let mut next_active = Vec::new();
        let mut next = Vec::new();
        for (slot, &a) in active.iter().enumerate() {
            if last_need[a] > step {
                next_active.push(a);
                next.push(Some(slot));
            }
        }
        if last_need[i] > step {
            next_active.push(i);
            next.push(None);
        }
        plans.push(CellPlan { static_mask: mask, checks, next });
        active = next_active;
    }
    Some(plans)
}

type State = Box<[TileId]>;

struct Layer {
    states: Vec<State>,
    counts: Vec<BigUint>,
    /// Incoming transitions `(parent state, tile)` for every state.
    back: Vec<Vec<(u32, TileId)>>,
}

/// Counts tilings of `region` under `sys` with the given boundary tiles.
pub fn count_wang_tilings(sys: &RelWangSystem, region: &Region, boundary: &BoundaryTileMap, limits: SolveLimits) -> TilingCount<WangTiling> {
    count_wang_tilings_with(sys, region, Boundary::Tiles(boundary), limits)
}

/// Counts tilings with no constraint across exterior edges.
pub fn count_wang_tilings_free(sys: &RelWangSystem, region: &Region, limits: SolveLimits) -> TilingCount<WangTiling> {
    count_wang_tilings_with(sys, region, Boundary::Free, limits)
}

/// Counts tilings scanning in row-major order.
pub fn count_wang_tilings_with(sys: &RelWangSystem, region: &Region, boundary: Boundary, limits: SolveLimits) -> TilingCount<WangTiling> {
    count_wang_tilings_ordered(sys, region, boundary, limits, ScanOrder::RowMajor)
}

/// Counts tilings with an explicit scan order. The count does not depend on it;
/// the running time can depend on it heavily.
pub fn count_wang_tilings_ordered(sys: &RelWangSystem, region: &Region, boundary: Boundary, limits: SolveLimits, order: ScanOrder) -> TilingCount<WangTiling> {
    let rel = Relations::new(sys);
    let order = order.order(region);
    let Some(plans) = plan(sys, &rel, region, boundary, &order) else {
        return TilingCount { count: BigUint::zero(), exhausted: true, witnesses: vec![], nodes: 0 };
    };
    let mut budget = Budget::new(&limits);
    let keep_back = limits.witness_cap() > 0;
    let mut layers: Vec<Layer> = Vec::with_capacity(if keep_back { plans.len() + 1 } else { 2 });
    layers.push(Layer { states: vec![State::default()], counts: vec![BigUint::one()], back: vec![vec![]] });

    for p in &plans {
        let cur = layers.last().expect("initial layer");
        let expanded: Vec<Vec<(State, TileId)>> = cur
            .states
            .par_iter()
            .map(|s| {
                let mut m = p.static_mask.clone();
                for &(slot, dir) in &p.checks {
                    let t = s[slot] as usize;
                    let r = match dir {
                        Dir::Below => &rel.below[t],
                        Dir::Above => &rel.above[t],
                        Dir::RightOf => &rel.right_of[t],
                        Dir::LeftOf => &rel.left_of[t],
                    };
                    m.and_assign(r);
                }
                m.iter_and(None, None)
                    .map(|t| {
                        let t = t as TileId;
                        let ns: State = p.next.iter().map(|o| o.map_or(t, |k| s[k])).collect();
                        (ns, t)
                    })
                    .collect()
            })
            .collect();
        let transitions: u64 = expanded.iter().map(|v| v.len() as u64).sum();
        if !budget.charge(transitions.max(1)) {
            return TilingCount::budget_tripped(budget.nodes());
        }
        let mut index: HashMap<State, u32> = HashMap::new();
        let mut next = Layer { states: vec![], counts: vec![], back: vec![] };
        for (parent, outs) in expanded.into_iter().enumerate() {
            for (ns, t) in outs {
                let id = *index.entry(ns.clone()).or_insert_with(|| {
                    next.states.push(ns);
                    next.counts.push(BigUint::zero());
                    next.back.push(Vec::new());
                    (next.states.len() - 1) as u32
                });
                next.counts[id as usize] += &cur.counts[parent];
                if keep_back {
                    next.back[id as usize].push((parent as u32, t));
                }
            }
        }
        if !keep_back {
            // earlier layers are only needed for witnesses
            layers.clear();
        }
        layers.push(next);
    }

    let last = layers.last().expect("final layer");
    let count: BigUint = last.counts.iter().sum();
    let witnesses = if keep_back && !count.is_zero() {
        collect_witnesses(&layers, limits.witness_cap())
            .into_iter()
            .map(|path| {
                let mut a = vec![0; path.len()];
                for (step, &i) in order.iter().enumerate() {
                    a[i] = path[step];
                }
                WangTiling { assignment: a }
            })
            .collect()
    } else {
        vec![]
    };
    TilingCount { count, exhausted: true, witnesses, nodes: budget.nodes() }
}

/// Walks back-edges depth first to list up to `cap` tilings in scan order.
fn collect_witnesses(layers: &[Layer], cap: usize) -> Vec<Vec<TileId>> {
    let depth = layers.len() - 1;
    let mut out = Vec::new();
    let mut path: Vec<TileId> = vec![0; depth];
    for s in 0..layers[depth].states.len() {
        if out.len() >= cap {
            break;
        }
        walk(layers, depth, s as u32, &mut path, &mut out, cap);
    }
    out
}

fn walk(layers: &[Layer], level: usize, state: u32, path: &mut Vec<TileId>, out: &mut Vec<Vec<TileId>>, cap: usize) {
    if out.len() >= cap {
        return;
    }
    if level == 0 {
        out.push(path.clone());
        return;
    }
    for &(parent, t) in &layers[level].back[state as usize] {
        path[level - 1] = t;
        walk(layers, level - 1, parent, path, out, cap);
        if out.len() >= cap {
            return;
        }
    }
}

/// Converts a colored ordinary Wang instance into a relational one.
///
/// Relations are color matches. Each exterior edge gets a real tile exposing the
/// required color on the facing side when one exists, otherwise a synthetic tile
/// related only in that one direction.
pub fn colored_to_relational_instance(tiles: &[OrdWangTile], region: &ColoredRegion) -> (RelWangSystem, Region, BoundaryTileMap) {
    let n = tiles.len();
    let mut h = Vec::new();
    let mut v = Vec::new();
    for (i, a) in tiles.iter().enumerate() {
        for (j, b) in tiles.iter().enumerate() {
            if a.east == b.west {
                h.push((i as TileId, j as TileId));
            }
            if a.south == b.north {
                v.push((i as TileId, j as TileId));
            }
        }
    }
    let mut total = n;
    let mut synthetic: HashMap<(Side, u16), TileId> = HashMap::new();
    let mut entries = Vec::new();
    for (e, col) in region.boundary.entries().iter().copied() {
        // the boundary tile sits across the edge and must expose `col` on the opposite side
        let facing = e.side.opposite();
        let real = tiles.iter().position(|t| t.side(facing) == col);
        let b = match real {
            Some(r) => r as TileId,
            None => *synthetic.entry((e.side, col)).or_insert_with(|| {
                let s = total as TileId;
                total += 1;
                for (j, t) in tiles.iter().enumerate() {
                    if t.side(e.side) == col {
                        let j = j as TileId;
                        match e.side {
                            Side::North => v.push((s, j)),
                            Side::South => v.push((j, s)),
                            Side::West => h.push((s, j)),
                            Side::East => h.push((j, s)),
                        }
                    }
                }
                s
            }),
        };
        entries.push((e, b));
    }
    let sys = RelWangSystem::new(total, h, v).expect("indices in range");
    (sys, region.region.clone(), EdgeMap::from_entries(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wang::{uniform_boundary, validate_relational_tiling};

    #[test]
    fn complete_relations_give_power() {
        let sys = RelWangSystem::complete(3);
        let r = Region::rectangle(0, 0, 3, 2);
        let res = count_wang_tilings_free(&sys, &r, SolveLimits::default());
        assert_eq!(res.count, BigUint::from(729u32));
    }

    #[test]
    fn empty_h_gives_zero() {
        let sys = RelWangSystem::new(1, [], [(0, 0)]).unwrap();
        let r = Region::rectangle(0, 0, 2, 1);
        let res = count_wang_tilings(&sys, &r, &uniform_boundary(&r, 0), SolveLimits::default());
        assert!(res.count.is_zero());
        assert!(res.exhausted);
    }

    #[test]
    fn checkerboard_free_two() {
        let sys = RelWangSystem::new(2, [(0, 1), (1, 0)], [(0, 1), (1, 0)]).unwrap();
        let r = Region::rectangle(0, 0, 2, 2);
        let res = count_wang_tilings_free(&sys, &r, SolveLimits::default());
        assert_eq!(res.count, BigUint::from(2u32));
        assert_eq!(res.witnesses.len(), 2);
    }

    #[test]
    fn witnesses_validate() {
        let sys = RelWangSystem::new(3, [(0, 1), (1, 2), (2, 0), (1, 1)], [(0, 0), (1, 1), (2, 2), (0, 1)]).unwrap();
        let r = Region::new(vec![Cell::new(0, 0), Cell::new(1, 0), Cell::new(1, 1), Cell::new(2, 1), Cell::new(1, 2)]).unwrap();
        let b = uniform_boundary(&r, 1);
        let res = count_wang_tilings(&sys, &r, &b, SolveLimits::default());
        for w in &res.witnesses {
            assert!(validate_relational_tiling(&sys, &r, &b, w));
        }
    }

    #[test]
    fn node_budget_trips() {
        let sys = RelWangSystem::complete(4);
        let r = Region::rectangle(0, 0, 4, 4);
        let res = count_wang_tilings_free(&sys, &r, SolveLimits::default().with_nodes(10));
        assert!(!res.exhausted);
    }

    #[test]
    fn synthetic_boundary_tile_added() {
        let tiles = [OrdWangTile::new(0, 0, 0, 0)];
        let reg = Region::rectangle(0, 0, 1, 1);
        let c = Cell::new(0, 0);
        let cr = ColoredRegion::new(
            reg,
            EdgeMap::from_entries(vec![
                (Edge::new(c, Side::North), 0),
                (Edge::new(c, Side::East), 0),
                (Edge::new(c, Side::South), 0),
                (Edge::new(c, Side::West), 0),
            ]),
        )
        .unwrap();
        let (sys, r, b) = colored_to_relational_instance(&tiles, &cr);
        assert_eq!(sys.n, 1);
        assert_eq!(count_wang_tilings(&sys, &r, &b, SolveLimits::default()).count, BigUint::one());

        // no tile has south color 1 or north color 0: the top and bottom boundaries need synthetic tiles
        let tiles = [OrdWangTile::new(1, 0, 0, 0)];
        let cr = ColoredRegion::new(
            Region::rectangle(0, 0, 1, 1),
            EdgeMap::from_entries(vec![
                (Edge::new(c, Side::North), 1),
                (Edge::new(c, Side::East), 0),
                (Edge::new(c, Side::South), 0),
                (Edge::new(c, Side::West), 0),
            ]),
        )
        .unwrap();
        let (sys, r, b) = colored_to_relational_instance(&tiles, &cr);
        assert_eq!(sys.n, 3);
        assert_eq!(count_wang_tilings(&sys, &r, &b, SolveLimits::default()).count, BigUint::one());
    }
}
