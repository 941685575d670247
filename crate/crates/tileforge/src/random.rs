//! Seeded generators for small test instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Cell, Edge, Region, Side};
use crate::naive::count_polyomino_tilings;
use crate::reductions::PolyominoTile;
use crate::sat::{Expr2SAT, Expression1in3};
use crate::solve::SolveLimits;
use crate::wang_solver::count_wang_tilings_free;
use crate::wang::{Color, ColoredRegion, EdgeMap, GenWangTile, RelWangSystem, TileId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polyomino shapes of area at most 3 anchored at the origin.
pub fn small_shapes() -> Vec<Vec<(i64, i64)>> {
    vec![
        vec![(0, 0)],
        vec![(0, 0), (1, 0)],
        vec![(0, 0), (0, 1)],
        vec![(0, 0), (1, 0), (2, 0)],
        vec![(0, 0), (0, 1), (0, 2)],
        vec![(0, 0), (1, 0), (0, 1)],
        vec![(0, 0), (1, 0), (1, 1)],
        vec![(0, 0), (0, 1), (1, 1)],
        vec![(1, 0), (0, 1), (1, 1)],
    ]
}

fn random_tile<R: Rng>(rng: &mut R, name: String, chi: Color) -> GenWangTile {
    let shapes = small_shapes();
    // bias toward monominoes so that tilings exist more often
    let shape = if rng.gen_bool(0.5) { &shapes[0] } else { shapes.choose(rng).expect("non-empty") };
    let cols: Vec<Color> = (0..12).map(|_| rng.gen_range(0..chi)).collect();
    let region = Region::new(shape.iter().map(|&(x, y)| Cell::new(x, y)).collect()).expect("connected");
    let mut k = 0;
    let entries = region
        .exterior_edges()
        .into_iter()
        .map(|e| {
            k += 1;
            (e, cols[k - 1])
        })
        .collect();
    GenWangTile::new(name, region, EdgeMap::from_entries(entries)).expect("valid tile")
}

/// A generalized Wang instance: 1..=3 tiles of area at most 3, at most 3 colors,
/// a rectangular region of side at most 2. Half of the instances copy their
/// boundary from a planted tiling.
pub fn random_gen_wang_instance<R: Rng>(rng: &mut R) -> (Vec<GenWangTile>, ColoredRegion) {
    let chi = rng.gen_range(1..=3) as Color;
    let nt = rng.gen_range(1..=3);
    let tiles: Vec<GenWangTile> = (0..nt).map(|i| random_tile(rng, format!("t{i}"), chi)).collect();
    let (w, h) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let region = Region::rectangle(0, 0, w, h);
    let mut boundary: Vec<_> = region.exterior_edges().into_iter().map(|e| (e, rng.gen_range(0..chi))).collect();
    if rng.gen_bool(0.5) {
        if let Some(pl) = plant(rng, &tiles, &region) {
            for (e, c) in boundary.iter_mut() {
                for &(ti, (dx, dy)) in &pl {
                    if let Some(col) = tiles[ti].colors.get(Edge::new(e.cell.translate(-dx, -dy), e.side)) {
                        *c = col;
                    }
                }
            }
        }
    }
    let cr = ColoredRegion::new(region, EdgeMap::from_entries(boundary)).expect("total boundary");
    (tiles, cr)
}

/// A random shape-only tiling of `region`, ignoring colors.
fn plant<R: Rng>(rng: &mut R, tiles: &[GenWangTile], region: &Region) -> Option<Vec<(usize, (i64, i64))>> {
    let shapes: Vec<PolyominoTile> = tiles.iter().map(|t| PolyominoTile { shape: t.shape.clone() }).collect();
    if count_polyomino_tilings(&shapes, region, 10_000).count == 0 {
        return None;
    }
    let blank: Vec<GenWangTile> = tiles
        .iter()
        .map(|t| GenWangTile { name: t.name.clone(), shape: t.shape.clone(), colors: t.colors.map(|_| 0) })
        .collect();
    let all = crate::naive::list_gen_wang_tilings(&blank, &ColoredRegion::uniform(region.clone(), 0), 64);
    all.choose(rng).cloned()
}

/// A random relational system on `n` tiles; with `irreflexive`, diagonal pairs are dropped.
pub fn random_rel_system<R: Rng>(rng: &mut R, n: usize, density: f64, irreflexive: bool) -> RelWangSystem {
    let mut h = Vec::new();
    let mut v = Vec::new();
    for a in 0..n as TileId {
        for b in 0..n as TileId {
            if irreflexive && a == b {
                continue;
            }
            if rng.gen_bool(density) {
                h.push((a, b));
            }
            if rng.gen_bool(density) {
                v.push((a, b));
            }
        }
    }
    RelWangSystem::new(n, h, v).expect("indices in range")
}

/// Boundary tiles planted around a tiling of the region with a free boundary,
/// so that the instance has at least one tiling whenever such a tiling exists.
/// Each boundary tile is drawn from those compatible with the planted cell tile.
pub fn planted_boundary<R: Rng>(rng: &mut R, sys: &RelWangSystem, region: &Region) -> EdgeMap<TileId> {
    let free = count_wang_tilings_free(sys, region, SolveLimits { max_solutions: 64, ..SolveLimits::default() });
    let assign: Vec<TileId> = match free.witnesses.choose(rng) {
        Some(w) => w.assignment.clone(),
        None => (0..region.len()).map(|_| rng.gen_range(0..sys.n as TileId)).collect(),
    };
    let entries = region
        .exterior_edges()
        .into_iter()
        .map(|e| {
            let t = assign[region.index_of(e.cell).expect("exterior edge of a region cell")];
            let fits = |b: TileId| match e.side {
                Side::North => sys.v_ok(b, t),
                Side::South => sys.v_ok(t, b),
                Side::West => sys.h_ok(b, t),
                Side::East => sys.h_ok(t, b),
            };
            let ok: Vec<TileId> = (0..sys.n as TileId).filter(|&b| fits(b)).collect();
            (e, if ok.is_empty() { 0 } else { ok[rng.gen_range(0..ok.len())] })
        })
        .collect();
    EdgeMap::from_entries(entries)
}

/// Random boundary tiles for every exterior edge of `region`.
pub fn random_boundary<R: Rng>(rng: &mut R, region: &Region, n: usize) -> EdgeMap<TileId> {
    EdgeMap::from_entries(region.exterior_edges().into_iter().map(|e| (e, rng.gen_range(0..n) as TileId)).collect())
}

/// Every cubic 1-in-3 expression on `n` variables up to relabeling: clause words
/// using each variable three times, with first occurrences in increasing order.
pub fn canonical_1in3_expressions(n: usize) -> Vec<Expression1in3> {
    fn rec(n: usize, word: &mut Vec<usize>, used: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if word.len() == 3 * n {
            out.push(word.clone());
            return;
        }
        let next_new = used.iter().filter(|&&u| u > 0).count();
        for v in 0..n {
            if used[v] == 3 || (used[v] == 0 && v != next_new) {
                continue;
            }
            used[v] += 1;
            word.push(v);
            rec(n, word, used, out);
            word.pop();
            used[v] -= 1;
        }
    }
    let mut words = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![0; n], &mut words);
    words
        .into_iter()
        .map(|w| Expression1in3::new(n, w.chunks(3).map(|c| [c[0], c[1], c[2]]).collect()).expect("cubic by construction"))
        .collect()
}

/// A uniformly shuffled cubic 1-in-3 expression on `n` variables.
pub fn random_1in3<R: Rng>(rng: &mut R, n: usize) -> Expression1in3 {
    let mut occ: Vec<usize> = (0..n).flat_map(|v| [v; 3]).collect();
    occ.shuffle(rng);
    Expression1in3::new(n, occ.chunks(3).map(|c| [c[0], c[1], c[2]]).collect()).expect("cubic by construction")
}

/// A 2SAT expression with `1..=max_vars` variables and `0..=max_clauses` clauses.
pub fn random_2sat<R: Rng>(rng: &mut R, max_vars: usize, max_clauses: usize) -> Expr2SAT {
    let vars = rng.gen_range(1..=max_vars.max(1));
    let m = rng.gen_range(0..=max_clauses);
    let clauses = (0..m).map(|_| [(rng.gen_range(0..vars), rng.gen_bool(0.5)), (rng.gen_range(0..vars), rng.gen_bool(0.5))]).collect();
    Expr2SAT::new(vars, clauses).expect("indices in range")
}
