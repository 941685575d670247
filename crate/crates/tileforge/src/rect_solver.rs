//! Exact counting of rectangle tilings over outlines of arbitrary size.
//!
//! The search always covers the top-most, then left-most uncovered cell with a
//! tile anchored there. The covered part is then described by a skyline: for
//! each column, the first uncovered region cell. Skylines are run-length encoded
//! and memoized, so the cost depends on the number of distinct skylines and not
//! on the area.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::geometry::{region_to_outline, Cell, GeometryError, Outline, Region, Slab};
use crate::solve::{Budget, SolveLimits, TilingCount};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectTile {
    pub height: u64,
    pub width: u64,
    #[serde(default)]
    pub label: String,
}

impl RectTile {
    pub fn new(height: u64, width: u64, label: impl Into<String>) -> Self {
        RectTile { height, width, label: label.into() }
    }
}

/// Placements by tile index and top-left anchor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RectTiling {
    pub placements: Vec<(usize, Cell)>,
}

const DONE: i64 = i64::MAX;

/// Run-length skyline: `(x_start, first uncovered y)`, runs cover the bounding box.
type Profile = Vec<(i64, i64)>;

struct Geometry {
    slabs: Vec<Slab>,
    x_end: i64,
    /// `widths[d]`: whether `d` is a sum of tile widths, for `d` up to the bbox width.
    widths: Option<Vec<bool>>,
    heights: Option<Vec<bool>>,
}

impl Geometry {
    fn new(o: &Outline) -> Self {
        let slabs = o.slabs();
        let x_end = slabs.last().map_or(0, |s| s.x1);
        Geometry { slabs, x_end, widths: None, heights: None }
    }

    fn with_sums(mut self, tiles: &[RectTile], y_span: i64) -> Self {
        let x_span = self.x_end - self.slabs.first().map_or(0, |s| s.x0);
        self.widths = sums(x_span, tiles.iter().map(|t| t.width));
        self.heights = sums(y_span, tiles.iter().map(|t| t.height));
        self
    }

    /// Whether a bounded floor of width `d` can still be covered exactly.
    fn fillable(&self, d: i64) -> bool {
        self.widths.as_ref().map_or(true, |w| w.get(d as usize).copied().unwrap_or(true))
    }

    /// Whether every column of slab `k` below `y` can still be covered exactly.
    fn column_fillable(&self, k: usize, y: i64) -> bool {
        let Some(hs) = &self.heights else { return true };
        self.slabs[k].intervals.iter().filter(|iv| iv.1 > y).all(|&(a, b)| hs.get((b - a.max(y)) as usize).copied().unwrap_or(true))
    }

    fn slab_index(&self, x: i64) -> usize {
        self.slabs.partition_point(|s| s.x1 <= x)
    }

    /// First region y at or after `y` in slab `k`.
    fn next_y(&self, k: usize, y: i64) -> i64 {
        for &(a, b) in &self.slabs[k].intervals {
            if b > y {
                return a.max(y);
            }
        }
        DONE
    }

    fn initial(&self) -> Profile {
        let mut p = Vec::new();
        for k in 0..self.slabs.len() {
            push_run(&mut p, self.slabs[k].x0, self.next_y(k, i64::MIN));
        }
        p
    }

    /// Whether columns `[x0, x1)` contain `[y0, y1)` inside the region.
    fn contains(&self, x0: i64, x1: i64, y0: i64, y1: i64) -> bool {
        let mut k = self.slab_index(x0);
        while k < self.slabs.len() && self.slabs[k].x0 < x1 {
            if !self.slabs[k].intervals.iter().any(|&(a, b)| a <= y0 && y1 <= b) {
                return false;
            }
            k += 1;
        }
        x1 <= self.x_end
    }
}

/// Which lengths up to `span` are sums of the given lengths; `None` when too long to tabulate.
fn sums(span: i64, lens: impl Iterator<Item = u64>) -> Option<Vec<bool>> {
    if !(0..=1 << 26).contains(&span) {
        return None;
    }
    let mut lens: Vec<usize> = lens.filter(|&l| l as i64 <= span && l > 0).map(|l| l as usize).collect();
    lens.sort_unstable();
    lens.dedup();
    let span = span as usize;
    let mut ok = vec![false; span + 1];
    ok[0] = true;
    for d in 1..=span {
        ok[d] = lens.iter().any(|&l| l <= d && ok[d - l]);
    }
    Some(ok)
}

fn push_run(p: &mut Profile, x: i64, h: i64) {
    if let Some(&(_, last)) = p.last() {
        if last == h {
            return;
        }
    }
    p.push((x, h));
}

fn run_end(p: &Profile, i: usize, x_end: i64) -> i64 {
    p.get(i + 1).map_or(x_end, |r| r.0)
}

/// Children of a profile: `(tile, anchor, child profile)`.
fn expand(g: &Geometry, tiles: &[RectTile], p: &Profile) -> Option<(Cell, Vec<(usize, Profile)>)> {
    let (ri, &(x0, y0)) = p.iter().enumerate().filter(|(_, r)| r.1 != DONE).min_by_key(|(_, r)| r.1)?;
    let run_x1 = run_end(p, ri, g.x_end);
    let mut out = Vec::new();
    for (ti, t) in tiles.iter().enumerate() {
        let (w, h) = (t.width as i64, t.height as i64);
        // the lowest run is walled on both sides, so its floor needs an exact cover
        if x0 + w > run_x1 || !g.fillable(run_x1 - x0 - w) || !g.contains(x0, x0 + w, y0, y0 + h) {
            continue;
        }
        let mut q: Profile = Vec::with_capacity(p.len() + 2);
        for &r in &p[..ri] {
            push_run(&mut q, r.0, r.1);
        }
        let mut k = g.slab_index(x0);
        let mut ok = true;
        while k < g.slabs.len() && g.slabs[k].x0 < x0 + w {
            ok &= g.column_fillable(k, y0 + h);
            push_run(&mut q, g.slabs[k].x0.max(x0), g.next_y(k, y0 + h));
            k += 1;
        }
        if !ok {
            continue;
        }
        if x0 + w < run_x1 {
            push_run(&mut q, x0 + w, y0);
        }
        for &r in &p[ri + 1..] {
            push_run(&mut q, r.0, r.1);
        }
        out.push((ti, q));
    }
    Some((Cell::new(x0, y0), out))
}

/// Counts tilings of an outline region by translated rectangles.
pub fn count_rect_tilings_outline(tiles: &[RectTile], region: &Outline, limits: SolveLimits) -> TilingCount<RectTiling> {
    let (bx0, by0, bx1, by1) = region.bbox();
    let tiles_fit: Vec<RectTile> = tiles
        .iter()
        .map(|t| {
            if t.width as i64 > bx1 - bx0 || t.height as i64 > by1 - by0 {
                // never fits; keep the index stable
                RectTile::new(u32::MAX as u64, u32::MAX as u64, t.label.clone())
            } else {
                t.clone()
            }
        })
        .collect();
    let g = Geometry::new(region).with_sums(&tiles_fit, by1 - by0);
    let root = g.initial();
    let mut memo: HashMap<Profile, BigUint> = HashMap::new();
    let mut budget = Budget::new(&limits);

    // iterative post-order DFS
    struct Frame {
        profile: Profile,
        children: Vec<Profile>,
        next: usize,
        acc: BigUint,
    }
    let mut stack: Vec<Frame> = Vec::new();
    let open = |p: Profile, budget: &mut Budget| -> Result<Result<Frame, BigUint>, ()> {
        match expand(&g, &tiles_fit, &p) {
            None => Ok(Err(BigUint::one())),
            Some((_, ch)) => {
                if !budget.charge(ch.len().max(1) as u64) {
                    return Err(());
                }
                Ok(Ok(Frame { profile: p, children: ch.into_iter().map(|c| c.1).collect(), next: 0, acc: BigUint::zero() }))
            }
        }
    };
    match open(root.clone(), &mut budget) {
        Err(()) => return TilingCount::budget_tripped(budget.nodes()),
        Ok(Err(c)) => {
            memo.insert(root.clone(), c);
        }
        Ok(Ok(f)) => stack.push(f),
    }
    while let Some(top) = stack.last_mut() {
        if top.next == top.children.len() {
            let f = stack.pop().expect("non-empty");
            let v = f.acc;
            if let Some(parent) = stack.last_mut() {
                parent.acc += &v;
            }
            memo.insert(f.profile, v);
            continue;
        }
        let child = std::mem::take(&mut top.children[top.next]);
        top.next += 1;
        if let Some(v) = memo.get(&child) {
            top.acc += v;
            continue;
        }
        match open(child.clone(), &mut budget) {
            Err(()) => return TilingCount::budget_tripped(budget.nodes()),
            Ok(Err(c)) => {
                top.acc += &c;
                memo.insert(child, c);
            }
            Ok(Ok(f)) => stack.push(f),
        }
    }
    let count = memo.get(&root).cloned().unwrap_or_default();
    let witnesses = collect_witnesses(&g, &tiles_fit, &memo, root, limits.witness_cap());
    TilingCount { count, exhausted: true, witnesses, nodes: budget.nodes() }
}

fn collect_witnesses(g: &Geometry, tiles: &[RectTile], memo: &HashMap<Profile, BigUint>, root: Profile, cap: usize) -> Vec<RectTiling> {
    let mut out = Vec::new();
    if cap == 0 || memo.get(&root).map_or(true, |c| c.is_zero()) {
        return out;
    }
    // stack of (profile, placements so far); children pushed in reverse to keep order
    let mut stack = vec![(root, Vec::new())];
    while let Some((p, placed)) = stack.pop() {
        match expand(g, tiles, &p) {
            None => {
                out.push(RectTiling { placements: placed });
                if out.len() >= cap {
                    break;
                }
            }
            Some((anchor, ch)) => {
                for (ti, q) in ch.into_iter().rev() {
                    if memo.get(&q).is_some_and(|c| !c.is_zero()) {
                        let mut pl = placed.clone();
                        pl.push((ti, anchor));
                        stack.push((q, pl));
                    }
                }
            }
        }
    }
    out
}

/// Counts tilings of a cell region.
pub fn count_rect_tilings(tiles: &[RectTile], region: &Region, limits: SolveLimits) -> Result<TilingCount<RectTiling>, GeometryError> {
    let o = region_to_outline(region)?;
    Ok(count_rect_tilings_outline(tiles, &o, limits))
}

/// Exact cover check against a cell region.
pub fn validate_rect_tiling(tiles: &[RectTile], region: &Region, t: &RectTiling) -> bool {
    let mut seen = vec![false; region.len()];
    for &(ti, a) in &t.placements {
        let Some(tile) = tiles.get(ti) else { return false };
        for dy in 0..tile.height as i64 {
            for dx in 0..tile.width as i64 {
                match region.index_of(a.translate(dx, dy)) {
                    Some(i) if !seen[i] => seen[i] = true,
                    _ => return false,
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Exact cover check against an outline, without expanding cells.
pub fn validate_rect_tiling_outline(tiles: &[RectTile], region: &Outline, t: &RectTiling) -> bool {
    let g = Geometry::new(region);
    let mut rects = Vec::with_capacity(t.placements.len());
    let mut area: u128 = 0;
    for &(ti, a) in &t.placements {
        let Some(tile) = tiles.get(ti) else { return false };
        let (x1, y1) = (a.x + tile.width as i64, a.y + tile.height as i64);
        if a.x < region.bbox().0 || !g.contains(a.x, x1, a.y, y1) {
            return false;
        }
        area += tile.width as u128 * tile.height as u128;
        rects.push((a.x, a.y, x1, y1));
    }
    if area != region.area() as u128 {
        return false;
    }
    rects.sort_unstable();
    // sweep: rectangles sorted by x0; compare against those still open
    let mut active: Vec<(i64, i64, i64, i64)> = Vec::new();
    for r in rects {
        active.retain(|o| o.2 > r.0);
        if active.iter().any(|o| o.1 < r.3 && r.1 < o.3) {
            return false;
        }
        active.push(r);
    }
    true
}
