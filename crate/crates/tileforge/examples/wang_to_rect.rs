//! Reduces a relational Wang instance to a rectangle tiling instance and
//! checks that solutions correspond one to one.

use tileforge::geometry::Region;
use tileforge::random::{planted_boundary, random_rel_system, rng};
use tileforge::rect_reduction::{decode_rect_tiling, encode_wang_tiling, reduce_wang_to_rect, tileset_size, validate_params, ExpansionParams};
use tileforge::rect_solver::count_rect_tilings_outline;
use tileforge::solve::SolveLimits;
use tileforge::wang_solver::count_wang_tilings;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut g = rng(seed);
    let sys = random_rel_system(&mut g, 2, 0.8, true);
    let region = Region::rectangle(0, 0, 2, 2);
    let boundary = planted_boundary(&mut g, &sys, &region);
    let p = ExpansionParams::desk(sys.n);
    println!("system: n={} H={:?} V={:?}", sys.n, sys.h, sys.v);
    println!("parameters valid: {}", validate_params(&p).valid());

    let (ts, er) = reduce_wang_to_rect(&sys, &region, &boundary, &p).unwrap();
    let (size, bound) = tileset_size(&sys);
    println!("{size} rectangle tiles (bound {bound}), outline with {} vertices", er.outline.vertices.len());

    let wang = count_wang_tilings(&sys, &region, &boundary, SolveLimits::default());
    let rect = count_rect_tilings_outline(&ts.to_rect_tiles().unwrap(), &er.outline, SolveLimits::default());
    println!("Wang tilings {}, rectangle tilings {}", wang.count, rect.count);
    for w in &wang.witnesses {
        let enc = encode_wang_tiling(w, &ts, &er).unwrap();
        let back = decode_rect_tiling(&enc, &ts, &er).unwrap();
        println!("  {:?} -> {} rectangles -> {}", w.assignment, enc.placements.len(), if back == *w { "same" } else { "different" });
    }
}
