//! Counts tilings of the small base regions by the five-tile base set.
//!
//! Run with `cargo run --release --example base_tiling`.

use tileforge::rect_reduction::{build_gamma0_outline, build_r0, radix_difference_counterexample, radix_sum_counterexample};
use tileforge::rect_solver::count_rect_tilings_outline;
use tileforge::solve::SolveLimits;

fn main() {
    let (a, b) = (10, 1);
    let tiles = build_r0(a, b).expect("valid base parameters");
    for t in &tiles {
        println!("{:>2} x {:<2} {}", t.height, t.width, t.label);
    }
    for (r, c) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)] {
        let region = build_gamma0_outline(r, c, a, b).expect("valid region");
        let res = count_rect_tilings_outline(&tiles, &region, SolveLimits::default());
        println!("{r}x{c}: {} tiling(s) after {} nodes", res.count, res.nodes);
    }
    println!("sum identity at base 5: {:?}", radix_sum_counterexample(5, 15));
    println!("difference identity at base 5: {:?}", radix_difference_counterexample(5, 15));
}
