//! Writes SVG drawings of a base-region tiling and a Wang witness.

use tileforge::geometry::Region;
use tileforge::io::RectRegion;
use tileforge::random::{planted_boundary, random_rel_system, rng};
use tileforge::rect_reduction::{build_gamma0_outline, build_r0};
use tileforge::rect_solver::count_rect_tilings_outline;
use tileforge::render::{render_rect, render_relational, RenderOptions};
use tileforge::solve::SolveLimits;
use tileforge::wang_solver::count_wang_tilings;

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir();
    let o = RenderOptions::default();

    let tiles = build_r0(5, 1).unwrap();
    let outline = build_gamma0_outline(2, 2, 5, 1).unwrap();
    let t = count_rect_tilings_outline(&tiles, &outline, SolveLimits::default());
    let svg = render_rect(&tiles, &RectRegion::Outline(outline), t.witnesses.first(), &o).unwrap();
    let p = dir.join("tileforge_base.svg");
    std::fs::write(&p, svg)?;
    println!("wrote {}", p.display());

    let mut g = rng(3);
    let sys = random_rel_system(&mut g, 3, 0.7, true);
    let region = Region::rectangle(0, 0, 3, 2);
    let b = planted_boundary(&mut g, &sys, &region);
    let w = count_wang_tilings(&sys, &region, &b, SolveLimits::default());
    let svg = render_relational(&region, Some(&b), w.witnesses.first(), &o).unwrap();
    let p = dir.join("tileforge_wang.svg");
    std::fs::write(&p, svg)?;
    println!("wrote {} ({} tilings)", p.display(), w.count);
    Ok(())
}
