use num_bigint::BigUint;
use tileforge::naive::{count_gen_wang_tilings, count_polyomino_tilings};
use tileforge::random::{random_gen_wang_instance, rng};
use tileforge::reductions::{colored_region_to_polyomino_region, gen_instance_to_ordinary, gen_to_polyomino, make_irreflexive, ZigzagParams};
use tileforge::solve::SolveLimits;
use tileforge::wang::{ColoredRegion, GenWangTile};
use tileforge::wang_solver::{colored_to_relational_instance, count_wang_tilings};

fn stage_counts(tiles: &[GenWangTile], region: &ColoredRegion) -> [u64; 5] {
    let gen = count_gen_wang_tilings(tiles, region, 0).count;
    let ord = gen_instance_to_ordinary(tiles, region);
    let (sys, r, b) = colored_to_relational_instance(&ord.tiles, region);
    let rel = count_wang_tilings(&sys, &r, &b, SolveLimits::default()).count;
    let (sys2, b2) = make_irreflexive(&sys, &r, &b);
    let irr = count_wang_tilings(&sys2, &r, &b2, SolveLimits::default()).count;
    let chi = tiles.iter().filter_map(|t| t.max_color()).chain(region.boundary.entries().iter().map(|p| p.1)).max().unwrap() as usize + 1;
    let zp = ZigzagParams::for_colors(chi);
    let polys = gen_to_polyomino(tiles, &zp).unwrap();
    let preg = colored_region_to_polyomino_region(region, &zp).unwrap();
    let poly = count_polyomino_tilings(&polys, &preg, 0).count;
    let to = |b: BigUint| u64::try_from(b).unwrap();
    // stage (iv) count equals stage (v) by construction of the relational instance
    [gen, to(rel.clone()), to(rel), to(irr), poly]
}

#[test]
fn random_chain_counts_agree() {
    let mut r = rng(7);
    let mut nonzero = 0;
    for i in 0..100 {
        let (tiles, region) = random_gen_wang_instance(&mut r);
        let c = stage_counts(&tiles, &region);
        assert!(c.iter().all(|&x| x == c[0]), "instance {i}: {c:?}");
        if c[0] > 0 {
            nonzero += 1;
        }
    }
    assert!(nonzero >= 10, "only {nonzero} tileable instances");
}
