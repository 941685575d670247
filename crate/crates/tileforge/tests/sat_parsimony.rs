use tileforge::gadgets::{load_tileset_2sat, load_tileset_t, load_tileset_tprime};
use tileforge::oracles::{count_1in3, count_2sat};
use tileforge::random::{canonical_1in3_expressions, random_2sat, rng};
use tileforge::sat::{count_2sat_via_tiling, count_satisfying_assignments_via_tiling};
use tileforge::solve::SolveLimits;

#[test]
fn enumeration_sizes() {
    assert_eq!(canonical_1in3_expressions(1).len(), 1);
    assert_eq!(canonical_1in3_expressions(2).len(), 10);
    assert_eq!(canonical_1in3_expressions(3).len(), 280);
}

#[test]
fn one_in_three_exhaustive() {
    let tp = load_tileset_tprime().unwrap();
    let t = load_tileset_t().unwrap();
    let mut nonzero = 0;
    for n in 1..=3 {
        for e in canonical_1in3_expressions(n) {
            let oracle = count_1in3(&e, false).unwrap().count;
            let got = count_satisfying_assignments_via_tiling(&e, &tp, SolveLimits::default().count_only()).unwrap();
            assert!(got.exhausted);
            assert_eq!(got.count_u64(), Some(oracle), "{}", e.to_text());
            let unique = count_satisfying_assignments_via_tiling(&e, &t, SolveLimits::default().count_only()).unwrap();
            assert_eq!(unique.count_u64(), Some(1), "T on {}", e.to_text());
            nonzero += usize::from(oracle > 0);
        }
    }
    assert!(nonzero > 0);
}

#[test]
fn two_sat_random() {
    let ts = load_tileset_2sat().unwrap();
    let mut g = rng(5);
    for _ in 0..50 {
        let e = random_2sat(&mut g, 4, 4);
        let oracle = count_2sat(&e, false).unwrap().count;
        let got = count_2sat_via_tiling(&e, &ts, SolveLimits::default().count_only()).unwrap();
        assert_eq!(got.count_u64(), Some(oracle), "{}", e.to_dimacs());
    }
}
