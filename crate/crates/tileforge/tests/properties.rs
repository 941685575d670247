use num_bigint::BigUint;
use proptest::prelude::*;

use tileforge::geometry::Region;
use tileforge::io::{read_rel_wang, Document, RelWangInstance};
use tileforge::oracles::{count_1in3, count_2sat};
use tileforge::random::{planted_boundary, random_1in3, random_2sat, random_boundary, rng};
use tileforge::rect_reduction::{decode_rect_tiling, encode_wang_tiling, reduce_wang_to_rect, tileset_size, ExpansionParams};
use tileforge::rect_solver::{count_rect_tilings_outline, validate_rect_tiling_outline};
use tileforge::reductions::make_irreflexive;
use tileforge::solve::SolveLimits;
use tileforge::wang::{EdgeMap, RelWangSystem, TileId};
use tileforge::wang_solver::{count_wang_tilings, count_wang_tilings_ordered, Boundary, ScanOrder};

fn system(max_n: usize) -> impl Strategy<Value = RelWangSystem> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * n;
        (Just(n), prop::collection::vec(any::<bool>(), pairs), prop::collection::vec(any::<bool>(), pairs))
    })
    .prop_map(|(n, hm, vm)| {
        let pick = |m: &[bool]| (0..n * n).filter(|&i| m[i]).map(|i| ((i / n) as TileId, (i % n) as TileId)).collect::<Vec<_>>();
        RelWangSystem::new(n, pick(&hm), pick(&vm)).unwrap()
    })
}

fn irreflexive(sys: RelWangSystem) -> RelWangSystem {
    let off = |s: &std::collections::BTreeSet<(TileId, TileId)>| s.iter().copied().filter(|(a, b)| a != b).collect::<Vec<_>>();
    RelWangSystem::new(sys.n, off(&sys.h), off(&sys.v)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tileset_size_formula(sys in system(12)) {
        let sys = irreflexive(sys);
        let ts = tileforge::rect_reduction::build_perturbed_tileset(&sys, &ExpansionParams::desk(sys.n)).unwrap();
        let (size, bound) = tileset_size(&sys);
        prop_assert_eq!(ts.len(), 2 + 4 * sys.n + sys.h.len() + sys.v.len());
        prop_assert_eq!(ts.len(), size);
        prop_assert!(size <= bound);
    }

    #[test]
    fn scan_order_does_not_change_count(sys in system(3), w in 1i64..=3, h in 1i64..=3, seed in any::<u64>()) {
        let region = Region::rectangle(0, 0, w, h);
        let b = planted_boundary(&mut rng(seed), &sys, &region);
        let counts: Vec<BigUint> = [ScanOrder::RowMajor, ScanOrder::ColumnMajor, ScanOrder::Bands(2)]
            .into_iter()
            .map(|o| count_wang_tilings_ordered(&sys, &region, Boundary::Tiles(&b), SolveLimits::default().count_only(), o).count)
            .collect();
        prop_assert_eq!(&counts[0], &counts[1]);
        prop_assert_eq!(&counts[0], &counts[2]);
    }

    #[test]
    fn make_irreflexive_drops_diagonal_and_keeps_count(sys in system(3), w in 1i64..=3, h in 1i64..=2, seed in any::<u64>()) {
        let region = Region::rectangle(0, 0, w, h);
        let mut g = rng(seed);
        let b = if seed % 2 == 0 { planted_boundary(&mut g, &sys, &region) } else { random_boundary(&mut g, &region, sys.n) };
        let (irr, ib) = make_irreflexive(&sys, &region, &b);
        prop_assert!(irr.h.iter().chain(&irr.v).all(|(a, b)| a != b));
        prop_assert_eq!(irr.n, 2 * sys.n);
        let before = count_wang_tilings(&sys, &region, &b, SolveLimits::default().count_only()).count;
        let after = count_wang_tilings(&irr, &region, &ib, SolveLimits::default().count_only()).count;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn rel_instance_json_round_trip(sys in system(4), w in 1i64..=3, h in 1i64..=3, seed in any::<u64>(), free in any::<bool>()) {
        let region = Region::rectangle(0, 0, w, h);
        let boundary = (!free).then(|| random_boundary(&mut rng(seed), &region, sys.n));
        let inst = RelWangInstance { system: sys, region, boundary };
        let text = Document::RelWang(inst.clone()).to_json();
        prop_assert_eq!(read_rel_wang(&text).unwrap(), inst);
    }

    #[test]
    fn oracle_list_matches_count(seed in any::<u64>(), n in 1usize..=6) {
        let mut g = rng(seed);
        let e = random_1in3(&mut g, n);
        let c = count_1in3(&e, true).unwrap();
        prop_assert_eq!(c.assignments.unwrap().len() as u64, c.count);
        let f = random_2sat(&mut g, 6, 8);
        let c = count_2sat(&f, true).unwrap();
        let list = c.assignments.unwrap();
        prop_assert_eq!(list.len() as u64, c.count);
        prop_assert!(list.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn edge_map_json_is_order_independent(seed in any::<u64>(), w in 1i64..=3, h in 1i64..=3) {
        let region = Region::rectangle(0, 0, w, h);
        let b = random_boundary(&mut rng(seed), &region, 5);
        let mut entries = b.entries().to_vec();
        entries.reverse();
        let shuffled = serde_json::to_string(&entries).unwrap();
        let back: EdgeMap<TileId> = serde_json::from_str(&shuffled).unwrap();
        prop_assert_eq!(back, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn encode_decode_identity(sys in system(2), w in 1i64..=2, seed in any::<u64>()) {
        let sys = irreflexive(sys);
        let region = Region::rectangle(0, 0, w, 1);
        let b = planted_boundary(&mut rng(seed), &sys, &region);
        let (ts, er) = reduce_wang_to_rect(&sys, &region, &b, &ExpansionParams::desk(sys.n)).unwrap();
        let rt = ts.to_rect_tiles().unwrap();
        let wang = count_wang_tilings(&sys, &region, &b, SolveLimits::default());
        for t in &wang.witnesses {
            let enc = encode_wang_tiling(t, &ts, &er).unwrap();
            prop_assert!(validate_rect_tiling_outline(&rt, &er.outline, &enc));
            prop_assert_eq!(&decode_rect_tiling(&enc, &ts, &er).unwrap(), t);
        }
        let rect = count_rect_tilings_outline(&rt, &er.outline, SolveLimits::default().count_only());
        prop_assert_eq!(rect.count, wang.count);
    }
}
