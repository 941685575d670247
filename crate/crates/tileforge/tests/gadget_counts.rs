use tileforge::gadgets::{load_tileset_2sat, load_tileset_t, load_tileset_tprime};
use tileforge::oracles::{count_1in3, count_2sat};
use tileforge::sat::{count_2sat_via_tiling, count_satisfying_assignments_via_tiling, Expr2SAT, Expression1in3};
use tileforge::solve::SolveLimits;

#[test]
fn small_fixtures_match_oracle() {
    let t = load_tileset_t().unwrap();
    let tp = load_tileset_tprime().unwrap();
    for clauses in [vec![[0, 0, 0]], vec![[0, 1, 0], [0, 1, 1]], vec![[0, 1, 0], [0, 1, 2], [1, 2, 2]], vec![[0, 1, 2]; 3]] {
        let e = Expression1in3::new(clauses.len(), clauses).unwrap();
        let under_t = count_satisfying_assignments_via_tiling(&e, &t, SolveLimits::default()).unwrap();
        let under_tp = count_satisfying_assignments_via_tiling(&e, &tp, SolveLimits::default().count_only()).unwrap();
        let oracle = count_1in3(&e, false).unwrap().count;
        println!("{:?}: T={} T'={} oracle={} nodes={}", e.clauses, under_t.count, under_tp.count, oracle, under_tp.nodes);
        assert_eq!(under_t.count_u64(), Some(1));
        assert_eq!(under_tp.count_u64(), Some(oracle));
    }
    let ts = load_tileset_2sat().unwrap();
    let e = Expr2SAT::new(2, vec![[(0, false), (1, false)], [(0, true), (1, true)]]).unwrap();
    let c = count_2sat_via_tiling(&e, &ts, SolveLimits::default()).unwrap();
    println!("2sat: {} oracle {}", c.count, count_2sat(&e, false).unwrap().count);
    assert_eq!(c.count_u64(), Some(count_2sat(&e, false).unwrap().count));
}
