//! Encodes 1-in-3 and 2SAT expressions as generalized Wang regions and
//! compares the tiling count with brute-force enumeration.

use tileforge::gadgets::{load_tileset_2sat, load_tileset_tprime};
use tileforge::oracles::{count_1in3, count_2sat};
use tileforge::sat::{build_region, count_2sat_via_tiling, count_satisfying_assignments_via_tiling, decompose_adjacent_transpositions, expression_to_permutation, Expr2SAT, Expression1in3};
use tileforge::solve::SolveLimits;

fn main() {
    let e = Expression1in3::parse("x y z\nx y z\nx y z\n").unwrap();
    let word = decompose_adjacent_transpositions(&expression_to_permutation(&e));
    let region = build_region(&e, &word).unwrap();
    println!("1-in-3 with {} variables: {} swaps, region of {} cells", e.n, word.word.len(), region.region.len());

    let tp = load_tileset_tprime().unwrap();
    let tiled = count_satisfying_assignments_via_tiling(&e, &tp, SolveLimits::default()).unwrap();
    let oracle = count_1in3(&e, true).unwrap();
    println!("  tilings {}, assignments {} {:?}", tiled.count, oracle.count, oracle.assignments.unwrap_or_default());

    let f = Expr2SAT::parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
    let tiled = count_2sat_via_tiling(&f, &load_tileset_2sat().unwrap(), SolveLimits::default().count_only()).unwrap();
    println!("2SAT: tilings {}, assignments {}", tiled.count, count_2sat(&f, false).unwrap().count);
}
