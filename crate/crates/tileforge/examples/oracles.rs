//! Brute-force model counting for small expressions.

use tileforge::oracles::{count_1in3, count_2sat};
use tileforge::random::{random_1in3, random_2sat, rng};

fn main() {
    let mut g = rng(7);
    for _ in 0..3 {
        let e = random_1in3(&mut g, 3);
        let c = count_1in3(&e, true).unwrap();
        println!("{}-> {} {:?}", e.to_text(), c.count, c.assignments.unwrap());
    }
    let f = random_2sat(&mut g, 4, 4);
    println!("{}-> {}", f.to_dimacs(), count_2sat(&f, false).unwrap().count);
}
