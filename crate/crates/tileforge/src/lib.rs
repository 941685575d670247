//! Tiling puzzles and the reductions between them: generalized Wang tiles,
//! relational Wang systems, rectangle tilings, polyomino tilings and SAT variants.

mod bignum;
pub mod geometry;
pub mod wang;
pub mod solve;
pub mod wang_solver;
pub mod rect_solver;
pub mod rect_reduction;
pub mod reductions;
pub mod naive;
pub mod random;
pub mod gadgets;
pub mod oracles;
pub mod sat;
pub mod io;
pub mod pipeline;
pub mod render;
