//! Grid diagrams, cube diagrams, and lifting grids to cubes.

pub mod corpus;
pub mod cube;
pub mod grid;
pub mod invariants;
pub mod lifting;
pub mod search;
