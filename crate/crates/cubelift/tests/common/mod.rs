#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cubelift::cube::{CubeDiagram, VertexRule};
use cubelift::grid::{BendKind, GridDiagram};
use cubelift::lifting::{stack, StackAssignment};

/// Steps `v` to the next permutation in lexicographic order.
pub fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut v: Vec<usize> = (1..=n).collect();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

/// Every grid of size n, in (x_col, o_col) lexicographic order.
pub fn all_grids(n: usize) -> Vec<GridDiagram> {
    let perms = permutations(n);
    let mut out = Vec::new();
    for x in &perms {
        for o in &perms {
            if x.iter().zip(o).all(|(a, b)| a != b) {
                out.push(GridDiagram::new(x.clone(), o.clone()).unwrap());
            }
        }
    }
    out
}

/// Tries every stack order; the cube validator alone decides success.
pub fn unpruned_lift_zetas(g: &GridDiagram) -> Vec<Vec<usize>> {
    let p = g.bend_partition(BendKind::AtX);
    permutations(g.n())
        .into_iter()
        .filter(|z| {
            let zeta = StackAssignment::new(z.clone()).unwrap();
            match stack(g, &p, &zeta) {
                Ok(e) => CubeDiagram::from_markings(e.markings().clone(), VertexRule::Either).is_ok(),
                Err(_) => false,
            }
        })
        .collect()
}

/// Seeded grid sampler.
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (1..=n).collect();
        v.shuffle(&mut self.0);
        v
    }

    pub fn size_in(&mut self, lo: usize, hi: usize) -> usize {
        self.0.gen_range(lo..=hi)
    }

    pub fn grid(&mut self, n: usize) -> GridDiagram {
        loop {
            let x = self.permutation(n);
            let o = self.permutation(n);
            if let Ok(g) = GridDiagram::new(x, o) {
                return g;
            }
        }
    }
}

/// First stack order in lexicographic order that the cube validator accepts.
pub fn first_unpruned_lift_zeta(g: &GridDiagram) -> Option<Vec<usize>> {
    let p = g.bend_partition(BendKind::AtX);
    let mut z: Vec<usize> = (1..=g.n()).collect();
    loop {
        let zeta = StackAssignment::new(z.clone()).unwrap();
        if let Ok(e) = stack(g, &p, &zeta) {
            if CubeDiagram::from_markings(e.markings().clone(), VertexRule::Either).is_ok() {
                return Some(z);
            }
        }
        if !next_permutation(&mut z) {
            return None;
        }
    }
}

/// Proptest strategy for grids of size lo..=hi.
pub fn grid_strategy(lo: usize, hi: usize) -> impl proptest::strategy::Strategy<Value = GridDiagram> {
    use proptest::prelude::*;
    (lo..=hi)
        .prop_flat_map(|n| {
            let ids: Vec<usize> = (1..=n).collect();
            (Just(ids.clone()).prop_shuffle(), Just(ids).prop_shuffle())
        })
        .prop_filter_map("X and O share a cell", |(x, o)| GridDiagram::new(x, o).ok())
}
