use crate::grid::GridDiagram;

use super::InvariantError;

/// Which pair of opposite arcs carries the over strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Over {
    /// arcs[0] and arcs[2]
    Even,
    /// arcs[1] and arcs[3]
    Odd,
}

/// One crossing: the four incident arcs in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeCrossing {
    pub arcs: [usize; 4],
    pub over: Over,
    pub sign: i8,
}

/// Planar diagram code: crossings with arc labels, plus crossingless loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarCode {
    crossings: Vec<CodeCrossing>,
    arc_count: usize,
    free_loops: usize,
    components: usize,
}

// Half-edge slots of a grid crossing, counterclockwise from the top.
const N: usize = 0;
const W: usize = 1;
const S: usize = 2;
const E: usize = 3;

impl PlanarCode {
    /// Checks that arcs are labelled 0..k and each appears exactly twice.
    pub fn new(crossings: Vec<CodeCrossing>, free_loops: usize, components: usize) -> Result<Self, InvariantError> {
        let arc_count = crossings.iter().flat_map(|c| c.arcs).max().map_or(0, |m| m + 1);
        let mut uses = vec![0usize; arc_count];
        for c in &crossings {
            if c.sign != 1 && c.sign != -1 {
                return Err(InvariantError::InvalidCode(format!("crossing sign {}", c.sign)));
            }
            for a in c.arcs {
                uses[a] += 1;
            }
        }
        if let Some(a) = uses.iter().position(|&u| u != 2) {
            return Err(InvariantError::InvalidCode(format!("arc {a} appears {} times", uses[a])));
        }
        Ok(PlanarCode { crossings, arc_count, free_loops, components })
    }

    pub fn crossings(&self) -> &[CodeCrossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Components that meet no crossing.
    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| i64::from(c.sign)).sum()
    }

    /// Exchanges over and under everywhere.
    pub fn mirror(&self) -> PlanarCode {
        let crossings = self
            .crossings
            .iter()
            .map(|c| CodeCrossing {
                arcs: c.arcs,
                over: match c.over {
                    Over::Even => Over::Odd,
                    Over::Odd => Over::Even,
                },
                sign: -c.sign,
            })
            .collect();
        PlanarCode { crossings, ..*self }
    }

    /// Adds a distant crossingless loop.
    pub fn with_free_loop(&self) -> PlanarCode {
        PlanarCode {
            crossings: self.crossings.clone(),
            free_loops: self.free_loops + 1,
            components: self.components + 1,
            ..*self
        }
    }

    pub fn from_grid(g: &GridDiagram) -> PlanarCode {
        let n = g.n();
        let crossings = g.crossings();
        let mut index = vec![usize::MAX; (n + 1) * (n + 1)];
        for (k, c) in crossings.iter().enumerate() {
            index[c.row * (n + 1) + c.col] = k;
        }
        let at = |row: usize, col: usize| index[row * (n + 1) + col];

        let mut arcs = vec![[usize::MAX; 4]; crossings.len()];
        let mut arc_count = 0;
        let mut free_loops = 0;
        let comps = g.trace_components();
        for cycle in &comps.cycles {
            // Passes through crossings in travel order: (crossing, entry slot, exit slot).
            let mut passes: Vec<(usize, usize, usize)> = Vec::new();
            for pair in cycle.chunks(2) {
                let (x_row, o_row) = (pair[0].row, pair[1].row);
                let col = g.x_col(x_row);
                // Down the column from X to O.
                if o_row > x_row {
                    passes.extend((x_row + 1..o_row).filter(|&r| at(r, col) != usize::MAX).map(|r| (at(r, col), N, S)));
                } else {
                    passes.extend(
                        (o_row + 1..x_row).rev().filter(|&r| at(r, col) != usize::MAX).map(|r| (at(r, col), S, N)),
                    );
                }
                // Along the row from O to X.
                let (o_c, x_c) = (g.o_col(o_row), g.x_col(o_row));
                if x_c > o_c {
                    passes.extend((o_c + 1..x_c).filter(|&c| at(o_row, c) != usize::MAX).map(|c| (at(o_row, c), W, E)));
                } else {
                    passes.extend(
                        (x_c + 1..o_c).rev().filter(|&c| at(o_row, c) != usize::MAX).map(|c| (at(o_row, c), E, W)),
                    );
                }
            }
            if passes.is_empty() {
                free_loops += 1;
                continue;
            }
            for t in 0..passes.len() {
                let (k, _, exit) = passes[t];
                let (k2, entry, _) = passes[(t + 1) % passes.len()];
                arcs[k][exit] = arc_count;
                arcs[k2][entry] = arc_count;
                arc_count += 1;
            }
        }
        let records = crossings
            .iter()
            .zip(arcs)
            .map(|(c, arcs)| {
                let down = g.o_row(c.col) > g.x_row(c.col);
                let right = g.x_col(c.row) > g.o_col(c.row);
                CodeCrossing { arcs, over: Over::Even, sign: if down == right { 1 } else { -1 } }
            })
            .collect();
        PlanarCode { crossings: records, arc_count, free_loops, components: comps.count() }
    }
}
