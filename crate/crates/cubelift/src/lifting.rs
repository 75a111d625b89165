//! Lifting grids to cubes: stacking bends on z-levels, searching stack
//! orders, repairing bad crossings with rotated crossings, and the
//! constructive grid-to-cube pipeline.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cube::{crossings_of, CubeDiagram, CubeError, Kind, Markings, Plane, Point, VertexConvention, VertexRule};
use crate::grid::{BendKind, BendPartition, GridDiagram, Mark, MarkingRef};

pub const DEFAULT_ALL_LIFTS_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("stack order is not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("stack order has length {got}, grid has size {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("bend {over} crosses over bend {under} but is stacked above it")]
    OrderViolation { over: usize, under: usize },
    #[error("grid size {n} exceeds the exhaustive lift limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("{0} is not a bad crossing of this embedding")]
    NotABadCrossing(BadCrossing),
    #[error("no rotated crossing repairs {0}")]
    NoRotationFound(BadCrossing),
    #[error(transparent)]
    Cube(#[from] CubeError),
}

/// zeta[k-1] is the bend (named by its row) placed on z-level k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackAssignment {
    zeta: Vec<usize>,
}

impl StackAssignment {
    pub fn new(zeta: Vec<usize>) -> Result<Self, LiftError> {
        let n = zeta.len();
        let mut seen = vec![false; n + 1];
        for &b in &zeta {
            if b == 0 || b > n || seen[b] {
                return Err(LiftError::NotAPermutation(n));
            }
            seen[b] = true;
        }
        Ok(StackAssignment { zeta })
    }

    pub fn identity(n: usize) -> Self {
        StackAssignment { zeta: (1..=n).collect() }
    }

    pub fn zeta(&self) -> &[usize] {
        &self.zeta
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    /// levels[bend] for bends 1..=n (index 0 unused).
    pub fn levels(&self) -> Vec<usize> {
        let mut h = vec![0; self.zeta.len() + 1];
        for (k, &b) in self.zeta.iter().enumerate() {
            h[b] = k + 1;
        }
        h
    }

    pub fn from_levels(levels: &[usize]) -> Result<Self, LiftError> {
        let n = levels.len();
        let mut zeta = vec![0; n];
        for (i, &l) in levels.iter().enumerate() {
            if l == 0 || l > n || zeta[l - 1] != 0 {
                return Err(LiftError::NotAPermutation(n));
            }
            zeta[l - 1] = i + 1;
        }
        Ok(StackAssignment { zeta })
    }
}

impl fmt::Display for StackAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.zeta.iter().map(|b| b.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BadCrossing {
    pub plane: Plane,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for BadCrossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} crossing at row {} col {}", self.plane, self.row, self.col)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BadCrossingReport {
    pub bad_yz: Vec<(usize, usize)>,
    pub bad_zx: Vec<(usize, usize)>,
}

impl BadCrossingReport {
    pub fn count(&self) -> usize {
        self.bad_yz.len() + self.bad_zx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// All bad crossings, ordered by (plane, row, col).
    pub fn crossings(&self) -> Vec<BadCrossing> {
        let yz = self.bad_yz.iter().map(|&(row, col)| BadCrossing { plane: Plane::YZ, row, col });
        let zx = self.bad_zx.iter().map(|&(row, col)| BadCrossing { plane: Plane::ZX, row, col });
        yz.chain(zx).collect()
    }

    pub fn contains(&self, c: BadCrossing) -> bool {
        match c.plane {
            Plane::YZ => self.bad_yz.contains(&(c.row, c.col)),
            Plane::ZX => self.bad_zx.contains(&(c.row, c.col)),
            Plane::XY => false,
        }
    }
}

/// Markings in the transposed vertex convention that satisfy the marking
/// conditions; the crossing conditions may fail in the yz and zx planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeEmbedding {
    markings: Markings,
    report: BadCrossingReport,
}

impl LatticeEmbedding {
    fn from_markings(markings: Markings) -> Self {
        let report = report_of(&markings);
        LatticeEmbedding { markings, report }
    }

    pub fn n(&self) -> usize {
        self.markings.n
    }

    pub fn markings(&self) -> &Markings {
        &self.markings
    }

    pub fn report(&self) -> &BadCrossingReport {
        &self.report
    }

    pub fn into_cube(self) -> Result<CubeDiagram, CubeError> {
        CubeDiagram::from_markings(self.markings, VertexRule::Transposed)
    }
}

fn report_of(m: &Markings) -> BadCrossingReport {
    let segs = m.segments(VertexConvention::Transposed);
    let bad = |plane| crossings_of(&segs, plane).into_iter().filter(|c| !c.satisfied).map(|c| (c.row, c.col)).collect();
    BadCrossingReport { bad_yz: bad(Plane::YZ), bad_zx: bad(Plane::ZX) }
}

pub fn check_crossing_conditions(e: &LatticeEmbedding) -> BadCrossingReport {
    report_of(&e.markings)
}

fn oriented(g: &GridDiagram, kind: BendKind) -> GridDiagram {
    match kind {
        BendKind::AtX => g.clone(),
        BendKind::AtO => g.swap_markings(),
    }
}

/// Places bend zeta[k] on z-level k. Bends at O are stacked as the bends at
/// X of the X/O-exchanged grid.
pub fn stack(g: &GridDiagram, p: &BendPartition, zeta: &StackAssignment) -> Result<LatticeEmbedding, LiftError> {
    let w = oriented(g, p.kind);
    let n = w.n();
    if zeta.len() != n {
        return Err(LiftError::SizeMismatch { expected: n, got: zeta.len() });
    }
    let h = zeta.levels();
    for c in w.crossings() {
        let over = w.x_row(c.col);
        if h[over] > h[c.row] {
            return Err(LiftError::OrderViolation { over, under: c.row });
        }
    }
    Ok(LatticeEmbedding::from_markings(stack_markings(&w, &h)))
}

fn stack_markings(w: &GridDiagram, h: &[usize]) -> Markings {
    let n = w.n();
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut zs = Vec::with_capacity(n);
    for i in 1..=n {
        let (xc, oc) = (w.x_col(i), w.o_col(i));
        zs.push([i, xc, h[i]]);
        ys.push([i, oc, h[i]]);
        xs.push([i, oc, h[w.x_row(oc)]]);
    }
    Markings { n, xs, ys, zs }
}

/// Ordering constraints on stacking bends at X: `before[a]` must precede,
/// and bend p must not lie strictly between the two bends of any of its
/// triples.
struct LiftConstraints {
    n: usize,
    succ: Vec<Vec<usize>>,
    indeg: Vec<usize>,
    triples: Vec<Vec<(usize, usize)>>,
}

impl LiftConstraints {
    fn new(g: &GridDiagram, with_triples: bool) -> Self {
        let n = g.n();
        let mut succ = vec![Vec::new(); n + 1];
        let mut indeg = vec![0; n + 1];
        let edges: BTreeSet<(usize, usize)> = g.crossings().iter().map(|c| (g.x_row(c.col), c.row)).collect();
        for &(a, b) in &edges {
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut triples = vec![Vec::new(); n + 1];
        if with_triples {
            // yz plane: a y-parallel arm of bend r over the z-parallel
            // connector ending at row r' < r.
            for (r, row_triples) in triples.iter_mut().enumerate().skip(1) {
                let (lo, hi) = span(g.o_col(r), g.x_col(r));
                for r2 in 1..r {
                    let o = g.o_col(r2);
                    if lo < o && o < hi {
                        row_triples.push((g.x_row(o), r2));
                    }
                }
            }
            // zx plane: the x-parallel arm of column c's bend against
            // connectors in rows strictly inside that column.
            for c in 1..=n {
                let p = g.x_row(c);
                let (lo, hi) = span(g.x_row(c), g.o_row(c));
                for r2 in lo + 1..hi {
                    let o = g.o_col(r2);
                    if o > c {
                        triples[p].push((g.x_row(o), r2));
                    }
                }
            }
        }
        LiftConstraints { n, succ, indeg, triples }
    }

    /// Depth-first over admissible stack orders, smallest bend first.
    /// `visit` returns false to stop; the result is false if stopped.
    fn walk(&self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let mut placed = vec![false; self.n + 1];
        let mut indeg = self.indeg.clone();
        let mut order = Vec::with_capacity(self.n);
        self.extend(&mut placed, &mut indeg, &mut order, visit)
    }

    fn extend(
        &self,
        placed: &mut [bool],
        indeg: &mut [usize],
        order: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if order.len() == self.n {
            return visit(order);
        }
        for b in 1..=self.n {
            if placed[b] || indeg[b] != 0 {
                continue;
            }
            if self.triples[b].iter().any(|&(q, s)| placed[q] != placed[s]) {
                continue;
            }
            placed[b] = true;
            order.push(b);
            for &t in &self.succ[b] {
                indeg[t] -= 1;
            }
            let go_on = self.extend(placed, indeg, order, visit);
            for &t in &self.succ[b] {
                indeg[t] += 1;
            }
            order.pop();
            placed[b] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

fn span(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Lexicographically smallest stack order giving a cube diagram.
pub fn find_lift_zeta(g: &GridDiagram) -> Option<StackAssignment> {
    let mut found = None;
    LiftConstraints::new(g, true).walk(&mut |order| {
        found = Some(StackAssignment { zeta: order.to_vec() });
        false
    });
    found
}

pub fn lifts(g: &GridDiagram) -> bool {
    find_lift_zeta(g).is_some()
}

pub fn find_lift(g: &GridDiagram) -> Option<CubeDiagram> {
    let zeta = find_lift_zeta(g)?;
    let e = stack(g, &g.bend_partition(BendKind::AtX), &zeta).expect("search respects the cross-over order");
    Some(e.into_cube().expect("search respects every crossing condition"))
}

pub fn all_lift_zetas(g: &GridDiagram) -> Vec<StackAssignment> {
    let mut out = Vec::new();
    LiftConstraints::new(g, true).walk(&mut |order| {
        out.push(StackAssignment { zeta: order.to_vec() });
        true
    });
    out
}

pub fn all_lifts(g: &GridDiagram) -> Result<Vec<CubeDiagram>, LiftError> {
    all_lifts_with_limit(g, DEFAULT_ALL_LIFTS_LIMIT)
}

/// Every lift, deduplicated by marking sets, in order of first stack order.
pub fn all_lifts_with_limit(g: &GridDiagram, limit: usize) -> Result<Vec<CubeDiagram>, LiftError> {
    if g.n() > limit {
        return Err(LiftError::SizeLimit { n: g.n(), limit });
    }
    let p = g.bend_partition(BendKind::AtX);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for zeta in all_lift_zetas(g) {
        let cube = stack(g, &p, &zeta)?.into_cube()?;
        if seen.insert(cube.normalized_marking_sets()) {
            out.push(cube);
        }
    }
    Ok(out)
}

/// Lexicographically smallest linear extension of the cross-over order of
/// the bends at X, or None if the order has a cycle.
pub fn smallest_linear_extension(g: &GridDiagram) -> Option<StackAssignment> {
    let c = LiftConstraints::new(g, false);
    let mut indeg = c.indeg.clone();
    let mut heap: BinaryHeap<Reverse<usize>> = (1..=c.n).filter(|&b| indeg[b] == 0).map(Reverse).collect();
    let mut zeta = Vec::with_capacity(c.n);
    while let Some(Reverse(b)) = heap.pop() {
        zeta.push(b);
        for &t in &c.succ[b] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                heap.push(Reverse(t));
            }
        }
    }
    (zeta.len() == c.n).then_some(StackAssignment { zeta })
}

type Spot = [i64; 3];

/// The cyclic symmetry (x, y, z) → (y, z, x) with X→Y→Z→X; it carries
/// zx crossings to yz crossings with the same (row, col).
fn rotate_markings(m: &Markings) -> Markings {
    let turn = |v: &[Point]| v.iter().map(|p| [p[1], p[2], p[0]]).collect::<Vec<_>>();
    Markings { n: m.n, xs: turn(&m.zs), ys: turn(&m.xs), zs: turn(&m.ys) }
}

fn unrotate_markings(m: &Markings) -> Markings {
    rotate_markings(&rotate_markings(m))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum KeepA {
    X,
    Y,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum KeepB {
    Y,
    Z,
}

struct Node {
    kind: Kind,
    pos: Spot,
}

struct Detour<'a> {
    nodes: Vec<Node>,
    next: Vec<usize>,
    prev: Vec<usize>,
    original: &'a Markings,
}

impl<'a> Detour<'a> {
    fn new(m: &'a Markings) -> Self {
        let mut nodes = Vec::with_capacity(3 * m.n);
        let mut index: HashMap<(Kind, Point), usize> = HashMap::new();
        for mk in m.all() {
            index.insert((mk.kind, mk.pos), nodes.len());
            let p = mk.pos.map(|c| 8 * c as i64);
            nodes.push(Node { kind: mk.kind, pos: p });
        }
        let mut next = vec![0; nodes.len()];
        let mut prev = vec![0; nodes.len()];
        for s in m.segments(VertexConvention::Transposed) {
            let a = index[&(s.from.kind, s.from.pos)];
            let b = index[&(s.to.kind, s.to.pos)];
            next[a] = b;
            prev[b] = a;
        }
        Detour { nodes, next, prev, original: m }
    }

    fn find(&self, kind: Kind, test: impl Fn(&Spot, &Spot) -> bool) -> Option<usize> {
        (0..self.nodes.len())
            .find(|&i| self.nodes[i].kind == kind && test(&self.nodes[i].pos, &self.nodes[self.next[i]].pos))
    }

    /// Inserts the detours for a yz crossing at scaled (row y0, col z0) and
    /// returns the re-ranked markings.
    fn apply(&self, at: (i64, i64), keep_a: KeepA, keep_b: KeepB, side_a: i64, side_b: i64) -> Option<Markings> {
        let (y0, z0) = at;
        let between = |v: i64, a: i64, b: i64| a.min(b) < v && v < a.max(b);
        // A: z-parallel X→Y at y = y0 spanning z0. B: y-parallel Y→Z at z = z0 spanning y0.
        let xa = self.find(Kind::X, |p, q| p[1] == y0 && q[1] == y0 && p[0] == q[0] && between(z0, p[2], q[2]))?;
        let ya = self.next[xa];
        let yb = self.find(Kind::Y, |p, q| p[2] == z0 && q[2] == z0 && p[0] == q[0] && between(y0, p[1], q[1]))?;
        let zb = self.next[yb];
        let (xt, xs) = (self.nodes[xa].pos[0], self.nodes[yb].pos[0]);
        let (z_x, z_y) = (self.nodes[xa].pos[2], self.nodes[ya].pos[2]);
        let (y_y, y_z) = (self.nodes[yb].pos[1], self.nodes[zb].pos[1]);

        let mut pos: Vec<Spot> = self.nodes.iter().map(|n| n.pos).collect();
        let mut added: Vec<(Kind, Spot)> = Vec::new();
        let delta = match keep_a {
            KeepA::X => (z_y - z_x).signum(),
            KeepA::Y => (z_x - z_y).signum(),
        };
        let eta = match keep_b {
            KeepB::Y => (y_y - y0).signum(),
            KeepB::Z => (y_z - y0).signum(),
        };
        let z1 = z0 + 2 * delta;
        let z2 = z0 + 4 * delta;
        let y2 = y0 + 2 * eta;
        let y1 = y0 + 4 * eta;
        let xa2 = xt + 3 * side_a;
        let xb2 = xs + 3 * side_b;

        match keep_a {
            KeepA::X => {
                let zt = self.next[ya];
                added.push((Kind::Y, [xt, y0, z1]));
                added.push((Kind::Z, [xt, y1, z1]));
                added.push((Kind::X, [xa2, y1, z1]));
                pos[ya][0] = xa2;
                pos[ya][1] = y1;
                pos[zt][0] = xa2;
            }
            KeepA::Y => {
                let zp = self.prev[xa];
                pos[xa][0] = xa2;
                pos[xa][1] = y1;
                pos[zp][1] = y1;
                added.push((Kind::Y, [xa2, y1, z1]));
                added.push((Kind::Z, [xa2, y0, z1]));
                added.push((Kind::X, [xt, y0, z1]));
            }
        }
        match keep_b {
            KeepB::Y => {
                let xn = self.next[zb];
                added.push((Kind::Z, [xs, y2, z0]));
                added.push((Kind::X, [xb2, y2, z0]));
                added.push((Kind::Y, [xb2, y2, z2]));
                pos[zb][0] = xb2;
                pos[zb][2] = z2;
                pos[xn][2] = z2;
            }
            KeepB::Z => {
                pos[yb][2] = z2;
                added.push((Kind::Z, [xs, y2, z2]));
                added.push((Kind::X, [xb2, y2, z2]));
                added.push((Kind::Y, [xb2, y2, z0]));
                pos[zb][0] = xb2;
            }
        }

        let all: Vec<(Kind, Spot)> = self.nodes.iter().zip(pos).map(|(n, p)| (n.kind, p)).chain(added).collect();
        let size = self.original.n + 2;
        let ranks: Vec<Vec<i64>> = (0..3)
            .map(|a| {
                let mut v: Vec<i64> = all.iter().map(|(_, p)| p[a]).collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        if ranks.iter().any(|r| r.len() != size) {
            return None;
        }
        let rank = |a: usize, v: i64| ranks[a].binary_search(&v).unwrap() + 1;
        let mut lists: [Vec<Point>; 3] = Default::default();
        for (kind, p) in &all {
            let q = [rank(0, p[0]), rank(1, p[1]), rank(2, p[2])];
            lists[kind.index()].push(q);
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        let [xs_, ys_, zs_] = lists;
        Markings::new(xs_, ys_, zs_).ok()
    }
}

/// Per-plane (total, bad) crossing counts and the component count.
fn profile(m: &Markings) -> Option<([(usize, usize); 3], usize)> {
    let (violations, conv) = m.marking_violations(VertexRule::Transposed).ok()?;
    if !violations.is_empty() || conv.is_none() {
        return None;
    }
    let segs = m.segments(VertexConvention::Transposed);
    if segs.len() != 3 * m.n {
        return None;
    }
    let mut counts = [(0, 0); 3];
    for (k, plane) in Plane::ALL.into_iter().enumerate() {
        let cs = crossings_of(&segs, plane);
        counts[k] = (cs.len(), cs.iter().filter(|c| !c.satisfied).count());
    }
    let mut next: HashMap<(Kind, Point), (Kind, Point)> = HashMap::new();
    for s in &segs {
        next.insert((s.from.kind, s.from.pos), (s.to.kind, s.to.pos));
    }
    let mut seen = std::collections::HashSet::new();
    let mut comps = 0;
    for s in &segs {
        let mut cur = (s.from.kind, s.from.pos);
        if seen.contains(&cur) {
            continue;
        }
        comps += 1;
        while seen.insert(cur) {
            cur = next[&cur];
        }
    }
    Some((counts, comps))
}

fn fix_yz(m: &Markings, row: usize, col: usize) -> Option<Markings> {
    let (before, comps) = profile(m)?;
    let detour = Detour::new(m);
    let at = (8 * row as i64, 8 * col as i64);
    for keep_a in [KeepA::X, KeepA::Y] {
        for keep_b in [KeepB::Y, KeepB::Z] {
            for side_a in [1, -1] {
                for side_b in [1, -1] {
                    let Some(out) = detour.apply(at, keep_a, keep_b, side_a, side_b) else { continue };
                    let Some((after, comps_after)) = profile(&out) else { continue };
                    let plane_ok = |k: usize| {
                        let drop = if k == 1 { 1 } else { 0 };
                        after[k].0 == before[k].0 && after[k].1 + drop == before[k].1
                    };
                    if comps_after == comps && (0..3).all(plane_ok) {
                        return Some(out);
                    }
                }
            }
        }
    }
    None
}

/// Repairs one bad crossing with a rotated crossing; the result has size n+2
/// and exactly one fewer bad crossing.
pub fn fix_bad_crossing(e: &LatticeEmbedding, crossing: BadCrossing) -> Result<LatticeEmbedding, LiftError> {
    if !e.report.contains(crossing) {
        return Err(LiftError::NotABadCrossing(crossing));
    }
    let fixed = match crossing.plane {
        Plane::YZ => fix_yz(&e.markings, crossing.row, crossing.col),
        Plane::ZX => fix_yz(&rotate_markings(&e.markings), crossing.row, crossing.col).map(|m| unrotate_markings(&m)),
        Plane::XY => None,
    };
    let fixed = fixed.ok_or(LiftError::NoRotationFound(crossing))?;
    Ok(LatticeEmbedding::from_markings(fixed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Direct,
    Constructive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SizeReport {
    pub n: usize,
    pub twisted: usize,
    pub bad: usize,
    pub final_size: usize,
    pub branch: Branch,
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let branch = match self.branch {
            Branch::Direct => "direct",
            Branch::Constructive => "constructive",
        };
        write!(f, "n={} twisted={} bad={} final={} branch={}", self.n, self.twisted, self.bad, self.final_size, branch)
    }
}

/// Always produces a cube: a same-size lift when one exists, otherwise
/// stabilizes twisted bends, stacks, and repairs every bad crossing.
pub fn grid_to_cube(g: &GridDiagram) -> Result<(CubeDiagram, SizeReport), LiftError> {
    let n = g.n();
    if let Some(cube) = find_lift(g) {
        return Ok((cube, SizeReport { n, twisted: 0, bad: 0, final_size: n, branch: Branch::Direct }));
    }
    let at_x = g.twisted_bends(&g.bend_partition(BendKind::AtX)).len();
    let at_o = g.twisted_bends(&g.bend_partition(BendKind::AtO)).len();
    let kind = if at_o < at_x { BendKind::AtO } else { BendKind::AtX };
    let mut w = oriented(g, kind);
    let mut twisted = 0;
    loop {
        let t = w.twisted_bends(&w.bend_partition(BendKind::AtX));
        let Some(first) = t.first() else { break };
        w = w.stabilize_at(MarkingRef { mark: Mark::X, row: first.vertex.row }).expect("bend rows are in range");
        twisted += 1;
    }
    let zeta = smallest_linear_extension(&w).expect("an untwisted grid has an acyclic cross-over order");
    let mut e = stack(&w, &w.bend_partition(BendKind::AtX), &zeta)?;
    let bad = e.report.count();
    while let Some(&c) = e.report.crossings().first() {
        e = fix_bad_crossing(&e, c)?;
    }
    let final_size = e.n();
    let cube = e.into_cube()?;
    Ok((cube, SizeReport { n, twisted, bad, final_size, branch: Branch::Constructive }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::parse_cube_text;

    fn trefoil_grid() -> GridDiagram {
        GridDiagram::new(vec![2, 3, 4, 5, 1], vec![5, 1, 2, 3, 4]).unwrap()
    }

    const K3_1: &str = "{X[{1, 5, 4}, {4, 3, 2}, {5, 4, 3}, {2, 1, 5}, {3, 2, 1}], \
        Y[{1, 5, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5}], \
        Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 5, 4}, {5, 1, 5}]}";

    #[test]
    fn replaying_the_trefoil_cube() {
        let (_, m) = parse_cube_text(K3_1).unwrap();
        // Z marking in row i sits on the level of bend i.
        let mut levels = vec![0; 5];
        for z in &m.zs {
            levels[z[0] - 1] = z[2];
        }
        let zeta = StackAssignment::from_levels(&levels).unwrap();
        let g = trefoil_grid();
        let e = stack(&g, &g.bend_partition(BendKind::AtX), &zeta).unwrap();
        assert!(e.report().is_empty());
        let mut want = m.clone();
        for v in [&mut want.xs, &mut want.ys, &mut want.zs] {
            v.sort_unstable();
        }
        let mut got = e.markings().clone();
        for v in [&mut got.xs, &mut got.ys, &mut got.zs] {
            v.sort_unstable();
        }
        assert_eq!(got, want);
        let reversed = StackAssignment::new(zeta.zeta().iter().rev().copied().collect()).unwrap();
        assert!(matches!(
            stack(&g, &g.bend_partition(BendKind::AtX), &reversed),
            Err(LiftError::OrderViolation { .. })
        ));
    }

    #[test]
    fn unknot_lifts_both_ways() {
        let g = GridDiagram::new(vec![2, 1], vec![1, 2]).unwrap();
        let p = g.bend_partition(BendKind::AtX);
        for z in [vec![1, 2], vec![2, 1]] {
            let e = stack(&g, &p, &StackAssignment::new(z).unwrap()).unwrap();
            assert!(check_crossing_conditions(&e).is_empty());
        }
        assert_eq!(all_lift_zetas(&g).len(), 2);
        assert!(!all_lifts(&g).unwrap().is_empty());
    }

    #[test]
    fn trefoil_lifts_directly() {
        let g = trefoil_grid();
        let cube = find_lift(&g).unwrap();
        assert_eq!(cube.project(Plane::XY), g);
        let (_, report) = grid_to_cube(&g).unwrap();
        assert_eq!(report.to_string(), "n=5 twisted=0 bad=0 final=5 branch=direct");
    }

    #[test]
    fn stack_assignment_checks() {
        assert!(StackAssignment::new(vec![1, 1]).is_err());
        assert!(StackAssignment::from_levels(&[2, 2]).is_err());
        let z = StackAssignment::new(vec![3, 1, 2]).unwrap();
        assert_eq!(z.levels(), vec![0, 2, 3, 1]);
        assert_eq!(StackAssignment::from_levels(&[2, 3, 1]).unwrap(), z);
        assert_eq!(z.to_string(), "[3,1,2]");
    }

    #[test]
    fn rotation_round_trip() {
        let (_, m) = parse_cube_text(K3_1).unwrap();
        assert_eq!(unrotate_markings(&rotate_markings(&m)), m);
    }
}
