//! Grid diagrams: X/O markings on an n×n board, one of each per row and column.
//!
//! Rows and columns are 1-indexed at every public boundary. Columns run from
//! X to O, rows from O to X, and the vertical strand is always over.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    X,
    O,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mark::X => write!(f, "X"),
            Mark::O => write!(f, "O"),
        }
    }
}

/// A marking named by its kind and row (each row holds one of each kind).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkingRef {
    pub mark: Mark,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("marking vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("{0} columns are not a permutation of 1..={1}")]
    NotAPermutation(Mark, usize),
    #[error("row {0} places X and O in the same cell")]
    SharedCell(usize),
    #[error("grid size {0} is too small (need at least 2)")]
    TooSmall(usize),
    #[error("row {0} is outside the grid")]
    InvalidVertex(usize),
    #[error("grid sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("grid syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    x_col: Vec<usize>,
    o_col: Vec<usize>,
    x_row: Vec<usize>,
    o_row: Vec<usize>,
}

/// A row or column segment of a grid, named by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Row(usize),
    Col(usize),
}

/// Transversal intersection of row `row`'s segment with column `col`'s segment.
/// The column segment is over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCrossing {
    pub row: usize,
    pub col: usize,
}

impl GridCrossing {
    pub fn over_segment(&self) -> Segment {
        Segment::Col(self.col)
    }

    pub fn under_segment(&self) -> Segment {
        Segment::Row(self.row)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BendKind {
    AtX,
    AtO,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bend {
    pub vertex: MarkingRef,
    pub arm_row: usize,
    pub arm_col: usize,
}

/// The n bends anchored at one kind of marking; bend k (1-indexed) has its
/// vertex in row k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BendPartition {
    pub kind: BendKind,
    pub bends: Vec<Bend>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossOverRelation {
    /// (a, b) with 1-indexed bends: some segment of a crosses over some segment of b.
    pub edges: BTreeSet<(usize, usize)>,
    pub acyclic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    Commutation,
    CyclicPermutation,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Each cycle lists markings in traversal order: X, then the O reached
    /// down its column, then the X reached along that O's row, and so on.
    pub cycles: Vec<Vec<MarkingRef>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &c) in perm.iter().enumerate() {
        inv[c - 1] = i + 1;
    }
    inv
}

fn is_permutation(v: &[usize]) -> bool {
    let n = v.len();
    let mut seen = vec![false; n];
    for &c in v {
        if c == 0 || c > n || seen[c - 1] {
            return false;
        }
        seen[c - 1] = true;
    }
    true
}

fn span(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl GridDiagram {
    /// Validates and builds a grid from the X and O column of each row.
    pub fn new(x_col: Vec<usize>, o_col: Vec<usize>) -> Result<Self, GridError> {
        if x_col.len() != o_col.len() {
            return Err(GridError::LengthMismatch(x_col.len(), o_col.len()));
        }
        let n = x_col.len();
        if !is_permutation(&x_col) {
            return Err(GridError::NotAPermutation(Mark::X, n));
        }
        if !is_permutation(&o_col) {
            return Err(GridError::NotAPermutation(Mark::O, n));
        }
        if let Some(i) = (0..n).find(|&i| x_col[i] == o_col[i]) {
            return Err(GridError::SharedCell(i + 1));
        }
        if n < 2 {
            return Err(GridError::TooSmall(n));
        }
        Ok(Self::from_valid(x_col, o_col))
    }

    /// Caller guarantees the invariants (used by enumeration hot loops).
    pub(crate) fn from_valid(x_col: Vec<usize>, o_col: Vec<usize>) -> Self {
        let x_row = inverse(&x_col);
        let o_row = inverse(&o_col);
        GridDiagram { x_col, o_col, x_row, o_row }
    }

    pub fn n(&self) -> usize {
        self.x_col.len()
    }

    pub fn x_cols(&self) -> &[usize] {
        &self.x_col
    }

    pub fn o_cols(&self) -> &[usize] {
        &self.o_col
    }

    /// Column of the X marking in `row`.
    pub fn x_col(&self, row: usize) -> usize {
        self.x_col[row - 1]
    }

    pub fn o_col(&self, row: usize) -> usize {
        self.o_col[row - 1]
    }

    /// Row of the X marking in `col`.
    pub fn x_row(&self, col: usize) -> usize {
        self.x_row[col - 1]
    }

    pub fn o_row(&self, col: usize) -> usize {
        self.o_row[col - 1]
    }

    pub fn row_span(&self, row: usize) -> (usize, usize) {
        span(self.x_col(row), self.o_col(row))
    }

    pub fn col_span(&self, col: usize) -> (usize, usize) {
        span(self.x_row(col), self.o_row(col))
    }

    /// Exchanges the X and O markings (reverses every component's orientation).
    pub fn swap_markings(&self) -> GridDiagram {
        GridDiagram {
            x_col: self.o_col.clone(),
            o_col: self.x_col.clone(),
            x_row: self.o_row.clone(),
            o_row: self.x_row.clone(),
        }
    }

    /// Reflects the board top to bottom, which mirrors the link.
    pub fn mirror(&self) -> GridDiagram {
        let x: Vec<usize> = self.x_col.iter().rev().copied().collect();
        let o: Vec<usize> = self.o_col.iter().rev().copied().collect();
        GridDiagram::from_valid(x, o)
    }

    /// Relabels columns by `map` (old column c moves to column map[c-1]).
    pub fn permute_columns(&self, map: &[usize]) -> GridDiagram {
        let x = self.x_col.iter().map(|&c| map[c - 1]).collect();
        let o = self.o_col.iter().map(|&c| map[c - 1]).collect();
        GridDiagram::from_valid(x, o)
    }

    fn crosses(&self, row: usize, col: usize) -> bool {
        let (c0, c1) = self.row_span(row);
        let (r0, r1) = self.col_span(col);
        c0 < col && col < c1 && r0 < row && row < r1
    }

    /// All crossings in row-major order.
    pub fn crossings(&self) -> Vec<GridCrossing> {
        let n = self.n();
        let mut out = Vec::new();
        for row in 1..=n {
            let (c0, c1) = self.row_span(row);
            for col in c0 + 1..c1 {
                let (r0, r1) = self.col_span(col);
                if r0 < row && row < r1 {
                    out.push(GridCrossing { row, col });
                }
            }
        }
        out
    }

    pub fn crossing_count(&self) -> usize {
        let n = self.n();
        (1..=n)
            .map(|row| {
                let (c0, c1) = self.row_span(row);
                (c0 + 1..c1).filter(|&col| self.crosses(row, col)).count()
            })
            .sum()
    }

    pub fn trace_components(&self) -> Components {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut row = start;
            while !seen[row - 1] {
                seen[row - 1] = true;
                cycle.push(MarkingRef { mark: Mark::X, row });
                let next = self.o_row(self.x_col(row));
                cycle.push(MarkingRef { mark: Mark::O, row: next });
                row = next;
            }
            cycles.push(cycle);
        }
        Components { cycles }
    }

    /// Number of link components, without building the cycles.
    pub fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut r = start;
            while !seen[r] {
                seen[r] = true;
                r = self.o_row[self.x_col[r] - 1] - 1;
            }
        }
        count
    }

    pub fn bend_partition(&self, kind: BendKind) -> BendPartition {
        let bends = (1..=self.n())
            .map(|row| {
                let (mark, col) = match kind {
                    BendKind::AtX => (Mark::X, self.x_col(row)),
                    BendKind::AtO => (Mark::O, self.o_col(row)),
                };
                Bend { vertex: MarkingRef { mark, row }, arm_row: row, arm_col: col }
            })
            .collect();
        BendPartition { kind, bends }
    }

    /// Bends that cross over some segment and under another. Row arms are
    /// always under and column arms always over, so a bend is twisted exactly
    /// when both of its arms carry a crossing.
    pub fn twisted_bends(&self, p: &BendPartition) -> Vec<Bend> {
        let n = self.n();
        let mut row_hits = vec![false; n + 1];
        let mut col_hits = vec![false; n + 1];
        for c in self.crossings() {
            row_hits[c.row] = true;
            col_hits[c.col] = true;
        }
        p.bends.iter().filter(|b| row_hits[b.arm_row] && col_hits[b.arm_col]).copied().collect()
    }

    /// Bend (1-indexed) owning column `col` in the given partition.
    pub fn column_owner(&self, kind: BendKind, col: usize) -> usize {
        match kind {
            BendKind::AtX => self.x_row(col),
            BendKind::AtO => self.o_row(col),
        }
    }

    pub fn cross_over_relation(&self, p: &BendPartition) -> CrossOverRelation {
        let edges: BTreeSet<(usize, usize)> =
            self.crossings().into_iter().map(|c| (self.column_owner(p.kind, c.col), c.row)).collect();
        let acyclic = is_acyclic(self.n(), &edges);
        CrossOverRelation { edges, acyclic }
    }

    /// Stabilizes at a marking: the marking is replaced by an L-shaped block of
    /// three markings in a new row and column, splitting its bend in two.
    pub fn stabilize_at(&self, vertex: MarkingRef) -> Result<GridDiagram, GridError> {
        if vertex.row == 0 || vertex.row > self.n() {
            return Err(GridError::InvalidVertex(vertex.row));
        }
        match vertex.mark {
            Mark::X => Ok(self.stabilize_x(vertex.row)),
            Mark::O => Ok(self.swap_markings().stabilize_x(vertex.row).swap_markings()),
        }
    }

    fn stabilize_x(&self, row: usize) -> GridDiagram {
        let n = self.n();
        let col = self.x_col(row);
        let o_in_row = self.o_col(row);
        let o_in_col = self.o_row(col);
        // Doubled coordinates leave odd slots for the new row and column.
        let new_row = if o_in_col > row { 2 * row + 1 } else { 2 * row - 1 };
        let new_col = if o_in_row > col { 2 * col + 1 } else { 2 * col - 1 };
        let mut xs: Vec<(usize, usize)> = Vec::with_capacity(n + 1);
        let mut os: Vec<(usize, usize)> = Vec::with_capacity(n + 1);
        for r in 1..=n {
            let xc = if r == row { new_col } else { 2 * self.x_col(r) };
            xs.push((2 * r, xc));
            os.push((2 * r, 2 * self.o_col(r)));
        }
        xs.push((new_row, 2 * col));
        os.push((new_row, new_col));
        // Odd slots rank between their even neighbours.
        let row_rank = |r: usize| -> usize {
            let base = r.div_ceil(2);
            if r % 2 == 1 {
                base
            } else if r > new_row {
                base + 1
            } else {
                base
            }
        };
        let col_rank = |c: usize| -> usize {
            let base = c.div_ceil(2);
            if c % 2 == 1 {
                base
            } else if c > new_col {
                base + 1
            } else {
                base
            }
        };
        let mut x = vec![0; n + 1];
        let mut o = vec![0; n + 1];
        for &(r, c) in &xs {
            x[row_rank(r) - 1] = col_rank(c);
        }
        for &(r, c) in &os {
            o[row_rank(r) - 1] = col_rank(c);
        }
        GridDiagram::from_valid(x, o)
    }

    /// Classifies how `other` arises from `self` by a column move.
    pub fn transition_kind(&self, other: &GridDiagram) -> Result<TransitionKind, GridError> {
        if self.n() != other.n() {
            return Err(GridError::SizeMismatch(self.n(), other.n()));
        }
        if self == other {
            return Ok(TransitionKind::Other);
        }
        if let Some(col) = self.swapped_adjacent_columns(other) {
            let (a0, a1) = self.col_span(col);
            let (b0, b1) = self.col_span(col + 1);
            let interleaved = (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1);
            if !interleaved {
                return Ok(TransitionKind::Commutation);
            }
        }
        if self.is_cyclic_shift_of(other) {
            return Ok(TransitionKind::CyclicPermutation);
        }
        Ok(TransitionKind::Other)
    }

    fn swapped_adjacent_columns(&self, other: &GridDiagram) -> Option<usize> {
        let n = self.n();
        let mut col = None;
        for i in 0..n {
            for (a, b) in [(self.x_col[i], other.x_col[i]), (self.o_col[i], other.o_col[i])] {
                if a == b {
                    continue;
                }
                let lo = a.min(b);
                if a.abs_diff(b) != 1 || col.is_some_and(|c| c != lo) {
                    return None;
                }
                col = Some(lo);
            }
        }
        col
    }

    fn is_cyclic_shift_of(&self, other: &GridDiagram) -> bool {
        let n = self.n();
        let shift = (other.x_col[0] + n - self.x_col[0]) % n;
        if shift == 0 {
            return false;
        }
        let moved = |c: usize| (c - 1 + shift) % n + 1;
        (0..n).all(|i| moved(self.x_col[i]) == other.x_col[i] && moved(self.o_col[i]) == other.o_col[i])
    }
}

impl GridDiagram {
    /// Text picture with row 1 on top: markings, `-` and `|` for segments,
    /// `|` again where a column passes over a row, `.` for empty cells.
    pub fn render_ascii(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        for row in 1..=n {
            let (c0, c1) = self.row_span(row);
            let mut line = String::with_capacity(2 * n);
            for col in 1..=n {
                let (r0, r1) = self.col_span(col);
                let ch = if self.x_col(row) == col {
                    'X'
                } else if self.o_col(row) == col {
                    'O'
                } else if r0 < row && row < r1 {
                    '|'
                } else if c0 < col && col < c1 {
                    '-'
                } else {
                    '.'
                };
                line.push(ch);
                if col < n {
                    line.push(if c0 <= col && col < c1 { '-' } else { ' ' });
                }
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Kahn's algorithm over vertices 1..=n.
pub(crate) fn is_acyclic(n: usize, edges: &BTreeSet<(usize, usize)>) -> bool {
    let mut indeg = vec![0usize; n + 1];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(a, b) in edges {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut stack: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

fn write_list(f: &mut fmt::Formatter<'_>, v: &[usize]) -> fmt::Result {
    write!(f, "{{")?;
    for (i, c) in v.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X=")?;
        write_list(f, &self.x_col)?;
        write!(f, " O=")?;
        write_list(f, &self.o_col)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> GridError {
        GridError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<(), GridError> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize, GridError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| GridError::Syntax { pos: start, msg: "number too large".into() })
    }

    fn list(&mut self) -> Result<Vec<usize>, GridError> {
        self.expect(b'{')?;
        let mut v = vec![self.number()?];
        loop {
            self.skip_ws();
            match self.s.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                    v.push(self.number()?);
                }
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(v);
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
    }
}

impl FromStr for GridDiagram {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, GridError> {
        let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
        cur.expect(b'X')?;
        cur.expect(b'=')?;
        let x = cur.list()?;
        cur.expect(b'O')?;
        cur.expect(b'=')?;
        let o = cur.list()?;
        cur.skip_ws();
        if cur.pos != cur.s.len() {
            return Err(cur.err("trailing input"));
        }
        GridDiagram::new(x, o)
    }
}
