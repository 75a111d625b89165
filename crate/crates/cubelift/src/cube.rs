//! Cube diagrams: X, Y, Z markings in an n×n×n lattice with one marking of
//! each kind per flat, right angles in every flat, and the three crossing
//! conditions.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::grid::GridDiagram;

pub type Point = [usize; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    X,
    Y,
    Z,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::X, Kind::Y, Kind::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Orientation successor: X→Y→Z→X.
    pub fn next(self) -> Kind {
        match self {
            Kind::X => Kind::Y,
            Kind::Y => Kind::Z,
            Kind::Z => Kind::X,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ["X", "Y", "Z"][self.index()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", ["x", "y", "z"][self.index()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Plane {
    XY,
    YZ,
    ZX,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::XY, Plane::YZ, Plane::ZX];

    /// (row axis, column axis, dropped axis).
    pub fn axes(self) -> (usize, usize, usize) {
        match self {
            Plane::XY => (0, 1, 2),
            Plane::YZ => (1, 2, 0),
            Plane::ZX => (2, 0, 1),
        }
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Plane::XY => "xy",
            Plane::YZ => "yz",
            Plane::ZX => "zx",
        };
        write!(f, "{s}")
    }
}

/// Which marking kind sits at the right-angle vertex of each flat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexConvention {
    /// x-flat: X, y-flat: Y, z-flat: Z.
    Text,
    /// x-flat: Y, y-flat: X, z-flat: Z.
    Transposed,
}

impl VertexConvention {
    pub fn vertex(self, flat_axis: Axis) -> Kind {
        match (self, flat_axis) {
            (VertexConvention::Text, Axis::X) | (VertexConvention::Transposed, Axis::Y) => Kind::X,
            (VertexConvention::Text, Axis::Y) | (VertexConvention::Transposed, Axis::X) => Kind::Y,
            (_, Axis::Z) => Kind::Z,
        }
    }

    /// Axis along which a segment leaving a marking of `kind` runs.
    pub fn segment_axis(self, kind: Kind) -> Axis {
        match (self, kind) {
            (_, Kind::X) => Axis::Z,
            (VertexConvention::Transposed, Kind::Y) | (VertexConvention::Text, Kind::Z) => Axis::Y,
            (VertexConvention::Text, Kind::Y) | (VertexConvention::Transposed, Kind::Z) => Axis::X,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VertexRule {
    /// Either convention, applied uniformly to the whole cube.
    #[default]
    Either,
    Text,
    Transposed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MarkingTriple {
    pub kind: Kind,
    pub pos: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrientedSegment {
    pub from: MarkingTriple,
    pub to: MarkingTriple,
    pub axis: Axis,
}

impl OrientedSegment {
    /// (low, high) coordinate along the segment's axis.
    pub fn range(&self) -> (usize, usize) {
        let a = self.axis.index();
        let (p, q) = (self.from.pos[a], self.to.pos[a]);
        (p.min(q), p.max(q))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeBend {
    pub flat_axis: Axis,
    pub level: usize,
    pub seg_a: OrientedSegment,
    pub seg_b: OrientedSegment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    FlatCount { axis: Axis, level: usize, kind: Kind, count: usize },
    RightAngle { axis: Axis, level: usize },
    VertexKind { axis: Axis, level: usize, found: Kind, expected: Kind },
    CrossingXY { row: usize, col: usize },
    CrossingYZ { row: usize, col: usize },
    CrossingZX { row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::FlatCount { axis, level, kind, count } => {
                write!(f, "FlatCount {axis}-flat {level}: {count} {kind} markings")
            }
            Violation::RightAngle { axis, level } => write!(f, "RightAngle {axis}-flat {level}"),
            Violation::VertexKind { axis, level, found, expected } => {
                write!(f, "VertexKind {axis}-flat {level}: vertex {found}, expected {expected}")
            }
            Violation::CrossingXY { row, col } => write!(f, "CrossingXY at row {row} col {col}"),
            Violation::CrossingYZ { row, col } => write!(f, "CrossingYZ at row {row} col {col}"),
            Violation::CrossingZX { row, col } => write!(f, "CrossingZX at row {row} col {col}"),
        }
    }
}

impl Violation {
    fn crossing(plane: Plane, row: usize, col: usize) -> Violation {
        match plane {
            Plane::XY => Violation::CrossingXY { row, col },
            Plane::YZ => Violation::CrossingYZ { row, col },
            Plane::ZX => Violation::CrossingZX { row, col },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("{} violation(s): {}", .0.len(), .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("cube syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("marking lists differ in length (X {x}, Y {y}, Z {z})")]
    LengthMismatch { x: usize, y: usize, z: usize },
}

/// Marking lists that have not been validated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Markings {
    pub n: usize,
    pub xs: Vec<Point>,
    pub ys: Vec<Point>,
    pub zs: Vec<Point>,
}

/// A projected crossing in a plane's grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlaneCrossing {
    pub plane: Plane,
    pub row: usize,
    pub col: usize,
    /// The column segment (the one that must be nearer) really is nearer.
    pub satisfied: bool,
}

impl Markings {
    pub fn new(xs: Vec<Point>, ys: Vec<Point>, zs: Vec<Point>) -> Result<Self, CubeError> {
        if xs.len() != ys.len() || ys.len() != zs.len() {
            return Err(CubeError::LengthMismatch { x: xs.len(), y: ys.len(), z: zs.len() });
        }
        Ok(Markings { n: xs.len(), xs, ys, zs })
    }

    pub fn of_kind(&self, kind: Kind) -> &[Point] {
        match kind {
            Kind::X => &self.xs,
            Kind::Y => &self.ys,
            Kind::Z => &self.zs,
        }
    }

    pub fn all(&self) -> impl Iterator<Item = MarkingTriple> + '_ {
        Kind::ALL
            .into_iter()
            .flat_map(move |kind| self.of_kind(kind).iter().map(move |&pos| MarkingTriple { kind, pos }))
    }

    fn check_range(&self) -> Result<(), CubeError> {
        if self.n == 0 {
            return Err(CubeError::MalformedInput("empty marking lists".into()));
        }
        for m in self.all() {
            if m.pos.iter().any(|&c| c == 0 || c > self.n) {
                return Err(CubeError::MalformedInput(format!(
                    "{} marking {{{}, {}, {}}} outside 1..={}",
                    m.kind, m.pos[0], m.pos[1], m.pos[2], self.n
                )));
            }
        }
        Ok(())
    }

    /// Flat-count, right-angle and vertex-kind violations. Returns the
    /// convention in force when the marking conditions hold.
    pub fn marking_violations(
        &self,
        rule: VertexRule,
    ) -> Result<(Vec<Violation>, Option<VertexConvention>), CubeError> {
        self.check_range()?;
        let n = self.n;
        let mut out = Vec::new();
        // flats[axis][level] = [index per kind] when counts are exactly one.
        let mut members: Vec<Vec<[Vec<Point>; 3]>> = vec![vec![Default::default(); n + 1]; 3];
        for m in self.all() {
            for axis in 0..3 {
                members[axis][m.pos[axis]][m.kind.index()].push(m.pos);
            }
        }
        let mut vertices: Vec<(Axis, usize, Kind)> = Vec::new();
        for axis in Axis::ALL {
            for (level, flat) in members[axis.index()].iter().enumerate().skip(1) {
                let mut counts_ok = true;
                for kind in Kind::ALL {
                    let count = flat[kind.index()].len();
                    if count != 1 {
                        counts_ok = false;
                        out.push(Violation::FlatCount { axis, level, kind, count });
                    }
                }
                if !counts_ok {
                    continue;
                }
                let pts = [flat[0][0], flat[1][0], flat[2][0]];
                match right_angle_vertex(&pts) {
                    Some(v) => vertices.push((axis, level, Kind::ALL[v])),
                    None => out.push(Violation::RightAngle { axis, level }),
                }
            }
        }
        let convention = match rule {
            VertexRule::Text => Some(VertexConvention::Text),
            VertexRule::Transposed => Some(VertexConvention::Transposed),
            VertexRule::Either => vertices.iter().find(|v| v.0 == Axis::X).map(|v| match v.2 {
                Kind::X => VertexConvention::Text,
                _ => VertexConvention::Transposed,
            }),
        };
        let convention = convention.unwrap_or(VertexConvention::Transposed);
        for &(axis, level, found) in &vertices {
            let expected = convention.vertex(axis);
            if found != expected {
                out.push(Violation::VertexKind { axis, level, found, expected });
            }
        }
        let ok = out.is_empty();
        Ok((out, ok.then_some(convention)))
    }

    /// Successor marking of each marking (requires valid marking conditions).
    fn successor_index(&self, conv: VertexConvention) -> HashMap<(Kind, [usize; 3]), Point> {
        let mut by_key: HashMap<(Kind, [usize; 3]), Point> = HashMap::new();
        for m in self.all() {
            // Key the marking under its predecessor's segment axis.
            let prev_kind = match m.kind {
                Kind::X => Kind::Z,
                Kind::Y => Kind::X,
                Kind::Z => Kind::Y,
            };
            let axis = conv.segment_axis(prev_kind).index();
            let mut key = m.pos;
            key[axis] = 0;
            by_key.insert((m.kind, key), m.pos);
        }
        by_key
    }

    /// The 3n oriented segments, one leaving each marking.
    pub fn segments(&self, conv: VertexConvention) -> Vec<OrientedSegment> {
        let index = self.successor_index(conv);
        self.all()
            .filter_map(|m| {
                let axis = conv.segment_axis(m.kind);
                let mut key = m.pos;
                key[axis.index()] = 0;
                let next = m.kind.next();
                index.get(&(next, key)).map(|&pos| OrientedSegment {
                    from: m,
                    to: MarkingTriple { kind: next, pos },
                    axis,
                })
            })
            .collect()
    }

    pub fn plane_crossings(&self, conv: VertexConvention, plane: Plane) -> Vec<PlaneCrossing> {
        crossings_of(&self.segments(conv), plane)
    }
}

/// Crossings of one plane from a segment list. Row segments run along the
/// column axis; the column segment must have the smaller depth.
pub fn crossings_of(segments: &[OrientedSegment], plane: Plane) -> Vec<PlaneCrossing> {
    let (ra, ca, da) = plane.axes();
    let rows: Vec<&OrientedSegment> = segments.iter().filter(|s| s.axis.index() == ca).collect();
    let cols: Vec<&OrientedSegment> = segments.iter().filter(|s| s.axis.index() == ra).collect();
    let mut out = Vec::new();
    for r in &rows {
        let row = r.from.pos[ra];
        let (c0, c1) = r.range();
        for c in &cols {
            let col = c.from.pos[ca];
            let (r0, r1) = c.range();
            if c0 < col && col < c1 && r0 < row && row < r1 {
                out.push(PlaneCrossing { plane, row, col, satisfied: c.from.pos[da] < r.from.pos[da] });
            }
        }
    }
    out.sort_by_key(|c| (c.row, c.col));
    out
}

/// Index of the marking at which the other two meet at a right angle.
fn right_angle_vertex(pts: &[Point; 3]) -> Option<usize> {
    let shared = |a: &Point, b: &Point| (0..3).filter(|&i| a[i] == b[i]).count();
    let diff_axis = |a: &Point, b: &Point| (0..3).find(|&i| a[i] != b[i]);
    (0..3).find(|&v| {
        let (a, b) = ((v + 1) % 3, (v + 2) % 3);
        shared(&pts[v], &pts[a]) == 2
            && shared(&pts[v], &pts[b]) == 2
            && diff_axis(&pts[v], &pts[a]) != diff_axis(&pts[v], &pts[b])
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeDiagram {
    markings: Markings,
    convention: VertexConvention,
}

pub fn validate_cube(n: usize, xs: Vec<Point>, ys: Vec<Point>, zs: Vec<Point>) -> Result<CubeDiagram, CubeError> {
    validate_cube_with(n, xs, ys, zs, VertexRule::Either)
}

pub fn validate_cube_with(
    n: usize,
    xs: Vec<Point>,
    ys: Vec<Point>,
    zs: Vec<Point>,
    rule: VertexRule,
) -> Result<CubeDiagram, CubeError> {
    let m = Markings::new(xs, ys, zs)?;
    if m.n != n {
        return Err(CubeError::MalformedInput(format!("expected {n} markings per kind, found {}", m.n)));
    }
    CubeDiagram::from_markings(m, rule)
}

impl CubeDiagram {
    pub fn from_markings(m: Markings, rule: VertexRule) -> Result<CubeDiagram, CubeError> {
        let (mut violations, conv) = m.marking_violations(rule)?;
        if let Some(conv) = conv {
            let segs = m.segments(conv);
            for plane in Plane::ALL {
                for c in crossings_of(&segs, plane) {
                    if !c.satisfied {
                        violations.push(Violation::crossing(plane, c.row, c.col));
                    }
                }
            }
            if violations.is_empty() {
                return Ok(CubeDiagram { markings: m, convention: conv });
            }
        }
        Err(CubeError::Invalid(violations))
    }

    pub fn n(&self) -> usize {
        self.markings.n
    }

    pub fn markings(&self) -> &Markings {
        &self.markings
    }

    pub fn xs(&self) -> &[Point] {
        &self.markings.xs
    }

    pub fn ys(&self) -> &[Point] {
        &self.markings.ys
    }

    pub fn zs(&self) -> &[Point] {
        &self.markings.zs
    }

    pub fn convention(&self) -> VertexConvention {
        self.convention
    }

    pub fn segments(&self) -> Vec<OrientedSegment> {
        self.markings.segments(self.convention)
    }

    /// The same curve with X and Y labels exchanged, which switches the
    /// vertex convention and reverses orientation.
    pub fn swap_xy_labels(&self) -> CubeDiagram {
        let m = &self.markings;
        CubeDiagram {
            markings: Markings { n: m.n, xs: m.ys.clone(), ys: m.xs.clone(), zs: m.zs.clone() },
            convention: match self.convention {
                VertexConvention::Text => VertexConvention::Transposed,
                VertexConvention::Transposed => VertexConvention::Text,
            },
        }
    }

    /// Marking sets in the transposed convention, each list sorted; equal
    /// values mean the same oriented-up-to-reversal curve.
    pub fn normalized_marking_sets(&self) -> [Vec<Point>; 3] {
        let c = match self.convention {
            VertexConvention::Transposed => self.clone(),
            VertexConvention::Text => self.swap_xy_labels(),
        };
        let sorted = |v: &[Point]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        [sorted(c.xs()), sorted(c.ys()), sorted(c.zs())]
    }

    /// Drops the plane's depth axis: segments along it collapse to grid-O
    /// markings and the remaining marking kind becomes grid-X.
    pub fn project(&self, plane: Plane) -> GridDiagram {
        let (ra, ca, da) = plane.axes();
        let n = self.n();
        let segs = self.segments();
        let collapsed: Vec<&OrientedSegment> = segs.iter().filter(|s| s.axis.index() == da).collect();
        let on_collapsed = collapsed[0].from.kind;
        let grid_x_kind = on_collapsed.next().next();
        let mut x_col = vec![0; n];
        let mut o_col = vec![0; n];
        for p in self.markings.of_kind(grid_x_kind) {
            x_col[p[ra] - 1] = p[ca];
        }
        for s in collapsed {
            o_col[s.from.pos[ra] - 1] = s.from.pos[ca];
        }
        GridDiagram::new(x_col, o_col).expect("a valid cube projects to a grid")
    }

    pub fn component_count(&self) -> usize {
        let segs = self.segments();
        let next: HashMap<(Kind, Point), (Kind, Point)> =
            segs.iter().map(|s| ((s.from.kind, s.from.pos), (s.to.kind, s.to.pos))).collect();
        let mut seen: std::collections::HashSet<(Kind, Point)> = Default::default();
        let mut count = 0;
        for s in &segs {
            let start = (s.from.kind, s.from.pos);
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut cur = start;
            while seen.insert(cur) {
                cur = next[&cur];
            }
        }
        count
    }

    /// One bend per flat: the two segments lying in it.
    pub fn bends(&self) -> Vec<CubeBend> {
        let segs = self.segments();
        let mut out = Vec::new();
        for axis in Axis::ALL {
            let a = axis.index();
            for level in 1..=self.n() {
                let inside: Vec<&OrientedSegment> =
                    segs.iter().filter(|s| s.axis != axis && s.from.pos[a] == level).collect();
                if let [s1, s2] = inside[..] {
                    out.push(CubeBend { flat_axis: axis, level, seg_a: *s1, seg_b: *s2 });
                }
            }
        }
        out
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

    fn err(&self, msg: impl Into<String>) -> CubeError {
        CubeError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), CubeError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize, CubeError> {
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
            .map_err(|_| CubeError::Syntax { pos: start, msg: "number too large".into() })
    }

    fn triple(&mut self) -> Result<Point, CubeError> {
        self.expect(b'{')?;
        let a = self.number()?;
        self.expect(b',')?;
        let b = self.number()?;
        self.expect(b',')?;
        let c = self.number()?;
        self.expect(b'}')?;
        Ok([a, b, c])
    }

    fn list(&mut self, name: u8) -> Result<Vec<Point>, CubeError> {
        self.expect(name)?;
        self.expect(b'[')?;
        let mut v = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(v);
        }
        loop {
            v.push(self.triple()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(v);
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
    }
}

/// Parses `[name =] {X[{a, b, c}, ...], Y[...], Z[...]}`.
pub fn parse_cube_text(s: &str) -> Result<(Option<String>, Markings), CubeError> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let mut label = None;
    if cur.peek() != Some(b'{') {
        let start = cur.pos;
        while cur.pos < cur.s.len() && cur.s[cur.pos] != b'=' {
            cur.pos += 1;
        }
        let name = s[start..cur.pos].trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(CubeError::Syntax { pos: start, msg: "expected a name or '{'".into() });
        }
        label = Some(name.to_string());
        cur.expect(b'=')?;
    }
    cur.expect(b'{')?;
    let xs = cur.list(b'X')?;
    cur.expect(b',')?;
    let ys = cur.list(b'Y')?;
    cur.expect(b',')?;
    let zs = cur.list(b'Z')?;
    cur.expect(b'}')?;
    cur.skip_ws();
    if cur.pos != cur.s.len() {
        return Err(cur.err("trailing input"));
    }
    Ok((label, Markings::new(xs, ys, zs)?))
}

pub fn emit_markings_text(label: Option<&str>, m: &Markings) -> String {
    let list = |name: &str, pts: &[Point]| {
        let inner: Vec<String> = pts.iter().map(|p| format!("{{{}, {}, {}}}", p[0], p[1], p[2])).collect();
        format!("{name}[{}]", inner.join(", "))
    };
    let body = format!("{{{}, {}, {}}}", list("X", &m.xs), list("Y", &m.ys), list("Z", &m.zs));
    match label {
        Some(l) => format!("{l} = {body}"),
        None => body,
    }
}

pub fn emit_cube_text(label: Option<&str>, c: &CubeDiagram) -> String {
    emit_markings_text(label, c.markings())
}
