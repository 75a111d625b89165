//! Exhaustive enumeration of grid diagrams with pruning, lift testing,
//! statistics, sharding and checkpoints.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cube::emit_cube_text;
use crate::grid::{BendKind, GridDiagram, TransitionKind};
use crate::invariants::bracket::normalized_bracket_with_limit;
use crate::invariants::identify::{grid_invariants, lookup, Identification};
use crate::invariants::{determinant, PlanarCode, ReferenceTable, DEFAULT_CROSSING_LIMIT};
use crate::lifting::{find_lift, lifts};

const MAGIC: &str = "CUBECKPT1";

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("resource limit reached after {outer_done} outer iterations")]
    ResourceLimit { outer_done: u64 },
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("checkpoint was written for a different configuration")]
    ConfigMismatch,
    #[error("checkpoint i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Filters {
    /// Skip lift tests for multi-component grids.
    pub link_exclusion: bool,
    /// Skip lift tests for determinant-1 knots.
    pub determinant_filter: bool,
    /// Reuse a determinant-1 verdict across commutations and cyclic shifts.
    pub transition_reuse: bool,
    /// Skip the stack search when the cross-over order has a cycle.
    pub xo_prefilters: bool,
}

impl Default for Filters {
    fn default() -> Self {
        Filters { link_exclusion: true, determinant_filter: true, transition_reuse: true, xo_prefilters: true }
    }
}

impl Filters {
    pub fn none() -> Self {
        Filters { link_exclusion: false, determinant_filter: false, transition_reuse: false, xo_prefilters: false }
    }
}

/// What one enumerated item stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CountConvention {
    /// One item per X/O-exchange pair; the pair lifts if either member does.
    #[default]
    Classes,
    /// Every (x_col, o_col) pair separately.
    Raw,
}

#[derive(Debug, Clone, Default)]
pub struct ResourceBudget {
    pub max_outer: Option<u64>,
    pub max_time: Option<Duration>,
}

/// Shared writer receiving each lifted cube in the corpus text format.
#[derive(Clone)]
pub struct LiftSink(pub Arc<Mutex<Box<dyn Write + Send>>>);

impl LiftSink {
    pub fn new(w: impl Write + Send + 'static) -> Self {
        LiftSink(Arc::new(Mutex::new(Box::new(w))))
    }

    fn emit(&self, g: &GridDiagram) {
        let cube = find_lift(g).or_else(|| find_lift(&g.swap_markings()));
        if let Some(cube) = cube {
            let text = format!("# {g}\n{}\n\n", emit_cube_text(None, &cube));
            let mut w = self.0.lock().expect("lift sink lock");
            let _ = w.write_all(text.as_bytes());
        }
    }

    pub fn flush(&self) -> std::io::Result<()> {
        self.0.lock().expect("lift sink lock").flush()
    }
}

impl fmt::Debug for LiftSink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LiftSink")
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub n: usize,
    /// (index, count), index < count.
    pub shard: Option<(usize, usize)>,
    pub filters: Filters,
    pub convention: CountConvention,
    pub bracket_limit: usize,
    /// Count determinant-1 knots with a nontrivial bracket as nontrivial.
    pub det1_identification: bool,
    pub identify: bool,
    pub reference: Option<Arc<ReferenceTable>>,
    pub checkpoint_path: Option<PathBuf>,
    /// Outer iterations between checkpoint writes.
    pub checkpoint_every: u64,
    pub workers: usize,
    pub budget: ResourceBudget,
    pub emit: Option<LiftSink>,
}

impl SearchConfig {
    pub fn new(n: usize) -> Self {
        SearchConfig {
            n,
            shard: None,
            filters: Filters::default(),
            convention: CountConvention::default(),
            bracket_limit: DEFAULT_CROSSING_LIMIT,
            det1_identification: false,
            identify: false,
            reference: None,
            checkpoint_path: None,
            checkpoint_every: 32,
            workers: 1,
            budget: ResourceBudget::default(),
            emit: None,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.n < 2 {
            return Err(SearchError::InvalidConfig(format!("size {} is below 2", self.n)));
        }
        if let Some((i, k)) = self.shard {
            if k == 0 || i >= k {
                return Err(SearchError::InvalidConfig(format!("shard {i}/{k}")));
            }
        }
        if self.identify && self.reference.is_none() {
            return Err(SearchError::InvalidConfig("identification needs a reference table".into()));
        }
        Ok(())
    }

    /// Hash over everything that affects the counters.
    pub fn config_hash(&self) -> String {
        let f = &self.filters;
        let text = format!(
            "n={} shard={:?} link_exclusion={} determinant_filter={} transition_reuse={} xo_prefilters={} convention={:?} identify={} limit={} det1_identification={}",
            self.n,
            self.shard,
            f.link_exclusion,
            f.determinant_filter,
            f.transition_reuse,
            f.xo_prefilters,
            self.convention,
            self.identify,
            self.bracket_limit,
            self.det1_identification
        );
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        if self.identify {
            if let Some(t) = &self.reference {
                h.update(t.to_text().as_bytes());
            }
        }
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SearchStats {
    pub n: usize,
    pub total_enumerated: u64,
    pub links: u64,
    pub trivial_det1: u64,
    pub nontrivial_knots: u64,
    pub lifts_found: u64,
    /// Lifting links, counted only when link exclusion is off.
    pub link_lifts: u64,
    /// Lifting determinant-1 knots, counted only when the determinant filter is off.
    pub unknot_lifts: u64,
    /// Grids whose lift test the cross-over prefilter skipped.
    pub prefiltered: u64,
    /// Determinant verdicts taken over from the previous grid.
    pub reused: u64,
    pub outer_done: u64,
    pub per_label: BTreeMap<String, (u64, u64)>,
}

impl SearchStats {
    pub fn new(n: usize) -> Self {
        SearchStats { n, ..Default::default() }
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.total_enumerated += other.total_enumerated;
        self.links += other.links;
        self.trivial_det1 += other.trivial_det1;
        self.nontrivial_knots += other.nontrivial_knots;
        self.lifts_found += other.lifts_found;
        self.link_lifts += other.link_lifts;
        self.unknot_lifts += other.unknot_lifts;
        self.prefiltered += other.prefiltered;
        self.reused += other.reused;
        self.outer_done += other.outer_done;
        for (label, (g, l)) in &other.per_label {
            let e = self.per_label.entry(label.clone()).or_default();
            e.0 += g;
            e.1 += l;
        }
    }

    /// Lift percentage of nontrivial knots, rounded half-up to one decimal.
    pub fn percent(&self) -> String {
        if self.nontrivial_knots == 0 {
            return "0.0".into();
        }
        let k = u128::from(self.nontrivial_knots);
        let tenths = (u128::from(self.lifts_found) * 2000 + k) / (2 * k);
        format!("{}.{}", tenths / 10, tenths % 10)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "n={} total={} links={} det1={} nontrivial={} lifts={} pct={}",
            self.n,
            self.total_enumerated,
            self.links,
            self.trivial_det1,
            self.nontrivial_knots,
            self.lifts_found,
            self.percent()
        )
    }

    /// Summary line, optional filter-off tallies, then per-label lines.
    pub fn to_lines(&self, filters: &Filters) -> Vec<String> {
        let mut out = vec![self.summary_line()];
        if !filters.link_exclusion {
            out.push(format!("link_lifts={}", self.link_lifts));
        }
        if !filters.determinant_filter {
            out.push(format!("unknot_lifts={}", self.unknot_lifts));
        }
        for (label, (g, l)) in &self.per_label {
            out.push(format!("label={label} grids={g} lifts={l}"));
        }
        out
    }
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary_line())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Link,
    TrivialDet1,
    NontrivialKnot,
}

/// Link if several components; otherwise determinant 1 or not. A
/// determinant-1 verdict on `prev` carries over across commutations and
/// cyclic shifts.
pub fn classify(g: &GridDiagram, prev: Option<(&GridDiagram, Classification)>) -> Classification {
    classify_counting(g, prev).0
}

fn classify_counting(g: &GridDiagram, prev: Option<(&GridDiagram, Classification)>) -> (Classification, bool) {
    if g.component_count() > 1 {
        return (Classification::Link, false);
    }
    if let Some((p, Classification::TrivialDet1)) = prev {
        if matches!(p.transition_kind(g), Ok(TransitionKind::Commutation | TransitionKind::CyclicPermutation)) {
            return (Classification::TrivialDet1, true);
        }
    }
    if determinant(g) == BigInt::one() {
        (Classification::TrivialDet1, false)
    } else {
        (Classification::NontrivialKnot, false)
    }
}

/// Every knot with fewer crossings than this and determinant 1 is trivial.
pub const DET1_NONTRIVIAL_MIN_CROSSINGS: usize = 10;

/// A determinant-1 knot diagram whose normalized bracket is not 1. Diagrams
/// with too few crossings, or too many for the bracket, count as trivial.
pub fn det1_bracket_nontrivial(g: &GridDiagram, limit: usize) -> bool {
    if g.crossing_count() < DET1_NONTRIVIAL_MIN_CROSSINGS {
        return false;
    }
    normalized_bracket_with_limit(&PlanarCode::from_grid(g), limit).is_ok_and(|p| !p.is_one())
}

/// False only when the grid provably has no lift.
pub fn prefilter(g: &GridDiagram, filters: &Filters) -> bool {
    if filters.link_exclusion && g.component_count() > 1 {
        return false;
    }
    !(filters.xo_prefilters && !g.cross_over_relation(&g.bend_partition(BendKind::AtX)).acyclic)
}

/// Derangements of 1..=n in lexicographic order.
pub fn derangements(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut v: Vec<usize> = (1..=n).collect();
    loop {
        if v.iter().enumerate().all(|(i, &c)| c != i + 1) {
            out.push(v.clone());
        }
        if !next_permutation(&mut v) {
            return out;
        }
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Range of outer indices (derangement positions) owned by a shard.
pub fn shard_range(outer_count: usize, shard: Option<(usize, usize)>) -> std::ops::Range<usize> {
    match shard {
        None => 0..outer_count,
        Some((i, k)) => (i * outer_count / k)..((i + 1) * outer_count / k),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedGrid {
    pub outer: usize,
    pub grid: GridDiagram,
    /// Relation to the previous item of the same outer index.
    pub transition: Option<TransitionKind>,
}

/// Every grid of size n exactly once: outer loop over derangements t,
/// inner loop over permutations p, with x_col = p and o_col[i] = p[t[i]].
pub fn enumerate(n: usize, shard: Option<(usize, usize)>) -> impl Iterator<Item = EnumeratedGrid> {
    let outer = derangements(n);
    let range = shard_range(outer.len(), shard);
    range.flat_map(move |k| {
        let t = outer[k].clone();
        let mut prev: Option<GridDiagram> = None;
        InnerGrids::new(t).map(move |grid| {
            let transition = prev.as_ref().map(|p| p.transition_kind(&grid).expect("same size"));
            prev = Some(grid.clone());
            EnumeratedGrid { outer: k, grid, transition }
        })
    })
}

struct InnerGrids {
    t: Vec<usize>,
    p: Vec<usize>,
    done: bool,
}

impl InnerGrids {
    fn new(t: Vec<usize>) -> Self {
        let p = (1..=t.len()).collect();
        InnerGrids { t, p, done: false }
    }
}

impl Iterator for InnerGrids {
    type Item = GridDiagram;

    fn next(&mut self) -> Option<GridDiagram> {
        if self.done {
            return None;
        }
        let o: Vec<usize> = self.t.iter().map(|&j| self.p[j - 1]).collect();
        let g = GridDiagram::from_valid(self.p.clone(), o);
        self.done = !next_permutation(&mut self.p);
        Some(g)
    }
}

fn member_lifts(g: &GridDiagram, filters: &Filters, stats: &mut SearchStats) -> bool {
    if filters.xo_prefilters && !g.cross_over_relation(&g.bend_partition(BendKind::AtX)).acyclic {
        stats.prefiltered += 1;
        return false;
    }
    lifts(g)
}

fn item_lifts(g: &GridDiagram, config: &SearchConfig, stats: &mut SearchStats) -> bool {
    match config.convention {
        CountConvention::Raw => member_lifts(g, &config.filters, stats),
        CountConvention::Classes => {
            member_lifts(g, &config.filters, stats) || member_lifts(&g.swap_markings(), &config.filters, stats)
        }
    }
}

/// Processes outer indices `range`; the reuse chain restarts at each one.
fn run_outer_range(config: &SearchConfig, outer: &[Vec<usize>], range: std::ops::Range<usize>) -> SearchStats {
    let mut stats = SearchStats::new(config.n);
    let table = config.reference.as_deref();
    for k in range {
        let mut prev: Option<(GridDiagram, Classification)> = None;
        for g in InnerGrids::new(outer[k].clone()) {
            if config.convention == CountConvention::Classes && g.x_col(1) > g.o_col(1) {
                continue;
            }
            stats.total_enumerated += 1;
            let reuse_from = if config.filters.transition_reuse { prev.as_ref().map(|(p, c)| (p, *c)) } else { None };
            let (mut class, reused) = classify_counting(&g, reuse_from);
            if class == Classification::TrivialDet1
                && !reused
                && config.det1_identification
                && det1_bracket_nontrivial(&g, config.bracket_limit)
            {
                class = Classification::NontrivialKnot;
            }
            if reused {
                stats.reused += 1;
            }
            match class {
                Classification::Link => {
                    stats.links += 1;
                    if !config.filters.link_exclusion && item_lifts(&g, config, &mut stats) {
                        stats.link_lifts += 1;
                    }
                }
                Classification::TrivialDet1 => {
                    stats.trivial_det1 += 1;
                    if !config.filters.determinant_filter && item_lifts(&g, config, &mut stats) {
                        stats.unknot_lifts += 1;
                    }
                }
                Classification::NontrivialKnot => {
                    stats.nontrivial_knots += 1;
                    let lifted = item_lifts(&g, config, &mut stats);
                    if lifted {
                        stats.lifts_found += 1;
                        if let Some(sink) = &config.emit {
                            sink.emit(&g);
                        }
                    }
                    if config.identify {
                        let key = match (grid_invariants(&g, config.bracket_limit), table) {
                            (Ok((det, poly)), Some(t)) => lookup(&det, &poly, t).key(),
                            (Ok(_), None) => Identification::Unknown.key(),
                            (Err(_), _) => "over-limit".to_string(),
                        };
                        let e = stats.per_label.entry(key).or_default();
                        e.0 += 1;
                        e.1 += u64::from(lifted);
                    }
                }
            }
            prev = Some((g, class));
        }
        stats.outer_done += 1;
    }
    stats
}

fn run_parallel_range(config: &SearchConfig, outer: &[Vec<usize>], range: std::ops::Range<usize>) -> SearchStats {
    let workers = config.workers.max(1).min(range.len().max(1));
    if workers == 1 {
        return run_outer_range(config, outer, range);
    }
    let len = range.len();
    let parts: Vec<std::ops::Range<usize>> =
        (0..workers).map(|w| (range.start + w * len / workers)..(range.start + (w + 1) * len / workers)).collect();
    let results: Vec<SearchStats> = std::thread::scope(|s| {
        let handles: Vec<_> = parts.into_iter().map(|r| s.spawn(move || run_outer_range(config, outer, r))).collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
    });
    let mut stats = SearchStats::new(config.n);
    for r in &results {
        stats.merge(r);
    }
    stats
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub config_hash: String,
    /// First outer index not yet processed.
    pub next_outer: u64,
    pub stats: SearchStats,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let s = &self.stats;
        let mut body = String::new();
        let _ = writeln!(body, "{MAGIC}");
        let _ = writeln!(body, "config={}", self.config_hash);
        let _ = writeln!(body, "outer={}", self.next_outer);
        for (name, v) in [
            ("n", s.n as u64),
            ("total", s.total_enumerated),
            ("links", s.links),
            ("det1", s.trivial_det1),
            ("nontrivial", s.nontrivial_knots),
            ("lifts", s.lifts_found),
            ("link_lifts", s.link_lifts),
            ("unknot_lifts", s.unknot_lifts),
            ("prefiltered", s.prefiltered),
            ("reused", s.reused),
            ("outer_done", s.outer_done),
        ] {
            let _ = writeln!(body, "{name}={v}");
        }
        for (label, (g, l)) in &s.per_label {
            let _ = writeln!(body, "label={label} grids={g} lifts={l}");
        }
        let sum = hex::encode(Sha256::digest(body.as_bytes()));
        format!("{body}checksum={sum}\n")
    }

    pub fn from_text(text: &str) -> Result<Self, SearchError> {
        let corrupt = |m: &str| SearchError::CorruptCheckpoint(m.to_string());
        let idx = text.rfind("checksum=").ok_or_else(|| corrupt("missing checksum"))?;
        let (body, trailer) = text.split_at(idx);
        let stated = trailer.trim_end().strip_prefix("checksum=").unwrap_or_default();
        if hex::encode(Sha256::digest(body.as_bytes())) != stated || !trailer.ends_with('\n') {
            return Err(corrupt("checksum mismatch"));
        }
        let mut lines = body.lines();
        if lines.next() != Some(MAGIC) {
            return Err(corrupt("bad magic"));
        }
        let mut config_hash = None;
        let mut next_outer = None;
        let mut stats = SearchStats::default();
        for line in lines {
            if let Some(rest) = line.strip_prefix("label=") {
                let parts: Vec<&str> = rest.rsplitn(3, ' ').collect();
                let [l, g, label] = parts[..] else { return Err(corrupt("bad label line")) };
                let num = |s: &str, key: &str| -> Result<u64, SearchError> {
                    s.strip_prefix(key).and_then(|v| v.parse().ok()).ok_or_else(|| corrupt("bad label line"))
                };
                stats.per_label.insert(label.to_string(), (num(g, "grids=")?, num(l, "lifts=")?));
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| corrupt("bad line"))?;
            if key == "config" {
                config_hash = Some(value.to_string());
                continue;
            }
            let v: u64 = value.parse().map_err(|_| corrupt("bad number"))?;
            match key {
                "outer" => next_outer = Some(v),
                "n" => stats.n = v as usize,
                "total" => stats.total_enumerated = v,
                "links" => stats.links = v,
                "det1" => stats.trivial_det1 = v,
                "nontrivial" => stats.nontrivial_knots = v,
                "lifts" => stats.lifts_found = v,
                "link_lifts" => stats.link_lifts = v,
                "unknot_lifts" => stats.unknot_lifts = v,
                "prefiltered" => stats.prefiltered = v,
                "reused" => stats.reused = v,
                "outer_done" => stats.outer_done = v,
                _ => return Err(corrupt("unknown key")),
            }
        }
        Ok(Checkpoint {
            config_hash: config_hash.ok_or_else(|| corrupt("missing config"))?,
            next_outer: next_outer.ok_or_else(|| corrupt("missing outer index"))?,
            stats,
        })
    }
}

/// Atomic write through a temporary file in the same directory.
pub fn checkpoint_save(path: &Path, ck: &Checkpoint) -> Result<(), SearchError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, ck.to_text())?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn checkpoint_load(path: &Path) -> Result<Checkpoint, SearchError> {
    let text = fs::read_to_string(path)?;
    Checkpoint::from_text(&text)
}

/// Runs the configured search, resuming from and writing to the checkpoint
/// file when one is configured. On hitting the budget the checkpoint is
/// written before `ResourceLimit` is returned.
pub fn run(config: &SearchConfig) -> Result<SearchStats, SearchError> {
    config.validate()?;
    let outer = derangements(config.n);
    let range = shard_range(outer.len(), config.shard);
    let hash = config.config_hash();
    let mut stats = SearchStats::new(config.n);
    let mut next = range.start;
    if let Some(path) = &config.checkpoint_path {
        if path.exists() {
            let ck = checkpoint_load(path)?;
            if ck.config_hash != hash {
                return Err(SearchError::ConfigMismatch);
            }
            let resume = usize::try_from(ck.next_outer).map_err(|_| SearchError::CorruptCheckpoint("outer".into()))?;
            if resume < range.start || resume > range.end {
                return Err(SearchError::CorruptCheckpoint("outer index outside the shard".into()));
            }
            next = resume;
            stats = ck.stats;
        }
    }
    let started = Instant::now();
    let mut done_here: u64 = 0;
    let save = |next: usize, stats: &SearchStats| -> Result<(), SearchError> {
        if let Some(path) = &config.checkpoint_path {
            let ck = Checkpoint { config_hash: hash.clone(), next_outer: next as u64, stats: stats.clone() };
            checkpoint_save(path, &ck)?;
        }
        Ok(())
    };
    let batch = config.checkpoint_every.max(1) as usize;
    while next < range.end {
        let mut take = batch.min(range.end - next);
        if let Some(max) = config.budget.max_outer {
            let left = max.saturating_sub(done_here) as usize;
            if left == 0 {
                save(next, &stats)?;
                return Err(SearchError::ResourceLimit { outer_done: stats.outer_done });
            }
            take = take.min(left);
        }
        if config.budget.max_time.is_some_and(|t| started.elapsed() >= t) {
            save(next, &stats)?;
            return Err(SearchError::ResourceLimit { outer_done: stats.outer_done });
        }
        let part = run_parallel_range(config, &outer, next..next + take);
        stats.merge(&part);
        next += take;
        done_here += take as u64;
        if next < range.end {
            save(next, &stats)?;
        }
    }
    save(next, &stats)?;
    Ok(stats)
}

/// Γ(m, −1) / e for integer m ≥ 1, exactly: (m−1)!·Σ_{k<m} (−1)^k / k!.
pub fn upper_gamma_at_minus_one_over_e(m: u32) -> BigRational {
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for k in 0..m {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let term = BigRational::new(BigInt::one(), fact.clone());
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    BigRational::from_integer(factorial(m.saturating_sub(1))) * sum
}

pub fn factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn derangement_count(n: u32) -> BigInt {
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    if n == 0 {
        return a;
    }
    for k in 2..=n {
        let c = BigInt::from(k - 1) * (&a + &b);
        a = b;
        b = c;
    }
    b
}

/// (n!)²/4 · (1 + 2(1+n)·Γ(1+n,−1)/(e·Γ(2+n)) − 6·Γ(3,−1)/(e·Γ(4))),
/// evaluated exactly; every factor of e cancels.
pub fn count_formula(n: u32) -> BigInt {
    let nf = BigRational::from_integer(factorial(n));
    let big = |v: i64| BigRational::from_integer(BigInt::from(v));
    let first = big(2 * (1 + i64::from(n))) * upper_gamma_at_minus_one_over_e(n + 1)
        / BigRational::from_integer(factorial(n + 1));
    let second = big(6) * upper_gamma_at_minus_one_over_e(3) / BigRational::from_integer(factorial(3));
    let value = &nf * &nf / big(4) * (big(1) + first - second);
    assert!(value.is_integer(), "closed form is integral");
    value.to_integer()
}

/// Number of (x_col, o_col) pairs: n!·D_n.
pub fn raw_grid_count(n: u32) -> BigInt {
    factorial(n) * derangement_count(n)
}
