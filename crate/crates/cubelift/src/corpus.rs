//! The bundled cube-diagram corpus: loading, metadata and verification.

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::cube::{parse_cube_text, CubeDiagram, CubeError, Plane, VertexRule};
use crate::invariants::bracket::MAX_CROSSING_LIMIT;
use crate::invariants::identify::{build_reference_table_with_limit, identify_with_limit, Chirality, Identification};
use crate::invariants::{InvariantError, ReferenceTable};

pub const BUNDLED_CORPUS: &str = include_str!("../data/corpus.txt");

/// Environment variable naming a corpus file to use instead of the bundled one.
pub const CORPUS_ENV: &str = "CUBELIFT_CORPUS";

/// Crossing limit for corpus projections, which run to a few dozen crossings.
pub const CORPUS_CROSSING_LIMIT: usize = MAX_CROSSING_LIMIT;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("corpus entry {label}: {source}")]
    Entry { label: String, source: CubeError },
    #[error("corpus entry {label}: {msg}")]
    Metadata { label: String, msg: String },
    #[error("corpus invariants: {0}")]
    Invariant(#[from] InvariantError),
    #[error("reading corpus: {0}")]
    Io(#[from] std::io::Error),
}

/// A corpus entry as written, before its code is parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub label: String,
    pub expected_size: usize,
    pub expected_components: usize,
    /// Known for knots only.
    pub alternating: Option<bool>,
    pub source_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub label: String,
    pub source_text: String,
    pub cube: CubeDiagram,
    pub expected_size: usize,
    pub expected_components: usize,
    pub alternating: Option<bool>,
}

impl CorpusRecord {
    pub fn to_entry(&self) -> Result<CorpusEntry, CubeError> {
        let (_, markings) = parse_cube_text(&self.source_text)?;
        let cube = CubeDiagram::from_markings(markings, VertexRule::Either)?;
        Ok(CorpusEntry {
            label: self.label.clone(),
            source_text: self.source_text.clone(),
            cube,
            expected_size: self.expected_size,
            expected_components: self.expected_components,
            alternating: self.alternating,
        })
    }
}

impl CorpusEntry {
    pub fn is_knot(&self) -> bool {
        self.expected_components == 1
    }
}

/// Crossing number read off a knot-table label such as `8_15`.
pub fn crossing_number(label: &str) -> Option<usize> {
    let (c, rest) = label.split_once('_')?;
    rest.parse::<usize>().ok()?;
    c.parse().ok()
}

/// Header lines `@ <label> size=<n> components=<c> [alternating=yes|no]`,
/// each followed by one line of diagram code. Blank and `#` lines are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut out = Vec::new();
    let mut pending: Option<(usize, CorpusRecord)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        let bad = |msg: &str| CorpusError::Syntax { line: lineno, msg: msg.to_string() };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(header) = line.strip_prefix('@') {
            if pending.is_some() {
                return Err(bad("header without diagram code"));
            }
            let mut fields = header.split_whitespace();
            let label = fields.next().ok_or_else(|| bad("missing label"))?.to_string();
            let mut record = CorpusRecord {
                label,
                expected_size: 0,
                expected_components: 1,
                alternating: None,
                source_text: String::new(),
            };
            let mut have_size = false;
            for f in fields {
                let (k, v) = f.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                match k {
                    "size" => {
                        record.expected_size = v.parse().map_err(|_| bad("bad size"))?;
                        have_size = true;
                    }
                    "components" => record.expected_components = v.parse().map_err(|_| bad("bad components"))?,
                    "alternating" => {
                        record.alternating = Some(match v {
                            "yes" => true,
                            "no" => false,
                            _ => return Err(bad("alternating must be yes or no")),
                        })
                    }
                    _ => return Err(bad("unknown header key")),
                }
            }
            if !have_size {
                return Err(bad("missing size"));
            }
            pending = Some((lineno, record));
        } else {
            let (_, mut record) = pending.take().ok_or_else(|| bad("diagram code without header"))?;
            record.source_text = line.to_string();
            out.push(record);
        }
    }
    if let Some((line, _)) = pending {
        return Err(CorpusError::Syntax { line, msg: "header without diagram code".into() });
    }
    Ok(out)
}

pub fn load_corpus_text(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    parse_corpus(text)?
        .iter()
        .map(|r| {
            let e = r.to_entry().map_err(|source| CorpusError::Entry { label: r.label.clone(), source })?;
            let mismatch = |msg: String| CorpusError::Metadata { label: r.label.clone(), msg };
            if e.cube.n() != e.expected_size {
                return Err(mismatch(format!("size {} but header says {}", e.cube.n(), e.expected_size)));
            }
            if e.cube.component_count() != e.expected_components {
                let found = e.cube.component_count();
                return Err(mismatch(format!("{found} components but header says {}", e.expected_components)));
            }
            Ok(e)
        })
        .collect()
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    load_corpus_text(&std::fs::read_to_string(path)?)
}

pub fn load_bundled() -> Vec<CorpusEntry> {
    load_corpus_text(BUNDLED_CORPUS).expect("bundled corpus is valid")
}

/// Corpus text from an explicit path, else the environment variable, else
/// the bundled copy.
pub fn corpus_text(path: Option<&Path>) -> Result<String, CorpusError> {
    match path {
        Some(p) => Ok(std::fs::read_to_string(p)?),
        None => match std::env::var_os(CORPUS_ENV) {
            Some(p) => Ok(std::fs::read_to_string(p)?),
            None => Ok(BUNDLED_CORPUS.to_string()),
        },
    }
}

/// Reference table over the knot entries, from their XY projections.
pub fn reference_table(entries: &[CorpusEntry]) -> Result<ReferenceTable, CorpusError> {
    let knots = entries.iter().filter(|e| e.is_knot());
    let table = build_reference_table_with_limit(
        knots.map(|e| (e.label.as_str(), e.source_text.as_str(), &e.cube)),
        CORPUS_CROSSING_LIMIT,
    )?;
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryResult {
    pub label: String,
    pub parsed: bool,
    pub validated: bool,
    pub size: Option<usize>,
    pub size_ok: bool,
    pub components: Option<usize>,
    pub components_ok: bool,
    /// XY identification, for knots that validated.
    pub xy_identity: Option<Identification>,
    pub error: Option<String>,
}

impl EntryResult {
    pub fn label_consistent(&self) -> bool {
        match &self.xy_identity {
            Some(Identification::Match { label, chirality: Chirality::Same }) => *label == self.label,
            Some(_) => false,
            None => true,
        }
    }

    pub fn passed(&self) -> bool {
        self.parsed && self.validated && self.size_ok && self.components_ok && self.label_consistent()
    }
}

impl fmt::Display for EntryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        write!(f, "{status} {}", self.label)?;
        if let Some(n) = self.size {
            write!(f, " size={n}")?;
        }
        if let Some(c) = self.components {
            write!(f, " components={c}")?;
        }
        if let Some(id) = &self.xy_identity {
            write!(f, " xy={id}")?;
        }
        if let Some(e) = &self.error {
            write!(f, " error={e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub entries: Vec<EntryResult>,
}

impl VerificationReport {
    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn parsed(&self) -> usize {
        self.entries.iter().filter(|e| e.parsed).count()
    }

    pub fn validated(&self) -> usize {
        self.entries.iter().filter(|e| e.validated).count()
    }

    pub fn label_consistent(&self) -> usize {
        self.entries.iter().filter(|e| e.xy_identity.is_some() && e.label_consistent()).count()
    }

    pub fn passed(&self) -> usize {
        self.entries.iter().filter(|e| e.passed()).count()
    }

    pub fn summary_line(&self) -> String {
        format!(
            "entries={} parsed={} validated={} identified={} passed={}",
            self.total(),
            self.parsed(),
            self.validated(),
            self.label_consistent(),
            self.passed()
        )
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        write!(f, "{}", self.summary_line())
    }
}

/// Parses and validates every record, checks its size and component count,
/// and identifies each knot's XY projection against a table built from the
/// valid knot entries themselves.
pub fn verify_corpus(records: &[CorpusRecord]) -> VerificationReport {
    let mut results = Vec::new();
    let mut valid: Vec<CorpusEntry> = Vec::new();
    for r in records {
        let mut res = EntryResult {
            label: r.label.clone(),
            parsed: false,
            validated: false,
            size: None,
            size_ok: false,
            components: None,
            components_ok: false,
            xy_identity: None,
            error: None,
        };
        match parse_cube_text(&r.source_text) {
            Err(e) => res.error = Some(e.to_string()),
            Ok((_, m)) => {
                res.parsed = true;
                res.size = Some(m.n);
                res.size_ok = m.n == r.expected_size;
                match CubeDiagram::from_markings(m, VertexRule::Either) {
                    Err(e) => res.error = Some(e.to_string()),
                    Ok(cube) => {
                        res.validated = true;
                        let c = cube.component_count();
                        res.components = Some(c);
                        res.components_ok = c == r.expected_components;
                        valid.push(CorpusEntry {
                            label: r.label.clone(),
                            source_text: r.source_text.clone(),
                            cube,
                            expected_size: r.expected_size,
                            expected_components: r.expected_components,
                            alternating: r.alternating,
                        });
                    }
                }
            }
        }
        results.push(res);
    }
    let table = match reference_table(&valid) {
        Ok(t) => Some(t),
        Err(e) => {
            for r in &mut results {
                r.error.get_or_insert_with(|| e.to_string());
            }
            None
        }
    };
    if let Some(table) = table {
        for entry in valid.iter().filter(|e| e.is_knot()) {
            let res = results.iter_mut().find(|r| r.label == entry.label && r.validated).expect("entry has a result");
            match identify_with_limit(&entry.cube.project(Plane::XY), &table, CORPUS_CROSSING_LIMIT) {
                Ok(id) => res.xy_identity = Some(id),
                Err(e) => res.error = Some(e.to_string()),
            }
        }
    }
    VerificationReport { entries: results }
}
