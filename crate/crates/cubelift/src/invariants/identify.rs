use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::cube::{CubeDiagram, Plane};
use crate::grid::GridDiagram;

use super::bracket::{normalized_bracket_with_limit, DEFAULT_CROSSING_LIMIT};
use super::goeritz::determinant;
use super::planar::PlanarCode;
use super::poly::LaurentPolynomial;
use super::InvariantError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceEntry {
    pub label: String,
    pub determinant: BigInt,
    pub normalized_bracket: LaurentPolynomial,
    pub source: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReferenceTable {
    entries: Vec<ReferenceEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    Same,
    Mirror,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Identification {
    Match { label: String, chirality: Chirality },
    Unknot,
    Ambiguous(Vec<String>),
    Unknown,
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identification::Match { label, chirality: Chirality::Same } => write!(f, "{label}"),
            Identification::Match { label, chirality: Chirality::Mirror } => write!(f, "{label} (mirror)"),
            Identification::Unknot => write!(f, "unknot"),
            Identification::Ambiguous(labels) => write!(f, "ambiguous: {}", labels.join(", ")),
            Identification::Unknown => write!(f, "unknown"),
        }
    }
}

impl Identification {
    /// Short key used for per-label tallies.
    pub fn key(&self) -> String {
        match self {
            Identification::Match { label, .. } => label.clone(),
            Identification::Unknot => "unknot".into(),
            Identification::Ambiguous(_) => "ambiguous".into(),
            Identification::Unknown => "unknown".into(),
        }
    }
}

/// Determinant and writhe-normalized bracket of a grid's diagram.
pub fn grid_invariants(g: &GridDiagram, limit: usize) -> Result<(BigInt, LaurentPolynomial), InvariantError> {
    let pc = PlanarCode::from_grid(g);
    let poly = normalized_bracket_with_limit(&pc, limit)?;
    Ok((determinant(g), poly))
}

impl ReferenceTable {
    pub fn entries(&self) -> &[ReferenceEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_entries(entries: Vec<ReferenceEntry>) -> Result<Self, InvariantError> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.label.clone()) {
                return Err(InvariantError::DuplicateLabel(e.label.clone()));
            }
        }
        Ok(ReferenceTable { entries })
    }

    /// `label<TAB>determinant<TAB>poly`, one entry per line.
    pub fn to_text(&self) -> String {
        self.entries.iter().map(|e| format!("{}\t{}\t{}\n", e.label, e.determinant, e.normalized_bracket)).collect()
    }

    pub fn from_text(text: &str) -> Result<Self, InvariantError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |msg: &str| InvariantError::TableSyntax { line: i + 1, msg: msg.to_string() };
            let mut fields = line.split('\t');
            let (Some(label), Some(det), Some(poly), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(bad("expected three tab-separated fields"));
            };
            let determinant: BigInt = det.parse().map_err(|_| bad("bad determinant"))?;
            let normalized_bracket: LaurentPolynomial = poly.parse().map_err(|_| bad("bad polynomial"))?;
            entries.push(ReferenceEntry {
                label: label.to_string(),
                determinant,
                normalized_bracket,
                source: format!("import:{}", i + 1),
            });
        }
        Self::from_entries(entries)
    }
}

/// One entry per (label, source, cube); invariants come from the XY projection.
pub fn build_reference_table<'a>(
    corpus: impl IntoIterator<Item = (&'a str, &'a str, &'a CubeDiagram)>,
) -> Result<ReferenceTable, InvariantError> {
    build_reference_table_with_limit(corpus, DEFAULT_CROSSING_LIMIT)
}

pub fn build_reference_table_with_limit<'a>(
    corpus: impl IntoIterator<Item = (&'a str, &'a str, &'a CubeDiagram)>,
    limit: usize,
) -> Result<ReferenceTable, InvariantError> {
    let mut entries = Vec::new();
    for (label, source, cube) in corpus {
        let g = cube.project(Plane::XY);
        let (determinant, normalized_bracket) = grid_invariants(&g, limit)?;
        entries.push(ReferenceEntry {
            label: label.to_string(),
            determinant,
            normalized_bracket,
            source: source.to_string(),
        });
    }
    ReferenceTable::from_entries(entries)
}

pub fn identify(g: &GridDiagram, t: &ReferenceTable) -> Result<Identification, InvariantError> {
    identify_with_limit(g, t, DEFAULT_CROSSING_LIMIT)
}

pub fn identify_with_limit(
    g: &GridDiagram,
    t: &ReferenceTable,
    limit: usize,
) -> Result<Identification, InvariantError> {
    let comps = g.component_count();
    if comps != 1 {
        return Err(InvariantError::NotAKnot(comps));
    }
    let (det, poly) = grid_invariants(g, limit)?;
    Ok(lookup(&det, &poly, t))
}

pub fn lookup(det: &BigInt, poly: &LaurentPolynomial, t: &ReferenceTable) -> Identification {
    if poly.is_one() && *det == BigInt::from(1) {
        return Identification::Unknot;
    }
    let mirrored = poly.mirror();
    let mut hits: Vec<(String, Chirality)> = Vec::new();
    for e in &t.entries {
        if e.determinant != *det {
            continue;
        }
        if e.normalized_bracket == *poly {
            hits.push((e.label.clone(), Chirality::Same));
        } else if e.normalized_bracket == mirrored {
            hits.push((e.label.clone(), Chirality::Mirror));
        }
    }
    match hits.len() {
        0 => Identification::Unknown,
        1 => {
            let (label, chirality) = hits.pop().unwrap();
            Identification::Match { label, chirality }
        }
        _ => Identification::Ambiguous(hits.into_iter().map(|(l, _)| l).collect()),
    }
}
