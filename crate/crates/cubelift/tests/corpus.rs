use std::path::Path;

use cubelift::corpus::{
    corpus_text, crossing_number, load_bundled, load_corpus, load_corpus_text, parse_corpus, verify_corpus,
    CorpusError, BUNDLED_CORPUS,
};
use cubelift::cube::Plane;
use cubelift::invariants::Identification;

#[test]
fn bundled_corpus_shape() {
    let entries = load_bundled();
    assert_eq!(entries.len(), 27);
    assert_eq!(entries.iter().filter(|e| e.is_knot()).count(), 24);
    let links: Vec<&str> = entries.iter().filter(|e| !e.is_knot()).map(|e| e.label.as_str()).collect();
    assert_eq!(links, vec!["HL", "D_0(4_1)", "D_{-4}(5_2)"]);
    for e in &entries {
        assert_eq!(e.cube.n(), e.expected_size, "{}", e.label);
        assert_eq!(e.cube.component_count(), e.expected_components, "{}", e.label);
    }
}

#[test]
fn hopf_link_projects_to_the_size_four_grid() {
    let hl = load_bundled().into_iter().find(|e| e.label == "HL").unwrap();
    assert_eq!(hl.cube.project(Plane::XY).to_string(), "X={2,3,4,1} O={4,1,2,3}");
}

#[test]
fn crossing_numbers_come_from_labels() {
    assert_eq!(crossing_number("3_1"), Some(3));
    assert_eq!(crossing_number("12_591"), Some(12));
    assert_eq!(crossing_number("HL"), None);
}

#[test]
fn alternating_knots_meet_the_arc_index_bound() {
    for r in parse_corpus(BUNDLED_CORPUS).unwrap() {
        if let (Some(c), Some(true)) = (crossing_number(&r.label), r.alternating) {
            assert!(r.expected_size >= c + 2, "{}", r.label);
        }
    }
}

#[test]
fn verification_flags_the_two_indistinguishable_entries() {
    let report = verify_corpus(&parse_corpus(BUNDLED_CORPUS).unwrap());
    assert_eq!(report.total(), 27);
    assert_eq!(report.validated(), 27);
    let failing: Vec<&str> = report.entries.iter().filter(|e| !e.passed()).map(|e| e.label.as_str()).collect();
    assert_eq!(failing, vec!["7_2", "7_3"]);
    for e in report.entries.iter().filter(|e| !e.passed()) {
        assert_eq!(e.xy_identity, Some(Identification::Ambiguous(vec!["7_2".into(), "7_3".into()])));
    }
}

#[test]
fn malformed_corpora_are_rejected() {
    assert!(matches!(parse_corpus("K = {X[]}"), Err(CorpusError::Syntax { .. })));
    let wrong_size = "@ 3_1 size=6 components=1\nK3_1 = {X[{1, 5, 4}, {4, 3, 2}, {5, 4, 3}, {2, 1, 5}, {3, 2, 1}], \
        Y[{1, 5, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5}], Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 5, 4}, {5, 1, 5}]}\n";
    assert!(matches!(load_corpus_text(wrong_size), Err(CorpusError::Metadata { .. })));
    let report = verify_corpus(&parse_corpus(wrong_size).unwrap());
    assert!(!report.all_passed());
    assert!(matches!(load_corpus(Path::new("/nonexistent/corpus.txt")), Err(CorpusError::Io(_))));
}

#[test]
fn explicit_path_overrides_the_bundled_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.txt");
    let head: String = BUNDLED_CORPUS.lines().take(4).map(|l| format!("{l}\n")).collect();
    std::fs::write(&path, &head).unwrap();
    assert_eq!(corpus_text(Some(&path)).unwrap(), head);
    assert_eq!(load_corpus(&path).unwrap().len(), 1);
}
