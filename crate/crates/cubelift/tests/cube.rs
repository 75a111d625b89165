mod common;

use proptest::prelude::*;

use common::grid_strategy;
use cubelift::corpus::load_bundled;
use cubelift::cube::{
    emit_cube_text, parse_cube_text, validate_cube, validate_cube_with, CubeDiagram, CubeError, Plane,
    VertexConvention, VertexRule, Violation,
};
use cubelift::grid::GridDiagram;
use cubelift::lifting::find_lift;

const TREFOIL: &str = "K3_1 = {X[{1, 5, 4}, {4, 3, 2}, {5, 4, 3}, {2, 1, 5}, {3, 2, 1}], \
    Y[{1, 5, 1}, {2, 1, 2}, {3, 2, 3}, {4, 3, 4}, {5, 4, 5}], Z[{1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {4, 5, 4}, {5, 1, 5}]}";

fn trefoil_cube() -> CubeDiagram {
    let (label, m) = parse_cube_text(TREFOIL).unwrap();
    assert_eq!(label.as_deref(), Some("K3_1"));
    CubeDiagram::from_markings(m, VertexRule::Either).unwrap()
}

#[test]
fn trefoil_cube_projects_to_the_trefoil_grid() {
    let c = trefoil_cube();
    assert_eq!(c.n(), 5);
    assert_eq!(c.convention(), VertexConvention::Transposed);
    assert_eq!(c.component_count(), 1);
    assert_eq!(c.project(Plane::XY), GridDiagram::new(vec![2, 3, 4, 5, 1], vec![5, 1, 2, 3, 4]).unwrap());
    for plane in Plane::ALL {
        assert_eq!(c.project(plane).crossing_count(), 3, "{plane}");
    }
    assert_eq!(c.bends().len(), 15);
}

#[test]
fn strict_rules_pick_one_convention() {
    let (_, m) = parse_cube_text(TREFOIL).unwrap();
    assert!(CubeDiagram::from_markings(m.clone(), VertexRule::Transposed).is_ok());
    assert!(matches!(CubeDiagram::from_markings(m, VertexRule::Text), Err(CubeError::Invalid(_))));
    let swapped = trefoil_cube().swap_xy_labels();
    assert_eq!(swapped.convention(), VertexConvention::Text);
    assert!(CubeDiagram::from_markings(swapped.markings().clone(), VertexRule::Text).is_ok());
    assert_eq!(swapped.normalized_marking_sets(), trefoil_cube().normalized_marking_sets());
}

#[test]
fn broken_cubes_report_violations() {
    let c = trefoil_cube();
    let mut zs = c.zs().to_vec();
    zs[0][2] = 2;
    match validate_cube(5, c.xs().to_vec(), c.ys().to_vec(), zs) {
        Err(CubeError::Invalid(vs)) => {
            assert!(vs.iter().any(|v| matches!(v, Violation::FlatCount { .. })), "{vs:?}")
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        validate_cube(5, c.xs()[..4].to_vec(), c.ys().to_vec(), c.zs().to_vec()),
        Err(CubeError::LengthMismatch { .. })
    ));
    assert!(matches!(parse_cube_text("K = {X[{1, 2}]}"), Err(CubeError::Syntax { .. })));
}

#[test]
fn reversing_the_depth_order_breaks_crossing_conditions() {
    let c = trefoil_cube();
    let flip = |v: &[[usize; 3]]| -> Vec<[usize; 3]> { v.iter().map(|p| [p[0], p[1], 6 - p[2]]).collect() };
    let res = validate_cube_with(5, flip(c.xs()), flip(c.ys()), flip(c.zs()), VertexRule::Either);
    match res {
        Err(CubeError::Invalid(vs)) => assert!(vs.iter().any(|v| matches!(v, Violation::CrossingXY { .. }))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn corpus_cubes_round_trip_through_text() {
    for entry in load_bundled() {
        let text = emit_cube_text(Some(&entry.label), &entry.cube);
        let (label, m) = parse_cube_text(&text).unwrap();
        assert_eq!(label.as_deref(), Some(entry.label.as_str()));
        let back = CubeDiagram::from_markings(m, VertexRule::Either).unwrap();
        assert_eq!(back.normalized_marking_sets(), entry.cube.normalized_marking_sets());
        assert_eq!(back.component_count(), entry.expected_components);
    }
}

proptest! {
    #[test]
    fn lifts_are_valid_cubes_over_their_grid(g in grid_strategy(2, 8)) {
        if let Some(c) = find_lift(&g) {
            prop_assert_eq!(c.project(Plane::XY), g.clone());
            prop_assert_eq!(c.component_count(), g.component_count());
            let (_, m) = parse_cube_text(&emit_cube_text(None, &c)).unwrap();
            let again = CubeDiagram::from_markings(m, VertexRule::Transposed).unwrap();
            prop_assert_eq!(again.normalized_marking_sets(), c.normalized_marking_sets());
            for plane in Plane::ALL {
                prop_assert_eq!(c.project(plane).n(), g.n());
            }
        }
    }
}
