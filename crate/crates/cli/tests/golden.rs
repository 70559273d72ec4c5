use std::f64::consts::PI;
use std::path::PathBuf;

use tdd_cli::svg::{render, RenderOptions};
use tdd_core::{build_sweep, route, Point, PointSet, TdGraph, TriangleShape};

const POINTS: [(f64, f64); 12] = [
    (0.05, 0.11),
    (0.93, 0.07),
    (0.47, 0.88),
    (0.21, 0.52),
    (0.72, 0.41),
    (0.36, 0.23),
    (0.61, 0.69),
    (0.12, 0.81),
    (0.84, 0.83),
    (0.54, 0.04),
    (0.29, 0.97),
    (0.98, 0.56),
];

fn graph(shape: TriangleShape) -> TdGraph {
    let pts = POINTS.iter().map(|&(x, y)| Point::new(x, y)).collect();
    build_sweep(&shape, &PointSet::validated(&shape, pts).unwrap()).unwrap()
}

/// Compares against `tests/golden/<name>`; set `TDD_UPDATE_GOLDEN=1` to
/// rewrite the files instead.
fn check(name: &str, svg: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("TDD_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, svg).unwrap();
    }
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(svg, expected, "{name} differs from its golden file");
}

#[test]
fn plain_equilateral() {
    let g = graph(TriangleShape::equilateral());
    check(
        "equilateral.svg",
        &render(&g, &RenderOptions::default()).unwrap(),
    );
}

#[test]
fn skewed_with_overlays() {
    let g = graph(TriangleShape::new(PI / 6.0, PI / 5.0).unwrap());
    let opts = RenderOptions {
        route: Some(route(&g, 0, 10, true).unwrap().vertices),
        cones: Some(4),
        homothet: Some((0, 10)),
    };
    let svg = render(&g, &opts).unwrap();
    assert_eq!(svg, render(&g, &opts).unwrap());
    check("skewed_overlays.svg", &svg);
}
