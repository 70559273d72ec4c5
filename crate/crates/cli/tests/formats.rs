use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdd_cli::format::{parse_points, write_points, GraphFile};
use tdd_core::{build_sweep, Point, PointSet, TriangleShape};

fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)))
        .collect()
}

#[test]
fn graph_file_round_trips() {
    let shape = TriangleShape::new(std::f64::consts::PI / 6.0, std::f64::consts::PI / 5.0).unwrap();
    let pts = PointSet::validated(&shape, random_points(100, 5)).unwrap();
    let graph = build_sweep(&shape, &pts).unwrap();
    let file = GraphFile::from_graph(&graph, None);
    let text = file.to_json();
    let back = GraphFile::from_json(&text).unwrap();
    assert_eq!(back, file);
    assert_eq!(back.to_json(), text);
    for (a, b) in back.original_points().iter().zip(graph.points().points()) {
        assert_eq!(a.x.to_bits(), b.x.to_bits());
        assert_eq!(a.y.to_bits(), b.y.to_bits());
    }
    let rebuilt = back.to_graph().unwrap();
    assert_eq!(rebuilt.directed_edges(), graph.directed_edges());
    assert_eq!(rebuilt.undirected_edges(), graph.undirected_edges());
}

#[test]
fn metadata_survives() {
    let shape = TriangleShape::equilateral();
    let pts = PointSet::validated(&shape, random_points(6, 1)).unwrap();
    let graph = build_sweep(&shape, &pts).unwrap();
    let serde_json::Value::Object(meta) = serde_json::json!({"generator": "test", "k": 3}) else {
        unreachable!()
    };
    let file = GraphFile::from_graph(&graph, Some(meta));
    let back = GraphFile::from_json(&file.to_json()).unwrap();
    assert_eq!(back.metadata_usize("k"), Some(3));
    assert_eq!(back, file);
}

#[test]
fn points_file_round_trips_bitwise() {
    let pts = random_points(200, 9);
    let back = parse_points(&write_points(&pts)).unwrap();
    assert_eq!(back, pts);
}

#[test]
fn edges_must_match_their_cones() {
    let shape = TriangleShape::equilateral();
    let pts = PointSet::validated(&shape, random_points(8, 2)).unwrap();
    let mut file = GraphFile::from_graph(&build_sweep(&shape, &pts).unwrap(), None);
    let (u, i, v) = file.cone_edges[0];
    file.cone_edges[0] = (u, i % 3 + 1, v);
    assert!(file.to_graph().is_err());
    file.cone_edges[0] = (u, 4, v);
    assert!(file.to_graph().is_err());
}
