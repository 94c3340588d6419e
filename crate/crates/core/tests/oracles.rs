mod common;

use std::collections::BTreeMap;

use common::{compare_with_raster, naive_circuits, random_lattice_graph, raster_faces};
use tessgraph::faces::faces_of;
use tessgraph::frame::Frame;
use tessgraph::walk::extract_circuits;
use tessgraph::{build_graph, planarize, GeometricGraph, Point2};

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Circuits as `(tail, head)` sequences rotated to start at their smallest step.
fn canonical(mut steps: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let k = (0..steps.len()).min_by_key(|&i| steps[i]).unwrap();
    steps.rotate_left(k);
    steps
}

fn check_against_naive(g: &GeometricGraph) {
    let ours: BTreeMap<Vec<(usize, usize)>, f64> = extract_circuits(g)
        .unwrap()
        .into_iter()
        .map(|c| (canonical(c.steps.iter().map(|&d| (g.tail(d), g.head(d))).collect()), c.turning_sum))
        .collect();
    let naive: BTreeMap<Vec<(usize, usize)>, f64> =
        naive_circuits(g).into_iter().map(|c| (canonical(c.steps), c.turning_sum)).collect();
    assert_eq!(ours.keys().collect::<Vec<_>>(), naive.keys().collect::<Vec<_>>());
    for (k, t) in &ours {
        assert!((t - naive[k]).abs() < 1e-9, "turning sums {t} vs {}", naive[k]);
    }
}

#[test]
fn dangling_chord_matches_naive_walk() {
    // Unit square with a chord hanging from one corner into the interior.
    let g = build_graph(
        vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(0.4, 0.3)],
        vec![[0, 1], [1, 2], [2, 3], [3, 0], [0, 4]],
    )
    .unwrap();
    check_against_naive(&g);
    let fs = faces_of(&g).unwrap();
    assert_eq!(fs.faces.len(), 1);
    let f = &fs.faces[0];
    // Four sides plus the chord walked both ways; the corner is passed twice.
    assert_eq!((f.edge_count, f.chi), (6, 1));
    assert!(f.holes.is_empty());
}

#[test]
fn lattice_graphs_match_naive_walk() {
    for seed in 0..150 {
        check_against_naive(&random_lattice_graph(seed, 12, 6));
    }
}

#[test]
fn planarized_segments_match_naive_walk() {
    use rand::{Rng, SeedableRng};
    for seed in 0..60u64 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let segs: Vec<[Point2; 2]> = (0..rng.random_range(1..8))
            .map(|_| [0, 1].map(|_| p(rng.random_range(0.0..4.0), rng.random_range(0.0..4.0))))
            .collect();
        check_against_naive(&planarize(&segs).unwrap());
    }
}

#[test]
fn raster_oracle_agrees_on_hand_cases() {
    // Square with a triangle hole and an isolated node inside, plus a tail outside.
    let g = build_graph(
        vec![
            p(0.0, 0.0),
            p(4.0, 0.0),
            p(4.0, 4.0),
            p(0.0, 4.0),
            p(1.0, 1.0),
            p(2.0, 1.0),
            p(1.0, 2.0),
            p(3.0, 3.0),
            p(5.0, 5.0),
        ],
        vec![[0, 1], [1, 2], [2, 3], [3, 0], [4, 5], [5, 6], [6, 4], [2, 8]],
    )
    .unwrap();
    let raster = raster_faces(&g, -1.0, 6.0, 1.0 / 17.0);
    assert_eq!(raster.len(), 2);
    let fs = faces_of(&g).unwrap();
    compare_with_raster(&g, &fs, &raster).unwrap();
    let mut chis: Vec<i64> = fs.faces.iter().map(|f| f.chi).collect();
    chis.sort();
    assert_eq!(chis, vec![-1, 1]);
}

#[test]
fn raster_oracle_agrees_on_random_graphs() {
    let (mut faces, mut holed) = (0, 0);
    for seed in 1000..1200 {
        let g = random_lattice_graph(seed, 12, 6);
        let fs = faces_of(&g).unwrap();
        faces += fs.faces.len();
        holed += fs.faces.iter().filter(|f| f.chi < 1).count();
        let raster = raster_faces(&g, -1.0, 7.0, 1.0 / 19.0);
        if let Err(e) = compare_with_raster(&g, &fs, &raster) {
            panic!("seed {seed}: {e}\n{}", g.to_json());
        }
    }
    eprintln!("{faces} faces, {holed} with holes");
    assert!(faces > 100 && holed > 10, "{faces} faces, {holed} with holes");
}
