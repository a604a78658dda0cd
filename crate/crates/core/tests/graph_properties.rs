mod common;

use gsc_core::graph::{
    bouquet, cycle_graph, fold, fold_with_order, metrics, parse_graph, random_regular, serialize_graph,
};
use gsc_core::word::walk_distance_distribution;
use gsc_core::{Alphabet, LabeledGraph, Letter, SubdivisionSpec, Word};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn unlabelled(n: usize, edges: &[(usize, usize)]) -> LabeledGraph {
    let mut g = LabeledGraph::with_vertices(Alphabet::bouquet(2).unwrap(), n);
    for &(u, v) in edges {
        g.add_edge(u, v, 0);
    }
    g
}

fn petersen() -> LabeledGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    unlabelled(10, &e)
}

#[test]
fn k4_spectral_gap() {
    let k4 = unlabelled(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let m = metrics(&k4);
    assert!((m.lambda1.unwrap() - 4.0 / 3.0).abs() < 1e-9);
    assert_eq!((m.girth, m.diameter, m.valence_max), (Some(3), 1, 3));
}

#[test]
fn petersen_subdivided() {
    let p = petersen();
    assert_eq!(metrics(&p).girth, Some(5));
    assert_eq!(metrics(&p).diameter, 2);
    let m = metrics(&p.subdivide(SubdivisionSpec::new(4).unwrap()));
    assert_eq!(m.girth, Some(20));
}

#[test]
fn cycles_and_forests() {
    for n in 1..30 {
        let m = metrics(&unlabelled(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()));
        assert_eq!((m.girth, m.diameter), (Some(n), n / 2));
    }
    let tree = unlabelled(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
    assert_eq!(metrics(&tree).girth, None);
    let five = unlabelled(5, &(0..5).map(|i| (i, (i + 1) % 5)).collect::<Vec<_>>());
    assert_eq!(metrics(&five.subdivide(SubdivisionSpec::new(3).unwrap())).girth, Some(15));
    assert_eq!(
        five.subdivide(SubdivisionSpec::new(1).unwrap()).canonical_form(),
        five.canonical_form()
    );
}

#[test]
fn subdivision_scales_girth_and_diameter() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let g = random_regular(12, 3, &mut rng).unwrap();
        let base = metrics(&g);
        for j in 1..4 {
            let s = metrics(&g.subdivide(SubdivisionSpec::new(j).unwrap()));
            assert_eq!(s.girth, base.girth.map(|x| x * j));
        }
    }
}

#[test]
fn random_regular_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let g = random_regular(50, 4, &mut rng).unwrap();
    let m = metrics(&g);
    assert_eq!((m.vertices, m.valence_max), (50, 4));
    assert!(random_regular(5, 3, &mut rng).is_err());
}

#[test]
fn path_counts() {
    let b = bouquet(2).unwrap();
    for l in 1..10 {
        assert_eq!(b.count_paths(l), BigUint::from(4u32 * 3u32.pow(l as u32 - 1)));
    }
    let c = unlabelled(7, &(0..7).map(|i| (i, (i + 1) % 7)).collect::<Vec<_>>());
    for l in 1..7 {
        assert_eq!(c.count_paths(l), BigUint::from(14u32));
    }
}

/// `count ≤ j²·v^{Cg + ℓ/j}` with `C = diameter/girth` of the base.
#[test]
fn path_count_remark_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..6 {
        let g = random_regular(10, 3, &mut rng).unwrap();
        let m = metrics(&g);
        let girth = m.girth.unwrap() as f64;
        let c = m.diameter as f64 / girth;
        let v = m.valence_max as f64;
        for j in 2..4 {
            let s = g.subdivide(SubdivisionSpec::new(j).unwrap());
            for l in 0..(4 * j * m.girth.unwrap()) {
                let count: f64 = s.count_paths(l).to_string().parse().unwrap();
                let bound = (j * j) as f64 * v.powf(c * girth + l as f64 / j as f64);
                assert!(count <= bound, "j={j} ℓ={l}: {count} > {bound}");
            }
        }
    }
}

#[test]
fn single_edge_label_frequencies() {
    let g = unlabelled(2, &[(0, 1)]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut freq = [0usize; 4];
    const N: usize = 100_000;
    for _ in 0..N {
        let h = g.label_random(&mut rng);
        let e = h.edge(0);
        let read = if e.src == 0 { Letter::new(e.label, false) } else { Letter::new(e.label, true) };
        freq[read.index()] += 1;
    }
    let sigma = (N as f64 * 0.25 * 0.75).sqrt();
    for f in freq {
        assert!((f as f64 - N as f64 / 4.0).abs() < 3.0 * sigma, "{freq:?}");
    }
    let mut a = ChaCha8Rng::seed_from_u64(5);
    let mut b = ChaCha8Rng::seed_from_u64(5);
    let big = random_regular(20, 3, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    assert_eq!(big.label_random(&mut a), big.label_random(&mut b));
}

/// The word read along a path shorter than the girth is uniform, so its
/// norm follows the exact random-walk law.
#[test]
fn path_label_law_matches_walk_distribution() {
    let c = unlabelled(12, &(0..12).map(|i| (i, (i + 1) % 12)).collect::<Vec<_>>());
    let path: Vec<gsc_core::Dart> = (0..8).map(|e| gsc_core::Dart::new(e, false)).collect();
    let exact = walk_distance_distribution(2, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    const N: usize = 40_000;
    let mut hist = [0usize; 9];
    for _ in 0..N {
        let h = c.label_random(&mut rng);
        // Edge orientation may flip; read the path through the base orientation.
        let w: Word = path
            .iter()
            .map(|d| {
                let e = h.edge(d.edge());
                Letter::new(e.label, e.src != d.edge())
            })
            .collect();
        hist[w.norm()] += 1;
    }
    for (k, &count) in hist.iter().enumerate() {
        let p = exact.prob(k);
        let sigma = (N as f64 * p * (1.0 - p)).sqrt().max(1.0);
        assert!((count as f64 - N as f64 * p).abs() < 4.0 * sigma, "k={k}: {count} vs {}", N as f64 * p);
    }
}

#[test]
fn fold_examples() {
    // Two a-edges out of one vertex to distinct leaves.
    let al = Alphabet::bouquet(2).unwrap();
    let mut g = LabeledGraph::with_vertices(al.clone(), 3);
    g.add_edge(0, 1, 0);
    g.add_edge(0, 2, 0);
    let f = fold(&g);
    assert_eq!((f.graph.vertex_count(), f.graph.edge_count()), (2, 1));
    assert_eq!(f.vertex_map[1], f.vertex_map[2]);
    let c = cycle_graph(&al, &al.parse_word("a a b b").unwrap()).unwrap();
    let f = fold(&c);
    assert_eq!(f.vertex_map, vec![0, 1, 2, 3]);
    assert_eq!(f.edge_map, vec![0, 1, 2, 3]);
}

#[test]
fn folding_is_confluent_idempotent_and_word_preserving() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let g = common::random_graph(&mut rng, 2, 12, 30);
        let f = fold(&g);
        assert!(f.graph.is_folded());
        let mut order: Vec<usize> = (0..g.edge_count()).collect();
        order.shuffle(&mut rng);
        assert_eq!(fold_with_order(&g, &order).graph.canonical_form(), f.graph.canonical_form());
        let again = fold(&f.graph);
        assert_eq!(again.graph.canonical_form(), f.graph.canonical_form());
        assert_eq!(again.graph.edge_count(), f.graph.edge_count());
        for _ in 0..5 {
            let p = common::random_immersed_path(&mut rng, &g, 10);
            let image: Vec<gsc_core::Dart> = p
                .iter()
                .map(|d| gsc_core::Dart::new(f.edge_map[d.edge()], d.is_backward()))
                .collect();
            for w in image.windows(2) {
                assert_eq!(f.graph.target(w[0]), f.graph.source(w[1]));
            }
            assert_eq!(f.graph.read_path(&image), g.read_path(&p));
        }
    }
}

#[test]
fn serialization_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        // Parallel edges with equal labels are not representable; fold first.
        let g = fold(&common::random_graph(&mut rng, 2 + i % 3, 10, 20)).graph;
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(serialize_graph(&back), text);
    }
}
