#![allow(dead_code)]

pub mod oracle;

use gsc_core::graph::{cycle_graph, fold, LabeledGraph};
use gsc_core::{Alphabet, Dart, Letter, Word};
use rand::Rng;

/// Random graph on `n` vertices with `edges` random labelled edges.
pub fn random_graph<R: Rng>(rng: &mut R, m: usize, n: usize, edges: usize) -> LabeledGraph {
    let mut g = LabeledGraph::with_vertices(Alphabet::bouquet(m).unwrap(), n);
    for _ in 0..edges {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        g.add_edge(u, v, rng.random_range(0..m as u32));
    }
    g
}

/// A random non-backtracking walk of at most `len` darts.
pub fn random_immersed_path<R: Rng>(rng: &mut R, g: &LabeledGraph, len: usize) -> Vec<Dart> {
    let adj = g.adjacency();
    let mut path = vec![Dart::from_index(rng.random_range(0..g.dart_count()))];
    while path.len() < len {
        let d = *path.last().unwrap();
        let outs: Vec<Dart> = adj.out(g.target(d)).iter().copied().filter(|&n| n != d.reverse()).collect();
        if outs.is_empty() {
            break;
        }
        path.push(outs[rng.random_range(0..outs.len())]);
    }
    path
}

/// A uniformly random cyclically reduced word of length `len` over `m` generators.
pub fn reduced_word<R: Rng>(rng: &mut R, m: u32, len: usize) -> Word {
    let mut w: Vec<Letter> = Vec::with_capacity(len);
    while w.len() < len {
        let l = Letter::new(rng.random_range(0..m), rng.random_bool(0.5));
        if w.last().is_none_or(|&p| p != l.inverse()) && (w.len() + 1 < len || w[0] != l.inverse()) {
            w.push(l);
        }
    }
    Word::from_letters(w)
}

/// Core of the folded random labelling of a `g`-cycle subdivided `j` times.
pub fn random_folded_cycle<R: Rng>(rng: &mut R, g: usize, j: usize) -> LabeledGraph {
    let al = Alphabet::bouquet(2).unwrap();
    let c = cycle_graph(&al, &Word::from_letters(vec![Letter::new(0, false); g])).unwrap();
    let sub = c.subdivide(gsc_core::SubdivisionSpec::new(j).unwrap());
    fold(&sub.label_random(rng)).graph.core()
}
