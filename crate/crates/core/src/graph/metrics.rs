//! Girth, diameter, valence and spectral gap.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LabeledGraph;

/// Above this many vertices the spectral gap is estimated by power iteration.
const DENSE_EIGEN_LIMIT: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub vertices: usize,
    pub edges: usize,
    /// Length of a shortest embedded cycle; `None` for a forest.
    pub girth: Option<usize>,
    /// Largest distance within a component.
    pub diameter: usize,
    pub disconnected: bool,
    pub valence_max: usize,
    /// Smallest nonzero eigenvalue of `I − A/v`, for connected `v`-regular graphs.
    pub lambda1: Option<f64>,
}

pub fn metrics(g: &LabeledGraph) -> GraphMetrics {
    let deg = g.degrees();
    let (_, ncomp) = g.components();
    GraphMetrics {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        girth: girth(g),
        diameter: diameter(g),
        disconnected: ncomp > 1,
        valence_max: deg.iter().copied().max().unwrap_or(0),
        lambda1: lambda1(g),
    }
}

fn diameter(g: &LabeledGraph) -> usize {
    let adj = g.adjacency();
    (0..g.vertex_count())
        .into_par_iter()
        .map(|s| {
            let mut dist = vec![usize::MAX; g.vertex_count()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut far = 0;
            while let Some(v) = queue.pop_front() {
                far = far.max(dist[v]);
                for &d in adj.out(v) {
                    let t = g.target(d);
                    if dist[t] == usize::MAX {
                        dist[t] = dist[v] + 1;
                        queue.push_back(t);
                    }
                }
            }
            far
        })
        .max()
        .unwrap_or(0)
}

/// Shortest embedded cycle length.
///
/// Loops give 1 and parallel edges 2. Otherwise hanging trees are stripped;
/// a component that is a single cycle contributes its length, and every
/// other cycle passes through a branch vertex, so BFS is run only from those.
pub fn girth(g: &LabeledGraph) -> Option<usize> {
    let core = g.core();
    if core.edge_count() == 0 {
        return None;
    }
    let deg = core.degrees();
    let adj = core.adjacency();
    let (comp, ncomp) = core.components();
    let mut comp_branch = vec![false; ncomp];
    let mut comp_edges = vec![0usize; ncomp];
    for v in 0..core.vertex_count() {
        if deg[v] > 2 {
            comp_branch[comp[v]] = true;
        }
    }
    for e in core.edges() {
        comp_edges[comp[e.src]] += 1;
    }
    let mut best = (0..ncomp)
        .filter(|&c| !comp_branch[c])
        .map(|c| comp_edges[c])
        .min();
    let branch: Vec<usize> = (0..core.vertex_count()).filter(|&v| deg[v] > 2).collect();
    let from_branch = branch
        .par_iter()
        .map(|&s| shortest_cycle_through(&core, &adj, s))
        .flatten()
        .min();
    if let Some(b) = from_branch {
        best = Some(best.map_or(b, |x| x.min(b)));
    }
    best
}

/// Shortest cycle through `s` (exact when minimised over a vertex set every
/// cycle meets; a single run may overestimate by non-simple closed walks, but
/// never underestimates the girth).
fn shortest_cycle_through(g: &LabeledGraph, adj: &super::Adjacency, s: usize) -> Option<usize> {
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    let mut best: Option<usize> = None;
    while let Some(v) = queue.pop_front() {
        if let Some(b) = best {
            if 2 * dist[v] + 1 >= b {
                break;
            }
        }
        for &d in adj.out(v) {
            if d.edge() == via[v] {
                continue;
            }
            let t = g.target(d);
            if dist[t] == usize::MAX {
                dist[t] = dist[v] + 1;
                via[t] = d.edge();
                queue.push_back(t);
            } else {
                let len = dist[v] + dist[t] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
    }
    best
}

/// Smallest nonzero eigenvalue of the normalised Laplacian `I − A/v` when
/// the graph is connected and `v`-regular.
pub fn lambda1(g: &LabeledGraph) -> Option<f64> {
    let n = g.vertex_count();
    let deg = g.degrees();
    let v = *deg.first()?;
    if n < 2 || v == 0 || deg.iter().any(|&d| d != v) || g.components().1 != 1 {
        return None;
    }
    if n <= DENSE_EIGEN_LIMIT {
        let mut a = DMatrix::<f64>::zeros(n, n);
        for e in g.edges() {
            a[(e.src, e.dst)] += 1.0;
            a[(e.dst, e.src)] += 1.0;
        }
        let l = DMatrix::<f64>::identity(n, n) - a / v as f64;
        let eig = SymmetricEigen::new(l);
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|x, y| x.total_cmp(y));
        Some(vals[1])
    } else {
        Some(power_iteration_gap(g, v))
    }
}

/// Power iteration on `(I + A/v)/2` restricted to the complement of the
/// constant vector; the top eigenvalue μ there gives λ₁ = 2(1 − μ).
fn power_iteration_gap(g: &LabeledGraph, v: usize) -> f64 {
    let n = g.vertex_count();
    let mut x: Vec<f64> = (0..n).map(|i| ((i * 7919 % 104729) as f64) - 52364.0).collect();
    let mut mu = 0.0;
    for _ in 0..5000 {
        let mean = x.iter().sum::<f64>() / n as f64;
        x.iter_mut().for_each(|t| *t -= mean);
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        x.iter_mut().for_each(|t| *t /= norm);
        let mut y: Vec<f64> = x.iter().map(|t| t / 2.0).collect();
        for e in g.edges() {
            y[e.src] += x[e.dst] / (2.0 * v as f64);
            y[e.dst] += x[e.src] / (2.0 * v as f64);
        }
        let next = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>();
        let converged = (next - mu).abs() < 1e-12;
        mu = next;
        x = y;
        if converged {
            break;
        }
    }
    2.0 * (1.0 - mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle_graph, disjoint_union, random_regular};
    use crate::word::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent girth: for each edge, shortest path between its ends
    /// avoiding that edge, plus one.
    fn girth_oracle(g: &LabeledGraph) -> Option<usize> {
        let n = g.vertex_count();
        let mut best = None;
        for (i, e) in g.edges().iter().enumerate() {
            if e.src == e.dst {
                return Some(1);
            }
            let mut dist = vec![usize::MAX; n];
            dist[e.src] = 0;
            let mut queue = VecDeque::from([e.src]);
            while let Some(v) = queue.pop_front() {
                for (j, f) in g.edges().iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    for (a, b) in [(f.src, f.dst), (f.dst, f.src)] {
                        if a == v && dist[b] == usize::MAX {
                            dist[b] = dist[v] + 1;
                            queue.push_back(b);
                        }
                    }
                }
            }
            if dist[e.dst] != usize::MAX {
                let c = dist[e.dst] + 1;
                best = Some(best.map_or(c, |b: usize| b.min(c)));
            }
        }
        best
    }

    #[test]
    fn girth_matches_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [6, 8, 10, 20, 30] {
            for v in [3, 4] {
                let g = random_regular(n, v, &mut rng).unwrap();
                assert_eq!(girth(&g), girth_oracle(&g));
                let s = g.subdivide(crate::graph::SubdivisionSpec::new(3).unwrap());
                assert_eq!(girth(&s), girth_oracle(&s));
            }
        }
    }

    #[test]
    fn girth_special_cases() {
        let a = Alphabet::bouquet(2).unwrap();
        assert_eq!(girth(&bouquet(2).unwrap()), Some(1));
        let c = cycle_graph(&a, &a.parse_word("a a b").unwrap()).unwrap();
        let d = cycle_graph(&a, &a.parse_word("a b a b' b b").unwrap()).unwrap();
        assert_eq!(girth(&disjoint_union(&[c, d]).unwrap()), Some(3));
        let mut tree = LabeledGraph::with_vertices(a, 3);
        tree.add_edge(0, 1, 0);
        tree.add_edge(1, 2, 1);
        assert_eq!(girth(&tree), None);
    }

    #[test]
    fn lambda1_of_cycle() {
        let a = Alphabet::bouquet(2).unwrap();
        let c = cycle_graph(&a, &a.parse_word("a a a a a a").unwrap()).unwrap();
        let l = lambda1(&c).unwrap();
        let expected = 1.0 - (2.0 * std::f64::consts::PI / 6.0).cos();
        assert!((l - expected).abs() < 1e-9);
        let m = metrics(&c);
        assert_eq!(m.diameter, 3);
        assert_eq!(m.valence_max, 2);
        assert!(!m.disconnected);
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_regular(60, 3, &mut rng).unwrap();
        let dense = lambda1(&g).unwrap();
        let power = power_iteration_gap(&g, 3);
        assert!((power - dense).abs() < 1e-3, "{power} vs {dense}");
    }
}
