//! Stallings folding.

use super::{Dart, Edge, LabeledGraph};

/// A folded graph together with the quotient maps from the input graph.
#[derive(Clone, Debug)]
pub struct FoldedGraph {
    pub graph: LabeledGraph,
    /// Input vertex to folded vertex.
    pub vertex_map: Vec<usize>,
    /// Input edge to folded edge (orientation is preserved).
    pub edge_map: Vec<usize>,
}

pub fn fold(g: &LabeledGraph) -> FoldedGraph {
    let order: Vec<usize> = (0..g.edge_count()).collect();
    fold_with_order(g, &order)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
}

/// Folds, identifying edges in the order their darts are met when edges are
/// inserted as listed in `order` (a permutation of the edge indices). The
/// result is independent of `order` up to isomorphism.
pub fn fold_with_order(g: &LabeledGraph, order: &[usize]) -> FoldedGraph {
    let n = g.vertex_count();
    let m = g.edge_count();
    assert_eq!(order.len(), m, "order must list every edge");
    let nletters = g.alphabet().letter_count();

    let mut uf = UnionFind {
        parent: (0..n).collect(),
    };
    let mut lists: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for &e in order {
        for d in [Dart::new(e, false), Dart::new(e, true)] {
            lists[g.source(d)].push(d);
        }
    }
    let mut merged_into: Vec<usize> = (0..m).collect();
    let mut alive = vec![true; m];
    let mut slot: Vec<Option<Dart>> = vec![None; nletters];

    let mut stack: Vec<usize> = Vec::with_capacity(n);
    for &e in order.iter().rev() {
        stack.push(g.edge(e).dst);
        stack.push(g.edge(e).src);
    }

    while let Some(v) = stack.pop() {
        let r = uf.find(v);
        lists[r].retain(|d| alive[d.edge()]);
        let mut collision = None;
        for &d in &lists[r] {
            let l = g.letter(d).index();
            match slot[l] {
                None => slot[l] = Some(d),
                Some(keep) if keep.edge() != d.edge() => {
                    collision = Some((keep, d));
                    break;
                }
                Some(_) => {}
            }
        }
        for &d in &lists[r] {
            slot[g.letter(d).index()] = None;
        }
        let Some((keep, kill)) = collision else {
            continue;
        };
        alive[kill.edge()] = false;
        merged_into[kill.edge()] = keep.edge();
        let a = uf.find(g.target(keep));
        let b = uf.find(g.target(kill));
        if a != b {
            let (big, small) = if lists[a].len() >= lists[b].len() {
                (a, b)
            } else {
                (b, a)
            };
            uf.parent[small] = big;
            let moved = std::mem::take(&mut lists[small]);
            lists[big].extend(moved);
            stack.push(big);
        }
        stack.push(uf.find(r));
    }

    let mut vertex_map = vec![usize::MAX; n];
    let mut root_index = vec![usize::MAX; n];
    let mut count = 0;
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        let r = uf.find(v);
        if root_index[r] == usize::MAX {
            root_index[r] = count;
            count += 1;
        }
        *slot = root_index[r];
    }
    let mut new_index = vec![usize::MAX; m];
    let mut edges = Vec::new();
    for e in 0..m {
        if alive[e] {
            new_index[e] = edges.len();
            let old = g.edge(e);
            edges.push(Edge {
                src: vertex_map[old.src],
                dst: vertex_map[old.dst],
                label: old.label,
            });
        }
    }
    let edge_map = (0..m)
        .map(|mut e| {
            while !alive[e] {
                e = merged_into[e];
            }
            new_index[e]
        })
        .collect();
    FoldedGraph {
        graph: LabeledGraph::from_parts(g.alphabet().clone(), count, edges),
        vertex_map,
        edge_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle_graph};
    use crate::word::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::bouquet(2).unwrap()
    }

    #[test]
    fn folds_cancelling_cycle_to_stick() {
        let a = ab();
        let g = cycle_graph(&a, &a.parse_word("a b b' a'").unwrap()).unwrap();
        let f = fold(&g);
        // closed path a b b' a' folds onto a tree with two edges
        assert_eq!(f.graph.edge_count(), 2);
        assert_eq!(f.graph.vertex_count(), 3);
        assert!(f.graph.is_folded());
    }

    #[test]
    fn proper_power_cycle_is_already_folded() {
        let a = ab();
        let g = cycle_graph(&a, &a.parse_word("a b a b a b").unwrap()).unwrap();
        let f = fold(&g);
        assert_eq!(f.graph.edge_count(), 6);
    }

    #[test]
    fn wedge_folds_shared_prefix() {
        let a = ab();
        let mut g = cycle_graph(&a, &a.parse_word("a b a'").unwrap()).unwrap();
        // a second loop at 0 reading a b' a'
        let u = g.add_vertex();
        let w = g.add_vertex();
        g.add_edge(0, u, 0);
        g.add_edge(w, u, 1);
        g.add_edge(0, w, 0);
        let f = fold(&g);
        assert!(f.graph.is_folded());
        // all a-edges leave 0 and merge; the b-edges become one loop
        assert_eq!(f.graph.vertex_count(), 2);
        assert_eq!(f.graph.edge_count(), 2);
    }

    #[test]
    fn folded_input_unchanged() {
        let g = bouquet(3).unwrap();
        let f = fold(&g);
        assert_eq!(f.graph, g);
        assert_eq!(f.edge_map, vec![0, 1, 2]);
    }

    #[test]
    fn maps_are_morphisms() {
        let a = ab();
        let g = cycle_graph(&a, &a.parse_word("a a b a' a' b'").unwrap()).unwrap();
        let f = fold(&g);
        for (i, e) in g.edges().iter().enumerate() {
            let fe = f.graph.edge(f.edge_map[i]);
            assert_eq!(fe.label, e.label);
            assert_eq!(fe.src, f.vertex_map[e.src]);
            assert_eq!(fe.dst, f.vertex_map[e.dst]);
        }
    }
}
