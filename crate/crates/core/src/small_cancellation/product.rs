//! Fiber products of folded graphs.
//!
//! A product edge pairs two edges with the same label, so immersed paths in
//! the product are pairs of lifts of one reduced word. For the self-product
//! the diagonal is dropped: in a folded graph two lifts of a word that meet
//! once coincide, so off-diagonal paths are exactly pairs of distinct lifts.

use std::collections::{HashMap, VecDeque};

use crate::graph::{Dart, LabeledGraph};

#[derive(Clone, Copy, Debug)]
pub(crate) struct ProductEdge {
    pub src: u32,
    pub dst: u32,
    pub e1: u32,
    pub e2: u32,
}

pub(crate) struct Product {
    pub pairs: Vec<(usize, usize)>,
    pub edges: Vec<ProductEdge>,
    offsets: Vec<usize>,
    darts: Vec<Dart>,
}

/// Shape of the product: either every component is a tree, or a closed
/// product path (the lifts of an unbounded family of pieces).
pub(crate) enum Shape {
    Forest { diameter_path: Vec<Dart> },
    Cyclic { cycle: Vec<Dart> },
}

impl Product {
    pub fn build(g1: &LabeledGraph, g2: &LabeledGraph, exclude_diagonal: bool) -> Product {
        let m = g1.alphabet().m().max(g2.alphabet().m());
        let mut by_label: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (i, e) in g2.edges().iter().enumerate() {
            by_label[e.label as usize].push(i);
        }
        let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut pairs = Vec::new();
        let mut id = |p: (usize, usize), pairs: &mut Vec<(usize, usize)>| -> u32 {
            *ids.entry(p).or_insert_with(|| {
                pairs.push(p);
                (pairs.len() - 1) as u32
            })
        };
        let mut edges = Vec::new();
        for (i, e) in g1.edges().iter().enumerate() {
            for &j in &by_label[e.label as usize] {
                let f = g2.edge(j);
                if exclude_diagonal && e.src == f.src {
                    continue;
                }
                let src = id((e.src, f.src), &mut pairs);
                let dst = id((e.dst, f.dst), &mut pairs);
                edges.push(ProductEdge {
                    src,
                    dst,
                    e1: i as u32,
                    e2: j as u32,
                });
            }
        }
        let n = pairs.len();
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.src as usize + 1] += 1;
            offsets[e.dst as usize + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut darts = vec![Dart::new(0, false); 2 * edges.len()];
        for (i, e) in edges.iter().enumerate() {
            for (v, d) in [(e.src, Dart::new(i, false)), (e.dst, Dart::new(i, true))] {
                darts[fill[v as usize]] = d;
                fill[v as usize] += 1;
            }
        }
        Product {
            pairs,
            edges,
            offsets,
            darts,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn out(&self, v: usize) -> &[Dart] {
        &self.darts[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn source(&self, d: Dart) -> usize {
        let e = self.edges[d.edge()];
        (if d.is_backward() { e.dst } else { e.src }) as usize
    }

    pub fn target(&self, d: Dart) -> usize {
        self.source(d.reverse())
    }

    /// The dart of the first factor under a product dart.
    pub fn first(&self, d: Dart) -> Dart {
        Dart::new(self.edges[d.edge()].e1 as usize, d.is_backward())
    }

    pub fn second(&self, d: Dart) -> Dart {
        Dart::new(self.edges[d.edge()].e2 as usize, d.is_backward())
    }

    /// Breadth-first distances and parent darts from `s` inside its tree.
    fn bfs(&self, s: usize, dist: &mut [usize], parent: &mut [Option<Dart>], touched: &mut Vec<usize>) -> usize {
        dist[s] = 0;
        parent[s] = None;
        touched.push(s);
        let mut queue = VecDeque::from([s]);
        let mut far = s;
        while let Some(v) = queue.pop_front() {
            if dist[v] > dist[far] {
                far = v;
            }
            for &d in self.out(v) {
                let t = self.target(d);
                if dist[t] == usize::MAX {
                    dist[t] = dist[v] + 1;
                    parent[t] = Some(d);
                    touched.push(t);
                    queue.push_back(t);
                }
            }
        }
        far
    }

    pub fn shape(&self) -> Shape {
        let n = self.vertex_count();
        let mut dist = vec![usize::MAX; n];
        let mut parent: Vec<Option<Dart>> = vec![None; n];
        let mut best: Vec<Dart> = Vec::new();
        let mut touched = Vec::new();
        let mut done = vec![false; n];
        for s in 0..n {
            if done[s] {
                continue;
            }
            touched.clear();
            let far = self.bfs(s, &mut dist, &mut parent, &mut touched);
            let comp = touched.clone();
            for &v in &comp {
                done[v] = true;
            }
            // a tree has one fewer edge than vertices
            let degree_sum: usize = comp.iter().map(|&v| self.out(v).len()).sum();
            if degree_sum / 2 >= comp.len() {
                return Shape::Cyclic {
                    cycle: self.find_cycle(&comp, &dist, &parent),
                };
            }
            for &v in &comp {
                dist[v] = usize::MAX;
            }
            touched.clear();
            let other = self.bfs(far, &mut dist, &mut parent, &mut touched);
            if dist[other] > best.len() {
                let mut path = Vec::with_capacity(dist[other]);
                let mut v = other;
                while let Some(d) = parent[v] {
                    path.push(d);
                    v = self.source(d);
                }
                path.reverse();
                best = path;
            }
            for &v in &touched {
                dist[v] = usize::MAX;
            }
        }
        Shape::Forest {
            diameter_path: best,
        }
    }

    /// A closed immersed path in a component with at least as many edges as
    /// vertices, given a BFS tree of it.
    fn find_cycle(&self, comp: &[usize], dist: &[usize], parent: &[Option<Dart>]) -> Vec<Dart> {
        for &v in comp {
            for &d in self.out(v) {
                if parent[v] == Some(d.reverse()) {
                    continue;
                }
                let t = self.target(d);
                if parent[t] == Some(d) {
                    continue;
                }
                // d is a non-tree edge v -> t
                let mut left = Vec::new();
                let mut right = Vec::new();
                let (mut a, mut b) = (v, t);
                while a != b {
                    if dist[a] >= dist[b] {
                        let p = parent[a].unwrap();
                        left.push(p);
                        a = self.source(p);
                    } else {
                        let p = parent[b].unwrap();
                        right.push(p);
                        b = self.source(p);
                    }
                }
                // from the meeting point down to v, across d, back up to it
                let mut cycle: Vec<Dart> = left.into_iter().rev().collect();
                cycle.push(d);
                cycle.extend(right.into_iter().map(Dart::reverse));
                return cycle;
            }
        }
        unreachable!("component with a cycle has a non-tree edge")
    }

    /// Whether `v` is a leaf of its tree.
    pub fn is_leaf(&self, v: usize) -> bool {
        self.out(v).len() == 1
    }
}
