//! Labelled directed graphs over a bouquet of circles.
//!
//! Edges carry positive letters; traversing an edge backwards reads the
//! inverse letter. Each edge `e` has two darts: `2e` (forward) and `2e + 1`
//! (backward). Paths are dart sequences; a path is immersed when no dart is
//! immediately followed by its reverse.

mod fold;
mod generate;
mod io;
mod metrics;

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Alphabet, Letter, Word};

pub use fold::{fold, fold_with_order, FoldedGraph};
pub use generate::{bouquet, cycle_graph, disjoint_union, generate, random_regular, GraphKind};
pub use io::{parse_graph, serialize_graph};
pub use metrics::{girth, lambda1, metrics, GraphMetrics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    /// Generator index; the edge reads this generator forwards.
    pub label: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart(u32);

impl Dart {
    pub fn new(edge: usize, backward: bool) -> Self {
        Dart((2 * edge + backward as usize) as u32)
    }

    pub fn from_index(i: usize) -> Self {
        Dart(i as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_backward(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn reverse(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

/// Number of `j` pieces each edge is cut into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionSpec {
    j: usize,
}

impl SubdivisionSpec {
    pub fn new(j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::Domain("subdivision factor must be >= 1".into()));
        }
        Ok(SubdivisionSpec { j })
    }

    pub fn j(&self) -> usize {
        self.j
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    num_vertices: usize,
    edges: Vec<Edge>,
}

/// A component that is a single cycle: position `i` is vertex `vertices[i]`,
/// and `darts[i]` leads from position `i` to `i + 1`.
#[derive(Clone, Debug, Default)]
pub struct CycleComponent {
    pub word: Word,
    pub vertices: Vec<usize>,
    pub darts: Vec<Dart>,
}

/// Outgoing darts per vertex in compressed form, sorted by letter.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    darts: Vec<Dart>,
}

impl Adjacency {
    pub fn out(&self, v: usize) -> &[Dart] {
        &self.darts[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

impl LabeledGraph {
    pub fn new(alphabet: Alphabet) -> Self {
        LabeledGraph {
            alphabet,
            num_vertices: 0,
            edges: Vec::new(),
        }
    }

    pub fn with_vertices(alphabet: Alphabet, n: usize) -> Self {
        LabeledGraph {
            alphabet,
            num_vertices: n,
            edges: Vec::new(),
        }
    }

    pub(crate) fn from_parts(alphabet: Alphabet, num_vertices: usize, edges: Vec<Edge>) -> Self {
        LabeledGraph {
            alphabet,
            num_vertices,
            edges,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Same graph over another alphabet of at least the same rank.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Self> {
        if self.edges.iter().any(|e| e.label as usize >= alphabet.m()) {
            return Err(Error::InvalidAlphabet("alphabet too small for edge labels".into()));
        }
        Ok(LabeledGraph {
            alphabet,
            ..self.clone()
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.num_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn add_vertex(&mut self) -> usize {
        self.num_vertices += 1;
        self.num_vertices - 1
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, label: u32) -> usize {
        assert!(src < self.num_vertices && dst < self.num_vertices, "vertex out of range");
        assert!((label as usize) < self.alphabet.m(), "label out of range");
        self.edges.push(Edge { src, dst, label });
        self.edges.len() - 1
    }

    /// Adds an edge reading `letter` from `src` to `dst`; an inverse letter is
    /// stored as its positive letter with the orientation flipped.
    pub fn add_letter_edge(&mut self, src: usize, dst: usize, letter: Letter) -> usize {
        if letter.is_inverse() {
            self.add_edge(dst, src, letter.generator())
        } else {
            self.add_edge(src, dst, letter.generator())
        }
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        (0..self.dart_count()).map(Dart::from_index)
    }

    pub fn source(&self, d: Dart) -> usize {
        let e = self.edges[d.edge()];
        if d.is_backward() {
            e.dst
        } else {
            e.src
        }
    }

    pub fn target(&self, d: Dart) -> usize {
        self.source(d.reverse())
    }

    pub fn letter(&self, d: Dart) -> Letter {
        Letter::new(self.edges[d.edge()].label, d.is_backward())
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut counts = vec![0usize; self.num_vertices + 1];
        for d in self.darts() {
            counts[self.source(d) + 1] += 1;
        }
        for v in 0..self.num_vertices {
            counts[v + 1] += counts[v];
        }
        let mut fill = counts.clone();
        let mut darts = vec![Dart(0); self.dart_count()];
        for d in self.darts() {
            let s = self.source(d);
            darts[fill[s]] = d;
            fill[s] += 1;
        }
        for v in 0..self.num_vertices {
            darts[counts[v]..counts[v + 1]].sort_by_key(|&d| (self.letter(d), d));
        }
        Adjacency {
            offsets: counts,
            darts,
        }
    }

    /// Undirected degree; a loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for e in &self.edges {
            deg[e.src] += 1;
            deg[e.dst] += 1;
        }
        deg
    }

    /// No vertex has two outgoing (or two incoming) edges with the same letter.
    pub fn is_folded(&self) -> bool {
        let adj = self.adjacency();
        (0..self.num_vertices).all(|v| {
            adj.out(v)
                .windows(2)
                .all(|p| self.letter(p[0]) != self.letter(p[1]))
        })
    }

    pub fn is_immersed_path(&self, path: &[Dart]) -> bool {
        path.windows(2)
            .all(|p| self.target(p[0]) == self.source(p[1]) && p[1] != p[0].reverse())
    }

    pub fn read_path(&self, path: &[Dart]) -> Word {
        path.iter().map(|&d| self.letter(d)).collect()
    }

    /// The unique path reading `word` from `start` in a folded graph.
    pub fn lift_from(&self, adj: &Adjacency, word: &Word, start: usize) -> Option<Vec<Dart>> {
        let mut v = start;
        let mut path = Vec::with_capacity(word.len());
        for &l in word.letters() {
            let d = self.step(adj, v, l)?;
            path.push(d);
            v = self.target(d);
        }
        Some(path)
    }

    /// Start vertices at which `word` lifts (folded graph).
    pub fn lifts(&self, word: &Word) -> Vec<usize> {
        let adj = self.adjacency();
        (0..self.num_vertices)
            .filter(|&v| self.lift_from(&adj, word, v).is_some())
            .collect()
    }

    /// The outgoing dart at `v` reading `letter`, if any (first in dart order).
    pub fn step(&self, adj: &Adjacency, v: usize, letter: Letter) -> Option<Dart> {
        let out = adj.out(v);
        let i = out.partition_point(|&d| self.letter(d) < letter);
        out.get(i).copied().filter(|&d| self.letter(d) == letter)
    }

    /// Connected component index of every vertex, and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.num_vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &d in adj.out(v) {
                    let t = self.target(d);
                    if comp[t] == usize::MAX {
                        comp[t] = count;
                        queue.push_back(t);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Induced subgraph on the vertices with `keep[v]`; returns the new graph
    /// and the old-to-new vertex map.
    pub fn induced(&self, keep: &[bool]) -> (LabeledGraph, Vec<Option<usize>>) {
        let mut map = vec![None; self.num_vertices];
        let mut n = 0;
        for v in 0..self.num_vertices {
            if keep[v] {
                map[v] = Some(n);
                n += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                Some(Edge {
                    src: map[e.src]?,
                    dst: map[e.dst]?,
                    label: e.label,
                })
            })
            .collect();
        (LabeledGraph::from_parts(self.alphabet.clone(), n, edges), map)
    }

    /// Removes hanging trees (and isolated vertices) by repeatedly deleting
    /// vertices of degree at most one.
    pub fn core(&self) -> LabeledGraph {
        let mut deg = self.degrees();
        let adj = self.adjacency();
        let mut keep = vec![true; self.num_vertices];
        let mut stack: Vec<usize> = (0..self.num_vertices).filter(|&v| deg[v] <= 1).collect();
        while let Some(v) = stack.pop() {
            if !keep[v] {
                continue;
            }
            keep[v] = false;
            for &d in adj.out(v) {
                let t = self.target(d);
                if keep[t] {
                    deg[t] -= 1;
                    if deg[t] == 1 {
                        stack.push(t);
                    }
                }
            }
        }
        self.induced(&keep).0
    }

    /// When every component is a single cycle, the word read around each one
    /// starting at its smallest vertex, with the vertex at each position.
    pub fn cycle_components(&self) -> Option<Vec<CycleComponent>> {
        if self.degrees().iter().any(|&d| d != 2) {
            return None;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_vertices];
        let mut out = Vec::new();
        for s in 0..self.num_vertices {
            if seen[s] {
                continue;
            }
            let mut d = adj.out(s)[0];
            let mut comp = CycleComponent::default();
            loop {
                let v = self.source(d);
                seen[v] = true;
                comp.vertices.push(v);
                comp.darts.push(d);
                let t = self.target(d);
                if t == s {
                    break;
                }
                let o = adj.out(t);
                d = if o[0] == d.reverse() { o[1] } else { o[0] };
            }
            comp.word = self.read_path(&comp.darts);
            out.push(comp);
        }
        Some(out)
    }

    pub fn cycle_words(&self) -> Option<Vec<Word>> {
        self.cycle_components()
            .map(|cs| cs.into_iter().map(|c| c.word).collect())
    }

    /// Every edge replaced by a path of `j` edges through `j − 1` fresh
    /// vertices. New edges keep the original label as a placeholder.
    pub fn subdivide(&self, spec: SubdivisionSpec) -> LabeledGraph {
        let j = spec.j();
        let mut g = LabeledGraph::with_vertices(self.alphabet.clone(), self.num_vertices);
        for e in &self.edges {
            let mut prev = e.src;
            for k in 1..=j {
                let next = if k == j { e.dst } else { g.add_vertex() };
                g.add_edge(prev, next, e.label);
                prev = next;
            }
        }
        g
    }

    /// Independent uniform signed letter on every edge.
    pub fn label_random<R: Rng + ?Sized>(&self, rng: &mut R) -> LabeledGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let l = self.alphabet.random_letter(rng);
                if l.is_inverse() {
                    Edge {
                        src: e.dst,
                        dst: e.src,
                        label: l.generator(),
                    }
                } else {
                    Edge {
                        src: e.src,
                        dst: e.dst,
                        label: l.generator(),
                    }
                }
            })
            .collect();
        LabeledGraph::from_parts(self.alphabet.clone(), self.num_vertices, edges)
    }

    /// Every edge `e` relabelled by `f(e)` (orientation flips for inverse letters).
    pub fn relabel(&self, mut f: impl FnMut(usize) -> Letter) -> LabeledGraph {
        let mut g = LabeledGraph::with_vertices(self.alphabet.clone(), self.num_vertices);
        for (i, e) in self.edges.iter().enumerate() {
            g.add_letter_edge(e.src, e.dst, f(i));
        }
        g
    }

    /// Number of immersed paths of length `len` (paths of length 0 are the vertices).
    pub fn count_paths(&self, len: usize) -> BigUint {
        if len == 0 {
            return BigUint::from(self.num_vertices);
        }
        let mut count = vec![BigUint::one(); self.dart_count()];
        for _ in 1..len {
            let mut into = vec![BigUint::zero(); self.num_vertices];
            for d in self.darts() {
                into[self.target(d)] += &count[d.index()];
            }
            let next: Vec<BigUint> = self
                .darts()
                .map(|d| &into[self.source(d)] - &count[d.reverse().index()])
                .collect();
            count = next;
        }
        count.into_iter().sum()
    }

    /// Canonical string form: exact isomorphism invariant for folded graphs.
    ///
    /// Each component is numbered by breadth-first search over darts in
    /// letter order from every possible root; the lexicographically least
    /// encoding wins, and component encodings are sorted.
    pub fn canonical_form(&self) -> String {
        let adj = self.adjacency();
        let (comp, ncomp) = self.components();
        let mut members = vec![Vec::new(); ncomp];
        for v in 0..self.num_vertices {
            members[comp[v]].push(v);
        }
        let mut comp_edges = vec![Vec::new(); ncomp];
        for (i, e) in self.edges.iter().enumerate() {
            comp_edges[comp[e.src]].push(i);
        }
        let mut codes: Vec<Vec<(usize, usize, u32)>> = Vec::with_capacity(ncomp);
        let mut number = vec![usize::MAX; self.num_vertices];
        for c in 0..ncomp {
            let mut best: Option<Vec<(usize, usize, u32)>> = None;
            for &root in &members[c] {
                for &v in &members[c] {
                    number[v] = usize::MAX;
                }
                let mut next = 0;
                number[root] = 0;
                next += 1;
                let mut queue = VecDeque::from([root]);
                while let Some(v) = queue.pop_front() {
                    for &d in adj.out(v) {
                        let t = self.target(d);
                        if number[t] == usize::MAX {
                            number[t] = next;
                            next += 1;
                            queue.push_back(t);
                        }
                    }
                }
                let mut code: Vec<(usize, usize, u32)> = comp_edges[c]
                    .iter()
                    .map(|&i| {
                        let e = self.edges[i];
                        (number[e.src], number[e.dst], e.label)
                    })
                    .collect();
                code.sort_unstable();
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
            codes.push(best.unwrap_or_default());
        }
        codes.sort();
        let mut out = format!("m={};", self.alphabet.m());
        for code in &codes {
            let size = if code.is_empty() {
                1
            } else {
                code.iter().map(|&(a, b, _)| a.max(b)).max().unwrap() + 1
            };
            out.push_str(&format!("[{size}"));
            for (a, b, l) in code {
                out.push_str(&format!(" {a}-{b}:{l}"));
            }
            out.push(']');
        }
        out
    }

    /// Whether every letter of `word` belongs to this graph's alphabet.
    pub fn accepts_word(&self, word: &Word) -> bool {
        word.letters().iter().all(|&l| self.alphabet.contains(l))
    }
}
