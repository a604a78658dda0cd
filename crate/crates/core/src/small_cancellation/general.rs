//! Fiber-product engine for arbitrary folded graphs.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::product::{Product, Shape};
use super::{
    girth_verdict, graph_girth, occurrence, CommonWords, Piece, PieceEnumeration, PieceSummary,
    SmallCancellationReport, Variant, Verdict, Witness,
};
use crate::alpha::Alpha;
use crate::graph::{Adjacency, Dart, LabeledGraph};
use crate::word::Word;

/// All lifts of `word` as a piece record.
fn piece_of(g: &LabeledGraph, adj: &Adjacency, comp: &[usize], word: Word) -> Piece {
    let occurrences = (0..g.vertex_count())
        .filter_map(|v| g.lift_from(adj, &word, v))
        .map(|path| occurrence(g, comp, path[0]))
        .collect();
    Piece { word, occurrences }
}

fn unbounded(g: &LabeledGraph, prod: &Product, comp: &[usize], cycle: &[Dart]) -> Witness {
    let path: Vec<Dart> = cycle.iter().map(|&d| prod.first(d)).collect();
    Witness::Unbounded {
        word: g.alphabet().format_word(&g.read_path(&path)),
        lifts: [
            occurrence(g, comp, prod.first(cycle[0])),
            occurrence(g, comp, prod.second(cycle[0])),
        ],
    }
}

pub(super) fn check(g: &LabeledGraph, alpha: Alpha, variant: Variant) -> SmallCancellationReport {
    let girth = graph_girth(g);
    let prod = Product::build(g, g, true);
    let (comp, _) = g.components();
    let adj = g.adjacency();
    let diameter_path = match prod.shape() {
        Shape::Cyclic { cycle } => {
            return SmallCancellationReport {
                alpha,
                variant,
                verdict: Verdict::Degenerate,
                max_piece: None,
                witness: Some(unbounded(g, &prod, &comp, &cycle)),
                girth,
            }
        }
        Shape::Forest { diameter_path } => diameter_path,
    };
    let max_piece = (!diameter_path.is_empty()).then(|| {
        let path: Vec<Dart> = diameter_path.iter().map(|&d| prod.first(d)).collect();
        piece_of(g, &adj, &comp, g.read_path(&path)).summary(g.alphabet())
    });
    let (verdict, witness) = match variant {
        Variant::Girth => girth_verdict(alpha, girth, &max_piece),
        Variant::Cycle => {
            let max_len = max_piece.as_ref().map_or(0, |p| p.length);
            match cycle_search(g, &adj, &comp, &prod, alpha, girth, max_len) {
                Some(w) => (Verdict::Fail, Some(w)),
                None => (Verdict::Pass, None),
            }
        }
    };
    SmallCancellationReport {
        alpha,
        variant,
        verdict,
        max_piece,
        witness,
        girth,
    }
}

#[derive(Clone, Copy)]
struct Closing {
    best: u32,
    best_dart: u32,
    second: u32,
}

/// Shortest non-backtracking continuations from a dart back to each vertex.
///
/// For an end dart `e` and vertex `s`, stores the two shortest continuation
/// lengths ending at `s` through different final darts, so the shortest
/// closing path avoiding one forbidden final dart is a lookup.
struct ClosingCache<'a> {
    g: &'a LabeledGraph,
    adj: &'a Adjacency,
    tables: HashMap<Dart, Vec<Closing>>,
}

impl<'a> ClosingCache<'a> {
    fn new(g: &'a LabeledGraph, adj: &'a Adjacency) -> Self {
        ClosingCache {
            g,
            adj,
            tables: HashMap::new(),
        }
    }

    /// Breadth-first search over darts following `e` without backtracking.
    fn bfs(g: &LabeledGraph, adj: &Adjacency, e: Dart) -> (Vec<u32>, Vec<Option<Dart>>) {
        let mut dist = vec![u32::MAX; g.dart_count()];
        let mut parent = vec![None; g.dart_count()];
        dist[e.index()] = 0;
        let mut queue = VecDeque::from([e]);
        while let Some(d) = queue.pop_front() {
            for &n in adj.out(g.target(d)) {
                if n != d.reverse() && dist[n.index()] == u32::MAX {
                    dist[n.index()] = dist[d.index()] + 1;
                    parent[n.index()] = Some(d);
                    queue.push_back(n);
                }
            }
        }
        (dist, parent)
    }

    /// Length of the shortest non-backtracking path continuing after `e`,
    /// ending at `s` with a last dart other than `forbidden`.
    fn lookup(&mut self, e: Dart, s: usize, forbidden: Dart) -> Option<usize> {
        let (g, adj) = (self.g, self.adj);
        let table = self.tables.entry(e).or_insert_with(|| {
            let (dist, _) = Self::bfs(g, adj, e);
            let mut t = vec![
                Closing {
                    best: u32::MAX,
                    best_dart: u32::MAX,
                    second: u32::MAX,
                };
                g.vertex_count()
            ];
            for d in g.darts() {
                let k = dist[d.index()];
                if k == u32::MAX {
                    continue;
                }
                let c = &mut t[g.target(d)];
                if k < c.best {
                    c.second = c.best;
                    c.best = k;
                    c.best_dart = d.index() as u32;
                } else if k < c.second {
                    c.second = k;
                }
            }
            t
        });
        let c = table[s];
        let k = if c.best_dart == forbidden.index() as u32 {
            c.second
        } else {
            c.best
        };
        (k != u32::MAX).then_some(k as usize)
    }

    /// The path realising [`Self::lookup`], excluding `e` itself.
    fn path(&self, e: Dart, s: usize, forbidden: Dart) -> Vec<Dart> {
        let (dist, parent) = Self::bfs(self.g, self.adj, e);
        let end = self
            .g
            .darts()
            .filter(|&d| self.g.target(d) == s && d != forbidden && dist[d.index()] != u32::MAX)
            .min_by_key(|&d| (dist[d.index()], d))
            .expect("closing path exists");
        let mut path = Vec::new();
        let mut d = end;
        while d != e {
            path.push(d);
            d = parent[d.index()].unwrap();
        }
        path.reverse();
        path
    }
}

/// Shortest period of a dart sequence, by the prefix function.
fn extend_prefix_function(seq: &[Dart], pi: &mut Vec<usize>) {
    let l = seq.len();
    if l == 1 {
        pi.push(0);
        return;
    }
    let mut j = pi[l - 2];
    while j > 0 && seq[l - 1] != seq[j] {
        j = pi[j - 1];
    }
    if seq[l - 1] == seq[j] {
        j += 1;
    }
    pi.push(j);
}

/// Searches every piece occurrence long enough to possibly fail for the
/// shortest immersed cycle it factors through. Returns the first failure in
/// (start vertex, dart) order.
fn cycle_search(
    g: &LabeledGraph,
    adj: &Adjacency,
    comp: &[usize],
    prod: &Product,
    alpha: Alpha,
    girth: Option<usize>,
    max_len: usize,
) -> Option<Witness> {
    // every cycle is at least the girth long
    let t = alpha.threshold(girth?).max(1);
    if max_len < t {
        return None;
    }
    let mut cache = ClosingCache::new(g, adj);
    let mut path: Vec<Dart> = Vec::new();
    let mut seq: Vec<Dart> = Vec::new();
    let mut pi: Vec<usize> = Vec::new();
    let mut iters: Vec<usize> = Vec::new();
    for s in 0..prod.vertex_count() {
        iters.push(0);
        while let Some(k) = iters.last_mut() {
            let v = path.last().map_or(s, |&d| prod.target(d));
            let out = prod.out(v);
            if *k == out.len() {
                iters.pop();
                if path.pop().is_some() {
                    seq.pop();
                    pi.pop();
                }
                continue;
            }
            let d = out[*k];
            *k += 1;
            if path.last().is_some_and(|&last| d == last.reverse()) {
                continue;
            }
            path.push(d);
            seq.push(prod.first(d));
            extend_prefix_function(&seq, &mut pi);
            iters.push(0);
            let l = seq.len();
            if l < t {
                continue;
            }
            let period = l - pi[l - 1];
            let first = seq[0];
            let close = cache
                .lookup(seq[l - 1], g.source(first), first.reverse())
                .map(|q| l + q);
            let wrap = (period < l).then_some(period);
            let shortest = match (close, wrap) {
                (Some(a), Some(b)) => a.min(b),
                (a, b) => match a.or(b) {
                    Some(x) => x,
                    None => continue,
                },
            };
            if alpha.admits(l, shortest) {
                continue;
            }
            let cycle: Vec<Dart> = if wrap == Some(shortest) {
                seq[..period].to_vec()
            } else {
                let mut c = seq.clone();
                c.extend(cache.path(seq[l - 1], g.source(first), first.reverse()));
                c
            };
            let word = g.read_path(&seq);
            let summary = PieceSummary {
                word: g.alphabet().format_word(&word),
                length: l,
                occurrences: vec![occurrence(g, comp, first)],
            };
            return Some(Witness::Cycle {
                piece: summary,
                cycle: g.alphabet().format_word(&g.read_path(&cycle)),
                cycle_length: cycle.len(),
            });
        }
    }
    None
}

/// Whether no one-letter extension of `word` on either side still has two lifts.
fn is_word_maximal(g: &LabeledGraph, adj: &Adjacency, word: &Word) -> bool {
    let lifts: Vec<(usize, usize)> = (0..g.vertex_count())
        .filter_map(|v| {
            let p = g.lift_from(adj, word, v)?;
            Some((v, g.target(*p.last().unwrap())))
        })
        .collect();
    let letters = word.letters();
    let (first, last) = (letters[0], letters[letters.len() - 1]);
    for x in g.alphabet().letters() {
        if x != last.inverse() && lifts.iter().filter(|&&(_, end)| g.step(adj, end, x).is_some()).count() >= 2 {
            return false;
        }
        // a letter x in front means a dart reading x⁻¹ leaves the start
        if x != first.inverse()
            && lifts
                .iter()
                .filter(|&&(start, _)| g.step(adj, start, x.inverse()).is_some())
                .count()
                >= 2
        {
            return false;
        }
    }
    true
}

pub(super) fn enumerate(g: &LabeledGraph) -> PieceEnumeration {
    let prod = Product::build(g, g, true);
    let (comp, _) = g.components();
    if let Shape::Cyclic { cycle } = prod.shape() {
        return PieceEnumeration::Degenerate(unbounded(g, &prod, &comp, &cycle));
    }
    let adj = g.adjacency();
    // candidate words: leaf-to-leaf paths in the product forest
    let mut candidates = BTreeSet::new();
    let mut path: Vec<Dart> = Vec::new();
    let mut iters: Vec<usize> = Vec::new();
    for s in (0..prod.vertex_count()).filter(|&v| prod.is_leaf(v)) {
        iters.push(0);
        while let Some(k) = iters.last_mut() {
            let v = path.last().map_or(s, |&d| prod.target(d));
            let out = prod.out(v);
            if *k == out.len() {
                iters.pop();
                path.pop();
                continue;
            }
            let d = out[*k];
            *k += 1;
            if path.last().is_some_and(|&last| d == last.reverse()) {
                continue;
            }
            path.push(d);
            iters.push(0);
            if prod.is_leaf(prod.target(d)) {
                let darts: Vec<Dart> = path.iter().map(|&d| prod.first(d)).collect();
                candidates.insert(g.read_path(&darts).canonical_up_to_inversion());
            }
        }
    }
    let mut pieces: Vec<Piece> = candidates
        .into_iter()
        .filter(|w| is_word_maximal(g, &adj, w))
        .map(|w| piece_of(g, &adj, &comp, w))
        .collect();
    pieces.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
    PieceEnumeration::Pieces(pieces)
}

pub(super) fn common_words(g1: &LabeledGraph, g2: &LabeledGraph) -> CommonWords {
    let prod = Product::build(g1, g2, false);
    match prod.shape() {
        Shape::Cyclic { cycle } => {
            let darts: Vec<Dart> = cycle.iter().map(|&d| prod.first(d)).collect();
            CommonWords::Unbounded {
                period: g1.read_path(&darts),
            }
        }
        Shape::Forest { diameter_path } => {
            let darts: Vec<Dart> = diameter_path.iter().map(|&d| prod.first(d)).collect();
            CommonWords::Bounded {
                longest: g1.read_path(&darts),
            }
        }
    }
}

/// Shortest immersed cycle a path factors through (wrapping allowed).
pub(crate) struct CycleThrough<'a> {
    cache: ClosingCache<'a>,
}

impl<'a> CycleThrough<'a> {
    pub fn new(g: &'a LabeledGraph, adj: &'a Adjacency) -> Self {
        CycleThrough {
            cache: ClosingCache::new(g, adj),
        }
    }

    pub fn shortest(&mut self, path: &[Dart]) -> Option<usize> {
        let l = path.len();
        let first = *path.first()?;
        let mut pi = Vec::with_capacity(l);
        for k in 1..=l {
            extend_prefix_function(&path[..k], &mut pi);
        }
        let period = l - pi[l - 1];
        let wrap = (period < l).then_some(period);
        let close = self
            .cache
            .lookup(path[l - 1], self.cache.g.source(first), first.reverse())
            .map(|q| l + q);
        match (close, wrap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}
