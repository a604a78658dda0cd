#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use gsc_core::graph::{fold, LabeledGraph};
use gsc_core::{Alpha, Alphabet, Letter, Verdict, Variant, Word};
use rand::Rng;

// ---------------------------------------------------------------------------
// Brute-force oracles. They scan the edge list directly and never touch the
// fiber product, the closing-path cache or the hash engine.

/// Endpoints reached from `v` by one letter, scanning all edges.
pub fn moves(g: &LabeledGraph, v: usize, x: Letter) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.label != x.generator() {
            continue;
        }
        if !x.is_inverse() && e.src == v {
            out.push((i, e.dst, false));
        }
        if x.is_inverse() && e.dst == v {
            out.push((i, e.src, true));
        }
    }
    out
}

pub type OraclePath = Vec<(usize, bool)>;

pub enum OraclePieces {
    Bounded(BTreeMap<Word, Vec<OraclePath>>),
    Unbounded,
}

/// Every word with at least two lifts, with those lifts. Unboundedness is
/// detected when a branch revisits a (set of end vertices, last letter)
/// state: the segment between can then be pumped.
pub fn oracle_pieces(g: &LabeledGraph) -> OraclePieces {
    struct Frame {
        word: Vec<Letter>,
        lifts: Vec<(usize, OraclePath)>,
    }
    let mut out = BTreeMap::new();
    let letters: Vec<Letter> = g.alphabet().letters().collect();
    fn ends(lifts: &[(usize, OraclePath)]) -> Vec<usize> {
        let mut e: Vec<usize> = lifts.iter().map(|l| l.0).collect();
        e.sort();
        e
    }
    // depth-first with the branch history of states
    fn go(
        g: &LabeledGraph,
        letters: &[Letter],
        frame: Frame,
        history: &mut Vec<(Vec<usize>, Letter)>,
        out: &mut BTreeMap<Word, Vec<OraclePath>>,
    ) -> bool {
        for &x in letters {
            if frame.word.last().is_some_and(|&l| l == x.inverse()) {
                continue;
            }
            let mut lifts = Vec::new();
            for (end, path) in &frame.lifts {
                for (e, t, back) in moves(g, *end, x) {
                    let mut p = path.clone();
                    p.push((e, back));
                    lifts.push((t, p));
                }
            }
            if lifts.len() < 2 {
                continue;
            }
            let state = (ends(&lifts), x);
            if history.contains(&state) {
                return false;
            }
            let mut word = frame.word.clone();
            word.push(x);
            out.insert(Word::from_letters(word.clone()), lifts.iter().map(|l| l.1.clone()).collect());
            history.push(state);
            let ok = go(g, letters, Frame { word, lifts }, history, out);
            history.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let start = Frame {
        word: Vec::new(),
        lifts: (0..g.vertex_count()).map(|v| (v, Vec::new())).collect(),
    };
    if go(g, &letters, start, &mut Vec::new(), &mut out) {
        OraclePieces::Bounded(out)
    } else {
        OraclePieces::Unbounded
    }
}

pub fn oracle_girth(g: &LabeledGraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
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
            best = Some(best.map_or(dist[e.dst] + 1, |b| b.min(dist[e.dst] + 1)));
        }
    }
    best
}

pub fn dart_src(g: &LabeledGraph, d: (usize, bool)) -> usize {
    let e = g.edge(d.0);
    if d.1 {
        e.dst
    } else {
        e.src
    }
}

pub fn dart_dst(g: &LabeledGraph, d: (usize, bool)) -> usize {
    let e = g.edge(d.0);
    if d.1 {
        e.src
    } else {
        e.dst
    }
}

/// Whether some immersed cycle of length at most `cmax` contains the path
/// (possibly wrapping around it).
pub fn oracle_short_cycle(g: &LabeledGraph, p: &OraclePath, cmax: usize) -> bool {
    let l = p.len();
    for c in 1..l {
        if c <= cmax && (0..l - c).all(|i| p[i] == p[i + c]) {
            return true;
        }
    }
    if cmax < l {
        return false;
    }
    let darts: Vec<(usize, bool)> = (0..g.edge_count()).flat_map(|e| [(e, false), (e, true)]).collect();
    let first = p[0];
    let start = dart_src(g, first);
    let closes = |d: (usize, bool)| dart_dst(g, d) == start && !(d.0 == first.0 && d.1 != first.1);
    // fin[d] after r rounds: from last dart d a closing continuation of at most r darts exists
    let mut fin: Vec<bool> = darts.iter().map(|&d| closes(d)).collect();
    for _ in 0..cmax - l {
        let next: Vec<bool> = darts
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                fin[i]
                    || darts.iter().enumerate().any(|(j, &n)| {
                        fin[j] && dart_src(g, n) == dart_dst(g, d) && !(n.0 == d.0 && n.1 != d.1)
                    })
            })
            .collect();
        fin = next;
    }
    let last = p[l - 1];
    fin[darts.iter().position(|&d| d == last).unwrap()]
}

#[derive(Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub verdict: Verdict,
    pub max_piece: usize,
}

pub fn oracle_check(g: &LabeledGraph, a: Alpha, variant: Variant) -> OracleVerdict {
    let pieces = match oracle_pieces(g) {
        OraclePieces::Unbounded => {
            return OracleVerdict {
                verdict: Verdict::Degenerate,
                max_piece: 0,
            }
        }
        OraclePieces::Bounded(p) => p,
    };
    let max_piece = pieces.keys().map(|w| w.len()).max().unwrap_or(0);
    let girth = oracle_girth(g);
    let pass = match (variant, girth) {
        (_, None) => true,
        (Variant::Girth, Some(gi)) => a.admits(max_piece, gi),
        (Variant::Cycle, Some(_)) => pieces.iter().all(|(w, lifts)| {
            let cmax = ((w.len() as u128 * a.denom() as u128) / a.numer() as u128) as usize;
            lifts.iter().all(|p| !oracle_short_cycle(g, p, cmax))
        }),
    };
    OracleVerdict {
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        max_piece,
    }
}

pub fn oracle_maximal(g: &LabeledGraph) -> Option<BTreeSet<Word>> {
    let OraclePieces::Bounded(pieces) = oracle_pieces(g) else {
        return None;
    };
    let maximal = pieces
        .keys()
        .filter(|p| {
            !pieces.keys().any(|q| {
                q.len() == p.len() + 1 && (q.letters()[1..] == *p.letters() || q.letters()[..p.len()] == *p.letters())
            })
        })
        .map(|p| p.canonical_up_to_inversion())
        .collect();
    Some(maximal)
}

/// Folded graph from up to 12 random edges on a few vertices.
pub fn random_small_graph<R: Rng>(rng: &mut R) -> LabeledGraph {
    let m = if rng.random_bool(0.8) { 2 } else { 3 };
    let a = Alphabet::bouquet(m).unwrap();
    let n = rng.random_range(2..=8);
    let e = rng.random_range(1..=12);
    let mut g = LabeledGraph::with_vertices(a.clone(), n);
    for _ in 0..e {
        let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
        g.add_letter_edge(u, v, a.random_letter(rng));
    }
    fold(&g).graph
}

/// Brute force over all reduced words of each length.
pub fn oracle_missing(g: &LabeledGraph, max_len: usize) -> Option<Word> {
    let letters: Vec<Letter> = g.alphabet().letters().collect();
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &x in &letters {
                if w.last().is_some_and(|&l| l == x.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        next.sort();
        for w in &next {
            let lifts = (0..g.vertex_count()).any(|s| {
                let mut ends = vec![s];
                for &x in w {
                    ends = ends.iter().flat_map(|&v| moves(g, v, x)).map(|m| m.1).collect();
                }
                !ends.is_empty()
            });
            if !lifts {
                return Some(Word::from_letters(w.clone()));
            }
        }
        layer = next;
    }
    None
}
