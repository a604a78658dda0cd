//! Graph generators.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LabeledGraph;
use crate::error::{Error, Result};
use crate::word::{Alphabet, Word};

/// Retry budget for the configuration model.
const MAX_REGULAR_ATTEMPTS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    /// A cycle reading the word (given in the default alphabet of rank `m`).
    Cycle { m: usize, word: String },
    Bouquet { m: usize },
    /// Simple random `degree`-regular graph; labels are placeholders.
    RandomRegular { n: usize, degree: usize },
    DisjointUnion { parts: Vec<GraphKind> },
}

pub fn generate<R: Rng + ?Sized>(kind: &GraphKind, rng: &mut R) -> Result<LabeledGraph> {
    match kind {
        GraphKind::Cycle { m, word } => {
            let a = Alphabet::bouquet(*m)?;
            cycle_graph(&a, &a.parse_word(word)?)
        }
        GraphKind::Bouquet { m } => bouquet(*m),
        GraphKind::RandomRegular { n, degree } => random_regular(*n, *degree, rng),
        GraphKind::DisjointUnion { parts } => {
            let graphs = parts
                .iter()
                .map(|p| generate(p, rng))
                .collect::<Result<Vec<_>>>()?;
            disjoint_union(&graphs)
        }
    }
}

/// Cycle of length `|w|` reading `w` from vertex 0.
pub fn cycle_graph(alphabet: &Alphabet, w: &Word) -> Result<LabeledGraph> {
    if w.is_empty() {
        return Err(Error::Domain("cycle word must be non-empty".into()));
    }
    let n = w.len();
    let mut g = LabeledGraph::with_vertices(alphabet.clone(), n);
    for (i, &l) in w.letters().iter().enumerate() {
        if !alphabet.contains(l) {
            return Err(Error::Domain("letter outside alphabet".into()));
        }
        g.add_letter_edge(i, (i + 1) % n, l);
    }
    Ok(g)
}

/// One vertex with a loop per generator.
pub fn bouquet(m: usize) -> Result<LabeledGraph> {
    let a = Alphabet::bouquet(m)?;
    let mut g = LabeledGraph::with_vertices(a, 1);
    for x in 0..m as u32 {
        g.add_edge(0, 0, x);
    }
    Ok(g)
}

/// Uniform simple `v`-regular graph on `n` vertices by rejection sampling
/// from the configuration model. Labels are placeholders (generator 0).
pub fn random_regular<R: Rng + ?Sized>(n: usize, v: usize, rng: &mut R) -> Result<LabeledGraph> {
    if v == 0 || v >= n || (n * v) % 2 == 1 {
        return Err(Error::Domain(format!("no simple {v}-regular graph on {n} vertices")));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|x| std::iter::repeat_n(x, v)).collect();
    'attempt: for _ in 0..MAX_REGULAR_ATTEMPTS {
        stubs.shuffle(rng);
        let mut seen = std::collections::HashSet::with_capacity(n * v / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
        }
        let mut g = LabeledGraph::with_vertices(Alphabet::bouquet(2)?, n);
        for pair in stubs.chunks(2) {
            g.add_edge(pair[0], pair[1], 0);
        }
        return Ok(g);
    }
    Err(Error::Construction("configuration model kept producing multigraphs".into()))
}

/// Disjoint union over the largest alphabet among the parts; vertices of
/// part `i` follow those of parts `0..i`.
pub fn disjoint_union(parts: &[LabeledGraph]) -> Result<LabeledGraph> {
    let alphabet = parts
        .iter()
        .map(|g| g.alphabet())
        .max_by_key(|a| a.m())
        .ok_or_else(|| Error::Domain("empty union".into()))?
        .clone();
    let mut g = LabeledGraph::with_vertices(alphabet.clone(), 0);
    for part in parts {
        if part.alphabet().names() != &alphabet.names()[..part.alphabet().m()] {
            return Err(Error::InvalidAlphabet("union parts use incompatible alphabets".into()));
        }
        let offset = g.vertex_count();
        for _ in 0..part.vertex_count() {
            g.add_vertex();
        }
        for e in part.edges() {
            g.add_edge(e.src + offset, e.dst + offset, e.label);
        }
    }
    Ok(g)
}
