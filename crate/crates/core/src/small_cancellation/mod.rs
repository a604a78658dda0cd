//! Pieces and the graphical small cancellation conditions.
//!
//! A piece is a reduced word with two distinct lifts to a folded graph `Γ`.
//! `Gr'(α)` asks `|P| < α|C|` for every piece `P` and every immersed cycle
//! `C` through which an occurrence of `P` factors; the girth variant asks
//! `|P| < α·girth(Γ)`. Cycles are immersed closed paths, not necessarily
//! simple.
//!
//! Two engines answer these questions. The general one works in the fiber
//! product. When every component of `Γ` is a cycle (classical relators, or
//! the large unions built by the constructions) a rolling-hash engine over
//! cyclic windows does the same job in near-linear time.

pub(crate) mod cycles;
pub(crate) mod general;
mod missing;
mod product;

use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, disjoint_union, girth, Dart, LabeledGraph};
use crate::word::{Alphabet, Word};

pub use missing::{find_missing_word, MissingWordCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Girth,
    Cycle,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "girth" => Ok(Variant::Girth),
            "cycle" => Ok(Variant::Cycle),
            _ => Err(Error::Domain(format!("unknown variant `{s}` (girth|cycle)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Pieces of unbounded length exist.
    Degenerate,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Degenerate => 2,
        }
    }
}

/// One lift of a piece: its component, start vertex, and whether its first
/// edge is crossed along its orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub component: usize,
    pub start: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub word: Word,
    pub occurrences: Vec<Occurrence>,
}

impl Piece {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn summary(&self, alphabet: &Alphabet) -> PieceSummary {
        PieceSummary {
            word: alphabet.format_word(&self.word),
            length: self.length(),
            occurrences: self.occurrences.clone(),
        }
    }
}

/// Serializable form of a piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSummary {
    pub word: String,
    pub length: usize,
    pub occurrences: Vec<Occurrence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An occurrence of a piece and a cycle it factors through with `|P| ≥ α|C|`.
    Cycle {
        piece: PieceSummary,
        cycle: String,
        cycle_length: usize,
    },
    /// A piece with `|P| ≥ α·girth`.
    Girth { piece: PieceSummary, girth: usize },
    /// A closed word whose powers all lift at two distinct places.
    Unbounded { word: String, lifts: [Occurrence; 2] },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCancellationReport {
    pub alpha: Alpha,
    pub variant: Variant,
    pub verdict: Verdict,
    pub max_piece: Option<PieceSummary>,
    pub witness: Option<Witness>,
    pub girth: Option<usize>,
}

impl SmallCancellationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceEnumeration {
    /// Maximal pieces, one per word up to inversion, sorted by length then word.
    Pieces(Vec<Piece>),
    Degenerate(Witness),
}

/// Longest word lifting to both of two graphs (not necessarily distinct
/// lifts); unbounded when such words have unbounded length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommonWords {
    Bounded { longest: Word },
    Unbounded { period: Word },
}

fn require_folded(g: &LabeledGraph, what: &'static str) -> Result<()> {
    if g.is_folded() {
        Ok(())
    } else {
        Err(Error::NotFolded(what))
    }
}

/// Maximal pieces of a folded graph, or an unboundedness witness.
pub fn enumerate_pieces(g: &LabeledGraph) -> Result<PieceEnumeration> {
    require_folded(g, "enumerating pieces")?;
    Ok(general::enumerate(g))
}

/// Checks `Gr'(α)` in the chosen variant.
pub fn check_gr(g: &LabeledGraph, alpha: Alpha, variant: Variant) -> Result<SmallCancellationReport> {
    require_folded(g, "checking small cancellation")?;
    Ok(match g.cycle_components() {
        Some(cycles) => cycles::check(g, &cycles, alpha, variant),
        None => general::check(g, alpha, variant),
    })
}

/// Same as [`check_gr`] but always through the fiber product.
pub fn check_gr_product(g: &LabeledGraph, alpha: Alpha, variant: Variant) -> Result<SmallCancellationReport> {
    require_folded(g, "checking small cancellation")?;
    Ok(general::check(g, alpha, variant))
}

/// The disjoint union of cycles reading the relators.
pub fn relator_graph(alphabet: &Alphabet, relators: &[Word]) -> Result<LabeledGraph> {
    if relators.is_empty() {
        return Ok(LabeledGraph::new(alphabet.clone()));
    }
    let mut cycles = Vec::with_capacity(relators.len());
    for (index, r) in relators.iter().enumerate() {
        if r.is_empty() || !r.is_cyclically_reduced() {
            return Err(Error::NotCyclicallyReduced { index });
        }
        cycles.push(cycle_graph(alphabet, r)?);
    }
    disjoint_union(&cycles)?.with_alphabet(alphabet.clone())
}

/// Classical `C'(α)`: the cycle variant on the union of relator cycles.
pub fn check_cprime(alphabet: &Alphabet, relators: &[Word], alpha: Alpha) -> Result<SmallCancellationReport> {
    let g = relator_graph(alphabet, relators)?;
    check_gr(&g, alpha, Variant::Cycle)
}

/// Longest word lifting to both folded graphs.
pub fn common_words(g1: &LabeledGraph, g2: &LabeledGraph) -> Result<CommonWords> {
    require_folded(g1, "comparing graphs")?;
    require_folded(g2, "comparing graphs")?;
    Ok(general::common_words(g1, g2))
}

/// Occurrence record for a lift starting with dart `d`.
pub(crate) fn occurrence(g: &LabeledGraph, component: &[usize], d: Dart) -> Occurrence {
    let start = g.source(d);
    Occurrence {
        component: component[start],
        start,
        forward: !d.is_backward(),
    }
}

/// Verdict shared by both engines once the max piece is known.
pub(crate) fn girth_verdict(
    alpha: Alpha,
    girth: Option<usize>,
    max_piece: &Option<PieceSummary>,
) -> (Verdict, Option<Witness>) {
    match (girth, max_piece) {
        (Some(g), Some(p)) if !alpha.admits(p.length, g) => (
            Verdict::Fail,
            Some(Witness::Girth {
                piece: p.clone(),
                girth: g,
            }),
        ),
        _ => (Verdict::Pass, None),
    }
}

pub(crate) fn graph_girth(g: &LabeledGraph) -> Option<usize> {
    girth(g)
}
