//! Adding a family of long cycles to a small-cancellation graph without
//! creating long pieces, using a word missing from the graph.

use serde::Serialize;

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, disjoint_union, girth, LabeledGraph};
use crate::small_cancellation::{
    check_cprime, check_gr, common_words, CommonWords, MissingWordCertificate, SmallCancellationReport, Variant,
};
use crate::word::{Alphabet, Letter, Word};

#[derive(Clone, Debug)]
pub struct AddCyclesPlan {
    /// `Γ`: folded, satisfying `Gr'(alpha)`.
    pub base: LabeledGraph,
    /// `W`: a reduced word lifting nowhere in `Γ`.
    pub missing: MissingWordCertificate,
    pub alpha: Alpha,
    /// `K` in `cᵢ = x y^{Ki+1} x y^{Ki+2} … x y^{Ki+block_count}`.
    pub block_base: usize,
    pub block_count: usize,
    /// Number of cycles `C₁ … C_count`.
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct AddCyclesOutput {
    /// The ball of radius two with the two `W`-arcs, trees pruned.
    pub a: LabeledGraph,
    /// Words of the based loops `x ↦ X`, `y ↦ Y` through the arcs.
    pub x_word: Word,
    pub y_word: Word,
    /// Leaves of the ball where the arcs start and end, as words from the root.
    pub leaves: [Word; 4],
    pub cycle_words: Vec<Word>,
    pub cycles: Vec<LabeledGraph>,
    /// `Γ ⊔ C₁ ⊔ … ⊔ C_count`.
    pub union: LabeledGraph,
    pub report: SmallCancellationReport,
    /// Longest word lifting to both `A` and `Γ`.
    pub cross_piece: usize,
    pub base_girth: usize,
}

/// Summary of an [`AddCyclesOutput`] for reports.
#[derive(Clone, Debug, Serialize)]
pub struct AddCyclesSummary {
    pub base_girth: usize,
    pub missing_word: String,
    pub x_word_length: usize,
    pub y_word_length: usize,
    pub cycle_lengths: Vec<usize>,
    pub cross_piece: usize,
    pub report: SmallCancellationReport,
}

impl AddCyclesOutput {
    pub fn summary(&self, plan: &AddCyclesPlan) -> AddCyclesSummary {
        AddCyclesSummary {
            base_girth: self.base_girth,
            missing_word: plan.base.alphabet().format_word(&plan.missing.word),
            x_word_length: self.x_word.len(),
            y_word_length: self.y_word.len(),
            cycle_lengths: self.cycle_words.iter().map(Word::len).collect(),
            cross_piece: self.cross_piece,
            report: self.report.clone(),
        }
    }
}

/// The alphabet `{x, y}` of the block words.
pub fn block_alphabet() -> Alphabet {
    Alphabet::with_names(["x", "y"]).expect("two names")
}

/// `cᵢ` for `i = 1 … count`, over `{x, y}`.
pub fn block_words(block_base: usize, block_count: usize, count: usize) -> Vec<Word> {
    let (x, y) = (Letter::new(0, false), Letter::new(1, false));
    (1..=count)
        .map(|i| {
            let mut w = Vec::new();
            for k in 1..=block_count {
                w.push(x);
                w.extend(std::iter::repeat_n(y, block_base * i + k));
            }
            Word::from_letters(w)
        })
        .collect()
}

fn half(alpha: Alpha) -> Alpha {
    Alpha::new(alpha.numer(), 2 * alpha.denom()).expect("positive")
}

/// Whether the block words satisfy `C'(α/2)`.
pub fn block_family_passes(alpha: Alpha, block_base: usize, block_count: usize, count: usize) -> Result<bool> {
    if count == 0 {
        return Ok(true);
    }
    let words = block_words(block_base, block_count, count);
    Ok(check_cprime(&block_alphabet(), &words, half(alpha))?.passed())
}

/// The least `K ≤ max_k` for which the block words satisfy `C'(α/2)`.
pub fn minimal_block_base(alpha: Alpha, block_count: usize, count: usize, max_k: usize) -> Result<Option<usize>> {
    for k in 1..=max_k {
        if block_family_passes(alpha, k, block_count, count)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Ball of radius two around the root of the universal cover of the bouquet:
/// returns the graph and the leaves as (vertex, word from the root), in
/// lexicographic order of their words.
fn radius_two_ball(alphabet: &Alphabet) -> (LabeledGraph, Vec<(usize, Word)>) {
    let mut g = LabeledGraph::with_vertices(alphabet.clone(), 1);
    let mut leaves = Vec::new();
    for l in alphabet.letters() {
        let mid = g.add_vertex();
        g.add_letter_edge(0, mid, l);
        for l2 in alphabet.letters().filter(|&l2| l2 != l.inverse()) {
            let leaf = g.add_vertex();
            g.add_letter_edge(mid, leaf, l2);
            leaves.push((leaf, Word::from_letters(vec![l, l2])));
        }
    }
    (g, leaves)
}

fn attach_arc(g: &mut LabeledGraph, from: usize, to: usize, w: &Word) {
    let mut at = from;
    for (k, &l) in w.letters().iter().enumerate() {
        let next = if k + 1 == w.len() { to } else { g.add_vertex() };
        g.add_letter_edge(at, next, l);
        at = next;
    }
}

/// Builds `A`, the cycles `Cᵢ` and `Γ ⊔ Cᵢ`, re-checking every claim.
pub fn build_adding_cycles(plan: &AddCyclesPlan) -> Result<AddCyclesOutput> {
    let base = &plan.base;
    let alpha = plan.alpha;
    let w = &plan.missing.word;
    if !base.is_folded() {
        return Err(Error::NotFolded("adding cycles"));
    }
    let g = girth(base).ok_or_else(|| Error::Precondition("Γ has no cycles".into()))?;
    if w.is_empty() || !w.is_reduced() {
        return Err(Error::Precondition("W must be a nonempty reduced word".into()));
    }
    if !alpha.admits(2 * (w.len() + 1), g) {
        return Err(Error::Precondition(format!(
            "|W| = {} does not satisfy |W| < (α/2)·girth − 1 with α = {alpha}, girth = {g}",
            w.len()
        )));
    }
    if !base.lifts(w).is_empty() {
        return Err(Error::Precondition("W lifts to Γ".into()));
    }
    let base_report = check_gr(base, alpha, Variant::Cycle)?;
    if !base_report.passed() {
        return Err(Error::Precondition(format!(
            "Γ does not satisfy Gr'({alpha}): {:?}",
            base_report.verdict
        )));
    }
    if !block_family_passes(alpha, plan.block_base, plan.block_count, plan.count)? {
        let limit = (4 * plan.block_count).max(64);
        let hint = match minimal_block_base(alpha, plan.block_count, plan.count, limit)? {
            Some(k) => format!("minimal accepted block_base is {k}"),
            None => format!("no block_base up to {limit} works with block_count {}", plan.block_count),
        };
        return Err(Error::Construction(format!(
            "block words with block_base {} fail C'({}); {hint}",
            plan.block_base,
            half(alpha)
        )));
    }

    let alphabet = base.alphabet().clone();
    let (mut a, leaves) = radius_two_ball(&alphabet);
    let (first, last) = (w.letters()[0], *w.letters().last().unwrap());
    // An arc may start at a leaf unless it would fold into the leaf's edge,
    // and likewise for where it ends.
    let can_start = |u: &Word| *u.letters().last().unwrap() != first.inverse();
    let can_end = |u: &Word| *u.letters().last().unwrap() != last;
    let mut chosen: Vec<usize> = Vec::new();
    for role in 0..4 {
        let pick = (0..leaves.len()).find(|&i| {
            !chosen.contains(&i) && if role % 2 == 0 { can_start(&leaves[i].1) } else { can_end(&leaves[i].1) }
        });
        match pick {
            Some(i) => chosen.push(i),
            None => return Err(Error::Construction("no valid leaves to attach the W-arcs".into())),
        }
    }
    attach_arc(&mut a, leaves[chosen[0]].0, leaves[chosen[1]].0, w);
    attach_arc(&mut a, leaves[chosen[2]].0, leaves[chosen[3]].0, w);
    let a = a.core();
    debug_assert!(a.is_folded());

    let u = |k: usize| leaves[chosen[k]].1.clone();
    let x_word = u(0).concat(w).concat(&u(1).inverse()).free_reduce();
    let y_word = u(2).concat(w).concat(&u(3).inverse()).free_reduce();

    let mut cycle_words = Vec::with_capacity(plan.count);
    let mut cycles = Vec::with_capacity(plan.count);
    for c in block_words(plan.block_base, plan.block_count, plan.count) {
        let mut image = Vec::new();
        for &l in c.letters() {
            let piece = if l.generator() == 0 { &x_word } else { &y_word };
            image.extend_from_slice(piece.letters());
        }
        let word = Word::from_letters(image).cyclic_reduce();
        if word.is_empty() {
            return Err(Error::Construction("a cycle image reduced to the empty word".into()));
        }
        cycles.push(cycle_graph(&alphabet, &word)?);
        cycle_words.push(word);
    }

    let cross_piece = match common_words(&a, base)? {
        CommonWords::Bounded { longest } => longest.len(),
        CommonWords::Unbounded { .. } => {
            return Err(Error::Stage {
                stage: "cross pieces".into(),
                message: "A and Γ share arbitrarily long words".into(),
            })
        }
    };
    if !alpha.admits(cross_piece, g) {
        return Err(Error::Stage {
            stage: "cross pieces".into(),
            message: format!("a word of length {cross_piece} lifts to both A and Γ; bound is {alpha}·{g}"),
        });
    }

    let mut parts = vec![base.clone()];
    parts.extend(cycles.iter().cloned());
    let union = disjoint_union(&parts)?;
    let report = check_gr(&union, alpha, Variant::Cycle)?;
    if !report.passed() {
        return Err(Error::Stage {
            stage: "union".into(),
            message: format!("Γ ⊔ Cᵢ gives {:?} at {alpha}", report.verdict),
        });
    }
    Ok(AddCyclesOutput {
        a,
        x_word,
        y_word,
        leaves: [u(0), u(1), u(2), u(3)],
        cycle_words,
        cycles,
        union,
        report,
        cross_piece,
        base_girth: g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fold, SubdivisionSpec};
    use crate::small_cancellation::find_missing_word;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// A random-labelled subdivided cycle, folded and trimmed to its core.
    fn random_base(seed: u64, len: usize) -> LabeledGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let al = Alphabet::bouquet(2).unwrap();
        let mut g = cycle_graph(&al, &Word::from_letters(vec![Letter::new(0, false); 4])).unwrap();
        g = g.subdivide(SubdivisionSpec::new(len / 4).unwrap());
        g = g.label_random(&mut rng);
        fold(&g).graph.core()
    }

    #[test]
    fn block_words_shape() {
        let al = block_alphabet();
        let w = block_words(2, 3, 2);
        assert_eq!(al.format_word(&w[0]), "x y y y x y y y y x y y y y y");
        assert_eq!(w[1].len(), 3 + 5 + 6 + 7);
    }

    #[test]
    fn small_blocks_rejected_with_minimal_k() {
        let alpha = Alpha::new(1, 12).unwrap();
        assert!(!block_family_passes(alpha, 2, 3, 5).unwrap());
        assert_eq!(minimal_block_base(alpha, 3, 5, 64).unwrap(), None);
        // Looser α: a minimal K exists and every K from it onward passes.
        let loose = Alpha::new(3, 2).unwrap();
        let k = minimal_block_base(loose, 3, 5, 64).unwrap().unwrap();
        assert!(k > 2);
        assert!(!block_family_passes(loose, 2, 3, 5).unwrap());
        for kk in k..k + 5 {
            assert!(block_family_passes(loose, kk, 3, 5).unwrap());
        }
    }

    #[test]
    fn builds_and_checks() {
        let alpha = Alpha::new(1, 12).unwrap();
        let base = random_base(11, 480);
        let g = girth(&base).unwrap();
        assert!(g >= 200, "girth {g}");
        let missing = find_missing_word(&base, 7).unwrap();
        let k = minimal_block_base(alpha, 64, 2, 200).unwrap().unwrap();
        let plan = AddCyclesPlan {
            base: base.clone(),
            missing,
            alpha,
            block_base: k,
            block_count: 64,
            count: 2,
        };
        let out = build_adding_cycles(&plan).unwrap();
        assert!(out.a.is_folded());
        assert!(out.report.passed());
        assert!(alpha.admits(out.cross_piece, g));
        assert_eq!(out.cycles.len(), 2);
        for w in &out.cycle_words {
            assert!(!out.a.lifts(w).is_empty());
            assert!(w.is_cyclically_reduced());
        }
        assert_eq!(out.x_word.len(), plan.missing.word.len() + 4);

        let rejected = build_adding_cycles(&AddCyclesPlan {
            block_base: 2,
            block_count: 3,
            ..plan.clone()
        });
        assert!(matches!(rejected, Err(Error::Construction(m)) if m.contains("block_base 2")));
    }

    #[test]
    fn long_missing_word_is_a_precondition_error() {
        let alpha = Alpha::new(1, 12).unwrap();
        let base = random_base(5, 480);
        let g = girth(&base).unwrap();
        let w = Word::from_letters((0..g).map(|i| Letter::new((i % 2) as u32, false)).collect());
        let plan = AddCyclesPlan {
            base,
            missing: MissingWordCertificate {
                word: w,
                max_checked_length: g,
            },
            alpha,
            block_base: 100,
            block_count: 64,
            count: 1,
        };
        assert!(matches!(build_adding_cycles(&plan), Err(Error::Precondition(_))));
    }
}
