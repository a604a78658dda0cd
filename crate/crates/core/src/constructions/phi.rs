//! Letter substitutions on graphs and the homogeneous-power lemmas.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, disjoint_union, girth, Dart, LabeledGraph};
use crate::small_cancellation::general::CycleThrough;
use crate::small_cancellation::{check_gr, common_words, CommonWords, Variant, Witness};
use crate::word::{Alphabet, Letter, Word};

/// A substitution `z ↦ φ(z)` on the generators of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiSubstitution {
    images: Vec<Word>,
    n: Option<usize>,
}

impl PhiSubstitution {
    /// `φ(z) = images[z]`; each image must be nonempty and reduced.
    pub fn new(images: Vec<Word>) -> Result<Self> {
        for (i, w) in images.iter().enumerate() {
            if w.is_empty() || !w.is_reduced() {
                return Err(Error::Domain(format!("image of generator {i} must be nonempty and reduced")));
            }
        }
        let n = homogeneous_exponent(&images);
        Ok(PhiSubstitution { images, n })
    }

    /// `z ↦ zⁿ` for each of the `m` generators.
    pub fn homogeneous(m: usize, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("homogeneous exponent must be at least 1".into()));
        }
        let images = (0..m as u32)
            .map(|g| Word::from_letters(vec![Letter::new(g, false); n]))
            .collect();
        Ok(PhiSubstitution { images, n: Some(n) })
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// The exponent when every image is the matching positive power.
    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn image(&self, l: Letter) -> Word {
        let w = &self.images[l.generator() as usize];
        if l.is_inverse() {
            w.inverse()
        } else {
            w.clone()
        }
    }

    /// Letterwise image of a word, without free reduction.
    pub fn apply_word(&self, w: &Word) -> Word {
        w.letters().iter().flat_map(|&l| self.image(l).into_letters()).collect()
    }

    pub fn apply_word_k(&self, w: &Word, k: usize) -> Word {
        (0..k).fold(w.clone(), |acc, _| self.apply_word(&acc))
    }
}

fn homogeneous_exponent(images: &[Word]) -> Option<usize> {
    let n = images.first()?.len();
    images
        .iter()
        .enumerate()
        .all(|(g, w)| w.len() == n && w.letters().iter().all(|&l| l == Letter::new(g as u32, false)))
        .then_some(n)
}

/// Replaces every edge labelled `z` by an arc reading `φ(z)`.
///
/// Original vertices keep their numbers; arc interiors are appended.
pub fn apply_phi(g: &LabeledGraph, phi: &PhiSubstitution) -> Result<LabeledGraph> {
    if phi.images.len() != g.alphabet().m() {
        return Err(Error::Domain(format!(
            "substitution has {} images for an alphabet of rank {}",
            phi.images.len(),
            g.alphabet().m()
        )));
    }
    let mut out = LabeledGraph::with_vertices(g.alphabet().clone(), g.vertex_count());
    for e in g.edges() {
        let w = &phi.images[e.label as usize];
        let mut at = e.src;
        for (k, &l) in w.letters().iter().enumerate() {
            let next = if k + 1 == w.len() { e.dst } else { out.add_vertex() };
            out.add_letter_edge(at, next, l);
            at = next;
        }
    }
    Ok(out)
}

/// `φᵏ(g)`.
pub fn apply_phi_k(g: &LabeledGraph, phi: &PhiSubstitution, k: usize) -> Result<LabeledGraph> {
    let mut h = g.clone();
    for _ in 0..k {
        h = apply_phi(&h, phi)?;
    }
    Ok(h)
}

/// Longest run of one letter along an immersed path, per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousPathReport {
    pub letter: String,
    /// `None` when edges of this letter close up into a cycle.
    pub max_run: Option<usize>,
    /// Shortest immersed cycle through a longest run, if any.
    pub binding_cycle: Option<usize>,
}

/// Maximal monochromatic paths of generator `z` in a folded graph, plus
/// whether some `z`-edges form a directed cycle.
fn letter_paths(g: &LabeledGraph, z: u32) -> (Vec<Vec<Dart>>, bool) {
    let n = g.vertex_count();
    let mut out = vec![None; n];
    let mut has_in = vec![false; n];
    let mut total = 0;
    for (i, e) in g.edges().iter().enumerate() {
        if e.label == z {
            out[e.src] = Some(i);
            has_in[e.dst] = true;
            total += 1;
        }
    }
    let mut paths = Vec::new();
    let mut used = 0;
    for (i, e) in g.edges().iter().enumerate() {
        if e.label != z || has_in[e.src] {
            continue;
        }
        let mut path = vec![Dart::new(i, false)];
        let mut v = e.dst;
        while let Some(f) = out[v] {
            path.push(Dart::new(f, false));
            v = g.edge(f).dst;
        }
        used += path.len();
        paths.push(path);
    }
    (paths, used < total)
}

/// Per-generator run report for a folded graph.
pub fn homogeneous_runs(g: &LabeledGraph) -> Result<Vec<HomogeneousPathReport>> {
    if !g.is_folded() {
        return Err(Error::NotFolded("measuring homogeneous runs"));
    }
    let adj = g.adjacency();
    let mut through = CycleThrough::new(g, &adj);
    let alphabet = g.alphabet();
    Ok((0..alphabet.m() as u32)
        .map(|z| {
            let letter = alphabet.letter_name(Letter::new(z, false));
            let (paths, cyclic) = letter_paths(g, z);
            if cyclic {
                return HomogeneousPathReport {
                    letter,
                    max_run: None,
                    binding_cycle: None,
                };
            }
            let longest = paths.iter().map(Vec::len).max().unwrap_or(0);
            let binding_cycle = paths
                .iter()
                .filter(|p| p.len() == longest)
                .filter_map(|p| through.shortest(p))
                .min();
            HomogeneousPathReport {
                letter,
                max_run: Some(longest),
                binding_cycle,
            }
        })
        .collect())
}

/// The largest run over all letters; `None` when some letter is cyclic.
pub fn max_homogeneous_run(g: &LabeledGraph) -> Result<Option<usize>> {
    let runs = homogeneous_runs(g)?;
    Ok(runs
        .iter()
        .map(|r| r.max_run)
        .try_fold(0, |acc, r| r.map(|r| acc.max(r))))
}

/// One lemma conclusion, checked mechanically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiLemmaReport {
    pub alpha: Alpha,
    pub n: usize,
    pub k_max: usize,
    pub girth: usize,
    pub runs: Vec<HomogeneousPathReport>,
    /// Homogeneous pieces in each `φᵏ(Δ)` are shorter than `2α|C|`.
    pub homogeneous: LemmaCheck,
    /// `φᵏ(Δ)` satisfies `Gr'(2α)`, one entry per `k`.
    pub powers: Vec<LemmaCheck>,
    /// The union over `k` satisfies `Gr'(8α)`; skipped unless `α·girth > 1`.
    pub union: Option<LemmaCheck>,
}

impl PhiLemmaReport {
    pub fn passed(&self) -> bool {
        self.homogeneous.passed
            && self.powers.iter().all(|c| c.passed)
            && self.union.as_ref().is_none_or(|c| c.passed)
    }
}

/// A homogeneous piece violating `|P| < bound·|C|`, as (letter, length, cycle).
fn homogeneous_violation(g: &LabeledGraph, bound: Alpha) -> Option<(String, usize, usize)> {
    let gg = girth(g)?;
    let adj = g.adjacency();
    let mut through = CycleThrough::new(g, &adj);
    for z in 0..g.alphabet().m() as u32 {
        let (paths, _) = letter_paths(g, z);
        let longest = paths.iter().map(Vec::len).max().unwrap_or(0);
        for r in 1..=longest {
            let lifts: usize = paths.iter().map(|p| (p.len() + 1).saturating_sub(r)).sum();
            // Pieces shorter than the bound times the girth are fine on any cycle.
            if lifts < 2 || bound.admits(r, gg) {
                continue;
            }
            for p in &paths {
                for w in p.windows(r) {
                    if let Some(c) = through.shortest(w) {
                        if !bound.admits(r, c) {
                            return Some((g.alphabet().letter_name(Letter::new(z, false)), r, c));
                        }
                    }
                }
            }
        }
    }
    None
}

fn gr_check(name: String, g: &LabeledGraph, alpha: Alpha) -> Result<LemmaCheck> {
    let report = check_gr(g, alpha, Variant::Cycle)?;
    let detail = match &report.max_piece {
        Some(p) => format!("{:?} at {}; longest piece {}", report.verdict, alpha, p.length),
        None => format!("{:?} at {}; no pieces", report.verdict, alpha),
    };
    Ok(LemmaCheck {
        name,
        passed: report.passed(),
        detail,
        witness: report.witness,
    })
}

/// Checks the three homogeneous-substitution lemmas on `Δ` for `φ: z ↦ zⁿ`.
///
/// Precondition failures are returned as [`Error::Precondition`]; lemma
/// failures come back inside the report with a witness.
pub fn verify_phi_lemmas(delta: &LabeledGraph, alpha: Alpha, n: usize, k_max: usize) -> Result<PhiLemmaReport> {
    if !delta.is_folded() {
        return Err(Error::NotFolded("verifying substitution lemmas"));
    }
    let mut failed = Vec::new();
    let base = check_gr(delta, alpha, Variant::Cycle)?;
    if !base.passed() {
        failed.push(format!("Δ does not satisfy Gr'({alpha}): {:?}", base.verdict));
    }
    let gd = girth(delta);
    match gd {
        Some(g) if alpha.times_at_least_one(g) => {}
        Some(g) => failed.push(format!("α·girth = {alpha}·{g} < 1")),
        None => failed.push("Δ has no cycles".into()),
    }
    let runs = homogeneous_runs(delta)?;
    let s = runs.iter().map(|r| r.max_run).try_fold(0, |acc, r| r.map(|r| acc.max(r)));
    match s {
        Some(s) if n > s => {}
        Some(s) => failed.push(format!("n = {n} does not exceed the longest run s = {s}")),
        None => failed.push("a letter closes up into a monochromatic cycle".into()),
    }
    if !failed.is_empty() {
        return Err(Error::Precondition(failed.join("; ")));
    }
    let gd = gd.unwrap();

    let phi = PhiSubstitution::homogeneous(delta.alphabet().m(), n)?;
    let mut powers = vec![delta.clone()];
    for _ in 0..k_max {
        let next = apply_phi(powers.last().unwrap(), &phi)?;
        powers.push(next);
    }

    let two = alpha.scale(2);
    let violation = powers
        .iter()
        .enumerate()
        .find_map(|(k, h)| homogeneous_violation(h, two).map(|v| (k, v)));
    let homogeneous = LemmaCheck {
        name: "homogeneous pieces".into(),
        passed: violation.is_none(),
        detail: match &violation {
            None => format!("every homogeneous piece in φ^k(Δ), k ≤ {k_max}, is shorter than {two}·|C|"),
            Some((k, (l, r, c))) => format!("φ^{k}(Δ): {l}^{r} on a cycle of length {c}"),
        },
        witness: None,
    };

    let powers_checks = powers
        .iter()
        .enumerate()
        .map(|(k, h)| gr_check(format!("φ^{k}(Δ) at 2α"), h, two))
        .collect::<Result<Vec<_>>>()?;

    let union = if alpha.numer() as u128 * gd as u128 > alpha.denom() as u128 {
        let u = disjoint_union(&powers)?;
        Some(gr_check(format!("union of φ^k(Δ), k ≤ {k_max}, at 8α"), &u, alpha.scale(8))?)
    } else {
        None
    };

    Ok(PhiLemmaReport {
        alpha,
        n,
        k_max,
        girth: gd,
        runs,
        homogeneous,
        powers: powers_checks,
        union,
    })
}

/// The sharpness example for the doubling substitution: a length-100 cycle
/// over ten generators containing `aabb` once.
#[derive(Clone, Debug)]
pub struct OptimalityExample {
    pub word: Word,
    pub delta: LabeledGraph,
    pub image: LabeledGraph,
    pub alpha: Alpha,
    /// Longest word lifting to both `Δ` and `φ(Δ)`.
    pub cross_piece: Word,
}

/// Builds the example deterministically: after the prefix `aabb` no letter
/// repeats immediately, and no two-letter window occurs twice up to inversion,
/// so `Δ` has only one-letter pieces and its only squares are `aa`, `bb`.
pub fn optimality_example() -> Result<OptimalityExample> {
    const LEN: usize = 100;
    let alphabet = Alphabet::with_names(["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"])?;
    let a = Letter::new(0, false);
    let b = Letter::new(1, false);
    let class = |x: Letter, y: Letter| (x.index(), y.index()).min((y.inverse().index(), x.inverse().index()));

    let mut word = vec![a, a, b, b];
    let mut used: HashSet<(usize, usize)> = word.windows(2).map(|w| class(w[0], w[1])).collect();
    let letters: Vec<Letter> = alphabet.letters().collect();
    // Depth-first search with a fixed stride through the letters, so the
    // sequence is deterministic but well mixed.
    let mut choice = vec![0usize; LEN];
    let mut k = word.len();
    while k < LEN {
        let prev = word[k - 1];
        let mut placed = false;
        while choice[k] < letters.len() {
            let l = letters[(choice[k] * 7 + k * 3) % letters.len()];
            choice[k] += 1;
            if l == prev || l == prev.inverse() || used.contains(&class(prev, l)) {
                continue;
            }
            let closing = k + 1 == LEN;
            if closing && (l == a || l == a.inverse() || used.contains(&class(l, a)) || class(prev, l) == class(l, a)) {
                continue;
            }
            used.insert(class(prev, l));
            if closing {
                used.insert(class(l, a));
            }
            word.push(l);
            placed = true;
            break;
        }
        if placed {
            k += 1;
            continue;
        }
        choice[k] = 0;
        k -= 1;
        if k < 4 {
            return Err(Error::Construction("no admissible length-100 word".into()));
        }
        let l = word.pop().unwrap();
        used.remove(&class(word[k - 1], l));
    }
    let word = Word::from_letters(word);
    let delta = cycle_graph(&alphabet, &word)?;
    let image = apply_phi(&delta, &PhiSubstitution::homogeneous(10, 2)?)?;
    let cross_piece = match common_words(&delta, &image)? {
        CommonWords::Bounded { longest } => longest,
        CommonWords::Unbounded { .. } => {
            return Err(Error::Construction("Δ and φ(Δ) share arbitrarily long words".into()))
        }
    };
    Ok(OptimalityExample {
        word,
        delta,
        image,
        alpha: Alpha::new(101, 10_000)?,
        cross_piece,
    })
}
