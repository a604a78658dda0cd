//! Presentation builders: Rips, coHopfian and non-Hopfian.

use std::collections::HashSet;

use serde_json::json;

use super::phi::{apply_phi_k, max_homogeneous_run, PhiSubstitution};
use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, disjoint_union, girth, LabeledGraph};
use crate::presentation::{Presentation, SideCondition};
use crate::small_cancellation::cycles::cyclic_canonical;
use crate::small_cancellation::{check_gr, SmallCancellationReport, Variant};
use crate::word::{Alphabet, Letter, Word};

fn one_sixth() -> Alpha {
    Alpha::new(1, 6).expect("positive")
}

/// Shifts every generator index by `offset`.
fn shift(w: &Word, offset: u32) -> Word {
    w.letters()
        .iter()
        .map(|l| Letter::new(l.generator() + offset, l.is_inverse()))
        .collect()
}

fn extended_alphabet(base: &Alphabet, extra: &[String]) -> Result<Alphabet> {
    let mut names: Vec<String> = base.names().to_vec();
    for n in extra {
        if names.contains(n) {
            return Err(Error::Construction(format!("generator name `{n}` is used twice")));
        }
        names.push(n.clone());
    }
    Alphabet::with_names(names)
}

fn report_detail(r: &SmallCancellationReport) -> String {
    match &r.max_piece {
        Some(p) => format!("{:?} at {}; longest piece {}", r.verdict, r.alpha, p.length),
        None => format!("{:?} at {}", r.verdict, r.alpha),
    }
}

fn check_mixed(p: &Presentation, alpha: Alpha) -> Result<SmallCancellationReport> {
    check_gr(&p.relator_graph()?, alpha, Variant::Cycle)
}

/// `G = ⟨x, y, qᵢ | Γ, qᵢ⁻¹xqᵢ = X_{i+}, qᵢxqᵢ⁻¹ = X_{i−}, …, Rⱼ = Wⱼ⟩` for
/// `Q = ⟨qᵢ | Rⱼ⟩`, consuming the cycle words in order
/// `X_{1+}, X_{1−}, Y_{1+}, Y_{1−}, X_{2+}, …, W₁, W₂, …`.
pub fn build_rips(q: &Presentation, gamma: &LabeledGraph, cycle_words: &[Word]) -> Result<Presentation> {
    if gamma.alphabet().m() != 2 {
        return Err(Error::Construction("Γ must be labelled by two generators".into()));
    }
    if !q.graph_relators.is_empty() {
        return Err(Error::Construction("Q must be given by word relators".into()));
    }
    let qi = q.alphabet.m();
    let rj = q.word_relators.len();
    let needed = 4 * qi + rj;
    if cycle_words.len() < needed {
        return Err(Error::Construction(format!(
            "insufficient cycles: Q needs {needed}, got {}",
            cycle_words.len()
        )));
    }
    let alphabet = extended_alphabet(gamma.alphabet(), q.alphabet.names())?;
    let (x, y) = (Letter::new(0, false), Letter::new(1, false));
    let gen = |i: usize| Letter::new(2 + i as u32, false);
    let one = |l: Letter| Word::from_letters(vec![l]);

    let mut p = Presentation::new(alphabet);
    p.graph_relators.push(gamma.with_alphabet(p.alphabet.clone())?);
    let mut conj_lengths = Vec::new();
    for i in 0..qi {
        let qw = one(gen(i));
        let qinv = qw.inverse();
        for (k, z) in [x, y].into_iter().enumerate() {
            let plus = &cycle_words[4 * i + 2 * k];
            let minus = &cycle_words[4 * i + 2 * k + 1];
            conj_lengths.push(plus.len());
            conj_lengths.push(minus.len());
            p.word_relators.push(qinv.concat(&one(z)).concat(&qw).concat(&plus.inverse()));
            p.word_relators.push(qw.concat(&one(z)).concat(&qinv).concat(&minus.inverse()));
        }
    }
    let mut w_checks = Vec::new();
    for (j, r) in q.word_relators.iter().enumerate() {
        let r = shift(&r.free_reduce(), 2);
        if r.is_empty() {
            return Err(Error::Construction(format!("relator {j} of Q is trivial")));
        }
        let w = &cycle_words[4 * qi + j];
        w_checks.push((w.len(), r.len()));
        p.word_relators.push(r.concat(&w.inverse()));
    }

    let conj_ok = conj_lengths.iter().all(|&l| l > 36);
    p.side_conditions.push(SideCondition::new(
        "|X_i±|, |Y_i±| > 36",
        conj_ok,
        format!("shortest conjugation image {:?}", conj_lengths.iter().min()),
    ));
    let w_ok = w_checks.iter().all(|&(w, r)| w > 12 * r);
    p.side_conditions.push(SideCondition::new(
        "|W_j| > 12|R_j|",
        w_ok,
        format!("(|W_j|, |R_j|) = {w_checks:?}"),
    ));
    let used = &cycle_words[..needed];
    let distinct = used.iter().map(cyclic_canonical).collect::<HashSet<_>>().len() == used.len();
    p.side_conditions.push(SideCondition::new(
        "distinct cycles",
        distinct,
        format!("{needed} cycles used"),
    ));
    if let Some(c) = p.side_conditions.iter().find(|c| !c.holds) {
        return Err(Error::Construction(format!("side condition {} fails: {}", c.name, c.detail)));
    }

    let report = check_mixed(&p, one_sixth())?;
    p.side_conditions.push(SideCondition::new(
        "mixed presentation Gr'(1/6)",
        report.passed(),
        report_detail(&report),
    ));
    if !report.passed() {
        return Err(Error::Stage {
            stage: "mixed presentation".into(),
            message: report_detail(&report),
        });
    }
    p.metadata.insert("construction".into(), json!("rips"));
    p.metadata.insert("quotient_generators".into(), json!(q.alphabet.names()));
    p.metadata.insert("quotient_relators".into(), json!(rj));
    p.metadata.insert(
        "cycle_lengths".into(),
        json!(used.iter().map(Word::len).collect::<Vec<_>>()),
    );
    Ok(p)
}

/// `⟨a, b, t | Γ, t⁻¹at = φ(a), t⁻¹bt = φ(b)⟩`.
pub fn build_cohopf(gamma: &LabeledGraph, phi: &PhiSubstitution) -> Result<Presentation> {
    let al = gamma.alphabet();
    if al.m() != 2 || phi.images().len() != 2 {
        return Err(Error::Construction("Γ and φ must be over two generators".into()));
    }
    let (fa, fb) = (&phi.images()[0], &phi.images()[1]);
    for (name, w) in [("φ(a)", fa), ("φ(b)", fb)] {
        if w.len() <= 3 {
            return Err(Error::Precondition(format!("|{name}| = {} must exceed 3", w.len())));
        }
        if !w.is_cyclically_reduced() {
            return Err(Error::Precondition(format!("{name} must be cyclically reduced")));
        }
    }
    let union = disjoint_union(&[gamma.clone(), cycle_graph(al, fa)?, cycle_graph(al, fb)?])?;
    let pre = check_gr(&union, one_sixth(), Variant::Cycle)?;
    if !pre.passed() {
        return Err(Error::Precondition(format!(
            "Γ ⊔ φ(a) ⊔ φ(b) fails Gr'(1/6): {}",
            report_detail(&pre)
        )));
    }

    let alphabet = extended_alphabet(al, &["t".to_string()])?;
    let t = Word::from_letters(vec![Letter::new(2, false)]);
    let mut p = Presentation::new(alphabet);
    p.graph_relators.push(gamma.with_alphabet(p.alphabet.clone())?);
    for (g, img) in [(0u32, fa), (1, fb)] {
        let z = Word::from_letters(vec![Letter::new(g, false)]);
        p.word_relators.push(t.inverse().concat(&z).concat(&t).concat(&img.inverse()));
    }
    p.side_conditions.push(SideCondition::new(
        "|φ(a)|, |φ(b)| > 3",
        true,
        format!("|φ(a)| = {}, |φ(b)| = {}", fa.len(), fb.len()),
    ));
    p.side_conditions.push(SideCondition::new("Γ ⊔ φ(a) ⊔ φ(b) Gr'(1/6)", true, report_detail(&pre)));
    let mixed = check_mixed(&p, one_sixth())?;
    p.side_conditions.push(SideCondition::new(
        "mixed presentation Gr'(1/6)",
        mixed.passed(),
        report_detail(&mixed),
    ));
    p.metadata.insert("construction".into(), json!("cohopf"));
    p.metadata.insert("phi_a".into(), json!(al.format_word(fa)));
    p.metadata.insert("phi_b".into(), json!(al.format_word(fb)));
    Ok(p)
}

/// Splits a graph into its first component and three cycle words, the
/// input shape of [`build_nonhopf`].
pub fn split_four_components(g: &LabeledGraph) -> Result<(LabeledGraph, [Word; 3])> {
    let (comp, count) = g.components();
    if count != 4 {
        return Err(Error::Construction(format!("expected 4 components, found {count}")));
    }
    let keep: Vec<bool> = comp.iter().map(|&c| c == 0).collect();
    let (gamma, _) = g.induced(&keep);
    let mut words = Vec::new();
    for c in 1..4 {
        let keep: Vec<bool> = comp.iter().map(|&k| k == c).collect();
        let (h, _) = g.induced(&keep);
        match h.cycle_components() {
            Some(cs) if cs.len() == 1 => words.push(cs[0].word.clone()),
            _ => return Err(Error::Construction(format!("component {c} is not a cycle"))),
        }
    }
    Ok((gamma, [words[0].clone(), words[1].clone(), words[2].clone()]))
}

/// A rotation of `w` whose ends avoid generator `z` entirely, or failing
/// that, avoid `z⁻¹`, so that `z·w` is cyclically reduced.
fn rotation_avoiding(w: &Word, z: Letter) -> Result<Word> {
    let s = w.letters();
    let n = s.len();
    let rot = |k: usize| Word::from_letters(s[k..].iter().chain(&s[..k]).copied().collect());
    let ends = |k: usize| (s[k], s[(k + n - 1) % n]);
    let clean = (0..n).find(|&k| {
        let (f, l) = ends(k);
        f.generator() != z.generator() && l.generator() != z.generator()
    });
    let fallback = || (0..n).find(|&k| ends(k).0 != z.inverse() && ends(k).1 != z.inverse());
    clean
        .or_else(fallback)
        .map(rot)
        .ok_or_else(|| Error::Construction("no rotation makes the cycle word reduced after the new letter".into()))
}

fn cycles_union(alphabet: &Alphabet, graphs: &[LabeledGraph], words: &[Word]) -> Result<LabeledGraph> {
    let mut parts = graphs.to_vec();
    for w in words {
        parts.push(cycle_graph(alphabet, &w.cyclic_reduce())?);
    }
    disjoint_union(&parts)
}

fn stage(stage: &str, r: &SmallCancellationReport) -> Result<()> {
    if r.passed() {
        Ok(())
    } else {
        Err(Error::Stage {
            stage: stage.into(),
            message: report_detail(r),
        })
    }
}

/// The relators `φⁱ(Γ), φⁱ(a·φ(C₁)), φⁱ(b·φ(C₂)), φⁱ(φ(C₃))` for
/// `0 ≤ i ≤ i_max`, with `φ: z ↦ zⁿ`, after re-checking the intermediate
/// small-cancellation claims at `26α` and `208α`.
pub fn build_nonhopf(gamma: &LabeledGraph, c: &[Word; 3], alpha: Alpha, n: usize, i_max: usize) -> Result<Presentation> {
    let al = gamma.alphabet().clone();
    if !gamma.is_folded() {
        return Err(Error::NotFolded("building the non-Hopfian presentation"));
    }
    for (i, w) in c.iter().enumerate() {
        if w.is_empty() || !w.is_cyclically_reduced() {
            return Err(Error::Precondition(format!("C{} must be a nonempty cyclically reduced word", i + 1)));
        }
    }
    let base = cycles_union(&al, std::slice::from_ref(gamma), c)?;
    let pre = check_gr(&base, alpha, Variant::Cycle)?;
    if !pre.passed() {
        return Err(Error::Precondition(format!("Γ ⊔ C₁ ⊔ C₂ ⊔ C₃ fails Gr'({alpha}): {}", report_detail(&pre))));
    }
    let s = max_homogeneous_run(&base)?
        .ok_or_else(|| Error::Precondition("a letter closes up into a monochromatic cycle".into()))?;
    if n <= s {
        return Err(Error::Precondition(format!("n = {n} does not exceed the longest run s = {s}")));
    }
    let g = girth(&base).expect("cycles present");
    if !alpha.times_at_least_one(g) {
        return Err(Error::Precondition(format!("girth {g} is below 1/α for α = {alpha}")));
    }

    let phi = PhiSubstitution::homogeneous(al.m(), n)?;
    let (a, b) = (Letter::new(0, false), Letter::new(1, false));
    let prefixed = |z: Letter, w: &Word| -> Result<Word> {
        let w = rotation_avoiding(w, z)?;
        Ok(Word::from_letters(vec![z]).concat(&phi.apply_word(&w)))
    };
    let d1 = prefixed(a, &c[0])?;
    let d2 = prefixed(b, &c[1])?;

    let delta = cycles_union(&al, std::slice::from_ref(gamma), &[d1.clone(), d2.clone(), c[2].clone()])?;
    let delta_report = check_gr(&delta, alpha.scale(26), Variant::Cycle)?;
    stage("Δ′ at 26α", &delta_report)?;

    let mut graphs = Vec::new();
    let mut words = Vec::new();
    for k in 0..=i_max {
        graphs.push(apply_phi_k(gamma, &phi, k)?);
        words.push(phi.apply_word_k(&d1, k));
        words.push(phi.apply_word_k(&d2, k));
    }
    for k in 0..=i_max + 1 {
        words.push(phi.apply_word_k(&c[2], k));
    }
    let omega = cycles_union(&al, &graphs, &words)?;
    let omega_report = check_gr(&omega, alpha.scale(208), Variant::Cycle)?;
    stage("Ω at 208α", &omega_report)?;

    let mut p = Presentation::new(al);
    p.graph_relators = graphs;
    for i in 0..=i_max {
        p.word_relators.push(phi.apply_word_k(&d1, i));
        p.word_relators.push(phi.apply_word_k(&d2, i));
        p.word_relators.push(phi.apply_word_k(&c[2], i + 1));
    }
    p.side_conditions.push(SideCondition::new(
        format!("Γ ⊔ C₁ ⊔ C₂ ⊔ C₃ Gr'({alpha})"),
        true,
        report_detail(&pre),
    ));
    p.side_conditions.push(SideCondition::new(
        "n exceeds the longest run",
        true,
        format!("n = {n}, s = {s}"),
    ));
    p.side_conditions.push(SideCondition::new(
        "girth ≥ 1/α",
        true,
        format!("girth {g}, α = {alpha}"),
    ));
    p.side_conditions.push(SideCondition::new("Δ′ Gr'(26α)", true, report_detail(&delta_report)));
    p.side_conditions.push(SideCondition::new("Ω Gr'(208α)", true, report_detail(&omega_report)));
    p.metadata.insert("construction".into(), json!("nonhopf"));
    p.metadata.insert("alpha".into(), json!(alpha.to_string()));
    p.metadata.insert("n".into(), json!(n));
    p.metadata.insert("i_max".into(), json!(i_max));
    p.metadata.insert("omega_edges".into(), json!(omega.edge_count()));
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reduced_word(rng: &mut ChaCha8Rng, m: u32, len: usize) -> Word {
        let mut w: Vec<Letter> = Vec::with_capacity(len);
        while w.len() < len {
            let l = Letter::new(rng.random_range(0..m), rng.random_bool(0.5));
            if w.last().is_none_or(|&p| p != l.inverse()) && (w.len() + 1 < len || w[0] != l.inverse()) {
                w.push(l);
            }
        }
        Word::from_letters(w)
    }

    fn ab() -> Alphabet {
        Alphabet::bouquet(2).unwrap()
    }

    fn random_cycle(rng: &mut ChaCha8Rng, len: usize) -> LabeledGraph {
        cycle_graph(&ab(), &reduced_word(rng, 2, len)).unwrap()
    }

    fn quotient(names: &[&str], rels: &[&str]) -> Presentation {
        let al = Alphabet::with_names(names.iter().copied()).unwrap();
        let mut q = Presentation::new(al.clone());
        q.word_relators = rels.iter().map(|r| al.parse_word(r).unwrap()).collect();
        q
    }

    #[test]
    fn rips_trivial_quotient_is_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let gamma = random_cycle(&mut rng, 300);
        let p = build_rips(&quotient(&[], &[]), &gamma, &[]).unwrap();
        assert_eq!(p.generators(), ["a", "b"]);
        assert!(p.word_relators.is_empty());
        assert_eq!(p.graph_relators.len(), 1);
        assert!(p.conditions_hold());
    }

    #[test]
    fn rips_z2_shape_and_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let gamma = random_cycle(&mut rng, 300);
        let cycles: Vec<Word> = (0..5).map(|_| reduced_word(&mut rng, 2, 300)).collect();
        let p = build_rips(&quotient(&["q"], &["q q"]), &gamma, &cycles).unwrap();
        assert_eq!(p.generators(), ["a", "b", "q"]);
        assert_eq!(p.word_relators.len(), 5);
        assert_eq!(p.alphabet.format_word(&p.word_relators[0]).split(' ').take(3).collect::<Vec<_>>(), ["q'", "a", "q"]);
        assert!(p.conditions_hold());
        // Restricted to {a, b}, the graph relator is Γ itself.
        assert_eq!(p.graph_relators[0].canonical_form().replace(' ', ""), gamma.with_alphabet(p.alphabet.clone()).unwrap().canonical_form().replace(' ', ""));

        let short: Vec<Word> = cycles.iter().map(|w| Word::from_letters(w.letters()[..30].to_vec()).cyclic_reduce()).collect();
        assert!(matches!(build_rips(&quotient(&["q"], &["q q"]), &gamma, &short), Err(Error::Construction(m)) if m.contains("36")));
        assert!(matches!(build_rips(&quotient(&["q"], &["q q"]), &gamma, &cycles[..4]), Err(Error::Construction(m)) if m.contains("insufficient")));
        let mut dup = cycles.clone();
        dup[3] = dup[0].inverse();
        assert!(matches!(build_rips(&quotient(&["q"], &["q q"]), &gamma, &dup), Err(Error::Construction(m)) if m.contains("distinct")));
    }

    #[test]
    fn cohopf_shape_and_rejections() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gamma = random_cycle(&mut rng, 200);
        let phi = PhiSubstitution::new(vec![reduced_word(&mut rng, 2, 120), reduced_word(&mut rng, 2, 120)]).unwrap();
        let p = build_cohopf(&gamma, &phi).unwrap();
        assert_eq!(p.word_relators.len(), 2);
        assert_eq!(p.graph_relators.len(), 1);
        let t = Letter::new(2, false);
        assert!(p.graph_relators[0].edges().iter().all(|e| e.label != 2));
        assert!(p.word_relators.iter().all(|w| w.letters().iter().filter(|l| l.generator() == t.generator()).count() == 2));
        assert!(p.side_conditions.iter().any(|c| c.name.starts_with("Γ") && c.holds));

        let short = PhiSubstitution::new(vec![ab().parse_word("a b a").unwrap(), phi.images()[1].clone()]).unwrap();
        assert!(matches!(build_cohopf(&gamma, &short), Err(Error::Precondition(m)) if m.contains("|φ(a)| = 3")));
    }

    #[test]
    fn nonhopf_small_instance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let alpha = Alpha::new(1, 20).unwrap();
        let gamma = random_cycle(&mut rng, 400);
        let c = [0, 1, 2].map(|_| reduced_word(&mut rng, 2, 400));
        let s = max_homogeneous_run(&cycles_union(&ab(), std::slice::from_ref(&gamma), &c).unwrap())
            .unwrap()
            .unwrap();
        let p = build_nonhopf(&gamma, &c, alpha, s + 1, 0).unwrap();
        assert_eq!(p.graph_relators.len(), 1);
        assert_eq!(p.word_relators.len(), 3);
        assert_eq!(p.word_relators[2], PhiSubstitution::homogeneous(2, s + 1).unwrap().apply_word(&c[2]));
        assert!(p.conditions_hold());
        let p1 = build_nonhopf(&gamma, &c, alpha, s + 1, 1).unwrap();
        assert_eq!(p1.word_relators.len(), 6);
        assert!(matches!(build_nonhopf(&gamma, &c, alpha, s, 0), Err(Error::Precondition(_))));

        let whole = cycles_union(&ab(), std::slice::from_ref(&gamma), &c).unwrap();
        let (g2, c2) = split_four_components(&whole).unwrap();
        assert_eq!(g2.canonical_form(), gamma.canonical_form());
        assert_eq!(c2.map(|w| cyclic_canonical(&w)), c.clone().map(|w| cyclic_canonical(&w)));
    }
}
