use std::fs;
use std::path::Path;

use gsc_core::constructions::{
    build_adding_cycles, build_cohopf, build_nonhopf, build_rips, max_homogeneous_run, minimal_block_base,
    verify_phi_lemmas, AddCyclesPlan, PhiSubstitution,
};
use gsc_core::graph::{cycle_graph, disjoint_union, fold, girth, metrics, parse_graph, serialize_graph, LabeledGraph};
use gsc_core::presentation::write_atomic;
use gsc_core::random_lab::{outcomes_to_jsonl, Experiment, ExperimentConfig};
use gsc_core::word::norm_tail_bounds;
use gsc_core::{check_cprime, check_gr, find_missing_word, Alphabet, Presentation, SmallCancellationReport, Word};
use serde_json::json;

use crate::report::{Failure, Outcome, EXIT_FAIL, EXIT_OK};
use crate::{AddCyclesArgs, Command};

type Run = Result<Outcome, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn read_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    parse_graph(&read_text(path)?).map_err(|e| Failure::io(path, e))
}

fn read_words(path: &Path, alphabet: &Alphabet) -> Result<Vec<Word>, Failure> {
    let text = read_text(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let w = alphabet
            .parse_word(line)
            .map_err(|e| Failure::io(path, format!("line {}: {e}", i + 1)))?;
        out.push(w);
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    write_atomic(path, contents).map_err(|e| Failure::io(path, e))
}

fn sc_summary(r: &SmallCancellationReport) -> String {
    let mut s = format!("verdict: {:?} at α = {} ({:?})", r.verdict, r.alpha, r.variant);
    if let Some(g) = r.girth {
        s += &format!("\ngirth: {g}");
    }
    if let Some(p) = &r.max_piece {
        s += &format!("\nlongest piece: {} (length {})", p.word, p.length);
    }
    s
}

/// `s + 1` for the longest homogeneous run `s` of `g`.
fn default_exponent(g: &LabeledGraph, n: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = n {
        return Ok(n);
    }
    match max_homogeneous_run(g)? {
        Some(s) => Ok(s + 1),
        None => Err(Failure::usage("a homogeneous cycle has unbounded runs; no exponent exceeds it")),
    }
}

pub fn run(command: &Command, seed: &mut Option<u64>) -> Run {
    match command {
        Command::Fold { graph, out } => {
            let g = read_graph(graph)?;
            let f = fold(&g);
            let text = serialize_graph(&f.graph);
            let mut summary = format!(
                "folded {} vertices / {} edges to {} / {}",
                g.vertex_count(),
                g.edge_count(),
                f.graph.vertex_count(),
                f.graph.edge_count()
            );
            match out {
                Some(p) => write_file(p, &text)?,
                None => summary = format!("{text}# {summary}"),
            }
            let result = json!({
                "input": {"vertices": g.vertex_count(), "edges": g.edge_count()},
                "folded": {"vertices": f.graph.vertex_count(), "edges": f.graph.edge_count()},
                "already_folded": g.is_folded(),
            });
            Outcome::new(EXIT_OK, summary, result)
        }
        Command::Metrics { graph } => {
            let m = metrics(&read_graph(graph)?);
            let summary = format!(
                "vertices {}, edges {}, girth {}, diameter {}, max valence {}, λ₁ {}",
                m.vertices,
                m.edges,
                m.girth.map_or("∞".into(), |g| g.to_string()),
                m.diameter,
                m.valence_max,
                m.lambda1.map_or("n/a".into(), |l| format!("{l:.6}"))
            );
            Outcome::new(EXIT_OK, summary, m)
        }
        Command::CheckGr { graph, alpha, variant } => {
            let r = check_gr(&read_graph(graph)?, *alpha, *variant)?;
            Outcome::from_verdict(r.verdict, sc_summary(&r), &r)
        }
        Command::CheckCprime { presentation, alpha } => {
            let p = Presentation::read(presentation).map_err(|e| Failure::io(presentation, e))?;
            if !p.graph_relators.is_empty() {
                return Err(Failure::usage("C' applies to word relators only; the presentation has graph relators"));
            }
            let r = check_cprime(&p.alphabet, &p.word_relators, *alpha)?;
            Outcome::from_verdict(r.verdict, sc_summary(&r), &r)
        }
        Command::MissingWord { graph, max_len } => {
            let g = read_graph(graph)?;
            match find_missing_word(&g, *max_len) {
                Some(c) => {
                    let w = g.alphabet().format_word(&c.word);
                    let summary = format!("missing word: {w} (length {}; all shorter words lift)", c.word.len());
                    Outcome::new(EXIT_OK, summary, json!({"word": w, "length": c.word.len(), "max_checked_length": c.max_checked_length}))
                }
                None => Outcome::new(
                    EXIT_FAIL,
                    format!("every reduced word of length ≤ {max_len} lifts"),
                    json!({"word": null, "max_checked_length": max_len}),
                ),
            }
        }
        Command::AddCycles(args) => add_cycles(args),
        Command::BuildRips { quotient, gamma, cycles, out_dir, stem } => {
            let q = Presentation::read(quotient).map_err(|e| Failure::io(quotient, e))?;
            let g = read_graph(gamma)?;
            let words = read_words(cycles, g.alphabet())?;
            let p = build_rips(&q, &g, &words)?;
            finish_presentation(p, out_dir, stem)
        }
        Command::BuildCohopf { gamma, phi_a, phi_b, out_dir, stem } => {
            let g = read_graph(gamma)?;
            let al = g.alphabet();
            let images = vec![al.parse_word(phi_a)?, al.parse_word(phi_b)?];
            let p = build_cohopf(&g, &PhiSubstitution::new(images)?)?;
            finish_presentation(p, out_dir, stem)
        }
        Command::BuildNonhopf { gamma, words, alpha, n, i_max, out_dir, stem } => {
            let g = read_graph(gamma)?;
            let c = read_words(words, g.alphabet())?;
            let c: [Word; 3] = c
                .try_into()
                .map_err(|c: Vec<Word>| Failure::usage(format!("need exactly 3 cycle words, got {}", c.len())))?;
            let mut parts = vec![g.clone()];
            for w in &c {
                parts.push(cycle_graph(g.alphabet(), w)?);
            }
            let n = default_exponent(&disjoint_union(&parts)?, *n)?;
            let p = build_nonhopf(&g, &c, *alpha, n, *i_max)?;
            finish_presentation(p, out_dir, stem)
        }
        Command::VerifyPhi { graph, alpha, n, k_max } => {
            let g = read_graph(graph)?;
            let n = default_exponent(&g, *n)?;
            let r = verify_phi_lemmas(&g, *alpha, n, *k_max)?;
            let mut lines = vec![format!("z ↦ z^{n}, α = {alpha}, k ≤ {k_max}")];
            for c in std::iter::once(&r.homogeneous).chain(&r.powers).chain(&r.union) {
                lines.push(format!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail));
            }
            Outcome::new(if r.passed() { EXIT_OK } else { EXIT_FAIL }, lines.join("\n"), &r)
        }
        Command::LabRun { config, out_dir } => {
            let mut cfg = ExperimentConfig::read(config).map_err(|e| Failure::io(config, e))?;
            match seed {
                Some(s) => cfg.seed = *s,
                None => *seed = Some(cfg.seed),
            }
            let exp = Experiment::new(cfg)?;
            let outcomes = exp.run()?;
            let summary = exp.summarize(&outcomes)?;
            write_file(&out_dir.join("trials.jsonl"), &outcomes_to_jsonl(&outcomes)?)?;
            let text = serde_json::to_string_pretty(&summary).map_err(gsc_core::Error::from)? + "\n";
            write_file(&out_dir.join("summary.json"), &text)?;
            let human = format!(
                "{} trials at scale g·j = {}\ngirth ≥ {:.1}: {:.3}\nmean girth ratio: {:.4}\nGr' pass: {:.3} (degenerate {:.3})\nmissing word found: {:.3}\npigeonhole: {}/{} confirmed\nquasi-isometry clean: {:.3}",
                summary.trials,
                exp.scale(),
                summary.girth_target,
                summary.fraction_girth_at_target,
                summary.mean_girth_ratio,
                summary.fraction_pass,
                summary.fraction_degenerate,
                summary.fraction_missing_word,
                summary.pigeonhole_confirmed,
                summary.pigeonhole_trials,
                summary.fraction_qi_clean,
            );
            Outcome::new(EXIT_OK, human, &summary)
        }
        Command::WordBounds { m, max_len } => {
            let mut rows = Vec::new();
            let mut violations = Vec::new();
            for len in 0..=*max_len {
                for big_l in 0..=len {
                    let t = norm_tail_bounds(*m, len, big_l)?;
                    // The √ℓ factor makes the second bound void at ℓ = 0.
                    if t.exact > t.bound_a * (1.0 + 1e-12) || (len > 0 && t.exact > t.bound_b * (1.0 + 1e-12)) {
                        violations.push(t);
                    }
                    rows.push(t);
                }
            }
            let summary = format!(
                "m = {m}, ℓ ≤ {max_len}: {} (ℓ, L) cases, {} violations",
                rows.len(),
                violations.len()
            );
            let code = if violations.is_empty() { EXIT_OK } else { EXIT_FAIL };
            Outcome::new(code, summary, json!({"rows": rows, "violations": violations}))
        }
    }
}

fn finish_presentation(p: Presentation, out_dir: &Path, stem: &str) -> Run {
    p.write(out_dir, stem).map_err(|e| Failure::io(out_dir, e))?;
    let mut lines = vec![format!(
        "{} generators, {} word relators, {} graph relators -> {}/{stem}.pres",
        p.generators().len(),
        p.word_relators.len(),
        p.graph_relators.len(),
        out_dir.display()
    )];
    for c in &p.side_conditions {
        lines.push(format!("{} {}: {}", if c.holds { "ok  " } else { "FAIL" }, c.name, c.detail));
    }
    let code = if p.conditions_hold() { EXIT_OK } else { EXIT_FAIL };
    Outcome::new(code, lines.join("\n"), p.sidecar())
}

fn add_cycles(args: &AddCyclesArgs) -> Run {
    let base = read_graph(&args.graph)?;
    let g = girth(&base).ok_or_else(|| Failure::usage("the base graph has no cycles"))?;
    // Longest W with 2(|W| + 1) < α·girth.
    let limit = (0..g).take_while(|&l| args.alpha.admits(2 * (l + 1), g)).last();
    let max_len = match (args.max_len, limit) {
        (Some(l), _) => l,
        (None, Some(l)) => l,
        (None, None) => return Err(Failure::usage(format!("α·girth = {} · {g} leaves no room for a missing word", args.alpha))),
    };
    let missing = find_missing_word(&base, max_len)
        .ok_or_else(|| Failure::usage(format!("every reduced word of length ≤ {max_len} lifts to the base")))?;
    let block_base = match args.block_base {
        Some(k) => k,
        None => minimal_block_base(args.alpha, args.block_count, args.count, 4 * args.block_count.max(16))?
            .ok_or_else(|| Failure::usage("no admissible block base for these parameters"))?,
    };
    let plan = AddCyclesPlan {
        base,
        missing,
        alpha: args.alpha,
        block_base,
        block_count: args.block_count,
        count: args.count,
    };
    let out = build_adding_cycles(&plan)?;
    let dir = &args.out_dir;
    write_file(&dir.join("union.graph"), &serialize_graph(&out.union))?;
    write_file(&dir.join("a.graph"), &serialize_graph(&out.a))?;
    let al = plan.base.alphabet();
    let words: String = out.cycle_words.iter().map(|w| al.format_word(w) + "\n").collect();
    write_file(&dir.join("cycles.txt"), &words)?;
    let s = out.summary(&plan);
    let summary = format!(
        "missing word {} ; block base {block_base}\nadded {} cycles of lengths {:?}\ncross piece {} < α·girth = {} · {}\n{}",
        s.missing_word,
        s.cycle_lengths.len(),
        s.cycle_lengths,
        s.cross_piece,
        plan.alpha,
        s.base_girth,
        sc_summary(&s.report)
    );
    let mut result = serde_json::to_value(&s).map_err(gsc_core::Error::from)?;
    result["block_base"] = json!(block_base);
    result["block_count"] = json!(plan.block_count);
    Outcome::from_verdict(s.report.verdict, summary, result)
}
