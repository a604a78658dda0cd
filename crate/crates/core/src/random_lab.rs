//! Random labellings of subdivided graphs: folded girth, pieces, missing
//! words, local quasi-isometry and piece probabilities.
//!
//! Every trial draws from its own ChaCha stream `(seed, trial index)`, so
//! reports are reproducible regardless of how trials are scheduled.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::graph::{cycle_graph, fold, girth, parse_graph, bouquet, random_regular, Dart, LabeledGraph, SubdivisionSpec};
use crate::small_cancellation::{check_gr, find_missing_word, Variant, Verdict};
use crate::word::{gross_cogrowth, reduced_word_count, walk_distance_distribution, Alphabet, Letter, Word};

/// The unlabelled graph that gets subdivided and randomly labelled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseSpec {
    Cycle { length: usize },
    Bouquet,
    /// Drawn once from the experiment seed.
    RandomRegular { n: usize, degree: usize },
    /// A graph file; its labels are ignored.
    File { path: PathBuf },
}

fn default_exhaustive_limit() -> u64 {
    1_000_000
}

fn default_qi_samples() -> usize {
    2_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub base: BaseSpec,
    pub j: usize,
    pub m: usize,
    /// Piece target for the girth-variant check.
    pub alpha: Alpha,
    /// Missing words are searched up to `α′·girth`.
    pub alpha_prime: Alpha,
    /// Quasi-isometry slack.
    pub beta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Quasi-isometry paths are enumerated exhaustively up to this many.
    #[serde(default = "default_exhaustive_limit")]
    pub qi_exhaustive_limit: u64,
    /// Random paths sampled otherwise.
    #[serde(default = "default_qi_samples")]
    pub qi_samples: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be at least 1".into()));
        }
        if self.j == 0 {
            return Err(Error::Domain("subdivision factor j must be at least 1".into()));
        }
        if self.beta.is_nan() || self.beta <= 0.0 {
            return Err(Error::Domain("beta must be positive".into()));
        }
        if self.m < 2 {
            return Err(Error::Domain("m must be at least 2".into()));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Domain(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    /// The base graph over the rank-`m` alphabet, with placeholder labels.
    pub fn base_graph(&self) -> Result<LabeledGraph> {
        let alphabet = Alphabet::bouquet(self.m)?;
        let g = match &self.base {
            BaseSpec::Cycle { length } => {
                if *length == 0 {
                    return Err(Error::Domain("cycle length must be positive".into()));
                }
                cycle_graph(&alphabet, &Word::from_letters(vec![Letter::new(0, false); *length]))?
            }
            BaseSpec::Bouquet => bouquet(self.m)?,
            BaseSpec::RandomRegular { n, degree } => {
                random_regular(*n, *degree, &mut stream_rng(self.seed, u64::MAX))?.with_alphabet(alphabet.clone())?
            }
            BaseSpec::File { path } => parse_graph(&fs::read_to_string(path)?)?,
        };
        g.relabel(|_| Letter::new(0, false)).with_alphabet(alphabet)
    }
}

/// The generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `(1−θ)/θ` for the gross cogrowth `θ` of the free group of rank `m`.
pub fn girth_ratio_target(m: usize) -> Result<f64> {
    let theta = gross_cogrowth(m)?;
    Ok((1.0 - theta) / theta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub folded_girth: Option<usize>,
    pub folded_vertices: usize,
    pub folded_edges: usize,
    /// Folded girth over `g·j`.
    pub girth_ratio: Option<f64>,
    pub verdict: Verdict,
    pub max_piece: Option<usize>,
    /// Longest piece over the folded girth.
    pub max_piece_ratio: Option<f64>,
    /// `⌊α′·girth⌋`, the longest missing word searched for.
    pub missing_word_bound: usize,
    pub missing_word_length: Option<usize>,
    /// Least `L ≤ bound` with fewer immersed paths than reduced words.
    pub pigeonhole_length: Option<usize>,
    pub qi_checked: u64,
    pub qi_violations: u64,
}

/// A configured experiment with its base graph built once.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub base: LabeledGraph,
    pub base_girth: usize,
    subdivided: LabeledGraph,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let base = config.base_graph()?;
        let base_girth = girth(&base).ok_or_else(|| Error::Domain("base graph has no cycles".into()))?;
        let subdivided = base.subdivide(SubdivisionSpec::new(config.j)?);
        Ok(Experiment {
            config,
            base,
            base_girth,
            subdivided,
        })
    }

    /// `g·j`, the girth of the subdivided base.
    pub fn scale(&self) -> usize {
        self.base_girth * self.config.j
    }

    /// The random labelling of trial `index`.
    pub fn labelling(&self, index: usize) -> LabeledGraph {
        let mut rng = stream_rng(self.config.seed, index as u64);
        self.subdivided.label_random(&mut rng)
    }

    pub fn trial(&self, index: usize) -> Result<TrialOutcome> {
        let c = &self.config;
        let labelled = self.labelling(index);
        let folded = fold(&labelled).graph;
        let fg = girth(&folded);
        let report = check_gr(&folded, c.alpha, Variant::Girth)?;
        let max_piece = report.max_piece.as_ref().map(|p| p.length);
        let bound = fg.map_or(0, |g| c.alpha_prime.floor_of(g));
        let missing_word_length = find_missing_word(&folded, bound).map(|w| w.word.len());
        let pigeonhole_length = (1..=bound).find(|&l| folded.count_paths(l) < reduced_word_count(c.m, l));
        let mut rng = stream_rng(c.seed, (1 << 32) + index as u64);
        let qi = verify_quasi_isometry(
            &labelled,
            c.j,
            self.base_girth,
            c.beta,
            &mut rng,
            c.qi_exhaustive_limit,
            c.qi_samples,
        )?;
        Ok(TrialOutcome {
            trial: index,
            folded_girth: fg,
            folded_vertices: folded.vertex_count(),
            folded_edges: folded.edge_count(),
            girth_ratio: fg.map(|g| g as f64 / self.scale() as f64),
            verdict: report.verdict,
            max_piece,
            max_piece_ratio: match (max_piece, fg) {
                (Some(p), Some(g)) => Some(p as f64 / g as f64),
                _ => None,
            },
            missing_word_bound: bound,
            missing_word_length,
            pigeonhole_length,
            qi_checked: qi.checked,
            qi_violations: qi.violation_count,
        })
    }

    /// All trials, in index order.
    pub fn run(&self) -> Result<Vec<TrialOutcome>> {
        (0..self.config.trials).into_par_iter().map(|i| self.trial(i)).collect()
    }

    pub fn summarize(&self, outcomes: &[TrialOutcome]) -> Result<ExperimentSummary> {
        let n = outcomes.len().max(1) as f64;
        let ratio_target = girth_ratio_target(self.config.m)? - self.config.beta;
        let girth_target = ratio_target * self.scale() as f64;
        let frac = |f: &dyn Fn(&TrialOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count() as f64 / n;
        let pigeonhole_trials = outcomes.iter().filter(|o| o.pigeonhole_length.is_some()).count();
        let pigeonhole_confirmed = outcomes
            .iter()
            .filter(|o| matches!((o.pigeonhole_length, o.missing_word_length), (Some(p), Some(l)) if l <= p))
            .count();
        Ok(ExperimentSummary {
            config: self.config.clone(),
            base_girth: self.base_girth,
            trials: outcomes.len(),
            girth_target,
            fraction_girth_at_target: frac(&|o| o.folded_girth.is_some_and(|g| g as f64 >= girth_target)),
            mean_girth_ratio: outcomes.iter().filter_map(|o| o.girth_ratio).sum::<f64>() / n,
            fraction_pass: frac(&|o| o.verdict == Verdict::Pass),
            fraction_degenerate: frac(&|o| o.verdict == Verdict::Degenerate),
            fraction_missing_word: frac(&|o| o.missing_word_length.is_some()),
            pigeonhole_trials,
            pigeonhole_confirmed,
            fraction_qi_clean: frac(&|o| o.qi_violations == 0),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub base_girth: usize,
    pub trials: usize,
    /// `((1−θ)/θ − β)·g·j`.
    pub girth_target: f64,
    pub fraction_girth_at_target: f64,
    pub mean_girth_ratio: f64,
    pub fraction_pass: f64,
    pub fraction_degenerate: f64,
    pub fraction_missing_word: f64,
    pub pigeonhole_trials: usize,
    /// Trials where the counting argument applied and a missing word was
    /// found no longer than it predicts.
    pub pigeonhole_confirmed: usize,
    pub fraction_qi_clean: f64,
}

/// One trial, building the base graph from scratch.
pub fn run_labelling_trial(config: &ExperimentConfig, trial_index: usize) -> Result<TrialOutcome> {
    Experiment::new(config.clone())?.trial(trial_index)
}

/// Outcomes as JSON lines.
pub fn outcomes_to_jsonl(outcomes: &[TrialOutcome]) -> Result<String> {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&serde_json::to_string(o)?);
        out.push('\n');
    }
    Ok(out)
}

/// Fraction of trials with a missing word of length at most `⌊α′·girth⌋`,
/// with the counting-argument bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MissingWordCensus {
    pub trials: usize,
    pub fraction: f64,
    pub pigeonhole_trials: usize,
    pub pigeonhole_confirmed: usize,
}

pub fn missing_word_census(config: &ExperimentConfig) -> Result<MissingWordCensus> {
    let exp = Experiment::new(config.clone())?;
    let outcomes = exp.run()?;
    let s = exp.summarize(&outcomes)?;
    Ok(MissingWordCensus {
        trials: s.trials,
        fraction: s.fraction_missing_word,
        pigeonhole_trials: s.pigeonhole_trials,
        pigeonhole_confirmed: s.pigeonhole_confirmed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QiViolation {
    pub start: usize,
    pub length: usize,
    pub image_length: usize,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QiReport {
    pub exhaustive: bool,
    /// Path prefixes of length in `(βgj, gj]` examined.
    pub checked: u64,
    pub violation_count: u64,
    /// The first violations found, at most [`QI_KEEP`].
    pub violations: Vec<QiViolation>,
}

pub const QI_KEEP: usize = 100;

struct QiCheck {
    offset: f64,
    ratio: f64,
    report: QiReport,
}

impl QiCheck {
    fn visit(&mut self, start: Dart, length: usize, image: usize) {
        let ell = length as f64 - self.offset;
        if ell <= 0.0 {
            return;
        }
        self.report.checked += 1;
        let required = self.ratio * ell;
        if (image as f64) < required {
            self.report.violation_count += 1;
            if self.report.violations.len() < QI_KEEP {
                self.report.violations.push(QiViolation {
                    start: start.index(),
                    length,
                    image_length: image,
                    required,
                });
            }
        }
    }
}

/// Freely reduces letter by letter, remembering how to undo each step.
#[derive(Default)]
struct Reducer {
    stack: Vec<Letter>,
}

impl Reducer {
    /// Returns the letter cancelled, if any.
    fn push(&mut self, l: Letter) -> Option<Letter> {
        if self.stack.last() == Some(&l.inverse()) {
            self.stack.pop()
        } else {
            self.stack.push(l);
            None
        }
    }

    fn undo(&mut self, cancelled: Option<Letter>) {
        match cancelled {
            Some(c) => self.stack.push(c),
            None => {
                self.stack.pop();
            }
        }
    }
}

/// Checks that immersed paths of length `βgj + ℓ ≤ gj` in the labelled
/// subdivided graph fold to paths of length at least `((1−θ)/θ)·ℓ`; the
/// folded image of a path is as long as its freely reduced label.
///
/// All paths are enumerated when there are at most `exhaustive_limit` of
/// length `gj`; otherwise `samples` random immersed paths are walked.
pub fn verify_quasi_isometry<R: Rng + ?Sized>(
    labelled: &LabeledGraph,
    j: usize,
    g: usize,
    beta: f64,
    rng: &mut R,
    exhaustive_limit: u64,
    samples: usize,
) -> Result<QiReport> {
    let max_len = g * j;
    let mut check = QiCheck {
        offset: beta * max_len as f64,
        ratio: girth_ratio_target(labelled.alphabet().m())?,
        report: QiReport {
            exhaustive: false,
            checked: 0,
            violation_count: 0,
            violations: Vec::new(),
        },
    };
    let adj = labelled.adjacency();
    if labelled.dart_count() == 0 || max_len == 0 {
        check.report.exhaustive = true;
        return Ok(check.report);
    }
    let exhaustive = labelled.count_paths(max_len) <= BigUint::from(exhaustive_limit);
    check.report.exhaustive = exhaustive;
    if exhaustive {
        for start in labelled.darts() {
            let mut red = Reducer::default();
            // Stack of (dart, index of next child to try, cancellation record).
            let first = red.push(labelled.letter(start));
            check.visit(start, 1, red.stack.len());
            let mut stack = vec![(start, 0usize, first)];
            while let Some(&(d, next, _)) = stack.last() {
                let outs = adj.out(labelled.target(d));
                if stack.len() == max_len || next >= outs.len() {
                    let (_, _, rec) = stack.pop().unwrap();
                    red.undo(rec);
                    continue;
                }
                stack.last_mut().unwrap().1 += 1;
                let n = outs[next];
                if n == d.reverse() {
                    continue;
                }
                let rec = red.push(labelled.letter(n));
                stack.push((n, 0, rec));
                check.visit(start, stack.len(), red.stack.len());
            }
        }
    } else {
        for _ in 0..samples {
            let start = Dart::from_index(rng.random_range(0..labelled.dart_count()));
            let mut red = Reducer::default();
            red.push(labelled.letter(start));
            check.visit(start, 1, red.stack.len());
            let mut d = start;
            for len in 2..=max_len {
                let outs: Vec<Dart> = adj.out(labelled.target(d)).iter().copied().filter(|&n| n != d.reverse()).collect();
                if outs.is_empty() {
                    break;
                }
                d = outs[rng.random_range(0..outs.len())];
                red.push(labelled.letter(d));
                check.visit(start, len, red.stack.len());
            }
        }
    }
    Ok(check.report)
}

/// Monte Carlo estimate of the probability that two fixed immersed paths
/// carry freely equal words under a uniform random labelling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceProbability {
    pub l1: usize,
    pub l2: usize,
    /// Trials counted (excluding skipped ones).
    pub trials: u64,
    pub hits: u64,
    /// Trials where both paths folded onto the same folded path.
    pub skipped: u64,
    pub empirical: f64,
    /// Binomial standard error of `empirical`.
    pub std_error: f64,
    /// Exact probability for edge-disjoint paths: a uniform word of length
    /// `ℓ+ℓ′` being trivial.
    pub exact: Option<f64>,
    /// `(2m)^{−(1−θ)(ℓ+ℓ′)}`, without the subexponential factor.
    pub rate: f64,
    pub ratio_to_rate: f64,
}

/// Two edge-disjoint consecutive immersed paths of lengths `l1`, `l2`,
/// following the lowest-numbered unused dart from dart 0.
pub fn consecutive_paths(g: &LabeledGraph, l1: usize, l2: usize) -> Result<(Vec<Dart>, Vec<Dart>)> {
    if g.dart_count() == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    let adj = g.adjacency();
    let mut used = vec![false; g.edge_count()];
    let mut path = vec![Dart::from_index(0)];
    used[0] = true;
    while path.len() < l1 + l2 {
        let d = *path.last().unwrap();
        let next = adj
            .out(g.target(d))
            .iter()
            .copied()
            .find(|&n| n != d.reverse() && !used[n.edge()])
            .ok_or_else(|| Error::Precondition("no edge-disjoint path of the requested length".into()))?;
        used[next.edge()] = true;
        path.push(next);
    }
    let second = path.split_off(l1);
    Ok((path, second))
}

/// [`piece_probability_for_paths`] on [`consecutive_paths`].
pub fn piece_probability_experiment(
    delta: &LabeledGraph,
    l1: usize,
    l2: usize,
    trials: u64,
    seed: u64,
) -> Result<PieceProbability> {
    let g = girth(delta).ok_or_else(|| Error::Precondition("graph has no cycles".into()))?;
    if l1 == 0 || l2 == 0 || 2 * l1 > g || 2 * l2 > g {
        return Err(Error::Precondition(format!("need 1 ≤ ℓ, ℓ′ ≤ girth/2 = {}", g / 2)));
    }
    let (p1, p2) = consecutive_paths(delta, l1, l2)?;
    piece_probability_for_paths(delta, &p1, &p2, trials, seed)
}

const CHUNK: u64 = 16_384;

/// Estimates the probability for explicit paths; edges shared between the
/// paths carry the same random letter.
pub fn piece_probability_for_paths(
    delta: &LabeledGraph,
    p1: &[Dart],
    p2: &[Dart],
    trials: u64,
    seed: u64,
) -> Result<PieceProbability> {
    let m = delta.alphabet().m();
    let alphabet = delta.alphabet().clone();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for d in p1.iter().chain(p2) {
        let k = slot.len();
        slot.entry(d.edge()).or_insert(k);
    }
    let disjoint = slot.len() == p1.len() + p2.len();
    let read = |p: &[Dart], letters: &[Letter]| -> Word {
        p.iter()
            .map(|d| {
                let l = letters[slot[&d.edge()]];
                if d.is_backward() {
                    l.inverse()
                } else {
                    l
                }
            })
            .collect::<Word>()
            .free_reduce()
    };
    let chunks = trials.div_ceil(CHUNK);
    let (hits, skipped) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let n = CHUNK.min(trials - c * CHUNK);
            let (mut hits, mut skipped) = (0u64, 0u64);
            let mut letters = vec![Letter::new(0, false); slot.len()];
            for _ in 0..n {
                for l in letters.iter_mut() {
                    *l = alphabet.random_letter(&mut rng);
                }
                if read(p1, &letters) != read(p2, &letters) {
                    continue;
                }
                // Equal words: label the rest and make sure the two paths
                // stay distinct after folding.
                let full: Vec<Letter> = (0..delta.edge_count())
                    .map(|e| match slot.get(&e) {
                        Some(&k) => letters[k],
                        None => alphabet.random_letter(&mut rng),
                    })
                    .collect();
                let labelled = delta.relabel(|e| full[e]);
                let folded = fold(&labelled);
                let image = |p: &[Dart]| -> Vec<Dart> {
                    p.iter()
                        .map(|d| {
                            let flipped = full[d.edge()].is_inverse();
                            Dart::new(folded.edge_map[d.edge()], d.is_backward() != flipped)
                        })
                        .collect()
                };
                if image(p1) == image(p2) {
                    skipped += 1;
                } else {
                    hits += 1;
                }
            }
            (hits, skipped)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let counted = trials - skipped;
    let empirical = if counted == 0 { 0.0 } else { hits as f64 / counted as f64 };
    let theta = gross_cogrowth(m)?;
    let len = p1.len() + p2.len();
    let rate = (2.0 * m as f64).powf(-(1.0 - theta) * len as f64);
    let exact = if disjoint {
        Some(walk_distance_distribution(m, len)?.prob(0))
    } else {
        None
    };
    Ok(PieceProbability {
        l1: p1.len(),
        l2: p2.len(),
        trials: counted,
        hits,
        skipped,
        empirical,
        std_error: (empirical * (1.0 - empirical) / counted.max(1) as f64).sqrt(),
        exact,
        rate,
        ratio_to_rate: empirical / rate,
    })
}

/// Least-squares fit of `ln(empirical)` against `ℓ+ℓ′`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub points: Vec<PieceProbability>,
    pub slope: f64,
    pub slope_std_error: f64,
    /// `−(1−θ)·ln(2m)`.
    pub target_slope: f64,
}

/// Sweeps `ℓ+ℓ′` over `sums` (split as evenly as possible) on consecutive
/// paths; points with fewer than `min_hits` hits are left out of the fit.
pub fn piece_rate_sweep(delta: &LabeledGraph, sums: &[usize], trials: u64, seed: u64, min_hits: u64) -> Result<RateFit> {
    let m = delta.alphabet().m();
    let mut points = Vec::new();
    for (i, &s) in sums.iter().enumerate() {
        let (l1, l2) = (s.div_ceil(2), s / 2);
        points.push(piece_probability_experiment(delta, l1, l2, trials, seed.wrapping_add(i as u64))?);
    }
    let fit: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.hits >= min_hits)
        .map(|p| ((p.l1 + p.l2) as f64, p.empirical.ln()))
        .collect();
    if fit.len() < 3 {
        return Err(Error::Precondition("fewer than three usable sweep points".into()));
    }
    let n = fit.len() as f64;
    let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
    let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = fit.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let slope_std_error = (sse / (n - 2.0) / sxx).sqrt();
    let theta = gross_cogrowth(m)?;
    Ok(RateFit {
        points,
        slope,
        slope_std_error,
        target_slope: -(1.0 - theta) * (2.0 * m as f64).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(length: usize, j: usize, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            base: BaseSpec::Cycle { length },
            j,
            m: 2,
            alpha: Alpha::new(1, 12).unwrap(),
            alpha_prime: Alpha::new(1, 24).unwrap(),
            beta: 0.05,
            trials,
            seed: 7,
            qi_exhaustive_limit: default_exhaustive_limit(),
            qi_samples: 200,
        }
    }

    #[test]
    fn toml_round_trip_and_validation() {
        let text = r#"
seed = 3
trials = 10
j = 40
m = 2
alpha = "1/12"
alpha_prime = "1/24"
beta = 0.05

[base]
kind = "cycle"
length = 12
"#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(c.base, BaseSpec::Cycle { length: 12 });
        assert_eq!(c.qi_exhaustive_limit, 1_000_000);
        let back = ExperimentConfig::from_toml(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(ExperimentConfig::from_toml(&text.replace("trials = 10", "trials = 0")).is_err());
        assert!(ExperimentConfig::from_toml(&text.replace("beta = 0.05", "beta = 0.0")).is_err());
    }

    #[test]
    fn trials_are_deterministic() {
        let c = config(12, 10, 3);
        assert_eq!(run_labelling_trial(&c, 2).unwrap(), run_labelling_trial(&c, 2).unwrap());
        let exp = Experiment::new(c).unwrap();
        let all = exp.run().unwrap();
        assert_eq!(all[2], exp.trial(2).unwrap());
        assert_ne!(all[0], all[1]);
    }

    #[test]
    fn bouquet_smoke() {
        let mut c = config(1, 1, 5);
        c.base = BaseSpec::Bouquet;
        let exp = Experiment::new(c).unwrap();
        for o in exp.run().unwrap() {
            assert!(o.folded_edges <= 2);
        }
    }

    #[test]
    fn girth_bounded_by_scale_and_pigeonhole_holds() {
        let exp = Experiment::new(config(8, 20, 30)).unwrap();
        for o in exp.run().unwrap() {
            assert!(o.folded_girth.unwrap() <= exp.scale());
            if let Some(p) = o.pigeonhole_length {
                assert!(o.missing_word_length.unwrap() <= p);
            }
        }
    }

    #[test]
    fn quasi_isometry_is_vacuous_below_slack_and_contracting() {
        let exp = Experiment::new(config(6, 10, 1)).unwrap();
        let labelled = exp.labelling(0);
        let mut rng = stream_rng(1, 0);
        // With β = 1 nothing is checked.
        let r = verify_quasi_isometry(&labelled, 10, 6, 1.0, &mut rng, 1_000_000, 10).unwrap();
        assert_eq!((r.checked, r.violation_count), (0, 0));
        // Exhaustive: 120 start darts, each with 60 − 3 lengths beyond βgj = 3.
        let r = verify_quasi_isometry(&labelled, 10, 6, 0.05, &mut rng, 1_000_000, 10).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.checked, 120 * 57);
        for v in &r.violations {
            assert!(v.image_length <= v.length);
        }
        let s = verify_quasi_isometry(&labelled, 10, 6, 0.05, &mut rng, 10, 50).unwrap();
        assert!(!s.exhaustive);
        assert_eq!(s.checked, 50 * 57);
    }

    #[test]
    fn length_one_probability_matches_closed_form() {
        let al = Alphabet::bouquet(2).unwrap();
        let delta = cycle_graph(&al, &Word::from_letters(vec![Letter::new(0, false); 40])).unwrap();
        let p = piece_probability_experiment(&delta, 1, 1, 200_000, 5).unwrap();
        assert_eq!(p.exact, Some(0.25));
        assert!((p.empirical - 0.25).abs() < 4.0 * p.std_error, "{p:?}");
        assert!(piece_probability_experiment(&delta, 21, 1, 10, 5).is_err());
    }

    #[test]
    fn overlapping_paths_share_letters() {
        let al = Alphabet::bouquet(2).unwrap();
        let delta = cycle_graph(&al, &Word::from_letters(vec![Letter::new(0, false); 40])).unwrap();
        let d = |e: usize| Dart::new(e, false);
        // The same path twice always matches but folds onto itself.
        let p = piece_probability_for_paths(&delta, &[d(0), d(1)], &[d(0), d(1)], 1000, 1).unwrap();
        assert_eq!(p.exact, None);
        assert_eq!(p.skipped, 1000);
        // Overlapping by one edge.
        let q = piece_probability_for_paths(&delta, &[d(0), d(1)], &[d(1), d(2)], 50_000, 1).unwrap();
        assert!(q.empirical < 0.25);
    }
}
