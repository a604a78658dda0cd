//! Engine for graphs whose components are all cycles.
//!
//! A lift of a word to a cycle is a start position and a direction, and the
//! word read is a cyclic window of the cycle word (wrapping as often as
//! needed). Windows are compared by a double polynomial hash modulo the
//! Mersenne prime 2⁶¹ − 1; long windows `ρ^q·ρ[..r]` use the geometric sum
//! of `B^n`. A word of length `ℓ` is a piece iff two distinct lifts have the
//! same window, and prefixes of pieces are pieces, so the longest piece is
//! found by binary search over `ℓ`.
//!
//! Pieces are unbounded exactly when some cycle word is a proper power or
//! two cycle words have conjugate primitive roots (up to inversion).
//! Otherwise a piece is shorter than the sum of the two cycle lengths it
//! lifts to.

use std::collections::{HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};

use rayon::prelude::*;

use super::{
    girth_verdict, Occurrence, PieceSummary, SmallCancellationReport, Variant, Verdict, Witness,
};
use crate::alpha::Alpha;
use crate::graph::{CycleComponent, LabeledGraph};
use crate::word::{Letter, Word};

const MODULUS: u64 = (1 << 61) - 1;
const BASES: [u64; 2] = [0x1f3d_5b79_a2c4_e681 % MODULUS, 0x0ab5_4a98_ceb1_f0d3 % MODULUS];

type Hash = [u64; 2];

/// The keys are already uniform hash values; pass them through.
#[derive(Default)]
struct Identity(u64);

impl Hasher for Identity {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, _: &[u8]) {
        unreachable!("only u128 keys are hashed")
    }

    fn write_u128(&mut self, x: u128) {
        self.0 = x as u64 ^ (x >> 64) as u64;
    }
}

fn mul(a: u64, b: u64) -> u64 {
    let p = (a as u128) * (b as u128);
    let lo = (p as u64) & MODULUS;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn pow(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    r
}

/// `1 + x + … + x^(q−1)`.
fn geometric(x: u64, q: u64) -> u64 {
    if q == 0 {
        0
    } else if q.is_multiple_of(2) {
        mul(geometric(x, q / 2), add(1, pow(x, q / 2)))
    } else {
        add(1, mul(x, geometric(x, q - 1)))
    }
}

/// Prefix hashes of one direction of a cycle word, doubled so every
/// rotation is a substring.
struct Track {
    letters: Vec<Letter>,
    prefix: Vec<Hash>,
}

impl Track {
    fn new(letters: Vec<Letter>) -> Self {
        let doubled: Vec<Letter> = letters.iter().chain(letters.iter()).copied().collect();
        let mut prefix = Vec::with_capacity(doubled.len() + 1);
        let mut h = [0u64; 2];
        prefix.push(h);
        for l in &doubled {
            for k in 0..2 {
                h[k] = add(mul(h[k], BASES[k]), l.index() as u64 + 1);
            }
            prefix.push(h);
        }
        Track { letters, prefix }
    }

    fn substring(&self, start: usize, len: usize, powers: &[Hash]) -> Hash {
        let (a, b) = (self.prefix[start], self.prefix[start + len]);
        [
            sub(b[0], mul(a[0], powers[len][0])),
            sub(b[1], mul(a[1], powers[len][1])),
        ]
    }
}

struct Cycle {
    n: usize,
    forward: Track,
    backward: Track,
}

/// A lift: cycle index, start position, direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Lift {
    cycle: u32,
    pos: u32,
    backward: bool,
}

pub(super) struct CycleEngine<'a> {
    g: &'a LabeledGraph,
    comps: &'a [CycleComponent],
    cycles: Vec<Cycle>,
    powers: Vec<Hash>,
}

/// Start of the lexicographically least rotation (two-pointer scan).
/// A representative of the cyclic word up to rotation and inversion.
pub(crate) fn cyclic_canonical(w: &Word) -> Word {
    let rotate = |s: &[Letter]| {
        let k = least_rotation(s);
        s[k..].iter().chain(&s[..k]).copied().collect::<Vec<_>>()
    };
    let inv = w.inverse();
    Word::from_letters(rotate(w.letters()).min(rotate(inv.letters())))
}

fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (s[(i + k) % n], s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Smallest period dividing the length.
fn primitive_period(s: &[Letter]) -> usize {
    let n = s.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut j = pi[i - 1];
        while j > 0 && s[i] != s[j] {
            j = pi[j - 1];
        }
        if s[i] == s[j] {
            j += 1;
        }
        pi[i] = j;
    }
    let p = n - pi[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

fn rotated(s: &[Letter], k: usize) -> Vec<Letter> {
    s[k..].iter().chain(&s[..k]).copied().collect()
}

impl<'a> CycleEngine<'a> {
    pub fn new(g: &'a LabeledGraph, comps: &'a [CycleComponent]) -> Self {
        let cycles: Vec<Cycle> = comps
            .iter()
            .map(|c| {
                let w = c.word.letters().to_vec();
                let inv = c.word.inverse().into_letters();
                Cycle {
                    n: w.len(),
                    forward: Track::new(w),
                    backward: Track::new(inv),
                }
            })
            .collect();
        let maxn = cycles.iter().map(|c| c.n).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(2 * maxn + 1);
        let mut p = [1u64, 1u64];
        for _ in 0..=2 * maxn {
            powers.push(p);
            p = [mul(p[0], BASES[0]), mul(p[1], BASES[1])];
        }
        CycleEngine {
            g,
            comps,
            cycles,
            powers,
        }
    }

    fn lifts(&self) -> impl Iterator<Item = Lift> + '_ {
        self.cycles.iter().enumerate().flat_map(|(c, cy)| {
            (0..cy.n).flat_map(move |pos| {
                [false, true].map(|backward| Lift {
                    cycle: c as u32,
                    pos: pos as u32,
                    backward,
                })
            })
        })
    }

    /// Index into the backward track where reading backwards from position
    /// `pos` begins.
    fn track_start(n: usize, lift: Lift) -> usize {
        if lift.backward {
            (n - lift.pos as usize) % n
        } else {
            lift.pos as usize
        }
    }

    fn window(&self, lift: Lift, len: usize, geo: &[Hash]) -> Hash {
        let cy = &self.cycles[lift.cycle as usize];
        let track = if lift.backward { &cy.backward } else { &cy.forward };
        let start = Self::track_start(cy.n, lift);
        let (q, r) = (len / cy.n, len % cy.n);
        let head = track.substring(start, r, &self.powers);
        if q == 0 {
            return head;
        }
        let rot = track.substring(start, cy.n, &self.powers);
        let g = geo[lift.cycle as usize];
        [0, 1].map(|k| add(mul(mul(rot[k], g[k]), self.powers[r][k]), head[k]))
    }

    /// Geometric factors `Σ_{t<q} B^{n t}` per cycle for windows of length `len`.
    fn geometric_factors(&self, len: usize) -> Vec<Hash> {
        self.cycles
            .iter()
            .map(|cy| {
                let q = (len / cy.n) as u64;
                [0, 1].map(|k| geometric(pow(BASES[k], cy.n as u64), q))
            })
            .collect()
    }

    /// All lifts with their windows of length `len`, sorted by hash.
    fn hashed(&self, len: usize) -> Vec<(Hash, Lift)> {
        let geo = self.geometric_factors(len);
        let lifts: Vec<Lift> = self.lifts().collect();
        let mut v: Vec<(Hash, Lift)> = lifts
            .into_par_iter()
            .map(|l| (self.window(l, len, &geo), l))
            .collect();
        v.par_sort_unstable();
        v
    }

    /// Whether two distinct lifts share a window of length `len`. Two
    /// backward lifts sharing a window reverse to two forward lifts sharing
    /// the inverse window, so only forward windows are stored and backward
    /// ones are looked up.
    fn has_piece(&self, len: usize) -> bool {
        let geo = self.geometric_factors(len);
        let key = |h: Hash| ((h[0] as u128) << 64) | h[1] as u128;
        let total: usize = self.cycles.iter().map(|c| c.n).sum();
        let mut seen: HashSet<u128, BuildHasherDefault<Identity>> =
            HashSet::with_capacity_and_hasher(total, Default::default());
        let (forward, backward): (Vec<Lift>, Vec<Lift>) = self.lifts().partition(|l| !l.backward);
        forward.into_iter().any(|l| !seen.insert(key(self.window(l, len, &geo))))
            || backward.into_iter().any(|l| seen.contains(&key(self.window(l, len, &geo))))
    }

    fn read(&self, lift: Lift, len: usize) -> Word {
        let cy = &self.cycles[lift.cycle as usize];
        let track = if lift.backward { &cy.backward } else { &cy.forward };
        let start = Self::track_start(cy.n, lift);
        (0..len).map(|i| track.letters[(start + i) % cy.n]).collect()
    }

    fn occurrence(&self, lift: Lift) -> Occurrence {
        let comp = &self.comps[lift.cycle as usize];
        let n = comp.darts.len();
        let pos = lift.pos as usize;
        let first = if lift.backward {
            comp.darts[(pos + n - 1) % n].reverse()
        } else {
            comp.darts[pos]
        };
        Occurrence {
            component: lift.cycle as usize,
            start: comp.vertices[pos],
            forward: !first.is_backward(),
        }
    }

    /// The lift whose window of length `len` is shared with another lift and
    /// which is least among such lifts, with every lift sharing that window.
    fn first_piece(&self, len: usize, allowed: impl Fn(&Lift) -> bool) -> Option<(Lift, Vec<Lift>)> {
        let hashed = self.hashed(len);
        let mut best: Option<(Lift, usize, usize)> = None;
        let mut i = 0;
        while i < hashed.len() {
            let mut j = i + 1;
            while j < hashed.len() && hashed[j].0 == hashed[i].0 {
                j += 1;
            }
            if j - i >= 2 {
                if let Some(l) = hashed[i..j].iter().map(|x| x.1).filter(|l| allowed(l)).min() {
                    if best.is_none_or(|b| l < b.0) {
                        best = Some((l, i, j));
                    }
                }
            }
            i = j;
        }
        best.map(|(l, i, j)| {
            let mut group: Vec<Lift> = hashed[i..j].iter().map(|x| x.1).collect();
            group.sort();
            (l, group)
        })
    }

    fn summary(&self, lift: Lift, len: usize, group: &[Lift]) -> PieceSummary {
        let word = self.read(lift, len);
        // every lift of the word, oriented to read it
        let mut occurrences: Vec<Occurrence> = group.iter().map(|&l| self.occurrence(l)).collect();
        occurrences.sort();
        occurrences.dedup();
        PieceSummary {
            word: self.g.alphabet().format_word(&word),
            length: len,
            occurrences,
        }
    }

    /// A proper power or two conjugate primitive roots.
    fn degeneracy(&self) -> Option<Witness> {
        let mut seen: HashMap<Vec<Letter>, Lift> = HashMap::new();
        for (c, comp) in self.comps.iter().enumerate() {
            let w = comp.word.letters();
            let p = primitive_period(w);
            let lift = |pos: usize, backward: bool| Lift {
                cycle: c as u32,
                pos: pos as u32,
                backward,
            };
            if p < w.len() {
                return Some(Witness::Unbounded {
                    word: self.g.alphabet().format_word(&Word::from_letters(w[..p].to_vec())),
                    lifts: [self.occurrence(lift(0, false)), self.occurrence(lift(p, false))],
                });
            }
            let fwd_rot = least_rotation(w);
            let inv = comp.word.inverse().into_letters();
            let inv_rot = least_rotation(&inv);
            let a = rotated(w, fwd_rot);
            let b = rotated(&inv, inv_rot);
            let n = w.len();
            // reading backwards from position (n − k) mod n gives inv rotated by k
            let (key, here) = if a <= b {
                (a, lift(fwd_rot, false))
            } else {
                (b, lift((n - inv_rot) % n, true))
            };
            if let Some(&there) = seen.get(&key) {
                return Some(Witness::Unbounded {
                    word: self.g.alphabet().format_word(&Word::from_letters(key)),
                    lifts: [self.occurrence(there), self.occurrence(here)],
                });
            }
            seen.insert(key, here);
        }
        None
    }

    /// Longest piece length (no degeneracy).
    fn max_piece_len(&self) -> usize {
        // Two periodic words agreeing on n₁ + n₂ letters have a common
        // period, which a non-degenerate family excludes.
        let mut lengths: Vec<usize> = self.cycles.iter().map(|c| c.n).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        let hi_bound = lengths.first().map_or(0, |&a| a + lengths.get(1).copied().unwrap_or(a));
        let (mut lo, mut hi) = (0usize, hi_bound);
        debug_assert!(!self.has_piece(hi));
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if self.has_piece(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

pub(super) fn check(
    g: &LabeledGraph,
    comps: &[CycleComponent],
    alpha: Alpha,
    variant: Variant,
) -> SmallCancellationReport {
    let engine = CycleEngine::new(g, comps);
    let girth = comps.iter().map(|c| c.word.len()).min();
    if let Some(w) = engine.degeneracy() {
        return SmallCancellationReport {
            alpha,
            variant,
            verdict: Verdict::Degenerate,
            max_piece: None,
            witness: Some(w),
            girth,
        };
    }
    let max_len = engine.max_piece_len();
    let max_piece = (max_len > 0).then(|| {
        let (lift, group) = engine.first_piece(max_len, |_| true).expect("piece of maximal length");
        engine.summary(lift, max_len, &group)
    });
    let (verdict, witness) = match variant {
        Variant::Girth => girth_verdict(alpha, girth, &max_piece),
        Variant::Cycle => {
            // a cycle fails iff a piece of length ⌈α·n⌉ occurs on it
            let mut thresholds: Vec<usize> = engine
                .cycles
                .iter()
                .map(|c| alpha.threshold(c.n).max(1))
                .filter(|&t| t <= max_len)
                .collect();
            thresholds.sort_unstable();
            thresholds.dedup();
            let mut found = None;
            for t in thresholds {
                let on_failing = |l: &Lift| alpha.threshold(engine.cycles[l.cycle as usize].n).max(1) == t;
                if let Some((lift, group)) = engine.first_piece(t, on_failing) {
                    let comp = &comps[lift.cycle as usize];
                    let mut summary = engine.summary(lift, t, &group);
                    summary.occurrences = vec![engine.occurrence(lift)];
                    found = Some(Witness::Cycle {
                        piece: summary,
                        cycle: g.alphabet().format_word(&comp.word),
                        cycle_length: comp.word.len(),
                    });
                    break;
                }
            }
            match found {
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
