//! Letters, words and free reduction over a bouquet of circles, plus the
//! exact law of the distance travelled by a simple random walk on the
//! `2m`-regular tree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A signed generator. The index is `2·generator + inverse`, so `a < a' < b < b'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        Letter(2 * generator + inverse as u32)
    }

    pub fn from_index(index: usize) -> Self {
        Letter(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

/// Generator names of the bouquet `B`. The rank `m` is the number of names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    /// The bouquet of `m ≥ 2` circles; generators are `a, b` for `m = 2` and
    /// `x1 … xm` otherwise.
    pub fn bouquet(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidAlphabet(format!("need m >= 2 generators, got {m}")));
        }
        Ok(Self::default_names(m))
    }

    fn default_names(m: usize) -> Self {
        let names = if m == 2 {
            vec!["a".to_string(), "b".to_string()]
        } else {
            (1..=m).map(|i| format!("x{i}")).collect()
        };
        Alphabet { names }
    }

    /// An alphabet with explicit generator names. Used for presentations whose
    /// generator set is not a bare bouquet (extended alphabets, quotient
    /// presentations), so any rank including zero is allowed.
    pub fn with_names<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty()
                || n.contains(|c: char| c.is_whitespace() || c == '\'' || c == '^' || c == '⁻' || c == '#')
            {
                return Err(Error::InvalidAlphabet(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidAlphabet(format!("duplicate generator `{n}`")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Rank of the free group.
    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn letter_count(&self) -> usize {
        2 * self.m()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letter_count()).map(Letter::from_index)
    }

    pub fn contains(&self, l: Letter) -> bool {
        (l.generator() as usize) < self.m()
    }

    /// Whether these are the default names for this rank.
    pub fn has_default_names(&self) -> bool {
        *self == Self::default_names(self.m())
    }

    pub fn generator_index(&self, name: &str) -> Option<u32> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Some(i as u32);
        }
        // `x1 … xm` always resolve, unless shadowed by an explicit name.
        let k: usize = name.strip_prefix('x')?.parse().ok()?;
        (1..=self.m()).contains(&k).then(|| (k - 1) as u32)
    }

    pub fn parse_letter(&self, token: &str) -> Option<Letter> {
        let (name, inverse) = if let Some(n) = token.strip_suffix('\'') {
            (n, true)
        } else if let Some(n) = token.strip_suffix("⁻¹") {
            (n, true)
        } else if let Some(n) = token.strip_suffix("^-1") {
            (n, true)
        } else {
            (token, false)
        };
        self.generator_index(name).map(|g| Letter::new(g, inverse))
    }

    /// Parses whitespace-separated letters. `1` and the empty string denote
    /// the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut column = 1;
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let l = self.parse_letter(token).ok_or_else(|| {
                let col = text.find(token).map(|i| i + 1).unwrap_or(column);
                Error::parse(1, col, format!("unknown letter `{token}`"))
            })?;
            letters.push(l);
            column += token.len() + 1;
        }
        Ok(Word::from_letters(letters))
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let base = &self.names[l.generator() as usize];
        if l.is_inverse() {
            format!("{base}'")
        } else {
            base.clone()
        }
    }

    /// ASCII form, e.g. `a b' a`.
    pub fn format_word(&self, w: &Word) -> String {
        w.letters
            .iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Unicode form, e.g. `a b⁻¹ a`.
    pub fn format_word_unicode(&self, w: &Word) -> String {
        w.letters
            .iter()
            .map(|&l| {
                let base = &self.names[l.generator() as usize];
                if l.is_inverse() {
                    format!("{base}⁻¹")
                } else {
                    base.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn random_letter<R: Rng + ?Sized>(&self, rng: &mut R) -> Letter {
        Letter::from_index(rng.random_range(0..self.letter_count()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[1] != p[0].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(&f), Some(&l)) => self.letters.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    /// The freely reduced word equal to `self` in the free group.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word { letters: stack }
    }

    /// Free reduction followed by cancelling inverse letters at the two ends.
    pub fn cyclic_reduce(&self) -> Word {
        let r = self.free_reduce();
        let n = r.letters.len();
        let mut i = 0;
        while i + 1 < n - i && r.letters[i] == r.letters[n - 1 - i].inverse() {
            i += 1;
        }
        Word {
            letters: r.letters[i..n - i].to_vec(),
        }
    }

    /// Length of the reduced form, `‖w‖`.
    pub fn norm(&self) -> usize {
        self.free_reduce().len()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    pub fn power(&self, k: usize) -> Word {
        Word {
            letters: self.letters.repeat(k),
        }
    }

    /// `w` or `w⁻¹`, whichever is lexicographically smaller.
    pub fn canonical_up_to_inversion(&self) -> Word {
        let inv = self.inverse();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }

    /// Longest run of a single letter (cyclically when `cyclic`).
    pub fn max_run(&self, cyclic: bool) -> usize {
        let n = self.letters.len();
        if n == 0 {
            return 0;
        }
        if cyclic && self.letters.iter().all(|&l| l == self.letters[0]) {
            return usize::MAX;
        }
        let mut best = 0;
        let mut run = 0;
        let span = if cyclic { 2 * n } else { n };
        for i in 0..span {
            let l = self.letters[i % n];
            if i > 0 && l == self.letters[(i - 1) % n] {
                run += 1;
            } else {
                run = 1;
            }
            best = best.max(run.min(n));
        }
        best
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let alphabet = Alphabet::default_names(
            self.letters.iter().map(|l| l.generator() as usize + 1).max().unwrap_or(2).max(2),
        );
        f.write_str(&alphabet.format_word(self))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter.into_iter().collect())
    }
}

/// Gross cogrowth `θ` of the free group of rank `m`: `(2m)^θ = 2√(2m−1)`.
pub fn gross_cogrowth(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidAlphabet(format!("need m >= 2 generators, got {m}")));
    }
    let m = m as f64;
    Ok((2.0 * (2.0 * m - 1.0).sqrt()).ln() / (2.0 * m).ln())
}

/// A uniform random word of length `len`: i.i.d. signed letters.
pub fn random_word<R: Rng + ?Sized>(alphabet: &Alphabet, len: usize, rng: &mut R) -> Word {
    (0..len).map(|_| alphabet.random_letter(rng)).collect()
}

/// Number of reduced words of length `len` in rank `m`: `2m(2m−1)^{len−1}`.
pub fn reduced_word_count(m: usize, len: usize) -> BigUint {
    if len == 0 {
        return BigUint::one();
    }
    BigUint::from(2 * m) * BigUint::from(2 * m - 1).pow((len - 1) as u32)
}

/// Word lengths up to which the distance law is kept in exact integers.
pub const EXACT_DISTRIBUTION_LIMIT: usize = 64;

/// Law of `‖W_ℓ‖` for a uniform random word `W_ℓ`.
#[derive(Clone, Debug)]
pub struct DistanceDistribution {
    pub m: usize,
    pub len: usize,
    /// `counts[k]` = number of raw words of length `len` with norm `k`;
    /// present when `len ≤ EXACT_DISTRIBUTION_LIMIT`.
    pub counts: Option<Vec<BigUint>>,
    /// `probs[k] = Pr(‖W_ℓ‖ = k)`.
    pub probs: Vec<f64>,
}

impl DistanceDistribution {
    pub fn prob(&self, k: usize) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    /// Exact probability as a rational, when available.
    pub fn exact(&self, k: usize) -> Option<BigRational> {
        let counts = self.counts.as_ref()?;
        let total = BigUint::from(2 * self.m).pow(self.len as u32);
        let c = counts.get(k).cloned().unwrap_or_default();
        Some(BigRational::new(c.into(), total.into()))
    }

    /// `Pr(‖W_ℓ‖ ≤ L)`.
    pub fn tail(&self, max_norm: usize) -> f64 {
        if let Some(counts) = &self.counts {
            let total = BigUint::from(2 * self.m).pow(self.len as u32);
            let c: BigUint = counts.iter().take(max_norm + 1).sum();
            return ratio_to_f64(&c, &total);
        }
        self.probs.iter().take(max_norm + 1).sum::<f64>().min(1.0)
    }

    /// Non-zero entries as a map `k → probability`.
    pub fn support(&self) -> BTreeMap<usize, f64> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| (k, p))
            .collect()
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    match (num.to_f64(), den.to_f64()) {
        (Some(n), Some(d)) if d.is_finite() && n.is_finite() => n / d,
        _ => BigRational::new(num.clone().into(), den.clone().into())
            .to_f64()
            .unwrap_or(f64::NAN),
    }
}

/// Exact law of the tree distance after `len` uniform steps, from the
/// birth–death chain `0 → 1` (prob. 1), `k → k+1` (prob. `(2m−1)/2m`),
/// `k → k−1` (prob. `1/2m`).
pub fn walk_distance_distribution(m: usize, len: usize) -> Result<DistanceDistribution> {
    if m < 2 {
        return Err(Error::InvalidAlphabet(format!("need m >= 2 generators, got {m}")));
    }
    if len <= EXACT_DISTRIBUTION_LIMIT {
        // Counting raw words: from norm 0 every one of the 2m letters extends,
        // from norm k ≥ 1 one letter cancels and 2m−1 extend.
        let mut counts = vec![BigUint::one()];
        let up_from_zero = BigUint::from(2 * m);
        let up = BigUint::from(2 * m - 1);
        for _ in 0..len {
            let mut next = vec![BigUint::zero(); counts.len() + 1];
            for (k, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if k == 0 {
                    next[1] += c * &up_from_zero;
                } else {
                    next[k + 1] += c * &up;
                    next[k - 1] += c;
                }
            }
            counts = next;
        }
        let total = BigUint::from(2 * m).pow(len as u32);
        let probs = counts.iter().map(|c| ratio_to_f64(c, &total)).collect();
        return Ok(DistanceDistribution {
            m,
            len,
            counts: Some(counts),
            probs,
        });
    }
    let q = 1.0 / (2 * m) as f64;
    let p = 1.0 - q;
    let mut probs = vec![1.0];
    for _ in 0..len {
        let mut next = vec![0.0; probs.len() + 1];
        for (k, &pr) in probs.iter().enumerate() {
            if k == 0 {
                next[1] += pr;
            } else {
                next[k + 1] += pr * p;
                next[k - 1] += pr * q;
            }
        }
        probs = next;
    }
    Ok(DistanceDistribution {
        m,
        len,
        counts: None,
        probs,
    })
}

/// Exact tail `Pr(‖W_ℓ‖ ≤ L)` next to the two closed-form upper bounds.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TailBounds {
    pub m: usize,
    pub len: usize,
    pub max_norm: usize,
    pub exact: f64,
    /// `(2m)^{−ℓ(1−θ)+θL}`.
    pub bound_a: f64,
    /// `√(ℓ·2m/(2m−1))·(2m)^{−(1−θ)ℓ}·(2m−1)^{L/2}`.
    pub bound_b: f64,
}

pub fn norm_tail_bounds(m: usize, len: usize, max_norm: usize) -> Result<TailBounds> {
    if max_norm > len {
        return Err(Error::Domain(format!("need 0 <= L <= ℓ, got L={max_norm}, ℓ={len}")));
    }
    let theta = gross_cogrowth(m)?;
    let dist = walk_distance_distribution(m, len)?;
    let two_m = (2 * m) as f64;
    let (l, big_l) = (len as f64, max_norm as f64);
    let bound_a = two_m.powf(-l * (1.0 - theta) + theta * big_l);
    let bound_b = (l * two_m / (two_m - 1.0)).sqrt()
        * two_m.powf(-(1.0 - theta) * l)
        * (two_m - 1.0).powf(big_l / 2.0);
    Ok(TailBounds {
        m,
        len,
        max_norm,
        exact: dist.tail(max_norm),
        bound_a,
        bound_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::bouquet(2).unwrap()
    }

    #[test]
    fn alphabet_requires_two_generators() {
        assert!(Alphabet::bouquet(1).is_err());
        assert!(gross_cogrowth(1).is_err());
    }

    #[test]
    fn inverse_is_fixed_point_free_involution() {
        for l in Alphabet::bouquet(4).unwrap().letters() {
            assert_ne!(l, l.inverse());
            assert_eq!(l, l.inverse().inverse());
        }
    }

    #[test]
    fn reduce_examples() {
        let a = ab();
        let w = a.parse_word("a a' b").unwrap();
        assert_eq!(a.format_word(&w.free_reduce()), "b");
        assert!(Word::empty().free_reduce().is_empty());
        let w = a.parse_word("a b b' a a' b").unwrap();
        assert_eq!(a.format_word(&w.free_reduce()), "a b");
    }

    /// Repeatedly delete the leftmost cancelling pair until none is left.
    fn reduce_by_pairs(w: &Word) -> Word {
        let mut v = w.letters().to_vec();
        loop {
            let pos = v.windows(2).position(|p| p[1] == p[0].inverse());
            match pos {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return Word::from_letters(v),
            }
        }
    }

    #[test]
    fn reduce_matches_pairwise_cancellation() {
        let a = ab();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for len in 0..40 {
            let w = random_word(&a, len, &mut rng);
            let r = w.free_reduce();
            assert_eq!(r, reduce_by_pairs(&w));
            assert!(r.is_reduced());
            assert_eq!((w.len() - r.len()) % 2, 0);
        }
    }

    #[test]
    fn parse_and_format() {
        let a = ab();
        let w = a.parse_word("a b' x1 x2⁻¹ b^-1").unwrap();
        assert_eq!(a.format_word(&w), "a b' a b' b'");
        assert_eq!(a.format_word_unicode(&w), "a b⁻¹ a b⁻¹ b⁻¹");
        assert!(a.parse_word("a c").is_err());
        let x = Alphabet::bouquet(3).unwrap();
        assert_eq!(x.format_word(&x.parse_word("x3 x1'").unwrap()), "x3 x1'");
    }

    #[test]
    fn cyclic_reduction() {
        let a = ab();
        let w = a.parse_word("a' b a b b' a").unwrap();
        assert_eq!(a.format_word(&w.cyclic_reduce()), "b a");
        let v = a.parse_word("a' b a").unwrap();
        assert_eq!(a.format_word(&v.cyclic_reduce()), "b");
        assert!(a.parse_word("a a b b").unwrap().is_cyclically_reduced());
        assert!(!a.parse_word("a b a'").unwrap().is_cyclically_reduced());
    }

    #[test]
    fn cogrowth_values() {
        let t2 = gross_cogrowth(2).unwrap();
        assert!((t2 - 0.896_240_625_180_289).abs() < 1e-12);
        let t3 = gross_cogrowth(3).unwrap();
        assert!((t3 - 0.835_975_008_086_5).abs() < 1e-9);
        for m in 2..50 {
            let t = gross_cogrowth(m).unwrap();
            let lhs = ((2 * m) as f64).powf(t);
            let rhs = 2.0 * ((2 * m - 1) as f64).sqrt();
            assert!((lhs - rhs).abs() < 1e-12 * rhs);
            assert!(t > 0.5 && t < 1.0);
        }
    }

    #[test]
    fn random_word_is_deterministic() {
        let a = ab();
        let w1 = random_word(&a, 30, &mut ChaCha8Rng::seed_from_u64(3));
        let w2 = random_word(&a, 30, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(w1, w2);
        assert!(random_word(&a, 0, &mut ChaCha8Rng::seed_from_u64(3)).is_empty());
    }

    #[test]
    fn distance_small_cases() {
        let d = walk_distance_distribution(2, 1).unwrap();
        assert_eq!(d.support().into_iter().collect::<Vec<_>>(), vec![(1, 1.0)]);
        let d = walk_distance_distribution(2, 2).unwrap();
        assert_eq!(d.prob(0), 0.25);
        assert_eq!(d.prob(2), 0.75);
    }

    #[test]
    fn float_path_agrees_with_exact_path() {
        // ℓ = 64 is exact, ℓ = 65 is the float chain; one more step of the exact
        // counts must agree with the float one to rounding.
        let e = walk_distance_distribution(3, 64).unwrap();
        let f = walk_distance_distribution(3, 65).unwrap();
        assert!(f.counts.is_none());
        let q = 1.0 / 6.0;
        for k in 0..=65 {
            let mut expect = 0.0;
            if k >= 1 {
                expect += e.prob(k - 1) * if k == 1 { 1.0 } else { 1.0 - q };
            }
            expect += e.prob(k + 1) * q;
            assert!((f.prob(k) - expect).abs() < 1e-14, "k={k}");
        }
        let total: f64 = f.probs.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_bounds_examples() {
        let t = norm_tail_bounds(2, 2, 0).unwrap();
        assert_eq!(t.exact, 0.25);
        assert!((t.bound_a - 0.75).abs() < 1e-3);
        let t = norm_tail_bounds(2, 2, 2).unwrap();
        assert_eq!(t.exact, 1.0);
        assert!(t.bound_a >= 1.0 && t.bound_b >= 1.0);
        assert!(norm_tail_bounds(2, 2, 3).is_err());
        for big_l in (0..=20).step_by(2) {
            let t = norm_tail_bounds(2, 20, big_l).unwrap();
            assert!(t.exact <= t.bound_a && t.exact <= t.bound_b, "L={big_l}");
        }
    }

    #[test]
    fn max_runs() {
        let a = ab();
        assert_eq!(a.parse_word("a a b a").unwrap().max_run(false), 2);
        assert_eq!(a.parse_word("a a b a").unwrap().max_run(true), 3);
        assert_eq!(a.parse_word("a a").unwrap().max_run(true), usize::MAX);
    }
}
