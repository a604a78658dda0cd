//! Shortest reduced words that lift nowhere.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::LabeledGraph;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingWordCertificate {
    pub word: Word,
    pub max_checked_length: usize,
}

/// The shortest, then lexicographically least, reduced word of length at
/// most `max_len` lifting at no vertex of the folded graph `g`.
///
/// Breadth-first search over states (vertices where the current word can
/// end, last letter); states are explored in lexicographic word order, so
/// the first dead state reached belongs to the least shortest word.
pub fn find_missing_word(g: &LabeledGraph, max_len: usize) -> Option<MissingWordCertificate> {
    if max_len == 0 {
        return None;
    }
    let adj = g.adjacency();
    let step = |ends: &[u32], x: Letter| -> Vec<u32> {
        let mut next: Vec<u32> = ends
            .iter()
            .filter_map(|&v| g.step(&adj, v as usize, x))
            .map(|d| g.target(d) as u32)
            .collect();
        next.sort_unstable();
        next.dedup();
        next
    };
    type State = (Vec<u32>, Letter);
    let all: Vec<u32> = (0..g.vertex_count() as u32).collect();
    let mut seen: HashSet<State> = HashSet::new();
    let mut queue: VecDeque<(State, Word)> = VecDeque::new();
    for x in g.alphabet().letters() {
        let ends = step(&all, x);
        let word = Word::from_letters(vec![x]);
        if ends.is_empty() {
            return Some(MissingWordCertificate {
                word,
                max_checked_length: max_len,
            });
        }
        if seen.insert((ends.clone(), x)) {
            queue.push_back(((ends, x), word));
        }
    }
    while let Some(((ends, last), word)) = queue.pop_front() {
        if word.len() >= max_len {
            continue;
        }
        for x in g.alphabet().letters() {
            if x == last.inverse() {
                continue;
            }
            let next = step(&ends, x);
            let mut w = word.clone();
            w.push(x);
            if next.is_empty() {
                return Some(MissingWordCertificate {
                    word: w,
                    max_checked_length: max_len,
                });
            }
            if seen.insert((next.clone(), x)) {
                queue.push_back(((next, x), w));
            }
        }
    }
    None
}
