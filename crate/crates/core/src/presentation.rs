//! Group presentations mixing word relators and graph relators.
//!
//! Text form:
//!
//! ```text
//! gens: x y q1
//! rel(word): q1' x q1 x y x'
//! rel(graph): gamma.graph
//! ```
//!
//! Graph relators refer to files in the graph format; side conditions and
//! check results travel in a JSON sidecar.

use std::collections::{BTreeMap, VecDeque};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{disjoint_union, parse_graph, serialize_graph, LabeledGraph};
use crate::small_cancellation::relator_graph;
use crate::word::{Alphabet, Letter, Word};

/// A recorded, re-checkable condition attached by a builder.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideCondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl SideCondition {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        SideCondition {
            name: name.into(),
            holds,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub alphabet: Alphabet,
    pub word_relators: Vec<Word>,
    pub graph_relators: Vec<LabeledGraph>,
    /// Construction parameters, echoed into the sidecar.
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub side_conditions: Vec<SideCondition>,
}

/// JSON sidecar written next to the text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub generators: Vec<String>,
    pub word_relators: usize,
    pub graph_relators: usize,
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub side_conditions: Vec<SideCondition>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet) -> Self {
        Presentation {
            alphabet,
            word_relators: Vec::new(),
            graph_relators: Vec::new(),
            metadata: BTreeMap::new(),
            side_conditions: Vec::new(),
        }
    }

    pub fn generators(&self) -> &[String] {
        self.alphabet.names()
    }

    pub fn conditions_hold(&self) -> bool {
        self.side_conditions.iter().all(|c| c.holds)
    }

    /// Every relator uses declared generators only.
    pub fn validate(&self) -> Result<()> {
        for (i, w) in self.word_relators.iter().enumerate() {
            if !w.letters().iter().all(|&l| self.alphabet.contains(l)) {
                return Err(Error::Domain(format!("word relator {i} uses an undeclared generator")));
            }
        }
        for (i, g) in self.graph_relators.iter().enumerate() {
            let names = g.alphabet().names();
            if names.len() > self.alphabet.m() || names != &self.alphabet.names()[..names.len()] {
                return Err(Error::Domain(format!("graph relator {i} uses an undeclared generator")));
            }
        }
        Ok(())
    }

    /// The whole presentation as one labelled graph over the full alphabet:
    /// graph relators followed by one cycle per word relator (cyclically
    /// reduced, which changes a relator only by conjugation).
    pub fn relator_graph(&self) -> Result<LabeledGraph> {
        self.validate()?;
        let mut parts = Vec::new();
        for g in &self.graph_relators {
            parts.push(g.with_alphabet(self.alphabet.clone())?);
        }
        let reduced: Vec<Word> = self.word_relators.iter().map(Word::cyclic_reduce).collect();
        if reduced.iter().any(Word::is_empty) {
            return Err(Error::Domain("a word relator is trivial in the free group".into()));
        }
        parts.push(relator_graph(&self.alphabet, &reduced)?);
        disjoint_union(&parts)?.with_alphabet(self.alphabet.clone())
    }

    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            generators: self.generators().to_vec(),
            word_relators: self.word_relators.len(),
            graph_relators: self.graph_relators.len(),
            metadata: self.metadata.clone(),
            side_conditions: self.side_conditions.clone(),
        }
    }

    /// Text form; graph relator `i` is referenced by `graph_files[i]`.
    pub fn to_text(&self, graph_files: &[String]) -> String {
        let mut out = format!("gens: {}\n", self.generators().join(" "));
        for w in &self.word_relators {
            out.push_str(&format!("rel(word): {}\n", self.alphabet.format_word(w)));
        }
        for f in graph_files {
            out.push_str(&format!("rel(graph): {f}\n"));
        }
        out
    }

    /// Writes `<stem>.pres`, `<stem>.g<i>.graph` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        for (i, g) in self.graph_relators.iter().enumerate() {
            let name = format!("{stem}.g{i}.graph");
            write_atomic(&dir.join(&name), &serialize_graph(g))?;
            files.push(name);
        }
        write_atomic(&dir.join(format!("{stem}.pres")), &self.to_text(&files))?;
        let json = serde_json::to_string_pretty(&self.sidecar())?;
        write_atomic(&dir.join(format!("{stem}.json")), &json)?;
        Ok(())
    }

    /// Parses the text form; `load` resolves graph file references.
    pub fn parse(text: &str, mut load: impl FnMut(&str) -> Result<LabeledGraph>) -> Result<Self> {
        let mut p: Option<Presentation> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(i + 1, 1, "expected `key: value`"))?;
            let rest = rest.trim();
            match (key.trim(), &mut p) {
                ("gens", None) => {
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    let a = Alphabet::with_names(names).map_err(|e| Error::parse(i + 1, 1, e.to_string()))?;
                    p = Some(Presentation::new(a));
                }
                ("gens", Some(_)) => return Err(Error::parse(i + 1, 1, "duplicate gens line")),
                (_, None) => return Err(Error::parse(i + 1, 1, "gens must come first")),
                ("rel(word)", Some(p)) => {
                    let w = p
                        .alphabet
                        .parse_word(rest)
                        .map_err(|e| Error::parse(i + 1, key.len() + 2, e.to_string()))?;
                    p.word_relators.push(w);
                }
                ("rel(graph)", Some(p)) => p.graph_relators.push(load(rest)?),
                (k, _) => return Err(Error::parse(i + 1, 1, format!("unknown key `{k}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::parse(1, 1, "missing gens line"))?;
        p.validate()?;
        Ok(p)
    }

    /// Reads `<path>` and resolves graph files relative to its directory.
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Presentation::parse(&text, |f| parse_graph(&fs::read_to_string(dir.join(f))?))
    }

    /// All relators as words: word relators, then for every graph relator one
    /// word per cycle of a cycle basis (spanning tree plus one edge).
    pub fn flattened_relators(&self) -> Vec<Word> {
        let mut out = self.word_relators.clone();
        for g in &self.graph_relators {
            out.extend(cycle_basis_words(g));
        }
        out
    }

    /// GAP input defining the finitely presented group.
    pub fn to_gap(&self) -> String {
        let gens: Vec<String> = self.generators().iter().map(|g| format!("\"{g}\"")).collect();
        let mut out = format!("F := FreeGroup({});\n", gens.join(", "));
        for (k, g) in self.generators().iter().enumerate() {
            out.push_str(&format!("{g} := F.{};\n", k + 1));
        }
        let rels: Vec<String> = self
            .flattened_relators()
            .iter()
            .map(|w| gap_word(&self.alphabet, w))
            .collect();
        out.push_str(&format!("G := F / [\n  {}\n];\n", rels.join(",\n  ")));
        out
    }
}

fn gap_word(a: &Alphabet, w: &Word) -> String {
    if w.is_empty() {
        return "One(F)".into();
    }
    w.letters()
        .iter()
        .map(|&l: &Letter| {
            let name = &a.names()[l.generator() as usize];
            if l.is_inverse() {
                format!("{name}^-1")
            } else {
                name.clone()
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Reduced words read around a basis of the cycle space: for each edge off
/// a breadth-first spanning forest, tree path, the edge, tree path back.
pub fn cycle_basis_words(g: &LabeledGraph) -> Vec<Word> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; g.edge_count()];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &d in adj.out(v) {
                let t = g.target(d);
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some(d);
                    tree_edge[d.edge()] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    // word from the root of v's tree down to v
    let from_root = |mut v: usize| -> Word {
        let mut darts = Vec::new();
        while let Some(d) = parent[v] {
            darts.push(d);
            v = g.source(d);
        }
        darts.reverse();
        g.read_path(&darts)
    };
    let mut words = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if tree_edge[i] {
            continue;
        }
        let w = from_root(e.src)
            .concat(&Word::from_letters(vec![Letter::new(e.label, false)]))
            .concat(&from_root(e.dst).inverse());
        words.push(w.free_reduce());
    }
    words
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Domain(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bouquet, cycle_graph};

    #[test]
    fn text_round_trip() {
        let a = Alphabet::with_names(["x", "y", "q1"]).unwrap();
        let mut p = Presentation::new(a.clone());
        p.word_relators.push(a.parse_word("q1' x q1 y'").unwrap());
        let ab = Alphabet::with_names(["x", "y"]).unwrap();
        p.graph_relators.push(cycle_graph(&ab, &ab.parse_word("x x y").unwrap()).unwrap());
        let dir = tempdir();
        p.write(&dir, "demo").unwrap();
        let back = Presentation::read(&dir.join("demo.pres")).unwrap();
        assert_eq!(back.word_relators, p.word_relators);
        assert_eq!(back.graph_relators, p.graph_relators);
        let sidecar: Sidecar =
            serde_json::from_str(&fs::read_to_string(dir.join("demo.json")).unwrap()).unwrap();
        assert_eq!(sidecar.generators, vec!["x", "y", "q1"]);
        fs::remove_dir_all(dir).unwrap();
    }

    fn tempdir() -> std::path::PathBuf {
        let d = std::env::temp_dir().join(format!("gsc-pres-{}", std::process::id()));
        fs::create_dir_all(&d).unwrap();
        d
    }

    #[test]
    fn undeclared_generators_rejected() {
        let a = Alphabet::with_names(["x", "y"]).unwrap();
        assert!(Presentation::parse("gens: x y\nrel(word): x z\n", |_| unreachable!()).is_err());
        assert!(Presentation::parse("rel(word): x\n", |_| unreachable!()).is_err());
        let mut p = Presentation::new(a);
        p.graph_relators.push(bouquet(3).unwrap());
        assert!(p.validate().is_err());
    }

    #[test]
    fn cycle_basis_of_bouquet_and_cycle() {
        let words = cycle_basis_words(&bouquet(2).unwrap());
        assert_eq!(words.len(), 2);
        let a = Alphabet::bouquet(2).unwrap();
        let w = a.parse_word("a a b' a b").unwrap();
        let c = cycle_graph(&a, &w).unwrap();
        let basis = cycle_basis_words(&c);
        assert_eq!(basis.len(), 1);
        // the basis word is a conjugate of the cycle word or its inverse
        let r = basis[0].cyclic_reduce();
        let rotations: Vec<Word> = (0..w.len())
            .map(|k| Word::from_letters(w.letters()[k..].iter().chain(&w.letters()[..k]).copied().collect()))
            .collect();
        assert!(rotations.contains(&r) || rotations.contains(&r.inverse()));
    }

    #[test]
    fn gap_export() {
        let a = Alphabet::bouquet(2).unwrap();
        let mut p = Presentation::new(a.clone());
        p.word_relators.push(a.parse_word("a b a' b'").unwrap());
        let gap = p.to_gap();
        assert!(gap.contains("F := FreeGroup(\"a\", \"b\");"));
        assert!(gap.contains("a*b*a^-1*b^-1"));
    }
}
