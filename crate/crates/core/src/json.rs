//! On-disk JSON formats for grammars, presentations, graphs and cycle words.
//!
//! Every format is a plain serde struct; parsing a file and turning it into
//! a solver object are separate steps, because a file can be well-formed
//! JSON and still describe a grammar with a cyclic rule or a graph with a
//! dangling vertex. The `to_json` / `from_json` helpers work on strings so
//! callers decide where the bytes live.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::alphabet::{AlphabetError, GeneratorAlphabet, Word};
use crate::ascending::{AscendingError, AscendingPresentation};
use crate::fingerprint::FingerprintParams;
use crate::grammar::{Atom, CompositionSystem, GrammarBuilder, Violation};
use crate::graph::{
    CycleItem, CycleTypeWord, CycleViolation, GraphOfGroups, GraphViolation, RawEdge, RawGraph,
};
use crate::hnn::{HnnError, HnnPresentation};
use crate::parse::{ParseError, WordParser};

/// Words stored inline in files (associated-subgroup generators, edge
/// images, endomorphism images) must expand below this many letters.
const SHORT_WORD_LIMIT: u64 = 1 << 16;

/// Anything that can go wrong turning a file into a solver object.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error(transparent)]
    Grammar(#[from] Violation),
    #[error("rule `{rule}`: cut index `{text}` is not a decimal integer")]
    BadIndex { rule: String, text: String },
    #[error("word `{text}`: {source}")]
    Word { text: String, source: ParseError },
    #[error("word `{text}` expands past {SHORT_WORD_LIMIT} letters; inline words must stay short")]
    WordTooLong { text: String },
    #[error(transparent)]
    Hnn(#[from] HnnError),
    #[error(transparent)]
    Ascending(#[from] AscendingError),
    #[error("phi maps `{0}`, which is not a generator")]
    PhiDomain(String),
    #[error("phi does not map generator `{0}`")]
    PhiMissing(String),
    #[error("{}", join_messages(.0))]
    Graph(Vec<GraphViolation>),
    #[error("{}", join_messages(.0))]
    Cycle(Vec<CycleViolation>),
    #[error("grammar alphabet {got:?} does not match the expected alphabet {want:?}")]
    AlphabetMismatch { got: Vec<String>, want: Vec<String> },
}

fn join_messages<E: std::fmt::Display>(errs: &[E]) -> String {
    errs.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One right-hand-side token of a stored grammar rule.
///
/// `{"t": "a"}` is a terminal (`"a^-1"` for an inverse letter), `{"v": "X"}`
/// a variable reference, and `{"cut": ["X", "2", "17"]}` the substring
/// `val(X)[2..=17]` with 1-based inclusive indices. Indices are decimal
/// strings so they are not capped by JSON number precision.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TokenJson {
    Terminal { t: String },
    Variable { v: String },
    Cut { cut: (String, String, String) },
}

/// Stored grammar: `{"alphabet": [...], "start": "S", "rules": {...}}`.
///
/// Rules may appear in any order; loading topologically sorts them and
/// reports a cycle if there is no valid order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrammarFile {
    pub alphabet: Vec<String>,
    pub start: String,
    pub rules: BTreeMap<String, Vec<TokenJson>>,
}

impl GrammarFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grammar files serialize")
    }

    pub fn from_system(sys: &CompositionSystem) -> Self {
        let ab = sys.alphabet();
        let alphabet = (0..ab.rank()).map(|i| ab.name(i).to_string()).collect();
        let mut rules = BTreeMap::new();
        for v in sys.vars() {
            let tokens = sys
                .atoms_of(v)
                .iter()
                .map(|a| match a {
                    Atom::Letter(l) => TokenJson::Terminal {
                        t: ab.letter_name(*l),
                    },
                    Atom::Var(w) => TokenJson::Variable {
                        v: sys.name_of(*w).to_string(),
                    },
                    Atom::Cut { var, lo, hi } => TokenJson::Cut {
                        cut: (
                            sys.name_of(*var).to_string(),
                            lo.to_string(),
                            hi.to_string(),
                        ),
                    },
                })
                .collect();
            rules.insert(sys.name_of(v).to_string(), tokens);
        }
        GrammarFile {
            alphabet,
            start: sys.name_of(sys.start()).to_string(),
            rules,
        }
    }

    pub fn to_system(&self, params: FingerprintParams) -> Result<CompositionSystem, FileError> {
        let alphabet = GeneratorAlphabet::new(self.alphabet.iter().map(String::as_str), params)?;
        self.to_system_on(&alphabet)
    }

    /// Builds the grammar on an existing alphabet (it must list the same
    /// generators in the same order).
    pub fn to_system_on(
        &self,
        alphabet: &Arc<GeneratorAlphabet>,
    ) -> Result<CompositionSystem, FileError> {
        let want: Vec<String> = (0..alphabet.rank())
            .map(|i| alphabet.name(i).to_string())
            .collect();
        if self.alphabet != want {
            return Err(FileError::AlphabetMismatch {
                got: self.alphabet.clone(),
                want,
            });
        }
        if !self.rules.contains_key(&self.start) {
            return Err(Violation::MissingStart(self.start.clone()).into());
        }

        let mut unmet: BTreeMap<&str, usize> = BTreeMap::new();
        let mut dependents: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (name, tokens) in &self.rules {
            let mut count = 0;
            for tok in tokens {
                let dep = match tok {
                    TokenJson::Variable { v } => v,
                    TokenJson::Cut { cut } => &cut.0,
                    TokenJson::Terminal { .. } => continue,
                };
                if !self.rules.contains_key(dep) {
                    return Err(Violation::Dangling(dep.clone()).into());
                }
                count += 1;
                dependents.entry(dep).or_default().push(name);
            }
            unmet.insert(name, count);
        }

        let mut ready: Vec<&str> = unmet
            .iter()
            .filter(|(_, n)| **n == 0)
            .map(|(name, _)| *name)
            .collect();
        let mut builder = GrammarBuilder::new(alphabet);
        let mut built: BTreeMap<&str, crate::grammar::VarId> = BTreeMap::new();
        while let Some(name) = ready.pop() {
            let mut atoms = Vec::new();
            for tok in &self.rules[name] {
                atoms.push(match tok {
                    TokenJson::Terminal { t } => {
                        let l = alphabet.parse_letter(t).ok_or_else(|| {
                            Violation::UnknownLetter {
                                rule: name.to_string(),
                                token: t.clone(),
                            }
                        })?;
                        Atom::Letter(l)
                    }
                    TokenJson::Variable { v } => Atom::Var(built[v.as_str()]),
                    TokenJson::Cut { cut: (v, lo, hi) } => Atom::Cut {
                        var: built[v.as_str()],
                        lo: parse_index(name, lo)?,
                        hi: parse_index(name, hi)?,
                    },
                });
            }
            built.insert(name, builder.add(name, atoms)?);
            for dependent in dependents.remove(name).unwrap_or_default() {
                let n = unmet.get_mut(dependent).expect("dependent has a rule");
                *n -= 1;
                if *n == 0 {
                    ready.push(dependent);
                }
            }
        }
        if built.len() < self.rules.len() {
            let stuck = self
                .rules
                .keys()
                .find(|k| !built.contains_key(k.as_str()))
                .expect("some rule is unbuilt");
            return Err(Violation::Cycle(stuck.clone()).into());
        }
        Ok(builder.build(built[self.start.as_str()]))
    }
}

fn parse_index(rule: &str, text: &str) -> Result<BigUint, FileError> {
    BigUint::from_str(text).map_err(|_| FileError::BadIndex {
        rule: rule.to_string(),
        text: text.to_string(),
    })
}

/// Parses an inline word that must be short enough to hold explicitly.
fn parse_short_word(
    alphabet: &Arc<GeneratorAlphabet>,
    text: &str,
) -> Result<Word, FileError> {
    let sys = WordParser::new(alphabet)
        .parse_segment(text)
        .map_err(|e| FileError::Word {
            text: text.to_string(),
            source: e,
        })?;
    sys.expand(SHORT_WORD_LIMIT)
        .map_err(|_| FileError::WordTooLong {
            text: text.to_string(),
        })
}

/// Stored HNN presentation:
/// `{"alphabet": ["a"], "stable": "t", "g": "a", "h": "a a"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HnnFile {
    pub alphabet: Vec<String>,
    pub stable: String,
    pub g: String,
    pub h: String,
}

impl HnnFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation files serialize")
    }

    pub fn to_presentation(
        &self,
        params: FingerprintParams,
    ) -> Result<HnnPresentation, FileError> {
        let alphabet = GeneratorAlphabet::new(self.alphabet.iter().map(String::as_str), params)?;
        let g = parse_short_word(&alphabet, &self.g)?;
        let h = parse_short_word(&alphabet, &self.h)?;
        Ok(HnnPresentation::new(&alphabet, &self.stable, &g, &h)?)
    }
}

fn default_stable() -> String {
    "t".to_string()
}

/// Stored ascending presentation:
/// `{"alphabet": ["a"], "phi": {"a": "a a"}}`; `stable` defaults to `"t"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AscendingFile {
    pub alphabet: Vec<String>,
    #[serde(default = "default_stable")]
    pub stable: String,
    pub phi: BTreeMap<String, String>,
}

impl AscendingFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation files serialize")
    }

    pub fn to_presentation(
        &self,
        params: FingerprintParams,
    ) -> Result<AscendingPresentation, FileError> {
        let alphabet = GeneratorAlphabet::new(self.alphabet.iter().map(String::as_str), params)?;
        for key in self.phi.keys() {
            if alphabet.index_of(key).is_none() {
                return Err(FileError::PhiDomain(key.clone()));
            }
        }
        let mut images = Vec::with_capacity(alphabet.rank());
        for i in 0..alphabet.rank() {
            let name = alphabet.name(i);
            let text = self
                .phi
                .get(name)
                .ok_or_else(|| FileError::PhiMissing(name.to_string()))?;
            images.push(parse_short_word(&alphabet, text)?);
        }
        Ok(AscendingPresentation::new(&alphabet, &self.stable, images)?)
    }
}

/// Stored graph of groups: `{"vertices": {"v": {"alphabet": [...]}},
/// "edges": [...]}`. Every edge implicitly carries its reversal; `inverse`
/// overrides the default `name^-1` spelling of the reversed edge.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: BTreeMap<String, VertexFile>,
    pub edges: Vec<EdgeFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexFile {
    pub alphabet: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<String>,
    pub from: String,
    pub to: String,
    pub alpha_image: String,
    pub omega_image: String,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph files serialize")
    }

    pub fn to_graph(&self, params: FingerprintParams) -> Result<GraphOfGroups, FileError> {
        let raw = RawGraph {
            vertices: self
                .vertices
                .iter()
                .map(|(name, v)| (name.clone(), v.alphabet.clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    name: e.name.clone(),
                    inverse_name: e.inverse.clone(),
                    from: e.from.clone(),
                    to: e.to.clone(),
                    alpha_image: e.alpha_image.clone(),
                    omega_image: e.omega_image.clone(),
                })
                .collect(),
        };
        GraphOfGroups::from_raw(&raw, params).map_err(FileError::Graph)
    }
}

/// One stored item of a cycle-type word: an edge name (or its inverse), a
/// word in the syntax of [`WordParser`], or an inline grammar object.
/// Strings that name an edge of the graph are edges; everything else is
/// parsed as a word at the vertex where the path currently stands.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CycleItemJson {
    Text(String),
    Grammar(GrammarFile),
}

/// Stored cycle-type word: `{"base": "v", "items": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleWordFile {
    pub base: String,
    pub items: Vec<CycleItemJson>,
}

impl CycleWordFile {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cycle word files serialize")
    }

    pub fn to_word(&self, graph: &GraphOfGroups) -> Result<CycleTypeWord, FileError> {
        let Some(mut at) = graph.find_vertex(&self.base) else {
            return Err(FileError::Cycle(vec![CycleViolation::UnknownBase(
                self.base.clone(),
            )]));
        };
        let mut items = Vec::new();
        for item in &self.items {
            match item {
                CycleItemJson::Text(text) => {
                    if let Some(e) = graph.find_edge(text) {
                        items.push(CycleItem::Edge(text.clone()));
                        at = graph.target(e);
                    } else {
                        let alphabet = graph.vertex_alphabet(at);
                        let sys = WordParser::new(alphabet).parse_segment(text).map_err(
                            |e| FileError::Word {
                                text: text.clone(),
                                source: e,
                            },
                        )?;
                        items.push(CycleItem::Segment(Arc::new(sys)));
                    }
                }
                CycleItemJson::Grammar(g) => {
                    let sys = g.to_system_on(graph.vertex_alphabet(at))?;
                    items.push(CycleItem::Segment(Arc::new(sys)));
                }
            }
        }
        CycleTypeWord::validate(graph, &self.base, &items).map_err(FileError::Cycle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::EqVerdict;
    use crate::graph::fundamental_word_problem;
    use crate::hnn::{semi_compressed_word_problem, BrittonSequence};
    use crate::SolverConfig;
    use num_traits::Zero;

    fn params() -> FingerprintParams {
        FingerprintParams::from_seed(11)
    }

    fn doubling_file(n: usize) -> String {
        let mut rules = vec![r#""A0": [{"t": "a"}, {"t": "b"}]"#.to_string()];
        for i in 1..=n {
            rules.push(format!(
                r#""A{i}": [{{"v": "A{}"}}, {{"v": "A{}"}}]"#,
                i - 1,
                i - 1
            ));
        }
        format!(
            r#"{{"alphabet": ["a", "b"], "start": "A{n}", "rules": {{{}}}}}"#,
            rules.join(", ")
        )
    }

    #[test]
    fn grammar_files_round_trip() {
        let sys = GrammarFile::from_json(&doubling_file(5))
            .unwrap()
            .to_system(params())
            .unwrap();
        assert_eq!(sys.length(), &BigUint::from(64u32));

        let reloaded = GrammarFile::from_json(&GrammarFile::from_system(&sys).to_json())
            .unwrap()
            .to_system(params())
            .unwrap();
        assert_eq!(sys.equal_detail(&reloaded, 1 << 20), EqVerdict::EqualExact);
    }

    #[test]
    fn rule_order_in_the_file_does_not_matter() {
        // Child listed after its parent; the loader must sort.
        let text = r#"{
            "alphabet": ["a"],
            "start": "S",
            "rules": {
                "S": [{"v": "Z"}, {"v": "Z"}],
                "Z": [{"t": "a"}, {"t": "a^-1"}]
            }
        }"#;
        let sys = GrammarFile::from_json(text).unwrap().to_system(params()).unwrap();
        assert_eq!(sys.length(), &BigUint::from(4u32));
        assert_eq!(
            sys.alphabet().format_word(&sys.expand(10).unwrap()),
            "a a^-1 a a^-1"
        );
    }

    #[test]
    fn cuts_read_back_with_big_indices() {
        let text = r#"{
            "alphabet": ["a", "b"],
            "start": "S",
            "rules": {
                "P": [{"t": "a"}, {"t": "b"}, {"t": "a"}, {"t": "b"}],
                "S": [{"cut": ["P", "2", "3"]}]
            }
        }"#;
        let sys = GrammarFile::from_json(text).unwrap().to_system(params()).unwrap();
        assert_eq!(
            sys.alphabet().format_word(&sys.expand(10).unwrap()),
            "b a"
        );

        // A cut index past the value length round-trips as the same string.
        let big = r#"{
            "alphabet": ["a"],
            "start": "S",
            "rules": {
                "P": [{"t": "a"}],
                "S": [{"cut": ["P", "1", "123456789012345678901234567890"]}]
            }
        }"#;
        let sys = GrammarFile::from_json(big).unwrap().to_system(params()).unwrap();
        let saved = GrammarFile::from_system(&sys).to_json();
        assert!(saved.contains("123456789012345678901234567890"));
    }

    #[test]
    fn bad_grammar_files_are_rejected_with_the_right_violation() {
        let cyclic = r#"{"alphabet": ["a"], "start": "S",
                         "rules": {"S": [{"v": "T"}], "T": [{"v": "S"}]}}"#;
        assert!(matches!(
            GrammarFile::from_json(cyclic).unwrap().to_system(params()),
            Err(FileError::Grammar(Violation::Cycle(_)))
        ));

        let dangling = r#"{"alphabet": ["a"], "start": "S", "rules": {"S": [{"v": "X"}]}}"#;
        assert!(matches!(
            GrammarFile::from_json(dangling).unwrap().to_system(params()),
            Err(FileError::Grammar(Violation::Dangling(x))) if x == "X"
        ));

        let no_start = r#"{"alphabet": ["a"], "start": "S", "rules": {"T": [{"t": "a"}]}}"#;
        assert!(matches!(
            GrammarFile::from_json(no_start).unwrap().to_system(params()),
            Err(FileError::Grammar(Violation::MissingStart(_)))
        ));

        let bad_letter = r#"{"alphabet": ["a"], "start": "S", "rules": {"S": [{"t": "q"}]}}"#;
        assert!(matches!(
            GrammarFile::from_json(bad_letter).unwrap().to_system(params()),
            Err(FileError::Grammar(Violation::UnknownLetter { .. }))
        ));

        let bad_index = r#"{"alphabet": ["a"], "start": "S",
                            "rules": {"P": [{"t": "a"}], "S": [{"cut": ["P", "x", "2"]}]}}"#;
        assert!(matches!(
            GrammarFile::from_json(bad_index).unwrap().to_system(params()),
            Err(FileError::BadIndex { .. })
        ));

        let zero_cut = r#"{"alphabet": ["a"], "start": "S",
                           "rules": {"P": [{"t": "a"}], "S": [{"cut": ["P", "0", "1"]}]}}"#;
        assert!(matches!(
            GrammarFile::from_json(zero_cut).unwrap().to_system(params()),
            Err(FileError::Grammar(Violation::MalformedCut { .. }))
        ));

        assert!(GrammarFile::from_json("{").is_err());
    }

    #[test]
    fn hnn_files_build_working_presentations() {
        let text = r#"{"alphabet": ["a"], "stable": "t", "g": "a", "h": "a a"}"#;
        let pres = HnnFile::from_json(text).unwrap().to_presentation(params()).unwrap();
        assert_eq!(pres.stable(), "t");

        let parser = WordParser::with_special(pres.alphabet(), pres.stable());
        let items = parser.parse_mixed("t^-1 a t (a^-1)^2").unwrap();
        let seq = BrittonSequence::from_items(pres.alphabet(), &items);
        assert!(semi_compressed_word_problem(
            &pres,
            &seq,
            &SolverConfig::default()
        ));
    }

    #[test]
    fn ascending_files_default_the_stable_letter() {
        let text = r#"{"alphabet": ["a"], "phi": {"a": "a a"}}"#;
        let pres = AscendingFile::from_json(text)
            .unwrap()
            .to_presentation(params())
            .unwrap();
        assert_eq!(pres.stable(), "t");

        let missing = r#"{"alphabet": ["a", "b"], "phi": {"a": "a a"}}"#;
        assert!(matches!(
            AscendingFile::from_json(missing).unwrap().to_presentation(params()),
            Err(FileError::PhiMissing(b)) if b == "b"
        ));

        let extra = r#"{"alphabet": ["a"], "phi": {"a": "a a", "q": "a"}}"#;
        assert!(matches!(
            AscendingFile::from_json(extra).unwrap().to_presentation(params()),
            Err(FileError::PhiDomain(q)) if q == "q"
        ));
    }

    #[test]
    fn graph_and_cycle_files_drive_the_solver() {
        let graph_text = r#"{
            "vertices": {"u": {"alphabet": ["a"]}, "w": {"alphabet": ["b"]}},
            "edges": [{"name": "e", "from": "u", "to": "w",
                       "alpha_image": "a", "omega_image": "b b"}]
        }"#;
        let graph = GraphFile::from_json(graph_text).unwrap().to_graph(params()).unwrap();
        assert_eq!(graph.vertex_count(), 2);

        // e b^2 e^-1 a^-1 is the defining relation, so it is the identity.
        let word_text = r#"{"base": "u", "items": ["e", "b b", "e^-1", "a^-1"]}"#;
        let word = CycleWordFile::from_json(word_text).unwrap().to_word(&graph).unwrap();
        assert!(fundamental_word_problem(
            &graph,
            &word,
            &SolverConfig::default()
        ));

        let off_by_one = r#"{"base": "u", "items": ["e", "b", "e^-1", "a^-1"]}"#;
        let word = CycleWordFile::from_json(off_by_one).unwrap().to_word(&graph).unwrap();
        assert!(!fundamental_word_problem(
            &graph,
            &word,
            &SolverConfig::default()
        ));
    }

    #[test]
    fn cycle_files_accept_inline_grammars() {
        let graph_text = r#"{
            "vertices": {"u": {"alphabet": ["a"]}, "w": {"alphabet": ["b"]}},
            "edges": [{"name": "e", "from": "u", "to": "w",
                       "alpha_image": "a", "omega_image": "b b"}]
        }"#;
        let graph = GraphFile::from_json(graph_text).unwrap().to_graph(params()).unwrap();

        // The b^2 segment as an inline grammar object instead of a word.
        let word_text = r#"{
            "base": "u",
            "items": [
                "e",
                {"alphabet": ["b"], "start": "S",
                 "rules": {"S": [{"t": "b"}, {"t": "b"}]}},
                "e^-1",
                "a^-1"
            ]
        }"#;
        let word = CycleWordFile::from_json(word_text).unwrap().to_word(&graph).unwrap();
        assert!(fundamental_word_problem(
            &graph,
            &word,
            &SolverConfig::default()
        ));

        // The inline grammar's alphabet must match the vertex it lands on.
        let wrong = r#"{
            "base": "u",
            "items": [
                "e",
                {"alphabet": ["a"], "start": "S", "rules": {"S": [{"t": "a"}]}},
                "e^-1"
            ]
        }"#;
        assert!(matches!(
            CycleWordFile::from_json(wrong).unwrap().to_word(&graph),
            Err(FileError::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn graph_violations_surface_through_file_loading() {
        let shared = r#"{
            "vertices": {"u": {"alphabet": ["a"]}, "w": {"alphabet": ["a"]}},
            "edges": [{"name": "e", "from": "u", "to": "w",
                       "alpha_image": "a", "omega_image": "a"}]
        }"#;
        match GraphFile::from_json(shared).unwrap().to_graph(params()) {
            Err(FileError::Graph(v)) => assert!(!v.is_empty()),
            other => panic!("expected graph violations, got {other:?}"),
        }

        let empty_word = r#"{"base": "u", "items": []}"#;
        let graph_text = r#"{
            "vertices": {"u": {"alphabet": ["a"]}},
            "edges": []
        }"#;
        let graph = GraphFile::from_json(graph_text).unwrap().to_graph(params()).unwrap();
        let word = CycleWordFile::from_json(empty_word).unwrap().to_word(&graph).unwrap();
        assert!(word.head().length().is_zero());
    }
}
