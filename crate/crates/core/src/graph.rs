//! Graphs of groups with free vertex groups and cyclic edge groups, and
//! the word problem in their fundamental groups.
//!
//! A directed edge `e` from vertex `u` to vertex `v` carries two words: its
//! source image `alpha_e` in the group at `u` and its target image
//! `omega_e` in the group at `v`, subject to the relation
//! `e omega_e^l e^-1 = alpha_e^l`. Edges come in inverse pairs; traversing
//! `e` backwards swaps the roles of the two images.
//!
//! Words in the fundamental group are given in cycle type: a closed edge
//! path `e_1 ... e_n` based at a vertex, interleaved with compressed
//! segments `w_i` from the group at the vertex where the path stands after
//! `e_i`. Such a word is the identity iff generalized Britton reduction
//! (rewriting `e omega_e^l e^-1 -> alpha_e^l` in either orientation) kills
//! all edges and the surviving segment is trivial at the base vertex.
//! HNN-extensions are the one-vertex one-edge case and amalgamated products
//! the two-vertex one-edge case.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::alphabet::GeneratorAlphabet;
use crate::free_group::{compressed_word_problem, free_reduce, ReducedWord};
use crate::grammar::CompositionSystem;
use crate::hnn::{build_image_power, BrittonSequence, HnnPresentation, Sign};
use crate::power::{compressed_power, PowerAnswer};
use crate::{FingerprintParams, SolverConfig};

/// One edge orbit `{e, e^-1}`, stored once in the forward direction.
#[derive(Clone, Debug)]
struct EdgeOrbit {
    name: String,
    inverse_name: String,
    from: usize,
    to: usize,
    alpha_image: ReducedWord,
    omega_image: ReducedWord,
}

/// A directed edge: an orbit plus a direction of travel.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct EdgeRef {
    orbit: usize,
    reversed: bool,
}

impl EdgeRef {
    pub fn orbit(self) -> usize {
        self.orbit
    }

    pub fn is_reversed(self) -> bool {
        self.reversed
    }

    pub fn reverse(self) -> EdgeRef {
        EdgeRef {
            orbit: self.orbit,
            reversed: !self.reversed,
        }
    }
}

/// Unvalidated description of a graph of groups; mirrors the JSON format.
#[derive(Clone, Debug, Default)]
pub struct RawGraph {
    /// `(vertex name, generator names)` per vertex.
    pub vertices: Vec<(String, Vec<String>)>,
    pub edges: Vec<RawEdge>,
}

#[derive(Clone, Debug)]
pub struct RawEdge {
    pub name: String,
    /// Defaults to `name^-1`.
    pub inverse_name: Option<String>,
    pub from: String,
    pub to: String,
    /// Plain word over the source vertex generators.
    pub alpha_image: String,
    /// Plain word over the target vertex generators.
    pub omega_image: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphViolation {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("vertex `{vertex}`: {message}")]
    BadAlphabet { vertex: String, message: String },
    #[error("generator `{generator}` appears at both `{first}` and `{second}`")]
    SharedGenerator {
        generator: String,
        first: String,
        second: String,
    },
    #[error("duplicate edge name `{0}`")]
    DuplicateEdgeName(String),
    #[error("edge `{0}` is its own inverse")]
    SelfInverseEdge(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{edge}`: {message}")]
    BadImage { edge: String, message: String },
    #[error("edge `{edge}`: images must be both trivial or both nontrivial")]
    OrderMismatch { edge: String },
}

/// A validated graph of groups.
#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    vertex_names: Vec<String>,
    alphabets: Vec<Arc<GeneratorAlphabet>>,
    orbits: Vec<EdgeOrbit>,
}

impl GraphOfGroups {
    /// Validates and builds. All vertex alphabets share `params`, so
    /// segments from different vertices stay fingerprint-comparable; their
    /// generator name sets must be pairwise disjoint.
    pub fn from_raw(raw: &RawGraph, params: FingerprintParams) -> Result<Self, Vec<GraphViolation>> {
        let mut violations = Vec::new();
        let mut vertex_names: Vec<String> = Vec::new();
        let mut alphabets: Vec<Arc<GeneratorAlphabet>> = Vec::new();
        let mut vertex_index: HashMap<&str, usize> = HashMap::new();
        let mut generator_owner: HashMap<&str, &str> = HashMap::new();
        for (name, gens) in &raw.vertices {
            if vertex_index.contains_key(name.as_str()) {
                violations.push(GraphViolation::DuplicateVertex(name.clone()));
                continue;
            }
            for g in gens {
                match generator_owner.get(g.as_str()) {
                    Some(owner) if *owner != name.as_str() => {
                        violations.push(GraphViolation::SharedGenerator {
                            generator: g.clone(),
                            first: (*owner).to_string(),
                            second: name.clone(),
                        });
                    }
                    _ => {
                        generator_owner.insert(g, name);
                    }
                }
            }
            match GeneratorAlphabet::new(gens.iter().map(String::as_str), params) {
                Ok(al) => {
                    vertex_index.insert(name, vertex_names.len());
                    vertex_names.push(name.clone());
                    alphabets.push(al);
                }
                Err(e) => violations.push(GraphViolation::BadAlphabet {
                    vertex: name.clone(),
                    message: e.to_string(),
                }),
            }
        }

        let mut orbits: Vec<EdgeOrbit> = Vec::new();
        let mut edge_names: HashMap<String, ()> = HashMap::new();
        for e in &raw.edges {
            let inverse_name = e
                .inverse_name
                .clone()
                .unwrap_or_else(|| format!("{}^-1", e.name));
            if inverse_name == e.name {
                violations.push(GraphViolation::SelfInverseEdge(e.name.clone()));
                continue;
            }
            let mut clash = false;
            for n in [&e.name, &inverse_name] {
                if edge_names.insert(n.clone(), ()).is_some() {
                    violations.push(GraphViolation::DuplicateEdgeName(n.clone()));
                    clash = true;
                }
            }
            if clash {
                continue;
            }
            let from = vertex_index.get(e.from.as_str()).copied();
            let to = vertex_index.get(e.to.as_str()).copied();
            if from.is_none() {
                violations.push(GraphViolation::UnknownVertex {
                    edge: e.name.clone(),
                    vertex: e.from.clone(),
                });
            }
            if to.is_none() {
                violations.push(GraphViolation::UnknownVertex {
                    edge: e.name.clone(),
                    vertex: e.to.clone(),
                });
            }
            let (Some(from), Some(to)) = (from, to) else {
                continue;
            };
            let parse = |text: &str, vertex: usize, which: &str| {
                alphabets[vertex].parse_plain_word(text).map_err(|err| {
                    GraphViolation::BadImage {
                        edge: e.name.clone(),
                        message: format!("{which} image: {err}"),
                    }
                })
            };
            let alpha = parse(&e.alpha_image, from, "source");
            let omega = parse(&e.omega_image, to, "target");
            let (alpha, omega) = match (alpha, omega) {
                (Ok(a), Ok(o)) => (a, o),
                (a, o) => {
                    violations.extend(a.err());
                    violations.extend(o.err());
                    continue;
                }
            };
            let alpha = free_reduce(&alpha);
            let omega = free_reduce(&omega);
            if alpha.is_empty() != omega.is_empty() {
                violations.push(GraphViolation::OrderMismatch {
                    edge: e.name.clone(),
                });
                continue;
            }
            orbits.push(EdgeOrbit {
                name: e.name.clone(),
                inverse_name,
                from,
                to,
                alpha_image: alpha,
                omega_image: omega,
            });
        }

        if violations.is_empty() {
            Ok(GraphOfGroups {
                vertex_names,
                alphabets,
                orbits,
            })
        } else {
            Err(violations)
        }
    }

    /// The one-vertex graph carrying an HNN-presentation: one edge loop
    /// named after the stable letter, with `alpha = g` and `omega = h`.
    pub fn from_hnn(pres: &HnnPresentation) -> Self {
        let al = pres.alphabet();
        GraphOfGroups {
            vertex_names: vec!["v".to_string()],
            alphabets: vec![Arc::clone(al)],
            orbits: vec![EdgeOrbit {
                name: pres.stable().to_string(),
                inverse_name: format!("{}^-1", pres.stable()),
                from: 0,
                to: 0,
                alpha_image: pres.domain_gen().clone(),
                omega_image: pres.range_gen().clone(),
            }],
        }
    }

    /// Two vertex groups glued along a cyclic subgroup:
    /// `< left * right | left_image = right_image >`.
    pub fn amalgam(
        params: FingerprintParams,
        left: (&str, &[&str]),
        right: (&str, &[&str]),
        edge: &str,
        left_image: &str,
        right_image: &str,
    ) -> Result<Self, Vec<GraphViolation>> {
        let raw = RawGraph {
            vertices: vec![
                (left.0.to_string(), left.1.iter().map(|s| s.to_string()).collect()),
                (
                    right.0.to_string(),
                    right.1.iter().map(|s| s.to_string()).collect(),
                ),
            ],
            edges: vec![RawEdge {
                name: edge.to_string(),
                inverse_name: None,
                from: left.0.to_string(),
                to: right.0.to_string(),
                alpha_image: left_image.to_string(),
                omega_image: right_image.to_string(),
            }],
        };
        GraphOfGroups::from_raw(&raw, params)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn find_vertex(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_alphabet(&self, v: usize) -> &Arc<GeneratorAlphabet> {
        &self.alphabets[v]
    }

    pub fn edge_count(&self) -> usize {
        self.orbits.len()
    }

    /// The unreversed edge of orbit `i`.
    pub fn edge(&self, i: usize) -> EdgeRef {
        EdgeRef {
            orbit: i,
            reversed: false,
        }
    }

    /// Looks a directed edge up by either of its two names.
    pub fn find_edge(&self, name: &str) -> Option<EdgeRef> {
        for (i, o) in self.orbits.iter().enumerate() {
            if o.name == name {
                return Some(EdgeRef {
                    orbit: i,
                    reversed: false,
                });
            }
            if o.inverse_name == name {
                return Some(EdgeRef {
                    orbit: i,
                    reversed: true,
                });
            }
        }
        None
    }

    pub fn edge_name(&self, e: EdgeRef) -> &str {
        let o = &self.orbits[e.orbit];
        if e.reversed {
            &o.inverse_name
        } else {
            &o.name
        }
    }

    /// Vertex the directed edge leaves.
    pub fn source(&self, e: EdgeRef) -> usize {
        let o = &self.orbits[e.orbit];
        if e.reversed {
            o.to
        } else {
            o.from
        }
    }

    /// Vertex the directed edge enters.
    pub fn target(&self, e: EdgeRef) -> usize {
        self.source(e.reverse())
    }

    /// Image of the edge group at the source vertex.
    pub fn source_image(&self, e: EdgeRef) -> &ReducedWord {
        let o = &self.orbits[e.orbit];
        if e.reversed {
            &o.omega_image
        } else {
            &o.alpha_image
        }
    }

    /// Image of the edge group at the target vertex.
    pub fn target_image(&self, e: EdgeRef) -> &ReducedWord {
        self.source_image(e.reverse())
    }
}

/// Raw item of a cycle-type word, before validation.
#[derive(Clone, Debug)]
pub enum CycleItem {
    Segment(Arc<CompositionSystem>),
    Edge(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycleViolation {
    #[error("unknown base vertex `{0}`")]
    UnknownBase(String),
    #[error("item {position}: unknown edge `{name}`")]
    UnknownEdge { position: usize, name: String },
    #[error(
        "item {position}: edge `{name}` departs `{expected}` but the path stands at `{found}`"
    )]
    PathBreak {
        position: usize,
        name: String,
        expected: String,
        found: String,
    },
    #[error("item {position}: segment is over the wrong vertex group (expected `{expected}`)")]
    SegmentAlphabet { position: usize, expected: String },
    #[error("path ends at `{found}`, not at the base vertex `{expected}`")]
    NotClosed { expected: String, found: String },
}

/// A validated cycle-type word: a closed edge path from a base vertex with
/// a compressed segment standing at every intermediate vertex.
#[derive(Clone, Debug)]
pub struct CycleTypeWord {
    base: usize,
    head: Arc<CompositionSystem>,
    steps: Vec<(EdgeRef, Arc<CompositionSystem>)>,
}

impl CycleTypeWord {
    /// Checks that the edges form a closed path at `base` and every segment
    /// lives at the vertex where the path stands. Consecutive segments
    /// merge; missing ones default to the empty word.
    pub fn validate(
        graph: &GraphOfGroups,
        base: &str,
        items: &[CycleItem],
    ) -> Result<Self, Vec<CycleViolation>> {
        let mut violations = Vec::new();
        let Some(base_idx) = graph.find_vertex(base) else {
            return Err(vec![CycleViolation::UnknownBase(base.to_string())]);
        };
        let mut at = base_idx;
        let mut head = Arc::new(CompositionSystem::empty(graph.vertex_alphabet(base_idx)));
        let mut steps: Vec<(EdgeRef, Arc<CompositionSystem>)> = Vec::new();
        for (position, item) in items.iter().enumerate() {
            match item {
                CycleItem::Edge(name) => {
                    let Some(e) = graph.find_edge(name) else {
                        violations.push(CycleViolation::UnknownEdge {
                            position,
                            name: name.clone(),
                        });
                        // validation cannot continue past a lost position
                        return Err(violations);
                    };
                    if graph.source(e) != at {
                        violations.push(CycleViolation::PathBreak {
                            position,
                            name: name.clone(),
                            expected: graph.vertex_name(graph.source(e)).to_string(),
                            found: graph.vertex_name(at).to_string(),
                        });
                        return Err(violations);
                    }
                    at = graph.target(e);
                    steps.push((
                        e,
                        Arc::new(CompositionSystem::empty(graph.vertex_alphabet(at))),
                    ));
                }
                CycleItem::Segment(g) => {
                    if !g.alphabet().compatible(graph.vertex_alphabet(at)) {
                        violations.push(CycleViolation::SegmentAlphabet {
                            position,
                            expected: graph.vertex_name(at).to_string(),
                        });
                        continue;
                    }
                    let slot = match steps.last_mut() {
                        Some((_, s)) => s,
                        None => &mut head,
                    };
                    if slot.length().is_zero() {
                        *slot = Arc::clone(g);
                    } else {
                        *slot = Arc::new(slot.concat(g));
                    }
                }
            }
        }
        if at != base_idx {
            violations.push(CycleViolation::NotClosed {
                expected: base.to_string(),
                found: graph.vertex_name(at).to_string(),
            });
        }
        if violations.is_empty() {
            Ok(CycleTypeWord {
                base: base_idx,
                head,
                steps,
            })
        } else {
            Err(violations)
        }
    }

    /// Reuses an HNN Britton sequence as a cycle word on [`GraphOfGroups::from_hnn`].
    pub fn from_britton(graph: &GraphOfGroups, seq: &BrittonSequence) -> Self {
        assert_eq!(graph.vertex_count(), 1, "expected a one-vertex graph");
        assert_eq!(graph.edge_count(), 1, "expected a single edge orbit");
        let steps = (0..seq.stable_count())
            .map(|i| {
                let e = EdgeRef {
                    orbit: 0,
                    reversed: seq.sign(i) == Sign::Neg,
                };
                (e, Arc::new(seq.segment(i + 1).clone()))
            })
            .collect();
        CycleTypeWord {
            base: 0,
            head: Arc::new(seq.segment(0).clone()),
            steps,
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// The segment before the first edge.
    pub fn head(&self) -> &Arc<CompositionSystem> {
        &self.head
    }

    pub fn edge_count(&self) -> usize {
        self.steps.len()
    }

    pub fn step(&self, i: usize) -> (EdgeRef, &Arc<CompositionSystem>) {
        let (e, seg) = &self.steps[i];
        (*e, seg)
    }

    /// Edge count plus total grammar size, the reduction's bookkeeping
    /// measure.
    pub fn size_measure(&self) -> usize {
        self.head.size()
            + self
                .steps
                .iter()
                .map(|(_, s)| 1 + s.size())
                .sum::<usize>()
    }
}

/// One applied rewrite in the fundamental group.
#[derive(Clone, Debug)]
pub struct GraphReductionStep {
    /// Index into the edge path of the first edge of the cancelled pair.
    pub at: usize,
    pub exponent: BigInt,
    pub size_before: usize,
    pub size_after: usize,
}

/// Decides whether the cycle word is the identity of the fundamental group.
pub fn fundamental_word_problem(
    graph: &GraphOfGroups,
    word: &CycleTypeWord,
    cfg: &SolverConfig,
) -> bool {
    fundamental_word_problem_traced(graph, word, cfg).0
}

/// As [`fundamental_word_problem`], also returning the rewrite trace.
pub fn fundamental_word_problem_traced(
    graph: &GraphOfGroups,
    word: &CycleTypeWord,
    cfg: &SolverConfig,
) -> (bool, Vec<GraphReductionStep>) {
    let mut cur = word.clone();
    let mut trace = Vec::new();
    while let Some((at, exponent)) = find_graph_pin(graph, &cur, cfg) {
        let size_before = cur.size_measure();
        cur = apply_graph_pin(graph, &cur, at, &exponent, cfg);
        trace.push(GraphReductionStep {
            at,
            exponent,
            size_before,
            size_after: cur.size_measure(),
        });
    }
    let identity = if cur.steps.is_empty() {
        compressed_word_problem(&cur.head)
    } else {
        false
    };
    (identity, trace)
}

/// Position `at` such that edge `at + 1` reverses edge `at` and the segment
/// between them is a power of the target image of edge `at`.
fn find_graph_pin(
    graph: &GraphOfGroups,
    word: &CycleTypeWord,
    cfg: &SolverConfig,
) -> Option<(usize, BigInt)> {
    let n = word.steps.len();
    if n < 2 {
        return None;
    }
    let scan: Box<dyn Iterator<Item = usize>> = match cfg.pin_order {
        crate::PinOrder::Leftmost => Box::new(0..n - 1),
        crate::PinOrder::Rightmost => Box::new((0..n - 1).rev()),
    };
    for at in scan {
        let (e, middle) = &word.steps[at];
        if word.steps[at + 1].0 != e.reverse() {
            continue;
        }
        let base = graph.target_image(*e);
        match compressed_power(base.as_letters(), middle, cfg) {
            Ok(PowerAnswer::Found { exponent, .. }) => return Some((at, exponent)),
            Ok(PowerAnswer::NoSolution) => {}
            Err(e) => unreachable!("validated segments live at the right vertices: {e}"),
        }
    }
    None
}

/// Rewrites `e (omega_e^l) e^-1` into `alpha_e^l` and merges the three
/// segments around the removed pair.
fn apply_graph_pin(
    graph: &GraphOfGroups,
    word: &CycleTypeWord,
    at: usize,
    exponent: &BigInt,
    cfg: &SolverConfig,
) -> CycleTypeWord {
    let (e, middle) = &word.steps[at];
    let source = graph.source(*e);
    let image = graph.source_image(*e);
    let replacement = build_image_power(
        graph.vertex_alphabet(source),
        image,
        middle,
        exponent,
        cfg.replacement,
    );
    let before = match at.checked_sub(1) {
        Some(prev) => &word.steps[prev].1,
        None => &word.head,
    };
    let merged = Arc::new(
        before
            .concat(&replacement)
            .concat(&word.steps[at + 1].1),
    );
    let mut next = word.clone();
    match at.checked_sub(1) {
        Some(prev) => next.steps[prev].1 = merged,
        None => next.head = merged,
    }
    next.steps.drain(at..=at + 1);
    next
}
