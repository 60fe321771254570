//! Slow, obviously-correct backends used to cross-check the compressed
//! solvers. Everything here works on explicit letter sequences; no grammar
//! or fingerprint machinery is involved, so a disagreement with the fast
//! path points at the fast path.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::alphabet::{invert_word, Letter, Word};
use crate::free_group::ReducedWord;
use crate::grammar::TooLong;
use crate::graph::{CycleTypeWord, GraphOfGroups};
use crate::hnn::{BrittonSequence, HnnPresentation, Sign};

/// Free reduction by a linear stack scan.
pub fn reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn is_identity(w: &[Letter]) -> bool {
    reduce(w).is_empty()
}

fn power_word(base: &[Letter], z: &BigInt) -> Word {
    let n = z
        .magnitude()
        .to_usize()
        .expect("explicit powers stay small");
    let copy: Word = if z.sign() == num_bigint::Sign::Minus {
        invert_word(base)
    } else {
        base.to_vec()
    };
    let mut out = Word::with_capacity(copy.len() * n);
    for _ in 0..n {
        out.extend_from_slice(&copy);
    }
    reduce(&out)
}

/// Finds `z` with `base^z = target` by multiplying the base out one copy at
/// a time. Powers of a nontrivial reduced word strictly grow in length from
/// the first power on, so each direction stops as soon as the accumulated
/// power is longer than the target.
pub fn power_of(target: &[Letter], base: &[Letter]) -> Option<BigInt> {
    let t = reduce(target);
    if t.is_empty() {
        return Some(BigInt::zero());
    }
    let b = reduce(base);
    if b.is_empty() {
        return None;
    }
    for (direction, copy) in [(1, b.clone()), (-1, invert_word(&b))] {
        let mut acc: Word = Vec::new();
        let mut k = 0i64;
        loop {
            acc.extend_from_slice(&copy);
            acc = reduce(&acc);
            k += 1;
            if acc == t {
                return Some(BigInt::from(direction * k));
            }
            if acc.len() > t.len() {
                break;
            }
        }
    }
    None
}

/// Britton reduction over explicit words. The input is
/// `head t^{s_1} u_1 t^{s_2} u_2 …` with `tail[i] = (s_{i+1}, u_{i+1})`;
/// `g` and `h` generate the associated subgroups (`t^-1 g t = h`).
pub fn britton_identity(
    g: &[Letter],
    h: &[Letter],
    head: &[Letter],
    tail: &[(Sign, Word)],
) -> bool {
    let g = reduce(g);
    let h = reduce(h);
    let mut head = reduce(head);
    let mut tail: Vec<(Sign, Word)> =
        tail.iter().map(|(s, u)| (*s, reduce(u))).collect();
    loop {
        let mut pin = None;
        for i in 0..tail.len().saturating_sub(1) {
            let (pinned, image) = match (tail[i].0, tail[i + 1].0) {
                (Sign::Neg, Sign::Pos) => (&g, &h),
                (Sign::Pos, Sign::Neg) => (&h, &g),
                _ => continue,
            };
            if let Some(exponent) = power_of(&tail[i].1, pinned) {
                pin = Some((i, power_word(image, &exponent)));
                break;
            }
        }
        let Some((i, replacement)) = pin else { break };
        let mut merged = Vec::new();
        merged.extend_from_slice(if i == 0 { &head } else { &tail[i - 1].1 });
        merged.extend_from_slice(&replacement);
        merged.extend_from_slice(&tail[i + 1].1);
        let merged = reduce(&merged);
        tail.drain(i..=i + 1);
        if i == 0 {
            head = merged;
        } else {
            tail[i - 1].1 = merged;
        }
    }
    tail.is_empty() && head.is_empty()
}

/// Edge data for [`graph_cycle_identity`]: the images of the edge group
/// generator at the two ends.
#[derive(Clone, Debug)]
pub struct ExplicitEdge {
    pub alpha_image: Word,
    pub omega_image: Word,
}

fn source_image(orbits: &[ExplicitEdge], (idx, rev): (usize, bool)) -> &Word {
    if rev {
        &orbits[idx].omega_image
    } else {
        &orbits[idx].alpha_image
    }
}

/// Generalized Britton reduction of an explicit cycle-type word
/// `head (e_1, u_1) (e_2, u_2) …`, with edges given as
/// `(orbit index, reversed)`. Vertex words never mix across vertices:
/// segments merge only when the edges between them cancel, and cancelling
/// edges land back at the same vertex.
pub fn graph_cycle_identity(
    orbits: &[ExplicitEdge],
    head: &[Letter],
    steps: &[((usize, bool), Word)],
) -> bool {
    let mut head = reduce(head);
    let mut steps: Vec<((usize, bool), Word)> =
        steps.iter().map(|(e, u)| (*e, reduce(u))).collect();
    loop {
        let mut pin = None;
        for i in 0..steps.len().saturating_sub(1) {
            let (idx, rev) = steps[i].0;
            if steps[i + 1].0 != (idx, !rev) {
                continue;
            }
            let target = source_image(orbits, (idx, !rev));
            if let Some(exponent) = power_of(&steps[i].1, target) {
                let source = source_image(orbits, (idx, rev));
                pin = Some((i, power_word(source, &exponent)));
                break;
            }
        }
        let Some((i, replacement)) = pin else { break };
        let mut merged = Vec::new();
        merged.extend_from_slice(if i == 0 { &head } else { &steps[i - 1].1 });
        merged.extend_from_slice(&replacement);
        merged.extend_from_slice(&steps[i + 1].1);
        let merged = reduce(&merged);
        steps.drain(i..=i + 1);
        if i == 0 {
            head = merged;
        } else {
            steps[i - 1].1 = merged;
        }
    }
    steps.is_empty() && head.is_empty()
}

/// Runs the explicit Britton backend on a semi-compressed sequence,
/// expanding every segment first. Errors if a segment is longer than
/// `limit`.
pub fn britton_identity_for(
    pres: &HnnPresentation,
    seq: &BrittonSequence,
    limit: u64,
) -> Result<bool, TooLong> {
    let (head, tail) = seq.expand_segments(limit)?;
    Ok(britton_identity(
        pres.domain_gen().as_letters(),
        pres.range_gen().as_letters(),
        &head,
        &tail,
    ))
}

/// Runs the explicit backend on a graph-of-groups cycle word.
pub fn graph_identity_for(
    graph: &GraphOfGroups,
    word: &CycleTypeWord,
    limit: u64,
) -> Result<bool, TooLong> {
    let image = |r: &ReducedWord| r.as_letters().to_vec();
    let orbits: Vec<ExplicitEdge> = (0..graph.edge_count())
        .map(|i| {
            let e = graph.edge(i);
            ExplicitEdge {
                alpha_image: image(graph.source_image(e)),
                omega_image: image(graph.target_image(e)),
            }
        })
        .collect();
    let head = word.head().expand(limit)?;
    let mut steps = Vec::with_capacity(word.edge_count());
    for i in 0..word.edge_count() {
        let (e, seg) = word.step(i);
        steps.push(((e.orbit(), e.is_reversed()), seg.expand(limit)?));
    }
    Ok(graph_cycle_identity(&orbits, &head, &steps))
}
