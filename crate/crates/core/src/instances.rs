//! Seeded random-instance generation.
//!
//! The bench command and the integration suites share these generators so
//! that the compressed solvers and the explicit reference backends are
//! exercised on the same distributions. Every function is deterministic in
//! the caller-supplied RNG.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;

use crate::alphabet::{invert_word, GeneratorAlphabet, Letter, Word};
use crate::grammar::{Atom, CompositionSystem, GrammarBuilder, VarId};
use crate::hnn::{HnnPresentation, MixedItem, Sign};

pub fn random_letter<R: Rng>(r: &mut R, rank: usize) -> Letter {
    let i = r.gen_range(0..rank);
    if r.gen_bool(0.5) {
        Letter::positive(i)
    } else {
        Letter::negative(i)
    }
}

pub fn random_word<R: Rng>(r: &mut R, rank: usize, len: usize) -> Word {
    (0..len).map(|_| random_letter(r, rank)).collect()
}

/// Random reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng>(r: &mut R, rank: usize, len: usize) -> Word {
    let mut out: Word = Vec::with_capacity(len);
    while out.len() < len {
        let l = random_letter(r, rank);
        if out.last() == Some(&l.inverse()) {
            continue;
        }
        out.push(l);
    }
    out
}

/// Random cyclically reduced word of exactly `len > 0` letters.
pub fn random_cyclic_word<R: Rng>(r: &mut R, rank: usize, len: usize) -> Word {
    assert!(len > 0);
    loop {
        let w = random_reduced_word(r, rank, len);
        if len == 1 || w[0] != w[len - 1].inverse() {
            return w;
        }
    }
}

/// Random cut-free composition system of at most `rules` rules whose value
/// stays at or under `max_len` letters. Rules either introduce a letter or
/// concatenate two earlier rules; the last rule is the start.
pub fn random_slp<R: Rng>(
    r: &mut R,
    alphabet: &Arc<GeneratorAlphabet>,
    rules: usize,
    max_len: u64,
) -> CompositionSystem {
    let mut b = GrammarBuilder::new(alphabet);
    let mut vars: Vec<(VarId, u64)> = Vec::new();
    for _ in 0..rules.max(1) {
        let concat = !vars.is_empty() && r.gen_bool(0.7);
        if concat {
            let (u, lu) = vars[r.gen_range(0..vars.len())];
            let (v, lv) = vars[r.gen_range(0..vars.len())];
            if lu + lv <= max_len {
                vars.push((b.fresh(vec![Atom::Var(u), Atom::Var(v)]), lu + lv));
                continue;
            }
        }
        let l = random_letter(r, alphabet.rank());
        vars.push((b.fresh(vec![Atom::Letter(l)]), 1));
    }
    let (start, _) = *vars.last().unwrap();
    b.build(start)
}

/// Like [`random_slp`] but sprinkles cut atoms among the rules.
pub fn random_system_with_cuts<R: Rng>(
    r: &mut R,
    alphabet: &Arc<GeneratorAlphabet>,
    rules: usize,
    max_len: u64,
) -> CompositionSystem {
    let mut b = GrammarBuilder::new(alphabet);
    let mut vars: Vec<(VarId, u64)> = Vec::new();
    for _ in 0..rules.max(1) {
        if !vars.is_empty() && r.gen_bool(0.2) {
            let (v, lv) = vars[r.gen_range(0..vars.len())];
            if lv >= 1 {
                let lo = r.gen_range(1..=lv);
                let hi = r.gen_range(lo..=lv);
                vars.push((
                    b.fresh(vec![Atom::Cut {
                        var: v,
                        lo: BigUint::from(lo),
                        hi: BigUint::from(hi),
                    }]),
                    hi - lo + 1,
                ));
                continue;
            }
        }
        if !vars.is_empty() && r.gen_bool(0.6) {
            let (u, lu) = vars[r.gen_range(0..vars.len())];
            let (v, lv) = vars[r.gen_range(0..vars.len())];
            if lu + lv <= max_len {
                vars.push((b.fresh(vec![Atom::Var(u), Atom::Var(v)]), lu + lv));
                continue;
            }
        }
        let l = random_letter(r, alphabet.rank());
        vars.push((b.fresh(vec![Atom::Letter(l)]), 1));
    }
    let (start, _) = *vars.last().unwrap();
    b.build(start)
}

fn push_word(items: &mut Vec<MixedItem>, alphabet: &Arc<GeneratorAlphabet>, w: &[Letter]) {
    if !w.is_empty() {
        items.push(MixedItem::Segment(Arc::new(CompositionSystem::from_word(
            alphabet, w,
        ))));
    }
}

fn repeat_word(w: &[Letter], n: usize) -> Word {
    let mut out = Word::with_capacity(w.len() * n);
    for _ in 0..n {
        out.extend_from_slice(w);
    }
    out
}

/// A random presentation together with a mixed word over it.
pub struct RandomHnn {
    pub pres: HnnPresentation,
    pub items: Vec<MixedItem>,
}

/// Random HNN instance over the given base: associated-subgroup generators
/// of length at most 4 (both trivial one time in ten), and a mixed word with
/// at most `max_stables` stable letters. Half the words are products of
/// conjugated copies of the defining relation, so identity cases are common;
/// a quarter append a near-miss block on top of such a product.
pub fn random_hnn_instance<R: Rng>(
    r: &mut R,
    alphabet: &Arc<GeneratorAlphabet>,
    max_stables: usize,
) -> RandomHnn {
    let rank = alphabet.rank();
    let (g, h) = if r.gen_bool(0.1) {
        (Word::new(), Word::new())
    } else {
        let lg = r.gen_range(1..=4);
        let lh = r.gen_range(1..=4);
        (
            random_reduced_word(r, rank, lg),
            random_reduced_word(r, rank, lh),
        )
    };
    let pres = HnnPresentation::new(alphabet, "t", &g, &h).unwrap();

    let mut items = Vec::new();
    if max_stables >= 2 && r.gen_bool(0.5) {
        // Product of conjugated relations t^-1 g^e t h^-e (or the reverse
        // form), each sandwiched in a random base conjugator.
        let blocks = r.gen_range(1..=max_stables / 2);
        for _ in 0..blocks {
            let e = r.gen_range(1..=3);
            let lc = r.gen_range(0..=3);
            let conj = random_word(r, rank, lc);
            push_word(&mut items, alphabet, &conj);
            if r.gen_bool(0.5) {
                items.push(MixedItem::Stable(Sign::Neg));
                push_word(&mut items, alphabet, &repeat_word(&g, e));
                items.push(MixedItem::Stable(Sign::Pos));
                push_word(&mut items, alphabet, &invert_word(&repeat_word(&h, e)));
            } else {
                items.push(MixedItem::Stable(Sign::Pos));
                push_word(&mut items, alphabet, &repeat_word(&h, e));
                items.push(MixedItem::Stable(Sign::Neg));
                push_word(&mut items, alphabet, &invert_word(&repeat_word(&g, e)));
            }
            push_word(&mut items, alphabet, &invert_word(&conj));
        }
        if r.gen_bool(0.25) {
            // Near miss: the trailing base word no longer matches.
            push_word(&mut items, alphabet, &random_word(r, rank, 1));
        }
    } else {
        // Unstructured alternation of short segments and stable letters.
        let stables = r.gen_range(0..=max_stables);
        let len = r.gen_range(0..=4);
        push_word(&mut items, alphabet, &random_word(r, rank, len));
        for _ in 0..stables {
            items.push(MixedItem::Stable(if r.gen_bool(0.5) {
                Sign::Pos
            } else {
                Sign::Neg
            }));
            let len = r.gen_range(0..=4);
            push_word(&mut items, alphabet, &random_word(r, rank, len));
        }
    }
    RandomHnn { pres, items }
}

/// Random mixed word over a rank-1 base whose stable letters are `t^{±1}`
/// with exponent sum zero (or forced nonzero), for ascending cross-checks.
pub fn random_balanced_items<R: Rng>(
    r: &mut R,
    alphabet: &Arc<GeneratorAlphabet>,
    pairs: usize,
    zero_sum: bool,
) -> Vec<MixedItem> {
    let mut signs: Vec<Sign> = Vec::new();
    if zero_sum {
        for _ in 0..pairs {
            signs.push(Sign::Pos);
            signs.push(Sign::Neg);
        }
        // Fisher-Yates keeps the multiset, so the sum stays zero.
        for i in (1..signs.len()).rev() {
            signs.swap(i, r.gen_range(0..=i));
        }
    } else {
        loop {
            signs.clear();
            let mut sum = 0i64;
            for _ in 0..2 * pairs.max(1) {
                if r.gen_bool(0.5) {
                    signs.push(Sign::Pos);
                    sum += 1;
                } else {
                    signs.push(Sign::Neg);
                    sum -= 1;
                }
            }
            if sum != 0 {
                break;
            }
        }
    }
    let mut items = Vec::new();
    let len = r.gen_range(0..=6);
    push_word(&mut items, alphabet, &random_word(r, 1, len));
    for s in signs {
        items.push(MixedItem::Stable(s));
        let len = r.gen_range(0..=6);
        push_word(&mut items, alphabet, &random_word(r, 1, len));
    }
    items
}

/// Two structurally different grammars for the same explicit word: a flat
/// one-rule grammar and a random chunked concatenation tree.
pub fn same_word_two_ways<R: Rng>(
    r: &mut R,
    alphabet: &Arc<GeneratorAlphabet>,
    w: &[Letter],
) -> (CompositionSystem, CompositionSystem) {
    let flat = CompositionSystem::from_word(alphabet, w);
    if w.is_empty() {
        return (flat.clone(), flat);
    }
    let mut parts: Vec<CompositionSystem> = Vec::new();
    let mut rest = w;
    while !rest.is_empty() {
        let take = r.gen_range(1..=rest.len().min(64));
        parts.push(CompositionSystem::from_word(alphabet, &rest[..take]));
        rest = &rest[take..];
    }
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.concat(p);
    }
    (flat, acc)
}
