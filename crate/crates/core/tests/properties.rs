//! Property-based invariants of the compressed-word machinery. Word-level
//! properties use shrinkable proptest inputs; grammar- and solver-level
//! properties draw whole instances from a seeded generator.

mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use britton_core::fingerprint::PieceFp;
use britton_core::{
    compressed_free_reduce, compressed_word_problem, cyclic_decompose, free_reduce,
    invert_word, is_cyclically_reduced, normalize_cuts, reduced_length, reference,
    semi_compressed_word_problem, word_problem, BrittonSequence, CompositionSystem,
    FingerprintParams, Letter, MixedItem, PinOrder, ReducedWord, SolverConfig, Word, WordParser,
};

use common::{alphabet, random_hnn_instance, random_system_with_cuts, rng};

fn letter_strategy() -> impl Strategy<Value = Letter> {
    (0..2usize, any::<bool>()).prop_map(|(i, inv)| {
        if inv {
            Letter::negative(i)
        } else {
            Letter::positive(i)
        }
    })
}

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter_strategy(), 0..max)
}

proptest! {
    #[test]
    fn free_reduction_is_idempotent_and_kills_inverses(w in word_strategy(200)) {
        let once = free_reduce(&w);
        let twice = free_reduce(once.as_letters());
        prop_assert_eq!(once.as_letters(), twice.as_letters());
        prop_assert!(ReducedWord::try_new(once.clone().into_word()).is_ok());

        let mut ww = w.clone();
        ww.extend(invert_word(&w));
        prop_assert!(word_problem(&ww));
        prop_assert_eq!(free_reduce(&ww).len(), 0);
    }

    #[test]
    fn fingerprints_compose_like_concatenation(u in word_strategy(120), v in word_strategy(120)) {
        let params = FingerprintParams::from_seed(42);
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        let spliced = PieceFp::concat(
            PieceFp::of_word(params, &u),
            PieceFp::of_word(params, &v),
        );
        prop_assert_eq!(spliced, PieceFp::of_word(params, &uv));
    }

    #[test]
    fn cyclic_decomposition_round_trips(w in word_strategy(200)) {
        let nf = free_reduce(&w);
        let parts = cyclic_decompose(&nf);
        prop_assert!(is_cyclically_reduced(&parts.core));

        let mut rebuilt: Word = parts.conjugator.as_letters().to_vec();
        rebuilt.extend_from_slice(parts.core.as_letters());
        rebuilt.extend(invert_word(parts.conjugator.as_letters()));
        let rebuilt = free_reduce(&rebuilt);
        prop_assert_eq!(rebuilt.as_letters(), nf.as_letters());
    }

    #[test]
    fn powers_of_a_cyclic_core_never_cancel(w in word_strategy(40), z in -100i64..=100) {
        let nf = free_reduce(&w);
        let core = cyclic_decompose(&nf).core;
        prop_assume!(!core.is_empty());

        let ab = alphabet(&["a", "b"], 7);
        let sys = CompositionSystem::from_word(&ab, core.as_letters());
        let powered = sys.power(&BigInt::from(z));
        let expect = z.unsigned_abs() as usize * core.len();
        prop_assert_eq!(reduced_length(&powered), expect.into());
    }

    #[test]
    fn exponent_size_is_bounded_by_the_power_length(w in word_strategy(40), z in -200i64..=200) {
        // Cyclic subgroups of free groups are undistorted with constant 1:
        // |z| never exceeds |nf(w^z)| when w is not the identity.
        let nf = free_reduce(&w);
        prop_assume!(!nf.is_empty());
        let ab = alphabet(&["a", "b"], 8);
        let sys = CompositionSystem::from_word(&ab, nf.as_letters()).power(&BigInt::from(z));
        let len = reduced_length(&sys);
        prop_assert!(len >= z.unsigned_abs().into());
    }

    #[test]
    fn parsing_a_formatted_word_reproduces_it(w in word_strategy(150)) {
        let ab = alphabet(&["a", "b"], 9);
        let parsed = WordParser::new(&ab).parse_segment(&ab.format_word(&w)).unwrap();
        prop_assert_eq!(parsed.expand(1_000).unwrap(), w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grammar_transforms_preserve_the_value(seed in any::<u64>()) {
        let ab = alphabet(&["a", "b"], 10);
        let mut r = rng(seed);
        let sys = random_system_with_cuts(&mut r, &ab, 25, 100_000);
        let value = sys.expand(100_000).unwrap();

        prop_assert_eq!(sys.length(), &value.len().into());

        let slp = normalize_cuts(&sys);
        prop_assert!(slp.is_cut_free());
        prop_assert_eq!(slp.expand(100_000).unwrap(), value.clone());

        let cnf = slp.to_chomsky_normal_form();
        prop_assert!(cnf.is_chomsky());
        prop_assert_eq!(cnf.expand(100_000).unwrap(), value.clone());

        let inv = sys.invert();
        prop_assert_eq!(inv.expand(100_000).unwrap(), invert_word(&value));
        prop_assert!(inv.invert().equal(&sys, 200_000));

        prop_assert!(sys.self_check().is_empty());
    }

    #[test]
    fn small_powers_match_explicit_repetition(seed in any::<u64>(), z in -6i64..=6) {
        let ab = alphabet(&["a", "b"], 11);
        let mut r = rng(seed);
        let sys = random_system_with_cuts(&mut r, &ab, 12, 500);
        let value = sys.expand(500).unwrap();

        let mut explicit = Word::new();
        let copy = if z < 0 { invert_word(&value) } else { value };
        for _ in 0..z.unsigned_abs() {
            explicit.extend_from_slice(&copy);
        }
        let powered = sys.power(&BigInt::from(z));
        prop_assert_eq!(powered.expand(10_000).unwrap(), explicit);
    }

    #[test]
    fn compressed_reduction_matches_the_explicit_one(seed in any::<u64>()) {
        let ab = alphabet(&["a", "b"], 12);
        let mut r = rng(seed);
        let sys = random_system_with_cuts(&mut r, &ab, 25, 50_000);
        let value = sys.expand(50_000).unwrap();
        let reduced = compressed_free_reduce(&sys);
        prop_assert_eq!(
            reduced.expand(50_000).unwrap(),
            reference::reduce(&value)
        );
        prop_assert_eq!(compressed_word_problem(&sys), reference::is_identity(&value));
    }

    #[test]
    fn grammar_equality_agrees_with_expansion(seed in any::<u64>()) {
        let ab = alphabet(&["a", "b"], 13);
        let mut r = rng(seed);
        let u = random_system_with_cuts(&mut r, &ab, 15, 10_000);
        let v = random_system_with_cuts(&mut r, &ab, 15, 10_000);
        prop_assert!(u.equal(&u, 20_000));
        prop_assert_eq!(
            u.equal(&v, 20_000),
            u.expand(10_000).unwrap() == v.expand(10_000).unwrap()
        );
    }

    #[test]
    fn pin_order_does_not_change_the_verdict(seed in any::<u64>()) {
        let ab = alphabet(&["a", "b"], 14);
        let mut r = rng(seed);
        let inst = random_hnn_instance(&mut r, &ab, 6);
        let seq = BrittonSequence::from_items(&ab, &inst.items);
        let leftmost = SolverConfig::default();
        let rightmost = SolverConfig {
            pin_order: PinOrder::Rightmost,
            ..SolverConfig::default()
        };
        prop_assert_eq!(
            semi_compressed_word_problem(&inst.pres, &seq, &leftmost),
            semi_compressed_word_problem(&inst.pres, &seq, &rightmost)
        );
    }

    #[test]
    fn stable_free_words_reduce_to_the_free_group_case(seed in any::<u64>()) {
        let ab = alphabet(&["a", "b"], 15);
        let mut r = rng(seed);
        let inst = random_hnn_instance(&mut r, &ab, 0);
        let segment: Vec<Arc<CompositionSystem>> = inst
            .items
            .iter()
            .map(|it| match it {
                MixedItem::Segment(s) => Arc::clone(s),
                MixedItem::Stable(_) => unreachable!("no stables requested"),
            })
            .collect();
        let seq = BrittonSequence::from_items(&ab, &inst.items);
        let via_hnn = semi_compressed_word_problem(&inst.pres, &seq, &SolverConfig::default());
        let product = segment
            .iter()
            .fold(CompositionSystem::empty(&ab), |acc, s| acc.concat(s));
        prop_assert_eq!(via_hnn, compressed_word_problem(&product));
    }

    #[test]
    fn britton_sizes_stay_linear_in_the_stable_count(seed in any::<u64>()) {
        let ab = alphabet(&["a", "b"], 16);
        let mut r = rng(seed);
        let inst = random_hnn_instance(&mut r, &ab, 6);
        let seq = BrittonSequence::from_items(&ab, &inst.items);
        let s0 = seq.size_measure();
        let n = seq.stable_count();
        let (_, trace) =
            britton_core::semi_compressed_word_problem_traced(&inst.pres, &seq, &SolverConfig::default());
        for step in trace {
            prop_assert!(step.size_after <= s0 + 64 * n);
        }
    }
}
