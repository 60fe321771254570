//! HNN-extensions of free groups with cyclic associated subgroups:
//! `< F, t | t^-1 g t = h >` for fixed nontrivial `g, h` in the free group
//! `F` (or both trivial, which degenerates to `F * <t>`).
//!
//! Words are handled semi-compressed: the number of stable letters is
//! explicit, the segments between them are grammar-compressed. The word
//! problem is decided by Britton reduction. A subword `t^-1 u t` with
//! `u = g^l` rewrites to `h^l`, and `t u t^-1` with `u = h^l` rewrites to
//! `g^l`; a word equals the identity iff these rewrites end in a word with
//! no stable letters whose single segment reduces to the empty word.
//!
//! Each rewrite removes two stable letters, so a sequence with `m` of them
//! reduces in at most `m/2` steps, each step costing one compressed power
//! query per inspected position plus a constant number of grammar
//! operations. Replacement powers are built either by binary powering or by
//! per-letter substitution into the pinned segment ([`Replacement`]).

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::alphabet::{invert_word, GeneratorAlphabet, Letter, Word};
use crate::free_group::{compressed_word_problem, free_reduce, ReducedWord};
use crate::grammar::{Atom, CompositionSystem, GrammarBuilder, GrammarView, TooLong, VarId};
use crate::power::{compressed_power, PowerAnswer};
use crate::{PinOrder, Replacement, SolverConfig};

/// Exponent sign of one stable letter occurrence.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// `< base, t | t^-1 g t = h >` with `g, h` freely reduced.
#[derive(Clone, Debug)]
pub struct HnnPresentation {
    alphabet: Arc<GeneratorAlphabet>,
    stable: String,
    domain_gen: ReducedWord,
    range_gen: ReducedWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnnError {
    /// One associated element is trivial and the other is not; the two
    /// cyclic subgroups would have different orders and conjugation by the
    /// stable letter could not be an isomorphism between them.
    #[error("associated elements must be both trivial or both nontrivial")]
    OrderMismatch,
    #[error("stable letter `{0}` collides with a base generator")]
    StableCollides(String),
    #[error("invalid stable letter name `{0}`")]
    BadStableName(String),
}

impl HnnPresentation {
    pub fn new(
        alphabet: &Arc<GeneratorAlphabet>,
        stable: impl Into<String>,
        g: &[Letter],
        h: &[Letter],
    ) -> Result<Self, HnnError> {
        let stable = stable.into();
        if stable.is_empty() || stable.contains(['^', '(', ')']) || stable.contains(char::is_whitespace) {
            return Err(HnnError::BadStableName(stable));
        }
        if alphabet.index_of(&stable).is_some() {
            return Err(HnnError::StableCollides(stable));
        }
        let domain_gen = free_reduce(g);
        let range_gen = free_reduce(h);
        if domain_gen.is_empty() != range_gen.is_empty() {
            return Err(HnnError::OrderMismatch);
        }
        Ok(HnnPresentation {
            alphabet: Arc::clone(alphabet),
            stable,
            domain_gen,
            range_gen,
        })
    }

    /// `< a, t | t^-1 a t = a a >`, the Baumslag-Solitar group BS(1,2).
    pub fn bs12(params: crate::FingerprintParams) -> Self {
        let alphabet = GeneratorAlphabet::new(["a"], params).expect("valid alphabet");
        let a = Letter::positive(0);
        HnnPresentation::new(&alphabet, "t", &[a], &[a, a]).expect("valid presentation")
    }

    pub fn alphabet(&self) -> &Arc<GeneratorAlphabet> {
        &self.alphabet
    }

    pub fn stable(&self) -> &str {
        &self.stable
    }

    /// `g`, conjugated into the range side by the stable letter.
    pub fn domain_gen(&self) -> &ReducedWord {
        &self.domain_gen
    }

    /// `h = t^-1 g t`.
    pub fn range_gen(&self) -> &ReducedWord {
        &self.range_gen
    }
}

/// One token of a word over the base generators and the stable letter.
#[derive(Clone, Debug)]
pub enum MixedItem {
    Stable(Sign),
    Segment(Arc<CompositionSystem>),
}

pub type MixedWord = Vec<MixedItem>;

pub fn invert_mixed(items: &[MixedItem]) -> MixedWord {
    items
        .iter()
        .rev()
        .map(|it| match it {
            MixedItem::Stable(s) => MixedItem::Stable(s.flip()),
            MixedItem::Segment(g) => MixedItem::Segment(Arc::new(g.invert())),
        })
        .collect()
}

/// `H_0 t^(e_1) H_1 ... t^(e_m) H_m` with compressed segments `H_i` and
/// explicit signs `e_i`. Always has one more segment than signs.
#[derive(Clone, Debug)]
pub struct BrittonSequence {
    segments: Vec<Arc<CompositionSystem>>,
    signs: Vec<Sign>,
}

impl BrittonSequence {
    pub fn from_items(alphabet: &Arc<GeneratorAlphabet>, items: &[MixedItem]) -> Self {
        let mut segments = vec![Arc::new(CompositionSystem::empty(alphabet))];
        let mut signs = Vec::new();
        for it in items {
            match it {
                MixedItem::Stable(s) => {
                    signs.push(*s);
                    segments.push(Arc::new(CompositionSystem::empty(alphabet)));
                }
                MixedItem::Segment(g) => {
                    assert!(
                        g.alphabet().compatible(alphabet),
                        "segment over a different alphabet"
                    );
                    let last = segments.last_mut().expect("nonempty by construction");
                    if last.length().is_zero() {
                        *last = Arc::clone(g);
                    } else {
                        *last = Arc::new(last.concat(g));
                    }
                }
            }
        }
        BrittonSequence { segments, signs }
    }

    pub fn stable_count(&self) -> usize {
        self.signs.len()
    }

    pub fn segment(&self, i: usize) -> &CompositionSystem {
        &self.segments[i]
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }

    /// Stable-letter count plus total grammar size. The quantity the
    /// reduction keeps small: it grows by at most a constant per step.
    pub fn size_measure(&self) -> usize {
        self.signs.len() + self.segments.iter().map(|s| s.size()).sum::<usize>()
    }

    /// Explicit form for cross-checks: the head segment and one
    /// `(sign, word)` pair per stable letter.
    #[allow(clippy::type_complexity)]
    pub fn expand_segments(&self, limit: u64) -> Result<(Word, Vec<(Sign, Word)>), TooLong> {
        let head = self.segments[0].expand(limit)?;
        let mut tail = Vec::with_capacity(self.signs.len());
        for (i, &sign) in self.signs.iter().enumerate() {
            tail.push((sign, self.segments[i + 1].expand(limit)?));
        }
        Ok((head, tail))
    }
}

/// Which rewrite fires at a pin.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PinCase {
    /// `t^-1 g^l t -> h^l`.
    DomainPin,
    /// `t h^l t^-1 -> g^l`.
    RangePin,
}

/// A reducible position: stable letters `at` and `at + 1` pinch the segment
/// between them, which equals the associated generator raised to
/// `exponent`.
#[derive(Clone, Debug)]
pub struct Pin {
    pub at: usize,
    pub case: PinCase,
    pub exponent: BigInt,
}

/// Finds a reducible position, scanning in the configured order.
pub fn find_pin(
    pres: &HnnPresentation,
    seq: &BrittonSequence,
    cfg: &SolverConfig,
) -> Option<Pin> {
    let m = seq.stable_count();
    if m < 2 {
        return None;
    }
    let scan: Box<dyn Iterator<Item = usize>> = match cfg.pin_order {
        PinOrder::Leftmost => Box::new(0..m - 1),
        PinOrder::Rightmost => Box::new((0..m - 1).rev()),
    };
    for at in scan {
        let (case, base) = match (seq.sign(at), seq.sign(at + 1)) {
            (Sign::Neg, Sign::Pos) => (PinCase::DomainPin, pres.domain_gen()),
            (Sign::Pos, Sign::Neg) => (PinCase::RangePin, pres.range_gen()),
            _ => continue,
        };
        let middle = seq.segment(at + 1);
        match compressed_power(base.as_letters(), middle, cfg) {
            Ok(PowerAnswer::Found { exponent, .. }) => {
                return Some(Pin { at, case, exponent })
            }
            Ok(PowerAnswer::NoSolution) => {}
            Err(e) => unreachable!("segments share the presentation alphabet: {e}"),
        }
    }
    None
}

/// Applies one rewrite: the pinched segment becomes the image generator
/// raised to the pin's exponent, and the three segments around the removed
/// stable letters merge into one.
pub fn apply_pin_reduction(
    pres: &HnnPresentation,
    seq: &BrittonSequence,
    pin: &Pin,
    cfg: &SolverConfig,
) -> BrittonSequence {
    let at = pin.at;
    let image = match pin.case {
        PinCase::DomainPin => pres.range_gen(),
        PinCase::RangePin => pres.domain_gen(),
    };
    let replacement = build_image_power(
        &pres.alphabet,
        image,
        seq.segment(at + 1),
        &pin.exponent,
        cfg.replacement,
    );
    let merged = seq
        .segment(at)
        .concat(&replacement)
        .concat(seq.segment(at + 2));
    let mut segments = seq.segments.clone();
    let mut signs = seq.signs.clone();
    segments.splice(at..=at + 2, [Arc::new(merged)]);
    signs.splice(at..=at + 1, []);
    BrittonSequence { segments, signs }
}

/// Grammar deriving `image^exponent`, built per the chosen strategy.
/// `pinned` is the segment the exponent was read off from; the
/// substitution strategy reuses its structure.
pub(crate) fn build_image_power(
    alphabet: &Arc<GeneratorAlphabet>,
    image: &ReducedWord,
    pinned: &CompositionSystem,
    exponent: &BigInt,
    strategy: Replacement,
) -> CompositionSystem {
    if exponent.is_zero() || image.is_empty() {
        return CompositionSystem::empty(alphabet);
    }
    match strategy {
        Replacement::Pow => {
            CompositionSystem::from_word(alphabet, image.as_letters()).power(exponent)
        }
        Replacement::Eta => substituted_power(alphabet, image, pinned, exponent),
    }
}

/// `image^exponent` without binary powering: every letter of the pinned
/// grammar maps to the (inverted, if the exponent is negative) image word.
/// That is a uniform length-`|image|` substitution, so cut boundaries scale
/// by `|image|`, and the lifted start derives a word of length
/// `|val(pinned)| * |image|` that begins with `image^|exponent|`; a final
/// cut trims it to exactly that.
fn substituted_power(
    alphabet: &Arc<GeneratorAlphabet>,
    image: &ReducedWord,
    pinned: &CompositionSystem,
    exponent: &BigInt,
) -> CompositionSystem {
    let img: Word = if exponent.is_negative() {
        invert_word(image.as_letters())
    } else {
        image.as_letters().to_vec()
    };
    let ilen = BigUint::from(img.len());
    let mut b = GrammarBuilder::new(alphabet);
    let img_var = b.fresh(img.into_iter().map(Atom::Letter).collect());
    let mut map: Vec<VarId> = Vec::with_capacity(pinned.var_count());
    for v in pinned.vars() {
        let atoms = pinned
            .atoms_of(v)
            .iter()
            .map(|a| match a {
                Atom::Letter(_) => Atom::Var(img_var),
                Atom::Var(w) => Atom::Var(map[w.0 as usize]),
                Atom::Cut { var, lo, hi } => Atom::Cut {
                    var: map[var.0 as usize],
                    lo: (lo - 1u32) * &ilen + 1u32,
                    hi: hi * &ilen,
                },
            })
            .collect();
        map.push(b.fresh(atoms));
    }
    let lifted = map[pinned.start().0 as usize];
    let want = exponent.magnitude() * &ilen;
    debug_assert!(&want <= b.len_of(lifted), "exponent exceeds the pinned segment");
    let start = b.fresh(vec![Atom::Cut {
        var: lifted,
        lo: BigUint::one(),
        hi: want,
    }]);
    b.build(start)
}

/// One applied rewrite, for traces and size accounting.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub at: usize,
    pub case: PinCase,
    pub exponent: BigInt,
    pub size_before: usize,
    pub size_after: usize,
}

/// Decides whether the sequence represents the identity.
pub fn semi_compressed_word_problem(
    pres: &HnnPresentation,
    seq: &BrittonSequence,
    cfg: &SolverConfig,
) -> bool {
    semi_compressed_word_problem_traced(pres, seq, cfg).0
}

/// As [`semi_compressed_word_problem`], also returning the rewrite trace.
pub fn semi_compressed_word_problem_traced(
    pres: &HnnPresentation,
    seq: &BrittonSequence,
    cfg: &SolverConfig,
) -> (bool, Vec<ReductionStep>) {
    let mut cur = seq.clone();
    let mut trace = Vec::new();
    while let Some(pin) = find_pin(pres, &cur, cfg) {
        let size_before = cur.size_measure();
        let next = apply_pin_reduction(pres, &cur, &pin, cfg);
        trace.push(ReductionStep {
            at: pin.at,
            case: pin.case,
            exponent: pin.exponent,
            size_before,
            size_after: next.size_measure(),
        });
        cur = next;
    }
    let identity = if cur.stable_count() > 0 {
        // Britton's lemma: a pinch-free word with stable letters is not 1.
        false
    } else {
        compressed_word_problem(cur.segment(0))
    };
    (identity, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingerprint::FingerprintParams;

    fn params() -> FingerprintParams {
        FingerprintParams::from_seed(17)
    }

    fn seg(pres: &HnnPresentation, text: &str) -> MixedItem {
        let w = pres.alphabet().parse_plain_word(text).unwrap();
        MixedItem::Segment(Arc::new(CompositionSystem::from_word(pres.alphabet(), &w)))
    }

    fn t(sign: Sign) -> MixedItem {
        MixedItem::Stable(sign)
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn presentation_construction_checks_orders() {
        let al = GeneratorAlphabet::new(["a", "b"], params()).unwrap();
        let a = Letter::positive(0);
        assert!(HnnPresentation::new(&al, "t", &[a], &[]).is_err());
        assert!(HnnPresentation::new(&al, "t", &[], &[a]).is_err());
        assert!(HnnPresentation::new(&al, "t", &[], &[]).is_ok());
        assert!(HnnPresentation::new(&al, "a", &[a], &[a]).is_err());
        assert!(HnnPresentation::new(&al, "t t", &[a], &[a]).is_err());
        // g and h are reduced on the way in
        let gg = [a, a.inverse(), a];
        let p = HnnPresentation::new(&al, "t", &gg, &[a, a]).unwrap();
        assert_eq!(p.domain_gen().len(), 1);
    }

    #[test]
    fn britton_sequences_merge_adjacent_segments() {
        let p = HnnPresentation::bs12(params());
        let items = vec![
            seg(&p, "a"),
            seg(&p, "a a"),
            t(Sign::Pos),
            t(Sign::Neg),
            seg(&p, "a"),
        ];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        assert_eq!(s.stable_count(), 2);
        assert_eq!(s.segment(0).length(), &BigUint::from(3u32));
        assert!(s.segment(1).length().is_zero());
        assert_eq!(s.segment(2).length(), &BigUint::one());
    }

    #[test]
    fn single_conjugation_rewrites_to_the_image() {
        // t^-1 a^3 t = a^6 in BS(1,2)
        let p = HnnPresentation::bs12(params());
        let items = vec![t(Sign::Neg), seg(&p, "a a a"), t(Sign::Pos)];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        let pin = find_pin(&p, &s, &cfg()).expect("pin exists");
        assert_eq!(pin.at, 0);
        assert_eq!(pin.case, PinCase::DomainPin);
        assert_eq!(pin.exponent, BigInt::from(3));
        let reduced = apply_pin_reduction(&p, &s, &pin, &cfg());
        assert_eq!(reduced.stable_count(), 0);
        assert_eq!(reduced.segment(0).length(), &BigUint::from(6u32));
    }

    #[test]
    fn range_pins_rewrite_with_the_inverse_rule() {
        // t a^4 t^-1 = a^2
        let p = HnnPresentation::bs12(params());
        let items = vec![t(Sign::Pos), seg(&p, "a a a a"), t(Sign::Neg)];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        let pin = find_pin(&p, &s, &cfg()).expect("pin exists");
        assert_eq!(pin.case, PinCase::RangePin);
        assert_eq!(pin.exponent, BigInt::from(2));
        let reduced = apply_pin_reduction(&p, &s, &pin, &cfg());
        assert_eq!(reduced.segment(0).length(), &BigUint::from(2u32));
    }

    #[test]
    fn odd_powers_do_not_pin_on_the_range_side() {
        // t a^3 t^-1 is Britton-reduced: a^3 is not a power of a^2.
        let p = HnnPresentation::bs12(params());
        let items = vec![t(Sign::Pos), seg(&p, "a a a"), t(Sign::Neg)];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        assert!(find_pin(&p, &s, &cfg()).is_none());
        assert!(!semi_compressed_word_problem(&p, &s, &cfg()));
    }

    #[test]
    fn zero_exponent_pins_collapse_to_nothing() {
        // t^-1 t: the empty segment is g^0.
        let p = HnnPresentation::bs12(params());
        let items = vec![t(Sign::Neg), t(Sign::Pos)];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        assert!(semi_compressed_word_problem(&p, &s, &cfg()));
        let items = vec![t(Sign::Pos), t(Sign::Neg)];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        assert!(semi_compressed_word_problem(&p, &s, &cfg()));
    }

    #[test]
    fn commutation_through_towers_of_t() {
        // t^-n a t^n (a^(2^n))^-1 = 1 for n = 20.
        let p = HnnPresentation::bs12(params());
        let n = 20usize;
        let a = CompositionSystem::from_word(p.alphabet(), &[Letter::positive(0)]);
        let tower = a.power(&BigInt::from(-(1i64 << n)));
        let mut items = Vec::new();
        items.extend(std::iter::repeat_with(|| t(Sign::Neg)).take(n));
        items.push(seg(&p, "a"));
        items.extend(std::iter::repeat_with(|| t(Sign::Pos)).take(n));
        items.push(MixedItem::Segment(Arc::new(tower)));
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        let (identity, trace) = semi_compressed_word_problem_traced(&p, &s, &cfg());
        assert!(identity);
        assert_eq!(trace.len(), n);
        // exponents double at each step: 1, 2, 4, ...
        assert_eq!(trace[0].exponent, BigInt::one());
        assert_eq!(trace[n - 1].exponent, BigInt::from(1i64 << (n - 1)));
    }

    #[test]
    fn non_identity_with_mismatched_tail_is_rejected() {
        let p = HnnPresentation::bs12(params());
        let n = 12usize;
        let a = CompositionSystem::from_word(p.alphabet(), &[Letter::positive(0)]);
        let wrong = a.power(&BigInt::from(-((1i64 << n) + 1)));
        let mut items = Vec::new();
        items.extend(std::iter::repeat_with(|| t(Sign::Neg)).take(n));
        items.push(seg(&p, "a"));
        items.extend(std::iter::repeat_with(|| t(Sign::Pos)).take(n));
        items.push(MixedItem::Segment(Arc::new(wrong)));
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        assert!(!semi_compressed_word_problem(&p, &s, &cfg()));
    }

    #[test]
    fn trivial_associated_subgroups_make_a_free_product() {
        // < a, b, t | t^-1 t = 1 >: t commutes with nothing, no relation;
        // a word is 1 iff erasing nothing it is graphically trivial after
        // free reduction in each factor.
        let al = GeneratorAlphabet::new(["a", "b"], params()).unwrap();
        let p = HnnPresentation::new(&al, "t", &[], &[]).unwrap();
        let mk = |texts: Vec<MixedItem>| BrittonSequence::from_items(&al, &texts);
        let w = |text: &str| {
            let w = al.parse_plain_word(text).unwrap();
            MixedItem::Segment(Arc::new(CompositionSystem::from_word(&al, &w)))
        };
        // t^-1 (a a^-1) t -> pin with exponent 0 -> identity
        let s = mk(vec![t(Sign::Neg), w("a a^-1"), t(Sign::Pos)]);
        assert!(semi_compressed_word_problem(&p, &s, &cfg()));
        // t^-1 a t is reduced: a != 1
        let s = mk(vec![t(Sign::Neg), w("a"), t(Sign::Pos)]);
        assert!(!semi_compressed_word_problem(&p, &s, &cfg()));
    }

    #[test]
    fn substitution_replacement_agrees_with_powering() {
        let p = HnnPresentation::bs12(params());
        let n = 10usize;
        let a = CompositionSystem::from_word(p.alphabet(), &[Letter::positive(0)]);
        let tower = a.power(&BigInt::from(-(1i64 << n)));
        let mut items = Vec::new();
        items.extend(std::iter::repeat_with(|| t(Sign::Neg)).take(n));
        items.push(seg(&p, "a"));
        items.extend(std::iter::repeat_with(|| t(Sign::Pos)).take(n));
        items.push(MixedItem::Segment(Arc::new(tower)));
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        let mut c = cfg();
        c.replacement = Replacement::Eta;
        assert!(semi_compressed_word_problem(&p, &s, &c));
        c.replacement = Replacement::Pow;
        assert!(semi_compressed_word_problem(&p, &s, &c));
    }

    #[test]
    fn substituted_powers_derive_the_right_word() {
        let al = GeneratorAlphabet::new(["a", "b"], params()).unwrap();
        let image = free_reduce(&al.parse_plain_word("a b").unwrap());
        let pinned =
            CompositionSystem::from_word(&al, &al.parse_plain_word("a a a a a").unwrap());
        for z in [3i64, -2, 5, 1] {
            let got = substituted_power(&al, &image, &pinned, &BigInt::from(z));
            let want = CompositionSystem::from_word(&al, image.as_letters())
                .power(&BigInt::from(z));
            assert!(got.equal(&want, 1 << 20), "z = {z}");
        }
    }

    #[test]
    fn substituted_powers_handle_pinned_grammars_with_cuts() {
        let al = GeneratorAlphabet::new(["a"], params()).unwrap();
        let a = CompositionSystem::from_word(&al, &[Letter::positive(0)]);
        let pow = a.power(&BigInt::from(9));
        let mut b = GrammarBuilder::new(&al);
        let v = b.import(&pow);
        let cut = b.fresh(vec![Atom::Cut {
            var: v,
            lo: BigUint::from(2u32),
            hi: BigUint::from(8u32),
        }]);
        let pinned = b.build(cut); // a^7
        let image = free_reduce(&al.parse_plain_word("a a").unwrap());
        let got = substituted_power(&al, &image, &pinned, &BigInt::from(7));
        assert_eq!(got.length(), &BigUint::from(14u32));
        let want = CompositionSystem::from_word(&al, image.as_letters())
            .power(&BigInt::from(7));
        assert!(got.equal(&want, 1 << 20));
    }

    #[test]
    fn pin_order_does_not_change_answers() {
        let p = HnnPresentation::bs12(params());
        // (t^-1 a^2 t) (t^-1 a^4 t) (a^12)^-1 = a^4 a^8 a^-12 = 1
        let items = vec![
            t(Sign::Neg),
            seg(&p, "a a"),
            t(Sign::Pos),
            t(Sign::Neg),
            seg(&p, "a a a a"),
            t(Sign::Pos),
            seg(&p, "a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1 a^-1"),
        ];
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        let mut c = cfg();
        c.pin_order = PinOrder::Leftmost;
        assert!(semi_compressed_word_problem(&p, &s, &c));
        c.pin_order = PinOrder::Rightmost;
        assert!(semi_compressed_word_problem(&p, &s, &c));
    }

    #[test]
    fn inverting_mixed_words_yields_identities() {
        let p = HnnPresentation::bs12(params());
        let items = vec![
            seg(&p, "a"),
            t(Sign::Neg),
            seg(&p, "a a a"),
            t(Sign::Pos),
            seg(&p, "a^-1 a"),
            t(Sign::Pos),
        ];
        let mut both = items.clone();
        both.extend(invert_mixed(&items));
        let s = BrittonSequence::from_items(p.alphabet(), &both);
        assert!(semi_compressed_word_problem(&p, &s, &cfg()));
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        assert!(!semi_compressed_word_problem(&p, &s, &cfg()));
    }

    #[test]
    fn size_growth_per_step_is_bounded() {
        let p = HnnPresentation::bs12(params());
        let n = 24usize;
        let a = CompositionSystem::from_word(p.alphabet(), &[Letter::positive(0)]);
        let tower = a.power(&BigInt::from(-(1i64 << n)));
        let mut items = Vec::new();
        items.extend(std::iter::repeat_with(|| t(Sign::Neg)).take(n));
        items.push(seg(&p, "a"));
        items.extend(std::iter::repeat_with(|| t(Sign::Pos)).take(n));
        items.push(MixedItem::Segment(Arc::new(tower)));
        let s = BrittonSequence::from_items(p.alphabet(), &items);
        let initial = s.size_measure();
        let (identity, trace) = semi_compressed_word_problem_traced(&p, &s, &cfg());
        assert!(identity);
        let worst = trace.iter().map(|st| st.size_after).max().unwrap();
        assert!(
            worst <= initial + 64 * trace.len(),
            "size {worst} after {} steps from {initial}",
            trace.len()
        );
    }
}
