//! Free reduction and the free-group word problem, for explicit words and
//! for grammar-compressed words.
//!
//! The compressed reduction rebuilds a grammar bottom-up in Chomsky normal
//! form. For a rule `A -> B C` whose children already derive reduced words,
//! the reduced value of `A` is `nf(B)` minus its last `k` letters followed
//! by `nf(C)` minus its first `k` letters, where `k` is the length of
//! cancellation at the seam. That length is found by binary search over
//! fingerprint comparisons of `nf(B)` read backwards-and-inverted against
//! prefixes of `nf(C)`, so no value is ever expanded.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alphabet::{Letter, Word};
use crate::cuts::normalize_cuts;
use crate::grammar::{
    emit_range, range_fp, Atom, CompositionSystem, Dir, GrammarBuilder, GrammarView, VarId,
};

/// A freely reduced word: no letter stands next to its own inverse.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReducedWord(Word);

/// Error for [`ReducedWord::try_new`]: the positions of an adjacent
/// cancelling pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("letters at positions {0} and {1} cancel")]
pub struct NotReduced(pub usize, pub usize);

impl ReducedWord {
    pub fn empty() -> Self {
        ReducedWord(Vec::new())
    }

    /// Checks reducedness instead of reducing; use [`free_reduce`] for that.
    pub fn try_new(w: Word) -> Result<Self, NotReduced> {
        for i in 1..w.len() {
            if w[i - 1] == w[i].inverse() {
                return Err(NotReduced(i - 1, i));
            }
        }
        Ok(ReducedWord(w))
    }

    pub fn as_letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord(crate::alphabet::invert_word(&self.0))
    }
}

/// Freely reduces an explicit word with one stack pass.
pub fn free_reduce(w: &[Letter]) -> ReducedWord {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    ReducedWord(out)
}

/// Does the explicit word represent the identity?
pub fn word_problem(w: &[Letter]) -> bool {
    free_reduce(w).is_empty()
}

/// `w = conjugator * core * conjugator^-1` with `core` cyclically reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicDecomposition {
    pub conjugator: ReducedWord,
    pub core: ReducedWord,
}

pub fn is_cyclically_reduced(w: &ReducedWord) -> bool {
    let s = w.as_letters();
    match (s.first(), s.last()) {
        (Some(a), Some(b)) => *a != b.inverse(),
        _ => true,
    }
}

/// Peels matching conjugating letters off both ends.
pub fn cyclic_decompose(w: &ReducedWord) -> CyclicDecomposition {
    let s = w.as_letters();
    let mut lo = 0;
    let mut hi = s.len();
    while hi - lo >= 2 && s[lo] == s[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    CyclicDecomposition {
        conjugator: ReducedWord(s[..lo].to_vec()),
        core: ReducedWord(s[lo..hi].to_vec()),
    }
}

/// Both children at most this long: find the seam cancellation by direct
/// expansion instead of fingerprint search.
const SEAM_SCAN_LIMIT: u32 = 64;

/// Rebuilds `cs` so that every variable derives a freely reduced word; the
/// start then derives `nf(val(cs))`. The result may contain cuts.
pub(crate) fn reduced_system(cs: &CompositionSystem) -> CompositionSystem {
    let cnf = normalize_cuts(cs).to_chomsky_normal_form();
    let mut b = GrammarBuilder::new(cs.alphabet());
    let mut map: Vec<VarId> = Vec::with_capacity(cnf.var_count());
    for v in cnf.vars() {
        let id = match cnf.atoms_of(v) {
            [] => b.fresh(Vec::new()),
            [Atom::Letter(l)] => b.fresh(vec![Atom::Letter(*l)]),
            [Atom::Var(y), Atom::Var(z)] => {
                reduced_concat(&mut b, map[y.0 as usize], map[z.0 as usize])
            }
            other => unreachable!("not Chomsky normal form: {other:?}"),
        };
        map.push(id);
    }
    b.build(map[cnf.start().0 as usize])
}

/// New variable deriving `nf(val(u) val(v))`, both arguments already
/// deriving reduced words.
fn reduced_concat(b: &mut GrammarBuilder, u: VarId, v: VarId) -> VarId {
    let lu = b.len_of(u).clone();
    let lv = b.len_of(v).clone();
    if lu.is_zero() {
        return v;
    }
    if lv.is_zero() {
        return u;
    }
    let k = seam_cancellation(b, u, v);
    let mut atoms = Vec::with_capacity(2);
    if k < lu {
        atoms.push(Atom::Cut {
            var: u,
            lo: BigUint::one(),
            hi: &lu - &k,
        });
    }
    if k < lv {
        atoms.push(Atom::Cut {
            var: v,
            lo: &k + 1u32,
            hi: lv,
        });
    }
    b.fresh(atoms)
}

/// Length of the cancelling seam between reduced `val(u)` and `val(v)`:
/// the longest common prefix of `val(u)^-1` and `val(v)`.
fn seam_cancellation(b: &GrammarBuilder, u: VarId, v: VarId) -> BigUint {
    let lu = b.len_of(u);
    let lv = b.len_of(v);
    let max = lu.min(lv).clone();
    let small = BigUint::from(SEAM_SCAN_LIMIT);
    if *lu <= small && *lv <= small {
        let one = BigUint::one();
        let mut uw: Word = Vec::new();
        let mut vw: Word = Vec::new();
        emit_range(b, u, &one, lu, &mut uw);
        emit_range(b, v, &one, lv, &mut vw);
        let mut k = 0usize;
        while k < uw.len() && k < vw.len() && uw[uw.len() - 1 - k] == vw[k].inverse() {
            k += 1;
        }
        return BigUint::from(k);
    }
    let one = BigUint::one();
    let matches = |k: &BigUint| -> bool {
        range_fp(b, u, &one, k, Dir::Inv) == range_fp(b, v, &one, k, Dir::Fwd)
    };
    // Because both factors are reduced the match predicate is monotone in k,
    // so two probes settle the common cases and binary search the rest.
    if !matches(&one) {
        return BigUint::zero();
    }
    if matches(&max) {
        return max;
    }
    let mut lo = one.clone();
    let mut hi = &max - 1u32;
    while lo < hi {
        let mid = (&lo + &hi + 1u32) >> 1;
        if matches(&mid) {
            lo = mid;
        } else {
            hi = mid - 1u32;
        }
    }
    lo
}

/// Length of `nf(val(cs))`, computed without producing the public grammar.
pub fn reduced_length(cs: &CompositionSystem) -> BigUint {
    reduced_system(cs).length().clone()
}

/// Cut-free grammar deriving `nf(val(cs))`.
pub fn compressed_free_reduce(cs: &CompositionSystem) -> CompositionSystem {
    normalize_cuts(&reduced_system(cs)).into_system()
}

/// Does the compressed word represent the identity?
pub fn compressed_word_problem(cs: &CompositionSystem) -> bool {
    reduced_length(cs).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::GeneratorAlphabet;
    use crate::fingerprint::FingerprintParams;
    use crate::grammar::Slp;
    use std::sync::Arc;

    fn ab() -> Arc<GeneratorAlphabet> {
        GeneratorAlphabet::new(["a", "b"], FingerprintParams::from_seed(7)).unwrap()
    }

    fn letters(alphabet: &GeneratorAlphabet, text: &str) -> Word {
        alphabet.parse_plain_word(text).unwrap()
    }

    #[test]
    fn explicit_reduction() {
        let al = ab();
        let w = letters(&al, "a b b^-1 a a^-1 a^-1");
        assert!(free_reduce(&w).is_empty());
        let w = letters(&al, "a b b a^-1 a b^-1");
        assert_eq!(free_reduce(&w).as_letters(), &letters(&al, "a b")[..]);
    }

    #[test]
    fn cyclic_decomposition_peels_conjugators() {
        let al = ab();
        let w = free_reduce(&letters(&al, "a b a b^-1 a^-1"));
        let d = cyclic_decompose(&w);
        assert_eq!(d.conjugator.as_letters(), &letters(&al, "a b")[..]);
        assert_eq!(d.core.as_letters(), &letters(&al, "a")[..]);
        assert!(is_cyclically_reduced(&d.core));
        let single = free_reduce(&letters(&al, "a"));
        let d = cyclic_decompose(&single);
        assert!(d.conjugator.is_empty());
        assert_eq!(d.core.len(), 1);
    }

    /// a^(2^10) a^-(2^10) b reduces to b.
    #[test]
    fn compressed_reduction_cancels_towers() {
        let al = ab();
        let a = CompositionSystem::from_word(&al, &letters(&al, "a"));
        let b = CompositionSystem::from_word(&al, &letters(&al, "b"));
        let tower = a.power(&num_bigint::BigInt::from(1u32 << 10));
        let anti = tower.invert();
        let w = tower.concat(&anti).concat(&b);
        let nf = compressed_free_reduce(&w);
        assert_eq!(nf.length(), &BigUint::one());
        assert_eq!(nf.expand(16).unwrap(), letters(&al, "b"));
        assert!(nf.is_cut_free());
    }

    #[test]
    fn compressed_matches_explicit_on_expandable_words() {
        let al = ab();
        let w = letters(&al, "a b a^-1 a b^-1 b^-1 a a a^-1");
        let cs = CompositionSystem::from_word(&al, &w);
        let nf = compressed_free_reduce(&cs);
        assert_eq!(nf.expand(100).unwrap(), free_reduce(&w).into_word());
    }

    #[test]
    fn word_problem_on_compressed_identity() {
        let al = ab();
        let ab_word = CompositionSystem::from_word(&al, &letters(&al, "a b"));
        let pow = ab_word.power(&num_bigint::BigInt::from(1u64 << 33));
        let back = pow.invert();
        assert!(compressed_word_problem(&pow.concat(&back)));
        assert!(!compressed_word_problem(&pow));
    }

    #[test]
    fn reduction_handles_partial_seams() {
        let al = ab();
        // (a b)^8 followed by (b^-1 a^-1)^3 leaves (a b)^5.
        let abw = CompositionSystem::from_word(&al, &letters(&al, "a b"));
        let left = abw.power(&num_bigint::BigInt::from(8));
        let right = abw.power(&num_bigint::BigInt::from(-3));
        let nf = compressed_free_reduce(&left.concat(&right));
        assert_eq!(nf.length(), &BigUint::from(10u32));
        let expect = free_reduce(&[letters(&al, "a b").repeat(5)].concat());
        assert_eq!(nf.expand(100).unwrap(), expect.into_word());
    }

    #[test]
    fn reduction_accepts_grammars_with_cuts() {
        let al = ab();
        let w = CompositionSystem::from_word(&al, &letters(&al, "a b a b a b"));
        let mut b = GrammarBuilder::new(&al);
        let v = b.import(&w);
        // val = (a b a b a b)[2:5] (a b a b a b)[2:5]^-1 reversed by hand:
        // cut then its inverse cut via invert() on the built system.
        let cut = b.fresh(vec![Atom::Cut {
            var: v,
            lo: BigUint::from(2u32),
            hi: BigUint::from(5u32),
        }]);
        let sys = b.build(cut);
        let inv = sys.invert();
        assert!(compressed_word_problem(&sys.concat(&inv)));
        assert!(!compressed_word_problem(&sys));
    }

    #[test]
    fn reduced_system_keeps_every_variable_reduced() {
        let al = ab();
        let w = letters(&al, "b a a^-1 b a b^-1 b^-1 a^-1");
        let cs = CompositionSystem::from_word(&al, &w);
        let nf = reduced_system(&cs);
        for v in nf.vars() {
            let len = nf.length_of(v).clone();
            if len <= BigUint::from(1000u32) {
                let mut out = Vec::new();
                emit_range(&nf, v, &BigUint::one(), &len, &mut out);
                assert!(ReducedWord::try_new(out).is_ok());
            }
        }
    }

    #[test]
    fn seam_search_crosses_the_scan_threshold() {
        let al = ab();
        // u = a^100 b, v = b^-1 a^-99: cancellation 100.
        let a = CompositionSystem::from_word(&al, &letters(&al, "a"));
        let b_sys = CompositionSystem::from_word(&al, &letters(&al, "b"));
        let u = a.power(&num_bigint::BigInt::from(100)).concat(&b_sys);
        let v = b_sys
            .invert()
            .concat(&a.power(&num_bigint::BigInt::from(-99)));
        let nf = compressed_free_reduce(&u.concat(&v));
        assert_eq!(nf.length(), &BigUint::one());
        assert_eq!(nf.expand(4).unwrap(), letters(&al, "a"));
    }

    #[test]
    fn trivial_and_single_letter_inputs() {
        let al = ab();
        let empty = CompositionSystem::empty(&al);
        assert!(compressed_word_problem(&empty));
        let nf = compressed_free_reduce(&empty);
        assert!(nf.length().is_zero());
        let single = CompositionSystem::from_word(&al, &letters(&al, "b^-1"));
        assert_eq!(
            compressed_free_reduce(&single).expand(4).unwrap(),
            letters(&al, "b^-1")
        );
    }

    #[test]
    fn slp_round_trip_through_reduction() {
        let al = ab();
        let w = letters(&al, "a b a b");
        let cs = CompositionSystem::from_word(&al, &w);
        let slp = Slp::try_new(compressed_free_reduce(&cs)).unwrap();
        assert_eq!(slp.expand(100).unwrap(), w);
    }
}
