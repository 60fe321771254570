//! Ascending HNN-extensions `< F, t | t^-1 a t = phi(a) for all a >` where
//! `phi` is an injective endomorphism of the free group `F` given by its
//! images on generators.
//!
//! Here conjugation acts on all of `F`, not on a cyclic subgroup, and the
//! word problem admits a fully compressed solution: write the input as
//! `w_0 t^(e_1) w_1 ... t^(e_n) w_n` and let `s_i = e_1 + ... + e_i`. Since
//! `t^-1 v t = phi(v)`, the word equals
//! `t^(s_n) * phi^(d_0)(w_0) phi^(d_1)(w_1) ... phi^(d_n)(w_n)` where
//! `d_i = M - s_i` for any `M >= max s_i`; with `phi` injective this is the
//! identity iff `s_n = 0` and the product of lifted segments is trivial in
//! `F`. Lifting is a homomorphic image, so it maps straight-line programs
//! to straight-line programs: each letter at level `d` becomes a variable
//! deriving its `d`-fold image, and those variables are shared across the
//! whole product.
//!
//! Injectivity of `phi` is the caller's promise; it is not checked here.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use num_traits::Zero;

use crate::alphabet::{invert_word, GeneratorAlphabet, Letter, Word};
use crate::cuts::normalize_cuts;
use crate::free_group::compressed_word_problem;
use crate::grammar::{Atom, CompositionSystem, GrammarBuilder, VarId};
use crate::hnn::{BrittonSequence, MixedItem, Sign};

/// `< base, t | t^-1 a t = images[a] >`.
#[derive(Clone, Debug)]
pub struct AscendingPresentation {
    alphabet: Arc<GeneratorAlphabet>,
    stable: String,
    images: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AscendingError {
    #[error("need one image per generator: got {got}, alphabet has {want}")]
    ImageCount { got: usize, want: usize },
    #[error("image of generator {0} uses letters outside the alphabet")]
    ImageAlphabet(usize),
    #[error("stable letter `{0}` collides with a base generator")]
    StableCollides(String),
    #[error("invalid stable letter name `{0}`")]
    BadStableName(String),
}

impl AscendingPresentation {
    pub fn new(
        alphabet: &Arc<GeneratorAlphabet>,
        stable: impl Into<String>,
        images: Vec<Word>,
    ) -> Result<Self, AscendingError> {
        let stable = stable.into();
        if stable.is_empty() || stable.contains(['^', '(', ')']) || stable.contains(char::is_whitespace) {
            return Err(AscendingError::BadStableName(stable));
        }
        if alphabet.index_of(&stable).is_some() {
            return Err(AscendingError::StableCollides(stable));
        }
        if images.len() != alphabet.rank() {
            return Err(AscendingError::ImageCount {
                got: images.len(),
                want: alphabet.rank(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if img.iter().any(|&l| !alphabet.contains(l)) {
                return Err(AscendingError::ImageAlphabet(i));
            }
        }
        Ok(AscendingPresentation {
            alphabet: Arc::clone(alphabet),
            stable,
            images,
        })
    }

    /// BS(1,2) as an ascending extension: `phi(a) = a a`.
    pub fn bs12(params: crate::FingerprintParams) -> Self {
        let alphabet = GeneratorAlphabet::new(["a"], params).expect("valid alphabet");
        let a = Letter::positive(0);
        AscendingPresentation::new(&alphabet, "t", vec![vec![a, a]]).expect("valid presentation")
    }

    pub fn alphabet(&self) -> &Arc<GeneratorAlphabet> {
        &self.alphabet
    }

    pub fn stable(&self) -> &str {
        &self.stable
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }
}

/// Variable deriving `phi^level(letter)`, memoized across the product.
fn lift_letter(
    b: &mut GrammarBuilder,
    pres: &AscendingPresentation,
    cache: &mut HashMap<(Letter, u64), VarId>,
    letter: Letter,
    level: u64,
) -> VarId {
    if let Some(&v) = cache.get(&(letter, level)) {
        return v;
    }
    let v = if level == 0 {
        b.fresh(vec![Atom::Letter(letter)])
    } else {
        let img: Word = if letter.is_inverse() {
            invert_word(&pres.images[letter.index()])
        } else {
            pres.images[letter.index()].clone()
        };
        let atoms = img
            .into_iter()
            .map(|l| Atom::Var(lift_letter(b, pres, cache, l, level - 1)))
            .collect();
        b.fresh(atoms)
    };
    cache.insert((letter, level), v);
    v
}

/// Copies a cut-free grammar with every letter replaced by its
/// `level`-fold image variable; returns the copied start.
fn lift_system(
    b: &mut GrammarBuilder,
    pres: &AscendingPresentation,
    cache: &mut HashMap<(Letter, u64), VarId>,
    sys: &CompositionSystem,
    level: u64,
) -> VarId {
    let mut map: Vec<VarId> = Vec::with_capacity(sys.var_count());
    for v in sys.vars() {
        let atoms = sys
            .atoms_of(v)
            .iter()
            .map(|a| match a {
                Atom::Letter(l) => Atom::Var(lift_letter(b, pres, cache, *l, level)),
                Atom::Var(w) => Atom::Var(map[w.0 as usize]),
                Atom::Cut { .. } => unreachable!("lifted grammars are cut-free"),
            })
            .collect();
        map.push(b.fresh(atoms));
    }
    map[sys.start().0 as usize]
}

/// Decides whether the mixed word represents the identity. Sound only when
/// the endomorphism is injective.
pub fn ascending_word_problem(pres: &AscendingPresentation, items: &[MixedItem]) -> bool {
    let seq = BrittonSequence::from_items(&pres.alphabet, items);
    let n = seq.stable_count();
    let mut sums = Vec::with_capacity(n + 1);
    let mut s = 0i64;
    sums.push(s);
    for i in 0..n {
        s += match seq.sign(i) {
            Sign::Pos => 1,
            Sign::Neg => -1,
        };
        sums.push(s);
    }
    if s != 0 {
        return false;
    }
    let peak = *sums.iter().max().expect("nonempty");

    let mut b = GrammarBuilder::new(&pres.alphabet);
    let mut cache: HashMap<(Letter, u64), VarId> = HashMap::new();
    let mut product: Vec<Atom> = Vec::with_capacity(n + 1);
    for (i, &sum) in sums.iter().enumerate() {
        let segment = seq.segment(i);
        if segment.length().is_zero() {
            continue;
        }
        let cut_free = normalize_cuts(segment);
        let level = (peak - sum) as u64;
        product.push(Atom::Var(lift_system(
            &mut b, pres, &mut cache, &cut_free, level,
        )));
    }
    let start = b.fresh(product);
    compressed_word_problem(&b.build(start))
}
