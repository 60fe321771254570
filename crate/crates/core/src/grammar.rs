//! Straight-line programs and composition systems.
//!
//! A composition system is an acyclic grammar in which every variable
//! produces exactly one word. Right-hand sides are sequences of atoms: a
//! letter, a variable, or a cut `var[lo..=hi]` selecting a substring of the
//! word another variable produces (1-based, with the upper index clamped to
//! the actual length). A grammar without cuts is a straight-line program
//! ([`Slp`]). Doubling a variable at every level produces words of length
//! `2^n` from `n` rules, which is the entire point: all operations here work
//! on the grammar, never on the expanded word.
//!
//! Construction goes through [`GrammarBuilder`], which enforces acyclicity
//! (rules may only reference earlier rules) and computes per-variable
//! metrics eagerly: exact length, forward fingerprint, fingerprint of the
//! inverse word. Systems are immutable afterwards.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::alphabet::{GeneratorAlphabet, Letter, Word};
use crate::fingerprint::{add_mod, mul_mod, PieceFp};

/// Index of a variable within one grammar. Not meaningful across grammars.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarId(pub(crate) u32);

impl VarId {
    fn idx(self) -> usize {
        self.0 as usize
    }
}

/// One right-hand-side entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    Letter(Letter),
    Var(VarId),
    /// The substring `val(var)[lo..=hi]`, 1-based. `hi` is clamped to
    /// `|val(var)|`; if `lo` exceeds the length the value is empty.
    Cut { var: VarId, lo: BigUint, hi: BigUint },
}

#[derive(Clone, Debug)]
struct Rule {
    name: String,
    atoms: Box<[Atom]>,
    /// Prefix sums of atom value lengths: `offsets[k]` is the length of the
    /// word the first `k` atoms produce. Always `atoms.len() + 1` entries.
    offsets: Box<[BigUint]>,
    /// Fingerprint data per atom value, parallel to `atoms`.
    pieces: Box<[PieceFp]>,
}

/// Structural problems a grammar description can have.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("rules form a cycle through `{0}`")]
    Cycle(String),
    #[error("`{0}` is referenced but has no rule")]
    Dangling(String),
    #[error("duplicate rule for `{0}`")]
    DuplicateRule(String),
    #[error("cut on `{var}` has indices {lo}..{hi}; need 1 <= lo <= hi")]
    MalformedCut { var: String, lo: BigUint, hi: BigUint },
    #[error("rule `{rule}` uses `{token}`, which is not in the alphabet")]
    UnknownLetter { rule: String, token: String },
    #[error("start variable `{0}` has no rule")]
    MissingStart(String),
}

/// Expansion refused because the value is longer than the caller allows.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("value has {length} letters, over the expansion limit {limit}")]
pub struct TooLong {
    pub length: BigUint,
    pub limit: u64,
}

/// Exact length and both fingerprints of one variable's value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarMetrics {
    pub length: BigUint,
    pub forward_fp: u64,
    pub inverse_fp: u64,
}

/// Outcome of an equality check, recording how it was decided.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum EqVerdict {
    NotEqual,
    /// Decided by explicit expansion; no randomization involved.
    EqualExact,
    /// Decided by fingerprint comparison; one-sided error bounded by
    /// `len / (2^61 - 1)`.
    EqualFingerprint,
}

impl EqVerdict {
    pub fn holds(self) -> bool {
        !matches!(self, EqVerdict::NotEqual)
    }

    pub fn is_exact(self) -> bool {
        matches!(self, EqVerdict::EqualExact)
    }
}

pub(crate) enum Dir {
    Fwd,
    Inv,
}

/// Read access to rules and metrics, shared by finished systems and the
/// builder (algorithms query partial grammars while extending them).
pub(crate) trait GrammarView {
    fn atoms(&self, v: VarId) -> &[Atom];
    fn offsets(&self, v: VarId) -> &[BigUint];
    fn pieces(&self, v: VarId) -> &[PieceFp];
    fn metric(&self, v: VarId) -> PieceFp;
    fn len_of(&self, v: VarId) -> &BigUint;
}

/// An immutable composition system with eagerly computed metrics.
#[derive(Clone, Debug)]
pub struct CompositionSystem {
    alphabet: Arc<GeneratorAlphabet>,
    rules: Vec<Rule>,
    metrics: Vec<PieceFp>,
    start: VarId,
}

/// A cut-free composition system. Derefs to [`CompositionSystem`].
#[derive(Clone, Debug)]
pub struct Slp(pub(crate) CompositionSystem);

impl Deref for Slp {
    type Target = CompositionSystem;

    fn deref(&self) -> &CompositionSystem {
        &self.0
    }
}

impl From<Slp> for CompositionSystem {
    fn from(s: Slp) -> Self {
        s.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("grammar contains cut atoms")]
pub struct CutsPresent;

impl Slp {
    pub fn try_new(sys: CompositionSystem) -> Result<Self, CutsPresent> {
        if sys.is_cut_free() {
            Ok(Slp(sys))
        } else {
            Err(CutsPresent)
        }
    }

    pub fn into_system(self) -> CompositionSystem {
        self.0
    }

    /// Rewrites into Chomsky normal form: every rule is a single letter or a
    /// pair of variables, except that a grammar producing the empty word
    /// becomes the one-rule grammar with an empty right-hand side. The value
    /// is unchanged; variable names are not preserved.
    pub fn to_chomsky_normal_form(&self) -> Slp {
        let sys = &self.0;
        let mut b = GrammarBuilder::new(&sys.alphabet);
        let mut letter_vars: HashMap<Letter, VarId> = HashMap::new();
        let mut map: Vec<Option<VarId>> = Vec::with_capacity(sys.rules.len());
        for v in 0..sys.rules.len() {
            let v = VarId(v as u32);
            if sys.len_of(v).is_zero() {
                map.push(None);
                continue;
            }
            let mut parts: Vec<VarId> = Vec::new();
            for atom in sys.atoms(v) {
                match atom {
                    Atom::Letter(l) => {
                        let lv = *letter_vars
                            .entry(*l)
                            .or_insert_with(|| b.fresh(vec![Atom::Letter(*l)]));
                        parts.push(lv);
                    }
                    Atom::Var(child) => {
                        if let Some(m) = map[child.idx()] {
                            parts.push(m);
                        }
                    }
                    Atom::Cut { .. } => unreachable!("Slp invariant: no cuts"),
                }
            }
            let mut acc = parts[0];
            for &p in &parts[1..] {
                acc = b.fresh(vec![Atom::Var(acc), Atom::Var(p)]);
            }
            map.push(Some(acc));
        }
        match map[sys.start.idx()] {
            Some(s) => Slp(b.build(s)),
            None => Slp(CompositionSystem::empty(&sys.alphabet)),
        }
    }

    /// True when every rule has the normal-form shape.
    pub fn is_chomsky(&self) -> bool {
        let trivial = self.0.rules.len() == 1 && self.0.rules[0].atoms.is_empty();
        trivial
            || self.0.rules.iter().all(|r| {
                matches!(&*r.atoms, [Atom::Letter(_)] | [Atom::Var(_), Atom::Var(_)])
            })
    }
}

impl CompositionSystem {
    /// The grammar producing the empty word.
    pub fn empty(alphabet: &Arc<GeneratorAlphabet>) -> Self {
        let mut b = GrammarBuilder::new(alphabet);
        let s = b.fresh(Vec::new());
        b.build(s)
    }

    /// A one-rule grammar spelling out `w`.
    pub fn from_word(alphabet: &Arc<GeneratorAlphabet>, w: &[Letter]) -> Self {
        let mut b = GrammarBuilder::new(alphabet);
        let s = b.fresh(w.iter().map(|&l| Atom::Letter(l)).collect());
        b.build(s)
    }

    pub fn alphabet(&self) -> &Arc<GeneratorAlphabet> {
        &self.alphabet
    }

    pub fn start(&self) -> VarId {
        self.start
    }

    pub fn var_count(&self) -> usize {
        self.rules.len()
    }

    /// Variables in rule order; references always point to earlier entries.
    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.rules.len() as u32).map(VarId)
    }

    pub fn name_of(&self, v: VarId) -> &str {
        &self.rules[v.idx()].name
    }

    pub fn find_var(&self, name: &str) -> Option<VarId> {
        self.rules
            .iter()
            .position(|r| r.name == name)
            .map(|i| VarId(i as u32))
    }

    pub fn atoms_of(&self, v: VarId) -> &[Atom] {
        &self.rules[v.idx()].atoms
    }

    /// Grammar size: total number of atoms over all right-hand sides. A cut
    /// counts as one regardless of its indices.
    pub fn size(&self) -> usize {
        self.rules.iter().map(|r| r.atoms.len()).sum()
    }

    pub fn is_cut_free(&self) -> bool {
        self.rules
            .iter()
            .all(|r| r.atoms.iter().all(|a| !matches!(a, Atom::Cut { .. })))
    }

    /// Exact length of the produced word. Never expands.
    pub fn length(&self) -> &BigUint {
        self.len_of(self.start)
    }

    pub fn length_of(&self, v: VarId) -> &BigUint {
        self.len_of(v)
    }

    pub fn metrics_of(&self, v: VarId) -> VarMetrics {
        let m = self.metrics[v.idx()];
        VarMetrics {
            length: self.len_of(v).clone(),
            forward_fp: m.fp,
            inverse_fp: m.fp_inv,
        }
    }

    /// Forward fingerprint of the whole value.
    pub fn fingerprint(&self) -> u64 {
        self.metrics[self.start.idx()].fp
    }

    /// Fingerprint of `val[lo..=hi]` (1-based). `hi` is clamped; a range
    /// starting past the end fingerprints the empty word (0).
    ///
    /// Panics if `lo < 1` or `lo > hi`.
    pub fn substring_fp(&self, lo: &BigUint, hi: &BigUint) -> u64 {
        assert!(!lo.is_zero() && lo <= hi, "need 1 <= lo <= hi");
        let len = self.length();
        if lo > len {
            return 0;
        }
        let hi = hi.min(len);
        range_fp(self, self.start, lo, hi, Dir::Fwd).0
    }

    /// Writes out the explicit word, refusing when it is longer than
    /// `limit`. The error carries the exact length.
    pub fn expand(&self, limit: u64) -> Result<Word, TooLong> {
        let len = self.length();
        if *len > BigUint::from(limit) {
            return Err(TooLong { length: len.clone(), limit });
        }
        let mut out = Vec::with_capacity(len.to_usize().unwrap_or(0));
        if !len.is_zero() {
            emit_range(self, self.start, &BigUint::one(), len, &mut out);
        }
        Ok(out)
    }

    /// Value equality of two grammars over the same alphabet.
    ///
    /// Lengths are compared exactly. When both values fit under
    /// `exact_bound` letters the words are expanded and compared exactly;
    /// otherwise fingerprints decide, with one-sided error at most
    /// `len / (2^61 - 1)`: unequal words may be declared equal, never the
    /// reverse.
    pub fn equal(&self, other: &Self, exact_bound: u64) -> bool {
        self.equal_detail(other, exact_bound).holds()
    }

    pub fn equal_detail(&self, other: &Self, exact_bound: u64) -> EqVerdict {
        assert!(
            self.alphabet.compatible(&other.alphabet),
            "grammars over different alphabets cannot be compared"
        );
        if self.length() != other.length() {
            return EqVerdict::NotEqual;
        }
        if *self.length() <= BigUint::from(exact_bound) {
            let a = self.expand(exact_bound).expect("length checked");
            let b = other.expand(exact_bound).expect("length checked");
            if a == b {
                EqVerdict::EqualExact
            } else {
                EqVerdict::NotEqual
            }
        } else if self.fingerprint() == other.fingerprint() {
            EqVerdict::EqualFingerprint
        } else {
            EqVerdict::NotEqual
        }
    }

    /// Grammar for the concatenation of the two values.
    pub fn concat(&self, other: &Self) -> Self {
        assert!(
            self.alphabet.compatible(&other.alphabet),
            "grammars over different alphabets cannot be concatenated"
        );
        let mut b = GrammarBuilder::new(&self.alphabet);
        let s1 = b.import(self);
        let s2 = b.import(other);
        let s = b.fresh(vec![Atom::Var(s1), Atom::Var(s2)]);
        b.build(s)
    }

    /// Grammar for the inverse word: reversed, every letter inverted.
    /// Mirrors every rule in place, so the size is unchanged.
    pub fn invert(&self) -> Self {
        let mut rules = Vec::with_capacity(self.rules.len());
        let mut metrics = Vec::with_capacity(self.metrics.len());
        for (rule, m) in self.rules.iter().zip(&self.metrics) {
            let n = rule.atoms.len();
            let mut atoms = Vec::with_capacity(n);
            let mut pieces = Vec::with_capacity(n);
            let mut offsets = Vec::with_capacity(n + 1);
            offsets.push(BigUint::zero());
            for k in (0..n).rev() {
                let width = &rule.offsets[k + 1] - &rule.offsets[k];
                let atom = match &rule.atoms[k] {
                    Atom::Letter(l) => Atom::Letter(l.inverse()),
                    // every variable gets mirrored, so the reference stands
                    Atom::Var(v) => Atom::Var(*v),
                    Atom::Cut { var, lo, hi } => {
                        let lb = self.len_of(*var);
                        if lo > lb {
                            Atom::Cut { var: *var, lo: lo.clone(), hi: hi.clone() }
                        } else {
                            let h = hi.min(lb);
                            Atom::Cut {
                                var: *var,
                                lo: lb - h + 1u32,
                                hi: lb - lo + 1u32,
                            }
                        }
                    }
                };
                let p = rule.pieces[k];
                atoms.push(atom);
                pieces.push(PieceFp { fp: p.fp_inv, fp_inv: p.fp, bpow: p.bpow });
                let last = offsets.last().unwrap().clone();
                offsets.push(last + width);
            }
            rules.push(Rule {
                name: rule.name.clone(),
                atoms: atoms.into_boxed_slice(),
                offsets: offsets.into_boxed_slice(),
                pieces: pieces.into_boxed_slice(),
            });
            metrics.push(PieceFp { fp: m.fp_inv, fp_inv: m.fp, bpow: m.bpow });
        }
        CompositionSystem { alphabet: self.alphabet.clone(), rules, metrics, start: self.start }
    }

    /// Grammar for the `z`-th power of the value, built by binary powering:
    /// `size + O(log |z|)` rules. `z` may be negative or zero.
    pub fn power(&self, z: &BigInt) -> Self {
        match z.sign() {
            Sign::NoSign => CompositionSystem::empty(&self.alphabet),
            Sign::Minus => self.invert().power(&(-z)),
            Sign::Plus => {
                let mag = z.magnitude();
                let mut b = GrammarBuilder::new(&self.alphabet);
                let base = b.import(self);
                let bits = mag.bits();
                let mut acc = base;
                for i in (0..bits - 1).rev() {
                    acc = b.fresh(vec![Atom::Var(acc), Atom::Var(acc)]);
                    if mag.bit(i) {
                        acc = b.fresh(vec![Atom::Var(acc), Atom::Var(base)]);
                    }
                }
                b.build(acc)
            }
        }
    }

    /// Re-verifies the structural invariants. Empty means sound. Grammars
    /// built through [`GrammarBuilder`] satisfy this by construction; the
    /// check exists for diagnostics and tests.
    pub fn self_check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, rule) in self.rules.iter().enumerate() {
            for atom in rule.atoms.iter() {
                match atom {
                    Atom::Letter(l) => {
                        if !self.alphabet.contains(*l) {
                            out.push(Violation::UnknownLetter {
                                rule: rule.name.clone(),
                                token: format!("{atom:?}"),
                            });
                        }
                    }
                    Atom::Var(v) => {
                        if v.idx() >= i {
                            out.push(Violation::Cycle(rule.name.clone()));
                        }
                    }
                    Atom::Cut { var, lo, hi } => {
                        if var.idx() >= i {
                            out.push(Violation::Cycle(rule.name.clone()));
                        }
                        if lo.is_zero() || lo > hi {
                            out.push(Violation::MalformedCut {
                                var: rule.name.clone(),
                                lo: lo.clone(),
                                hi: hi.clone(),
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

impl GrammarView for CompositionSystem {
    fn atoms(&self, v: VarId) -> &[Atom] {
        &self.rules[v.idx()].atoms
    }

    fn offsets(&self, v: VarId) -> &[BigUint] {
        &self.rules[v.idx()].offsets
    }

    fn pieces(&self, v: VarId) -> &[PieceFp] {
        &self.rules[v.idx()].pieces
    }

    fn metric(&self, v: VarId) -> PieceFp {
        self.metrics[v.idx()]
    }

    fn len_of(&self, v: VarId) -> &BigUint {
        self.rules[v.idx()].offsets.last().unwrap()
    }
}

/// Incremental grammar construction. Rules may only reference variables
/// already added, which makes acyclicity structural; metrics are computed
/// as rules arrive, so algorithms can query the partial grammar.
pub struct GrammarBuilder {
    alphabet: Arc<GeneratorAlphabet>,
    rules: Vec<Rule>,
    metrics: Vec<PieceFp>,
    names: HashMap<String, VarId>,
    fresh_counter: u64,
}

impl GrammarBuilder {
    pub fn new(alphabet: &Arc<GeneratorAlphabet>) -> Self {
        GrammarBuilder {
            alphabet: alphabet.clone(),
            rules: Vec::new(),
            metrics: Vec::new(),
            names: HashMap::new(),
            fresh_counter: 0,
        }
    }

    pub fn var_count(&self) -> usize {
        self.rules.len()
    }

    /// Adds a named rule. Fails on duplicate names, letters outside the
    /// alphabet, and malformed cut indices. Referencing a variable that was
    /// never added is a caller bug and panics.
    pub fn add(&mut self, name: impl Into<String>, atoms: Vec<Atom>) -> Result<VarId, Violation> {
        let name = name.into();
        if self.names.contains_key(&name) {
            return Err(Violation::DuplicateRule(name));
        }
        for atom in &atoms {
            match atom {
                Atom::Letter(l) => {
                    if !self.alphabet.contains(*l) {
                        return Err(Violation::UnknownLetter {
                            rule: name,
                            token: format!("{atom:?}"),
                        });
                    }
                }
                Atom::Var(v) => {
                    assert!(v.idx() < self.rules.len(), "rule references unknown variable");
                }
                Atom::Cut { var, lo, hi } => {
                    assert!(var.idx() < self.rules.len(), "cut references unknown variable");
                    if lo.is_zero() || lo > hi {
                        return Err(Violation::MalformedCut {
                            var: self.rules[var.idx()].name.clone(),
                            lo: lo.clone(),
                            hi: hi.clone(),
                        });
                    }
                }
            }
        }
        Ok(self.push_rule(name, atoms))
    }

    /// Adds a rule under a generated name. Panics on invalid atoms; meant
    /// for internal construction where atoms are valid by construction.
    pub fn fresh(&mut self, atoms: Vec<Atom>) -> VarId {
        let name = self.fresh_name();
        self.add(name, atoms).expect("generated rule must be valid")
    }

    fn fresh_name(&mut self) -> String {
        loop {
            let name = format!("%{}", self.fresh_counter);
            self.fresh_counter += 1;
            if !self.names.contains_key(&name) {
                return name;
            }
        }
    }

    /// Copies every rule of `sys` into this builder (metrics verbatim, ids
    /// shifted) and returns the new id of its start variable. Imported
    /// names are kept when free and uniquified otherwise.
    pub fn import(&mut self, sys: &CompositionSystem) -> VarId {
        assert!(
            self.alphabet.compatible(&sys.alphabet),
            "cannot import a grammar over a different alphabet"
        );
        let off = self.rules.len() as u32;
        for (rule, metric) in sys.rules.iter().zip(&sys.metrics) {
            let atoms: Vec<Atom> = rule
                .atoms
                .iter()
                .map(|a| match a {
                    Atom::Letter(l) => Atom::Letter(*l),
                    Atom::Var(v) => Atom::Var(VarId(v.0 + off)),
                    Atom::Cut { var, lo, hi } => Atom::Cut {
                        var: VarId(var.0 + off),
                        lo: lo.clone(),
                        hi: hi.clone(),
                    },
                })
                .collect();
            let name = if self.names.contains_key(&rule.name) {
                self.fresh_name()
            } else {
                rule.name.clone()
            };
            let id = VarId(self.rules.len() as u32);
            self.names.insert(name.clone(), id);
            self.rules.push(Rule {
                name,
                atoms: atoms.into_boxed_slice(),
                offsets: rule.offsets.clone(),
                pieces: rule.pieces.clone(),
            });
            self.metrics.push(*metric);
        }
        VarId(sys.start.0 + off)
    }

    fn push_rule(&mut self, name: String, atoms: Vec<Atom>) -> VarId {
        let params = self.alphabet.params();
        let mut offsets = Vec::with_capacity(atoms.len() + 1);
        let mut pieces = Vec::with_capacity(atoms.len());
        offsets.push(BigUint::zero());
        let mut metric = PieceFp::EMPTY;
        for atom in &atoms {
            let (width, piece) = match atom {
                Atom::Letter(l) => (BigUint::one(), PieceFp::letter(params, *l)),
                Atom::Var(v) => (self.len_of(*v).clone(), self.metric(*v)),
                Atom::Cut { var, lo, hi } => {
                    let lb = self.len_of(*var).clone();
                    if *lo > lb {
                        (BigUint::zero(), PieceFp::EMPTY)
                    } else {
                        let h = hi.min(&lb).clone();
                        let width = &h - lo + 1u32;
                        let (fp, bpow) = range_fp(self, *var, lo, &h, Dir::Fwd);
                        let inv_lo = &lb - &h + 1u32;
                        let inv_hi = &lb - lo + 1u32;
                        let (fp_inv, _) = range_fp(self, *var, &inv_lo, &inv_hi, Dir::Inv);
                        (width, PieceFp { fp, fp_inv, bpow })
                    }
                }
            };
            metric = PieceFp::concat(metric, piece);
            let last = offsets.last().unwrap().clone();
            offsets.push(last + width);
            pieces.push(piece);
        }
        let id = VarId(self.rules.len() as u32);
        self.names.insert(name.clone(), id);
        self.rules.push(Rule {
            name,
            atoms: atoms.into_boxed_slice(),
            offsets: offsets.into_boxed_slice(),
            pieces: pieces.into_boxed_slice(),
        });
        self.metrics.push(metric);
        id
    }

    pub fn build(self, start: VarId) -> CompositionSystem {
        assert!(start.idx() < self.rules.len(), "start variable not in grammar");
        CompositionSystem {
            alphabet: self.alphabet,
            rules: self.rules,
            metrics: self.metrics,
            start,
        }
    }
}

impl GrammarView for GrammarBuilder {
    fn atoms(&self, v: VarId) -> &[Atom] {
        &self.rules[v.idx()].atoms
    }

    fn offsets(&self, v: VarId) -> &[BigUint] {
        &self.rules[v.idx()].offsets
    }

    fn pieces(&self, v: VarId) -> &[PieceFp] {
        &self.rules[v.idx()].pieces
    }

    fn metric(&self, v: VarId) -> PieceFp {
        self.metrics[v.idx()]
    }

    fn len_of(&self, v: VarId) -> &BigUint {
        self.rules[v.idx()].offsets.last().unwrap()
    }
}

/// Fingerprint (and `base^len`) of `val(v)[lo..=hi]` in the given
/// orientation. For [`Dir::Inv`] the positions refer to the inverse word.
/// Preconditions: `1 <= lo <= hi <= len`.
///
/// Cost is one descent per boundary: atoms fully inside the range are
/// consumed in O(1) from their stored piece data.
// TODO: rebalance very deep grammars before querying; descents pay O(depth).
pub(crate) fn range_fp<V: GrammarView + ?Sized>(
    view: &V,
    v: VarId,
    lo: &BigUint,
    hi: &BigUint,
    dir: Dir,
) -> (u64, u64) {
    let atoms = view.atoms(v);
    let offsets = view.offsets(v);
    let pieces = view.pieces(v);
    let n = atoms.len();
    let total = &offsets[n];
    debug_assert!(!lo.is_zero() && lo <= hi && hi <= total);
    let mut acc_fp = 0u64;
    let mut acc_pow = 1u64;
    for step in 0..n {
        let idx = match dir {
            Dir::Fwd => step,
            Dir::Inv => n - 1 - step,
        };
        // the slot this atom's (oriented) value occupies: positions
        // a_lo+1 ..= a_hi
        let (a_lo, a_hi) = match dir {
            Dir::Fwd => (offsets[idx].clone(), offsets[idx + 1].clone()),
            Dir::Inv => (total - &offsets[idx + 1], total - &offsets[idx]),
        };
        if a_hi == a_lo || &a_hi < lo {
            continue;
        }
        if &a_lo >= hi {
            break;
        }
        let rel_lo = if lo > &a_lo { lo - &a_lo } else { BigUint::one() };
        let rel_hi = if hi < &a_hi { hi - &a_lo } else { &a_hi - &a_lo };
        let width = &a_hi - &a_lo;
        let full = rel_lo.is_one() && rel_hi == width;
        let piece = pieces[idx];
        let (fp, bpow) = if full {
            match dir {
                Dir::Fwd => (piece.fp, piece.bpow),
                Dir::Inv => (piece.fp_inv, piece.bpow),
            }
        } else {
            match (&atoms[idx], &dir) {
                (Atom::Letter(_), _) => unreachable!("single letters are never partial"),
                (Atom::Var(b), Dir::Fwd) => range_fp(view, *b, &rel_lo, &rel_hi, Dir::Fwd),
                (Atom::Var(b), Dir::Inv) => range_fp(view, *b, &rel_lo, &rel_hi, Dir::Inv),
                (Atom::Cut { var, lo: cl, .. }, Dir::Fwd) => {
                    let abs_lo = cl + &rel_lo - 1u32;
                    let abs_hi = cl + &rel_hi - 1u32;
                    range_fp(view, *var, &abs_lo, &abs_hi, Dir::Fwd)
                }
                (Atom::Cut { var, lo: cl, .. }, Dir::Inv) => {
                    // inverted positions rel_lo..rel_hi of the cut map to
                    // forward positions cl+width-rel_hi ..= cl+width-rel_lo
                    // of val(var), i.e. to this range of its inverse word:
                    let lb = view.len_of(*var).clone();
                    let x = cl + &width - &rel_hi;
                    let y = cl + &width - &rel_lo;
                    let inv_lo = &lb - &y + 1u32;
                    let inv_hi = &lb - &x + 1u32;
                    range_fp(view, *var, &inv_lo, &inv_hi, Dir::Inv)
                }
            }
        };
        acc_fp = add_mod(mul_mod(acc_fp, bpow), fp);
        acc_pow = mul_mod(acc_pow, bpow);
    }
    (acc_fp, acc_pow)
}

/// Appends the explicit letters of `val(v)[lo..=hi]` to `out`.
/// Preconditions as in [`range_fp`]; forward orientation only.
pub(crate) fn emit_range<V: GrammarView + ?Sized>(
    view: &V,
    v: VarId,
    lo: &BigUint,
    hi: &BigUint,
    out: &mut Vec<Letter>,
) {
    let atoms = view.atoms(v);
    let offsets = view.offsets(v);
    for (idx, atom) in atoms.iter().enumerate() {
        let a_lo = &offsets[idx];
        let a_hi = &offsets[idx + 1];
        if a_hi == a_lo || a_hi < lo {
            continue;
        }
        if a_lo >= hi {
            break;
        }
        let rel_lo = if lo > a_lo { lo - a_lo } else { BigUint::one() };
        let rel_hi = if hi < a_hi { hi - a_lo } else { a_hi - a_lo };
        match atom {
            Atom::Letter(l) => out.push(*l),
            Atom::Var(b) => emit_range(view, *b, &rel_lo, &rel_hi, out),
            Atom::Cut { var, lo: cl, .. } => {
                let abs_lo = cl + &rel_lo - 1u32;
                let abs_hi = cl + &rel_hi - 1u32;
                emit_range(view, *var, &abs_lo, &abs_hi, out);
            }
        }
    }
}

/// Collects cut-free atoms whose concatenation is `val(v)[lo..=hi]`,
/// reusing whole variables wherever the range covers one. The output stays
/// within O(depth * arity) atoms because only the two boundary paths are
/// descended.
pub(crate) fn extract_atoms<V: GrammarView + ?Sized>(
    view: &V,
    v: VarId,
    lo: &BigUint,
    hi: &BigUint,
    out: &mut Vec<Atom>,
) {
    if lo.is_one() && hi == view.len_of(v) {
        out.push(Atom::Var(v));
        return;
    }
    let atoms = view.atoms(v);
    let offsets = view.offsets(v);
    for (idx, atom) in atoms.iter().enumerate() {
        let a_lo = &offsets[idx];
        let a_hi = &offsets[idx + 1];
        if a_hi == a_lo || a_hi < lo {
            continue;
        }
        if a_lo >= hi {
            break;
        }
        let rel_lo = if lo > a_lo { lo - a_lo } else { BigUint::one() };
        let rel_hi = if hi < a_hi { hi - a_lo } else { a_hi - a_lo };
        match atom {
            Atom::Letter(l) => out.push(Atom::Letter(*l)),
            Atom::Var(b) => extract_atoms(view, *b, &rel_lo, &rel_hi, out),
            Atom::Cut { var, lo: cl, .. } => {
                let abs_lo = cl + &rel_lo - 1u32;
                let abs_hi = cl + &rel_hi - 1u32;
                extract_atoms(view, *var, &abs_lo, &abs_hi, out);
            }
        }
    }
}

impl fmt::Display for CompositionSystem {
    /// Rule listing for diagnostics; values are never expanded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, rule) in self.rules.iter().enumerate() {
            let marker = if VarId(i as u32) == self.start { "*" } else { " " };
            write!(f, "{marker}{} ->", rule.name)?;
            for atom in rule.atoms.iter() {
                match atom {
                    Atom::Letter(l) => write!(f, " {}", self.alphabet.letter_name(*l))?,
                    Atom::Var(v) => write!(f, " {}", self.rules[v.idx()].name)?,
                    Atom::Cut { var, lo, hi } => {
                        write!(f, " {}[{lo}:{hi}]", self.rules[var.idx()].name)?
                    }
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
