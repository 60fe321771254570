//! Word problems over grammar-compressed words: free groups,
//! HNN-extensions of free groups with cyclic associated subgroups, and
//! fundamental groups of graphs of free groups with cyclic edge groups.
//!
//! Words are stored as straight-line programs (acyclic grammars deriving a
//! single word), extended with cut atoms that select a factor of a
//! variable's value. Lengths and Karp-Rabin style fingerprints are
//! maintained per rule, so equality, free reduction, and power detection
//! run in time polynomial in grammar size even when the derived words are
//! exponentially long.
//!
//! Module map:
//! - [`alphabet`]: involutive generator alphabets, letters, explicit words.
//! - [`fingerprint`]: the rolling hash and its composable summaries.
//! - [`grammar`]: composition systems, builders, equality, powers.
//! - [`cuts`]: cut elimination.
//! - [`free_group`]: free reduction, explicit and compressed.
//! - [`power`]: deciding `w^z = val(g)`.
//! - [`hnn`]: Britton sequences and the semi-compressed word problem in
//!   HNN-extensions.
//! - [`ascending`]: the fully compressed word problem when the extension is
//!   ascending.
//! - [`graph`]: graphs of groups and their fundamental group word problem.
//! - [`parse`]: text syntax for words with nested exponents.
//! - [`json`]: on-disk formats for grammars, presentations, and graphs.
//! - [`reference`]: explicit-word reference backends used for
//!   cross-checking.
//! - [`instances`]: seeded random-instance generators for benchmarks and
//!   cross-checking suites.

pub mod alphabet;
pub mod ascending;
pub mod cuts;
pub mod fingerprint;
pub mod free_group;
pub mod grammar;
pub mod graph;
pub mod hnn;
pub mod instances;
pub mod json;
pub mod parse;
pub mod power;
pub mod reference;

pub use alphabet::{invert_word, AlphabetError, GeneratorAlphabet, Letter, Word};
pub use ascending::{ascending_word_problem, AscendingError, AscendingPresentation};
pub use cuts::normalize_cuts;
pub use fingerprint::FingerprintParams;
pub use free_group::{
    compressed_free_reduce, compressed_word_problem, cyclic_decompose, free_reduce,
    is_cyclically_reduced, reduced_length, word_problem, CyclicDecomposition, NotReduced,
    ReducedWord,
};
pub use grammar::{
    Atom, CompositionSystem, CutsPresent, EqVerdict, GrammarBuilder, Slp, TooLong, VarId,
    VarMetrics, Violation,
};
pub use graph::{
    fundamental_word_problem, fundamental_word_problem_traced, CycleItem, CycleTypeWord,
    CycleViolation, EdgeRef, GraphOfGroups, GraphReductionStep, GraphViolation, RawEdge, RawGraph,
};
pub use hnn::{
    invert_mixed, semi_compressed_word_problem, semi_compressed_word_problem_traced,
    BrittonSequence, HnnError, HnnPresentation, MixedItem, MixedWord, Pin, PinCase,
    ReductionStep, Sign,
};
pub use json::{
    AscendingFile, CycleItemJson, CycleWordFile, EdgeFile, FileError, GrammarFile, GraphFile,
    HnnFile, TokenJson, VertexFile,
};
pub use parse::{parse_cycle, scan_names, ParseError, WordParser};
pub use power::{compressed_power, PowerAnswer, PowerError};

/// How a Britton reduction step materializes the replacement power.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Replacement {
    /// Binary powering of the image word.
    Pow,
    /// Substitution of the image word for every letter of the pinned
    /// segment, cut to the wanted length.
    Eta,
}

/// Which reducible position a reduction step picks when several exist.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PinOrder {
    Leftmost,
    Rightmost,
}

/// Knobs shared by the solvers.
#[derive(Copy, Clone, Debug)]
pub struct SolverConfig {
    /// Equality checks whose words are at most this long expand and compare
    /// explicitly; longer ones compare fingerprints (one-sided error, bound
    /// below 2^-40 per check for words under 2^20 letters).
    pub exact_check_bound: u64,
    pub replacement: Replacement,
    pub pin_order: PinOrder,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            exact_check_bound: 1_000_000,
            replacement: Replacement::Pow,
            pin_order: PinOrder::Leftmost,
        }
    }
}
