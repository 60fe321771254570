//! Involutive generator alphabets and the letters of group words.

use std::fmt;
use std::sync::Arc;

use crate::fingerprint::FingerprintParams;

/// A letter: a generator or the formal inverse of one.
///
/// Encoded as a nonzero `i32`: `+(i+1)` is generator `i`, `-(i+1)` its
/// inverse. The encoding makes inversion a negation and guarantees the
/// involution is fixed-point free.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    /// The generator with the given alphabet index.
    pub fn positive(index: usize) -> Self {
        Letter((index as i32) + 1)
    }

    /// The inverse of the generator with the given alphabet index.
    pub fn negative(index: usize) -> Self {
        Letter(-((index as i32) + 1))
    }

    pub fn index(self) -> usize {
        (self.0.unsigned_abs() as usize) - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Nonzero fingerprint code, distinct per signed letter.
    pub(crate) fn code(self) -> u64 {
        let k = 2 * self.index() as u64 + 1;
        if self.is_inverse() {
            k + 1
        } else {
            k
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.index())
        } else {
            write!(f, "x{}", self.index())
        }
    }
}

/// A plain word: a sequence of letters, no reducedness promised.
pub type Word = Vec<Letter>;

/// Inverts a word: reverses it and inverts every letter.
pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphabetError {
    #[error("generator name may not be empty")]
    EmptyName,
    #[error("duplicate generator `{0}`")]
    Duplicate(String),
    #[error("generator name `{0}` may not contain `^`, `(`, `)` or whitespace")]
    BadName(String),
}

/// A finite, ordered set of free-group generators together with the
/// fingerprint parameters every word over it will be hashed with.
///
/// Alphabets are shared behind `Arc`; all grammar operations that combine or
/// compare two grammars require the same alphabet (names and parameters).
#[derive(Debug, PartialEq, Eq)]
pub struct GeneratorAlphabet {
    names: Vec<String>,
    params: FingerprintParams,
}

impl GeneratorAlphabet {
    pub fn new<I, S>(names: I, params: FingerprintParams) -> Result<Arc<Self>, AlphabetError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(AlphabetError::EmptyName);
            }
            if n.contains(['^', '(', ')']) || n.chars().any(char::is_whitespace) {
                return Err(AlphabetError::BadName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(AlphabetError::Duplicate(n.clone()));
            }
        }
        Ok(Arc::new(GeneratorAlphabet { names, params }))
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn params(&self) -> FingerprintParams {
        self.params
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, l: Letter) -> bool {
        l.index() < self.names.len()
    }

    /// Parses a single token, `a` or `a^-1`.
    pub fn parse_letter(&self, token: &str) -> Option<Letter> {
        if let Some(base) = token.strip_suffix("^-1") {
            self.index_of(base).map(Letter::negative)
        } else {
            self.index_of(token).map(Letter::positive)
        }
    }

    pub fn letter_name(&self, l: Letter) -> String {
        if l.is_inverse() {
            format!("{}^-1", self.names[l.index()])
        } else {
            self.names[l.index()].clone()
        }
    }

    /// Renders a word with whitespace between letters; the empty word
    /// renders as `""`.
    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter()
            .map(|&l| self.letter_name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses a whitespace-separated list of letter tokens.
    pub fn parse_plain_word(&self, text: &str) -> Result<Word, String> {
        text.split_whitespace()
            .map(|tok| {
                self.parse_letter(tok)
                    .ok_or_else(|| format!("unknown letter `{tok}`"))
            })
            .collect()
    }

    /// True when both alphabets have the same generators and fingerprint
    /// parameters, i.e. their words live in the same hashed universe.
    pub fn compatible(&self, other: &GeneratorAlphabet) -> bool {
        self.names == other.names && self.params == other.params
    }
}
