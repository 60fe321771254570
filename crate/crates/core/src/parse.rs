//! Text syntax for words.
//!
//! Whitespace-separated names with optional exponents, and parenthesized
//! groups: `a`, `a^-1`, `t^-20`, `(a b)^1048576`, `(a b)^(2^40)`,
//! `((a)^(2^20))^-1`. An exponent is an integer, or `(base^power)` with
//! integer base and power computed before use.
//!
//! Plain generator material lowers to grammars without ever expanding an
//! exponent: `(a b)^(2^40)` becomes a grammar of size O(40). Names that are
//! not base generators (a stable letter, edge names of a graph of groups)
//! stay explicit, so groups containing them are expanded copy by copy and
//! their exponents are bounded by [`EXPANSION_LIMIT`].

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::alphabet::{GeneratorAlphabet, Letter, Word};
use crate::graph::{CycleItem, GraphOfGroups};
use crate::grammar::CompositionSystem;
use crate::hnn::{MixedItem, MixedWord, Sign};

/// Most items a single group expansion may produce.
pub const EXPANSION_LIMIT: u64 = 1_000_000;

/// Most bits an evaluated exponent may occupy.
const EXPONENT_BIT_LIMIT: u64 = 1 << 20;

/// Exponents of at most this magnitude turn `name^z` into explicit letters
/// instead of a grammar power.
const SMALL_POWER: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("byte {pos}: unexpected `{found}`")]
    Unexpected { pos: usize, found: String },
    #[error("byte {pos}: unmatched `{paren}`")]
    Unmatched { pos: usize, paren: char },
    #[error("byte {pos}: expected an exponent after `^`")]
    MissingExponent { pos: usize },
    #[error("byte {pos}: exponent out of range")]
    ExponentTooLarge { pos: usize },
    #[error("byte {pos}: unknown name `{name}`")]
    UnknownName { pos: usize, name: String },
    #[error("byte {pos}: `{name}` is not allowed here")]
    SpecialNotAllowed { pos: usize, name: String },
    #[error("byte {pos}: expanding this group needs more than {EXPANSION_LIMIT} items")]
    ExpansionTooLarge { pos: usize },
    #[error("byte {pos}: edge `{name}` does not leave vertex `{at}`")]
    EdgeNotHere {
        pos: usize,
        name: String,
        at: String,
    },
    #[error("unknown base vertex `{0}`")]
    UnknownBase(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    LParen,
    RParen,
    Caret,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Name(n) => write!(f, "{n}"),
            Token::LParen => write!(f, "("),
            Token::RParen => write!(f, ")"),
            Token::Caret => write!(f, "^"),
        }
    }
}

fn lex(text: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push((i, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Token::RParen));
                i += 1;
            }
            '^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            _ => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_whitespace() || matches!(c, '(' | ')' | '^') {
                        break;
                    }
                    i += 1;
                }
                out.push((start, Token::Name(text[start..i].to_string())));
            }
        }
    }
    out
}

/// One parsed factor: a name or a group, raised to an exponent.
#[derive(Clone, Debug)]
struct Factor {
    pos: usize,
    base: Base,
    exponent: BigInt,
}

#[derive(Clone, Debug)]
enum Base {
    Name(String),
    Group(Vec<Factor>),
}

struct Parser<'t> {
    tokens: &'t [(usize, Token)],
    at: usize,
    end: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.at)
    }

    fn bump(&mut self) -> Option<&'t (usize, Token)> {
        let t = self.tokens.get(self.at);
        self.at += 1;
        t
    }

    fn factors(&mut self, until_paren: bool) -> Result<Vec<Factor>, ParseError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => {
                    if until_paren {
                        return Err(ParseError::Unmatched {
                            pos: self.end,
                            paren: '(',
                        });
                    }
                    return Ok(out);
                }
                Some((_, Token::RParen)) => {
                    if until_paren {
                        return Ok(out);
                    }
                    let pos = self.peek().unwrap().0;
                    return Err(ParseError::Unmatched { pos, paren: ')' });
                }
                Some(_) => out.push(self.factor()?),
            }
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let (pos, tok) = self.bump().expect("peeked");
        let pos = *pos;
        let base = match tok {
            Token::Name(n) => Base::Name(n.clone()),
            Token::LParen => {
                let inner = self.factors(true)?;
                match self.bump() {
                    Some((_, Token::RParen)) => {}
                    _ => return Err(ParseError::Unmatched { pos, paren: '(' }),
                }
                Base::Group(inner)
            }
            Token::Caret | Token::RParen => {
                return Err(ParseError::Unexpected {
                    pos,
                    found: tok.to_string(),
                })
            }
        };
        let exponent = if matches!(self.peek(), Some((_, Token::Caret))) {
            self.bump();
            self.exponent()?
        } else {
            BigInt::one()
        };
        Ok(Factor {
            pos,
            base,
            exponent,
        })
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        match self.bump() {
            Some((pos, Token::Name(n))) => n.parse::<BigInt>().map_err(|_| {
                ParseError::Unexpected {
                    pos: *pos,
                    found: n.clone(),
                }
            }),
            Some((pos, other)) => Err(ParseError::Unexpected {
                pos: *pos,
                found: other.to_string(),
            }),
            None => Err(ParseError::MissingExponent { pos: self.end }),
        }
    }

    /// `int`, `(int)`, `(base^power)`, or `-` followed by a parenthesized
    /// form.
    fn exponent(&mut self) -> Result<BigInt, ParseError> {
        let Some((pos, tok)) = self.peek() else {
            return Err(ParseError::MissingExponent { pos: self.end });
        };
        let pos = *pos;
        match tok {
            Token::Name(n) if n == "-" => {
                self.bump();
                match self.peek() {
                    Some((pos, Token::LParen)) => {
                        let pos = *pos;
                        Ok(-self.exponent_group(pos)?)
                    }
                    _ => Err(ParseError::MissingExponent { pos }),
                }
            }
            Token::Name(_) => self.integer(),
            Token::LParen => self.exponent_group(pos),
            _ => Err(ParseError::MissingExponent { pos }),
        }
    }

    /// `(int)` or `(base^power)`, evaluated.
    fn exponent_group(&mut self, pos: usize) -> Result<BigInt, ParseError> {
        self.bump(); // the opening paren
        let base = self.integer()?;
        let value = if matches!(self.peek(), Some((_, Token::Caret))) {
            self.bump();
            let power = self.integer()?;
            evaluate_power(&base, &power, pos)?
        } else {
            base
        };
        match self.bump() {
            Some((_, Token::RParen)) => Ok(value),
            _ => Err(ParseError::Unmatched { pos, paren: '(' }),
        }
    }
}

fn evaluate_power(base: &BigInt, power: &BigInt, pos: usize) -> Result<BigInt, ParseError> {
    if power.is_negative() {
        return Err(ParseError::ExponentTooLarge { pos });
    }
    let p = power
        .to_u64()
        .filter(|&p| base.bits().max(1).saturating_mul(p) <= EXPONENT_BIT_LIMIT)
        .and_then(|p| u32::try_from(p).ok())
        .ok_or(ParseError::ExponentTooLarge { pos })?;
    Ok(base.pow(p))
}

fn parse_factors(text: &str) -> Result<Vec<Factor>, ParseError> {
    let tokens = lex(text);
    let mut p = Parser {
        tokens: &tokens,
        at: 0,
        end: text.len(),
    };
    p.factors(false)
}

/// `(u v)^-1 = v^-1 u^-1`, performed on the parse tree.
fn invert_factors(factors: &[Factor]) -> Vec<Factor> {
    factors
        .iter()
        .rev()
        .map(|f| Factor {
            pos: f.pos,
            base: f.base.clone(),
            exponent: -&f.exponent,
        })
        .collect()
}

/// Parses words over one alphabet plus distinguished explicit names.
pub struct WordParser<'a> {
    alphabet: &'a Arc<GeneratorAlphabet>,
    specials: Vec<String>,
}

impl<'a> WordParser<'a> {
    pub fn new(alphabet: &'a Arc<GeneratorAlphabet>) -> Self {
        WordParser {
            alphabet,
            specials: Vec::new(),
        }
    }

    pub fn with_special(alphabet: &'a Arc<GeneratorAlphabet>, name: impl Into<String>) -> Self {
        WordParser {
            alphabet,
            specials: vec![name.into()],
        }
    }

    fn is_special(&self, name: &str) -> bool {
        self.specials.iter().any(|s| s == name)
    }

    fn has_special(&self, factors: &[Factor]) -> bool {
        factors.iter().any(|f| match &f.base {
            Base::Name(n) => self.is_special(n),
            Base::Group(inner) => self.has_special(inner),
        })
    }

    /// Parses into alternating segments and explicit special letters.
    pub fn parse_mixed(&self, text: &str) -> Result<MixedWord, ParseError> {
        let factors = parse_factors(text)?;
        let mut out = Out {
            items: Vec::new(),
            run: Vec::new(),
            alphabet: self.alphabet,
            budget: EXPANSION_LIMIT,
        };
        self.lower(&factors, &mut out)?;
        out.flush();
        Ok(out.items)
    }

    /// Parses a word that must not contain special names, folded into one
    /// grammar.
    pub fn parse_segment(&self, text: &str) -> Result<CompositionSystem, ParseError> {
        let items = self.parse_mixed(text)?;
        let mut acc = CompositionSystem::empty(self.alphabet);
        for item in items {
            match item {
                MixedItem::Segment(g) => {
                    acc = if acc.length().is_zero() {
                        (*g).clone()
                    } else {
                        acc.concat(&g)
                    }
                }
                MixedItem::Stable(_) => unreachable!("no specials were declared"),
            }
        }
        Ok(acc)
    }

    fn lower(&self, factors: &[Factor], out: &mut Out<'_>) -> Result<(), ParseError> {
        for f in factors {
            match &f.base {
                Base::Name(name) => {
                    if let Some(i) = self.alphabet.index_of(name) {
                        out.letter_power(Letter::positive(i), &f.exponent, f.pos)?;
                    } else if self.is_special(name) {
                        let sign = if f.exponent.is_negative() {
                            Sign::Neg
                        } else {
                            Sign::Pos
                        };
                        let copies = to_copies(&f.exponent, f.pos)?;
                        for _ in 0..copies {
                            out.flush();
                            out.items.push(MixedItem::Stable(sign));
                            out.spend(1, f.pos)?;
                        }
                    } else {
                        return Err(ParseError::UnknownName {
                            pos: f.pos,
                            name: name.clone(),
                        });
                    }
                }
                Base::Group(inner) => {
                    if f.exponent.is_zero() {
                        continue;
                    }
                    if self.has_special(inner) {
                        let copies = to_copies(&f.exponent, f.pos)?;
                        let body = if f.exponent.is_negative() {
                            invert_factors(inner)
                        } else {
                            inner.clone()
                        };
                        for _ in 0..copies {
                            self.lower(&body, out)?;
                        }
                    } else {
                        let mut sub = Out {
                            items: Vec::new(),
                            run: Vec::new(),
                            alphabet: self.alphabet,
                            budget: out.budget,
                        };
                        self.lower(inner, &mut sub)?;
                        sub.flush();
                        let mut acc = CompositionSystem::empty(self.alphabet);
                        for item in sub.items {
                            match item {
                                MixedItem::Segment(g) => {
                                    acc = if acc.length().is_zero() {
                                        (*g).clone()
                                    } else {
                                        acc.concat(&g)
                                    }
                                }
                                MixedItem::Stable(_) => unreachable!("group has no specials"),
                            }
                        }
                        out.push_grammar(acc.power(&f.exponent), f.pos)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Item accumulator: letters pool into runs so that plain text becomes one
/// flat grammar instead of a deep chain of concatenations.
struct Out<'a> {
    items: MixedWord,
    run: Word,
    alphabet: &'a Arc<GeneratorAlphabet>,
    budget: u64,
}

impl Out<'_> {
    fn spend(&mut self, amount: u64, pos: usize) -> Result<(), ParseError> {
        if self.budget < amount {
            return Err(ParseError::ExpansionTooLarge { pos });
        }
        self.budget -= amount;
        Ok(())
    }

    fn flush(&mut self) {
        if self.run.is_empty() {
            return;
        }
        let g = CompositionSystem::from_word(self.alphabet, &self.run);
        self.run.clear();
        self.items.push(MixedItem::Segment(Arc::new(g)));
    }

    fn letter_power(&mut self, l: Letter, z: &BigInt, pos: usize) -> Result<(), ParseError> {
        if let Some(small) = z.to_i64().filter(|z| z.abs() <= SMALL_POWER) {
            let letter = if small < 0 { l.inverse() } else { l };
            self.spend(small.unsigned_abs(), pos)?;
            self.run
                .extend(std::iter::repeat_n(letter, small.unsigned_abs() as usize));
            return Ok(());
        }
        let g = CompositionSystem::from_word(self.alphabet, &[l]).power(z);
        self.push_grammar(g, pos)
    }

    fn push_grammar(&mut self, g: CompositionSystem, pos: usize) -> Result<(), ParseError> {
        if g.length().is_zero() {
            return Ok(());
        }
        self.spend(1, pos)?;
        self.flush();
        self.items.push(MixedItem::Segment(Arc::new(g)));
        Ok(())
    }
}

fn to_copies(z: &BigInt, pos: usize) -> Result<u64, ParseError> {
    z.magnitude()
        .to_u64()
        .filter(|&m| m <= EXPANSION_LIMIT)
        .ok_or(ParseError::ExpansionTooLarge { pos })
}

/// Parses a cycle-type word against a graph of groups, tracking the vertex
/// the path stands at: edge names move it, plain names must be generators
/// of the current vertex group.
pub fn parse_cycle(
    graph: &GraphOfGroups,
    base: &str,
    text: &str,
) -> Result<Vec<CycleItem>, ParseError> {
    let Some(base_idx) = graph.find_vertex(base) else {
        return Err(ParseError::UnknownBase(base.to_string()));
    };
    let factors = parse_factors(text)?;
    let mut out = CycleOut {
        items: Vec::new(),
        run: Vec::new(),
        at: base_idx,
        budget: EXPANSION_LIMIT,
    };
    lower_cycle(graph, &factors, &mut out)?;
    out.flush(graph);
    Ok(out.items)
}

struct CycleOut {
    items: Vec<CycleItem>,
    run: Word,
    at: usize,
    budget: u64,
}

impl CycleOut {
    fn spend(&mut self, amount: u64, pos: usize) -> Result<(), ParseError> {
        if self.budget < amount {
            return Err(ParseError::ExpansionTooLarge { pos });
        }
        self.budget -= amount;
        Ok(())
    }

    fn flush(&mut self, graph: &GraphOfGroups) {
        if self.run.is_empty() {
            return;
        }
        let g = CompositionSystem::from_word(graph.vertex_alphabet(self.at), &self.run);
        self.run.clear();
        self.items.push(CycleItem::Segment(Arc::new(g)));
    }

    fn push_grammar(&mut self, g: CompositionSystem, pos: usize) -> Result<(), ParseError> {
        if g.length().is_zero() {
            return Ok(());
        }
        self.spend(1, pos)?;
        self.items.push(CycleItem::Segment(Arc::new(g)));
        Ok(())
    }
}

fn lower_cycle(
    graph: &GraphOfGroups,
    factors: &[Factor],
    out: &mut CycleOut,
) -> Result<(), ParseError> {
    for f in factors {
        match &f.base {
            Base::Name(name) => {
                let alphabet = graph.vertex_alphabet(out.at);
                if let Some(i) = alphabet.index_of(name) {
                    letter_power_cycle(graph, out, Letter::positive(i), &f.exponent, f.pos)?;
                } else if let Some(found) = graph.find_edge(name) {
                    let e = if f.exponent.is_negative() {
                        found.reverse()
                    } else {
                        found
                    };
                    let copies = to_copies(&f.exponent, f.pos)?;
                    for _ in 0..copies {
                        if graph.source(e) != out.at {
                            return Err(ParseError::EdgeNotHere {
                                pos: f.pos,
                                name: name.clone(),
                                at: graph.vertex_name(out.at).to_string(),
                            });
                        }
                        out.flush(graph);
                        out.items
                            .push(CycleItem::Edge(graph.edge_name(e).to_string()));
                        out.at = graph.target(e);
                        out.spend(1, f.pos)?;
                    }
                } else {
                    return Err(ParseError::UnknownName {
                        pos: f.pos,
                        name: name.clone(),
                    });
                }
            }
            Base::Group(inner) => {
                if f.exponent.is_zero() {
                    continue;
                }
                if has_edge(graph, inner) {
                    let copies = to_copies(&f.exponent, f.pos)?;
                    let body = if f.exponent.is_negative() {
                        invert_factors(inner)
                    } else {
                        inner.clone()
                    };
                    for _ in 0..copies {
                        lower_cycle(graph, &body, out)?;
                    }
                } else {
                    // edge-free group: a segment at the current vertex
                    let alphabet = graph.vertex_alphabet(out.at).clone();
                    let parser = WordParser::new(&alphabet);
                    let mut sub = Out {
                        items: Vec::new(),
                        run: Vec::new(),
                        alphabet: &alphabet,
                        budget: out.budget,
                    };
                    parser.lower(inner, &mut sub)?;
                    sub.flush();
                    let mut acc = CompositionSystem::empty(&alphabet);
                    for item in sub.items {
                        match item {
                            MixedItem::Segment(g) => {
                                acc = if acc.length().is_zero() {
                                    (*g).clone()
                                } else {
                                    acc.concat(&g)
                                }
                            }
                            MixedItem::Stable(_) => unreachable!("no specials declared"),
                        }
                    }
                    out.flush(graph);
                    out.push_grammar(acc.power(&f.exponent), f.pos)?;
                }
            }
        }
    }
    Ok(())
}

fn letter_power_cycle(
    graph: &GraphOfGroups,
    out: &mut CycleOut,
    l: Letter,
    z: &BigInt,
    pos: usize,
) -> Result<(), ParseError> {
    if let Some(small) = z.to_i64().filter(|z| z.abs() <= SMALL_POWER) {
        let letter = if small < 0 { l.inverse() } else { l };
        out.spend(small.unsigned_abs(), pos)?;
        out.run
            .extend(std::iter::repeat_n(letter, small.unsigned_abs() as usize));
        return Ok(());
    }
    let g = CompositionSystem::from_word(graph.vertex_alphabet(out.at), &[l]).power(z);
    out.flush(graph);
    out.push_grammar(g, pos)
}

fn has_edge(graph: &GraphOfGroups, factors: &[Factor]) -> bool {
    factors.iter().any(|f| match &f.base {
        Base::Name(n) => graph.find_edge(n).is_some(),
        Base::Group(inner) => has_edge(graph, inner),
    })
}

/// Names appearing in the text, for building alphabets from bare words.
pub fn scan_names(text: &str) -> Result<Vec<String>, ParseError> {
    let factors = parse_factors(text)?;
    let mut names = Vec::new();
    collect_names(&factors, &mut names);
    Ok(names)
}

fn collect_names(factors: &[Factor], out: &mut Vec<String>) {
    for f in factors {
        match &f.base {
            Base::Name(n) => {
                let stem = n.strip_suffix("^-1").unwrap_or(n);
                if !out.iter().any(|e| e == stem) {
                    out.push(stem.to_string());
                }
            }
            Base::Group(inner) => collect_names(inner, out),
        }
    }
}
