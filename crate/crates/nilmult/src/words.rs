//! Words in a free group: letters, free reduction, commutators, and outer
//! commutator templates.
//!
//! A [`Word`] is always kept freely reduced, so two words are equal as group
//! elements exactly when they are equal as values. Everything downstream
//! (Hall bases, collection, the verifiers) builds on this module.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A free-group generator, identified by a 1-based index.
///
/// Generators are totally ordered by index; this fixes the order used to
/// build Hall bases.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Generator(u32);

impl Generator {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "generator indices are 1-based");
        Generator(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// One letter of a word: a generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Generator,
    /// True for the inverse of the generator.
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: Generator, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inverted(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

/// A freely reduced word over the free-group generators.
///
/// The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The identity element.
    pub fn identity() -> Self {
        Word::default()
    }

    /// The word consisting of a single generator.
    pub fn generator(index: u32) -> Self {
        Word {
            letters: vec![Letter::new(Generator::new(index), false)],
        }
    }

    /// Freely reduces a raw letter sequence. Idempotent.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in raw {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index appearing in the word, or 0 for the identity.
    pub fn max_generator(&self) -> u32 {
        self.letters
            .iter()
            .map(|l| l.gen.index())
            .max()
            .unwrap_or(0)
    }

    /// Product of two words, freely reduced.
    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// The inverse word (letters reversed and inverted). Always reduced.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// n-th power for any integer n.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Group commutator `[u, v] = u^-1 v^-1 u v`, freely reduced.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Error for outer-template construction and instantiation.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("template expects {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("template slots must be exactly 1..={weight}, each used once")]
    MalformedSlots { weight: usize },
}

/// Shape of an outer commutator word: a binary bracket tree whose leaves are
/// the argument slots `1..=w`, each used exactly once.
///
/// The left-normed shape of weight w is `[..[[1,2],3]..,w]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OuterTemplate {
    Slot(u32),
    Bracket(Box<OuterTemplate>, Box<OuterTemplate>),
}

impl OuterTemplate {
    /// Left-normed template of the given weight.
    pub fn left_normed(weight: u32) -> Self {
        assert!(weight >= 1);
        let mut t = OuterTemplate::Slot(1);
        for s in 2..=weight {
            t = OuterTemplate::Bracket(Box::new(t), Box::new(OuterTemplate::Slot(s)));
        }
        t
    }

    /// Builds `[left, right]`, renumbering nothing: slot numbers must already
    /// be disjoint and form `1..=w` overall for a valid template.
    pub fn bracket(left: OuterTemplate, right: OuterTemplate) -> Self {
        OuterTemplate::Bracket(Box::new(left), Box::new(right))
    }

    /// Number of leaves.
    pub fn weight(&self) -> usize {
        match self {
            OuterTemplate::Slot(_) => 1,
            OuterTemplate::Bracket(l, r) => l.weight() + r.weight(),
        }
    }

    fn collect_slots(&self, out: &mut Vec<u32>) {
        match self {
            OuterTemplate::Slot(s) => out.push(*s),
            OuterTemplate::Bracket(l, r) => {
                l.collect_slots(out);
                r.collect_slots(out);
            }
        }
    }

    /// Checks that the slots are exactly `1..=weight`, each once.
    pub fn validate(&self) -> Result<(), TemplateError> {
        let w = self.weight();
        let mut slots = Vec::new();
        self.collect_slots(&mut slots);
        let mut sorted = slots.clone();
        sorted.sort_unstable();
        if sorted != (1..=w as u32).collect::<Vec<_>>() {
            return Err(TemplateError::MalformedSlots { weight: w });
        }
        Ok(())
    }

    /// Substitutes `args[slot-1]` into each slot and evaluates the nested
    /// commutators. The left-normed template of weight w yields
    /// `[a1, a2, ..., aw]`.
    pub fn instantiate(&self, args: &[Word]) -> Result<Word, TemplateError> {
        self.validate()?;
        if args.len() != self.weight() {
            return Err(TemplateError::ArityMismatch {
                expected: self.weight(),
                got: args.len(),
            });
        }
        Ok(self.instantiate_unchecked(args))
    }

    fn instantiate_unchecked(&self, args: &[Word]) -> Word {
        match self {
            OuterTemplate::Slot(s) => args[(*s - 1) as usize].clone(),
            OuterTemplate::Bracket(l, r) => Word::commutator(
                &l.instantiate_unchecked(args),
                &r.instantiate_unchecked(args),
            ),
        }
    }
}

impl fmt::Display for OuterTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OuterTemplate::Slot(s) => write!(f, "{s}"),
            OuterTemplate::Bracket(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

/// Error from the word / template text parsers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("bad integer at byte {0}")]
    BadInteger(usize),
    #[error("{0}")]
    Template(#[from] TemplateError),
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => Err(ParseError::Unexpected(got as char, self.pos - 1)),
            None => Err(ParseError::Eof),
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        if self.src.get(self.pos) == Some(&b'-') {
            negative = true;
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit())
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ParseError::BadInteger(start));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
        let value: i64 = text.parse().map_err(|_| ParseError::BadInteger(start))?;
        Ok(if negative { -value } else { value })
    }
}

/// Parses the word syntax used by the CLI and the tests.
///
/// Grammar: `x1`, `x2^-1`, juxtaposition for products, `[u,v]` for
/// commutators, parentheses for grouping, and `^n` for integer powers, e.g.
/// `(x1 x2)^3 [x1,x2]^-1`.
pub fn parse_word(input: &str) -> Result<Word, ParseError> {
    let mut cur = Cursor::new(input);
    let w = parse_product(&mut cur)?;
    if let Some(c) = cur.peek() {
        return Err(ParseError::Unexpected(c as char, cur.pos));
    }
    Ok(w)
}

fn parse_product(cur: &mut Cursor) -> Result<Word, ParseError> {
    let mut acc = Word::identity();
    loop {
        match cur.peek() {
            Some(b'x') | Some(b'[') | Some(b'(') => {
                let factor = parse_factor(cur)?;
                acc = acc.concat(&factor);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(cur: &mut Cursor) -> Result<Word, ParseError> {
    let atom = parse_atom(cur)?;
    if cur.peek() == Some(b'^') {
        cur.bump();
        let n = cur.integer()?;
        Ok(atom.pow(n))
    } else {
        Ok(atom)
    }
}

fn parse_atom(cur: &mut Cursor) -> Result<Word, ParseError> {
    match cur.peek() {
        Some(b'x') => {
            cur.bump();
            let idx = cur.integer()?;
            if idx < 1 {
                return Err(ParseError::BadInteger(cur.pos));
            }
            Ok(Word::generator(idx as u32))
        }
        Some(b'[') => {
            cur.bump();
            let u = parse_product(cur)?;
            cur.expect(b',')?;
            let v = parse_product(cur)?;
            cur.expect(b']')?;
            Ok(Word::commutator(&u, &v))
        }
        Some(b'(') => {
            cur.bump();
            let w = parse_product(cur)?;
            cur.expect(b')')?;
            Ok(w)
        }
        Some(c) => Err(ParseError::Unexpected(c as char, cur.pos)),
        None => Err(ParseError::Eof),
    }
}

/// Parses an outer-template expression such as `[[1,2],3]` or `[1,[2,3]]`.
pub fn parse_template(input: &str) -> Result<OuterTemplate, ParseError> {
    let mut cur = Cursor::new(input);
    let t = parse_template_node(&mut cur)?;
    if let Some(c) = cur.peek() {
        return Err(ParseError::Unexpected(c as char, cur.pos));
    }
    t.validate()?;
    Ok(t)
}

fn parse_template_node(cur: &mut Cursor) -> Result<OuterTemplate, ParseError> {
    match cur.peek() {
        Some(b'[') => {
            cur.bump();
            let l = parse_template_node(cur)?;
            cur.expect(b',')?;
            let r = parse_template_node(cur)?;
            cur.expect(b']')?;
            Ok(OuterTemplate::bracket(l, r))
        }
        Some(c) if c.is_ascii_digit() => {
            let n = cur.integer()?;
            if n < 1 {
                return Err(ParseError::BadInteger(cur.pos));
            }
            Ok(OuterTemplate::Slot(n as u32))
        }
        Some(c) => Err(ParseError::Unexpected(c as char, cur.pos)),
        None => Err(ParseError::Eof),
    }
}
