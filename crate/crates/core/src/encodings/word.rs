use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One letter of the alphabet `{0, 1, #}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Hash,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Hash];

    pub fn as_byte(self) -> u8 {
        match self {
            Symbol::Zero => b'0',
            Symbol::One => b'1',
            Symbol::Hash => b'#',
        }
    }

    pub fn from_byte(b: u8) -> Option<Symbol> {
        match b {
            b'0' => Some(Symbol::Zero),
            b'1' => Some(Symbol::One),
            b'#' => Some(Symbol::Hash),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_byte() as char)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid symbol {found:?} at position {position} (alphabet is 0, 1, #)")]
pub struct WordParseError {
    pub position: usize,
    pub found: char,
}

/// A finite string over `{0, 1, #}`.
///
/// Stored as ASCII bytes so that words print, hash and compare cheaply. The
/// empty word is a legal value (and a legal oracle answer).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// The unary token `1^n`.
    pub fn unary(n: usize) -> Word {
        Word(vec![b'1'; n])
    }

    pub fn repeat(symbol: Symbol, n: usize) -> Word {
        Word(vec![symbol.as_byte(); n])
    }

    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(symbols: I) -> Word {
        Word(symbols.into_iter().map(Symbol::as_byte).collect())
    }

    /// Wraps raw bytes that are already known to be over the alphabet.
    pub(crate) fn from_valid_bytes(bytes: Vec<u8>) -> Word {
        debug_assert!(bytes.iter().all(|b| Symbol::from_byte(*b).is_some()));
        Word(bytes)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn symbol(&self, i: usize) -> Option<Symbol> {
        self.0.get(i).and_then(|b| Symbol::from_byte(*b))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.0.iter().map(|b| Symbol::from_byte(*b).expect("word invariant"))
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s.as_byte());
    }

    pub fn extend(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&other.0);
        Word(out)
    }

    /// `s · self`
    pub fn prepend(&self, s: Symbol) -> Word {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(s.as_byte());
        out.extend_from_slice(&self.0);
        Word(out)
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.len())].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start.min(self.len())..].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn first(&self) -> Option<Symbol> {
        self.symbol(0)
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().and_then(|b| Symbol::from_byte(*b))
    }

    pub fn position(&self, s: Symbol) -> Option<usize> {
        self.0.iter().position(|b| *b == s.as_byte())
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.0.iter().filter(|b| **b == s.as_byte()).count()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.position(s).is_some()
    }

    /// `Some(n)` when the word is exactly `1^n`.
    pub fn as_unary(&self) -> Option<usize> {
        self.0.iter().all(|b| *b == b'1').then_some(self.len())
    }

    /// Whether the word uses only `0` and `1`.
    pub fn is_binary(&self) -> bool {
        !self.contains(Symbol::Hash)
    }

    /// Every word of length exactly `len`, in lexicographic order `0 < 1 < #`.
    pub fn all_of_length(len: usize) -> WordsOfLength {
        WordsOfLength { digits: vec![0; len], done: false }
    }

    /// Every word of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(Word::all_of_length)
    }

    /// Binary words of length exactly `len`, in lexicographic order.
    pub fn binary_of_length(len: usize) -> impl Iterator<Item = Word> {
        let total: u128 = if len >= 127 { u128::MAX } else { 1u128 << len };
        (0..total).map(move |v| {
            Word((0..len).map(|i| if (v >> (len - 1 - i)) & 1 == 1 { b'1' } else { b'0' }).collect())
        })
    }
}

/// Iterator over all words of one length.
pub struct WordsOfLength {
    digits: Vec<u8>,
    done: bool,
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let word = Word(self.digits.iter().map(|d| Symbol::ALL[*d as usize].as_byte()).collect());
        // odometer increment, last position fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.digits[i] < 2 {
                self.digits[i] += 1;
                break;
            }
            self.digits[i] = 0;
        }
        Some(word)
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Word, WordParseError> {
        for (position, c) in s.chars().enumerate() {
            if !matches!(c, '0' | '1' | '#') {
                return Err(WordParseError { position, found: c });
            }
        }
        Ok(Word(s.as_bytes().to_vec()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // bytes are ASCII by construction
        f.write_str(std::str::from_utf8(&self.0).expect("ascii"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "\"{}\"", self)
        }
    }
}

/// Shorthand for tests and literals; panics on an invalid symbol.
pub fn w(s: &str) -> Word {
    s.parse().expect("invalid word literal")
}
