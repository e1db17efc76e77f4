//! Words over `{0, 1, #}`, dyadic numbers, lengths and pairing.

mod dyadic;
mod length;
mod pairing;
mod word;

pub use dyadic::{
    check_dyadic_word, decode_dyadic, encode_dyadic, fraction_bit_count, truncate_dyadic, Dyadic, DyadicError,
};
pub use length::LengthFn;
pub use pairing::{
    exhaustive_length, exhaustive_length_capped, exhaustive_lengths, pair, project, CapExceeded, Side,
    DEFAULT_EXHAUSTION_CAP,
};
pub use word::{w, Symbol, Word, WordParseError, WordsOfLength};

/// `1^n`, the precision token for accuracy `2^-n`.
pub fn unary(n: u64) -> Word {
    Word::unary(n as usize)
}

/// Decodes a precision token.
pub fn decode_unary(word: &Word) -> Option<u64> {
    word.as_unary().map(|n| n as u64)
}
