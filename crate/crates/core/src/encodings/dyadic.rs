use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::word::{Symbol, Word};

/// An exact binary rational `num / 2^exp`.
///
/// Kept normalized: either `exp == 0` or `num` is odd, so equal values have
/// equal representations and `exp` is the number of significant fraction bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("malformed dyadic word {word:?}: {reason}")]
    Malformed { word: String, reason: &'static str },
    #[error("{0:?} is not an exact dyadic decimal")]
    NotDyadic(String),
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Dyadic {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp);
        if tz > 0 {
            num >>= tz as usize;
            exp -= tz;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Dyadic {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Dyadic {
        Dyadic { num: BigInt::from(v), exp: 0 }
    }

    pub fn from_bigint(v: BigInt) -> Dyadic {
        Dyadic { num: v, exp: 0 }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Dyadic {
        if k >= 0 {
            Dyadic { num: BigInt::one() << (k as usize), exp: 0 }
        } else {
            Dyadic { num: BigInt::one(), exp: k.unsigned_abs() }
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Number of significant fraction bits.
    pub fn fraction_bits(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    /// `self · 2^k`
    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp {
                Dyadic { num: self.num.clone(), exp: self.exp - k }
            } else {
                Dyadic { num: &self.num << ((k - self.exp) as usize), exp: 0 }
            }
        } else {
            Dyadic::new(self.num.clone(), self.exp + k.unsigned_abs())
        }
    }

    pub fn half(&self) -> Dyadic {
        self.mul_pow2(-1)
    }

    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).half()
    }

    /// Truncation toward zero to at most `n` fraction bits; off by less than `2^-n`.
    pub fn truncate(&self, n: u64) -> Dyadic {
        if self.exp <= n {
            return self.clone();
        }
        let shift = (self.exp - n) as usize;
        let mag = self.num.magnitude() >> shift;
        let num = BigInt::from_biguint(self.num.sign(), mag);
        Dyadic::new(num, n)
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&(BigInt::one() << (self.exp as usize)))
    }

    pub fn ceil(&self) -> BigInt {
        -((-&self.num).div_floor(&(BigInt::one() << (self.exp as usize))))
    }

    /// `floor(log2(self))` for positive values.
    pub fn floor_log2(&self) -> Option<i64> {
        if !self.is_positive() {
            return None;
        }
        Some(self.num.bits() as i64 - 1 - self.exp as i64)
    }

    /// Smallest `k` with `|self| <= 2^k`; `None` for zero.
    pub fn ceil_log2_abs(&self) -> Option<i64> {
        let a = self.abs();
        let f = a.floor_log2()?;
        Some(if a == Dyadic::pow2(f) { f } else { f + 1 })
    }

    /// Exact quotient when it is dyadic.
    pub fn checked_div(&self, other: &Dyadic) -> Option<Dyadic> {
        if other.is_zero() {
            return None;
        }
        let t = other.num.trailing_zeros().unwrap_or(0);
        let odd = &other.num >> (t as usize);
        let (q, r) = self.num.div_rem(&odd);
        if !r.is_zero() {
            return None;
        }
        // self/other = (q / 2^e_self) * 2^e_other / 2^t
        Some(Dyadic::new(q, self.exp).mul_pow2(other.exp as i64 - t as i64))
    }

    pub fn clamped(&self, lo: &Dyadic, hi: &Dyadic) -> Dyadic {
        if self < lo {
            lo.clone()
        } else if self > hi {
            hi.clone()
        } else {
            self.clone()
        }
    }

    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && *self <= Dyadic::one()
    }

    /// Length of the integer numeral of `|self|` in the word format (at least 1).
    pub fn integer_numeral_len(&self) -> u64 {
        let int = self.num.magnitude() >> (self.exp as usize);
        (int.bits()).max(1)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        n / 2f64.powi(self.exp.min(i32::MAX as u64) as i32)
    }

    /// Exact conversion from a decimal literal such as `-0.375`; fails if the
    /// literal is not a dyadic rational.
    pub fn from_decimal(s: &str) -> Result<Dyadic, DyadicError> {
        let err = || DyadicError::NotDyadic(s.to_string());
        let t = s.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_s, frac_s) = match body.split_once('.') {
            Some((a, b)) => (a, b),
            None => (body, ""),
        };
        if int_s.is_empty() && frac_s.is_empty() {
            return Err(err());
        }
        if !int_s.chars().chain(frac_s.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{}{}", if int_s.is_empty() { "0" } else { int_s }, frac_s);
        let mut num: BigInt = digits.parse().map_err(|_| err())?;
        // value = num / 10^k = num / (5^k 2^k)
        let k = frac_s.len() as u32;
        let five_k = BigInt::from(5u32).pow(k);
        let (q, r) = num.div_rem(&five_k);
        if !r.is_zero() {
            return Err(err());
        }
        num = q;
        if neg {
            num = -num;
        }
        Ok(Dyadic::new(num, k as u64))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        match self.exp.cmp(&other.exp) {
            Ordering::Equal => self.num.cmp(&other.num),
            Ordering::Less => (&self.num << ((other.exp - self.exp) as usize)).cmp(&other.num),
            Ordering::Greater => self.num.cmp(&(&other.num << ((self.exp - other.exp) as usize))),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u64) {
    let e = a.exp.max(b.exp);
    (
        &a.num << ((e - a.exp) as usize),
        &b.num << ((e - b.exp) as usize),
        e,
    )
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = aligned(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = aligned(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", encode_dyadic(self, 0))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Dyadic {
        Dyadic::from_int(v)
    }
}

/// Writes `d` as sign symbol, integer numeral, `#`, fraction bits; the fraction
/// is padded with trailing zeros up to `min_fraction_bits`.
pub fn encode_dyadic(d: &Dyadic, min_fraction_bits: usize) -> Word {
    let mag: &BigUint = d.num.magnitude();
    let exp = d.exp as usize;
    let int = mag >> exp;
    let frac_bits = exp.max(min_fraction_bits);
    let mut out = Vec::with_capacity(4 + int.bits() as usize + frac_bits);
    out.push(if d.num.sign() == Sign::Minus { b'1' } else { b'0' });
    if int.is_zero() {
        out.push(b'0');
    } else {
        out.extend_from_slice(int.to_str_radix(2).as_bytes());
    }
    out.push(b'#');
    if exp > 0 {
        let frac = mag - (&int << exp);
        let s = frac.to_str_radix(2);
        out.extend(std::iter::repeat_n(b'0', exp - s.len()));
        out.extend_from_slice(s.as_bytes());
    }
    out.extend(std::iter::repeat_n(b'0', frac_bits - exp));
    Word::from_valid_bytes(out)
}

/// Position of the `#` in a well-formed dyadic word.
pub fn check_dyadic_word(word: &Word) -> Result<usize, DyadicError> {
    let bad = |reason| DyadicError::Malformed { word: word.to_string(), reason };
    let b = word.as_bytes();
    let hashes = word.count(Symbol::Hash);
    if hashes != 1 {
        return Err(bad(if hashes == 0 { "no '#'" } else { "more than one '#'" }));
    }
    let m = word.position(Symbol::Hash).expect("one hash");
    if m < 2 {
        return Err(bad("missing sign symbol or integer numeral"));
    }
    let int = &b[1..m];
    if int.len() > 1 && int[0] == b'0' {
        return Err(bad("integer numeral has a leading zero"));
    }
    Ok(m)
}

pub fn decode_dyadic(word: &Word) -> Result<Dyadic, DyadicError> {
    let m = check_dyadic_word(word)?;
    let b = word.as_bytes();
    let int_digits = std::str::from_utf8(&b[1..m]).expect("ascii");
    let frac_digits = std::str::from_utf8(&b[m + 1..]).expect("ascii");
    let int = BigUint::parse_bytes(int_digits.as_bytes(), 2).expect("binary digits");
    let frac = if frac_digits.is_empty() {
        BigUint::zero()
    } else {
        BigUint::parse_bytes(frac_digits.as_bytes(), 2).expect("binary digits")
    };
    let k = frac_digits.len();
    let mag = (int << k) + frac;
    let sign = if b[0] == b'1' { Sign::Minus } else { Sign::Plus };
    Ok(Dyadic::new(BigInt::from_biguint(sign, mag), k as u64))
}

/// Number of fraction symbols after the `#`.
pub fn fraction_bit_count(word: &Word) -> Result<usize, DyadicError> {
    let m = check_dyadic_word(word)?;
    Ok(word.len() - m - 1)
}

/// The initial segment keeping `n` fraction bits; a `2^-n` approximation.
pub fn truncate_dyadic(word: &Word, n: usize) -> Result<Word, DyadicError> {
    let m = check_dyadic_word(word)?;
    Ok(word.prefix(m + 1 + n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::word::w;

    fn dy(num: i64, exp: u64) -> Dyadic {
        Dyadic::new(num, exp)
    }

    /// Independent place-value reading of a word, as an exact fraction `(num, den)`.
    fn place_value(word: &str) -> (i128, i128) {
        let (head, frac) = word.split_once('#').unwrap();
        let sign = if head.starts_with('1') { -1 } else { 1 };
        let mut int: i128 = 0;
        for c in head[1..].chars() {
            int = int * 2 + (c == '1') as i128;
        }
        let den: i128 = 1 << frac.len();
        let mut f: i128 = 0;
        for c in frac.chars() {
            f = f * 2 + (c == '1') as i128;
        }
        (sign * (int * den + f), den)
    }

    fn same_value(d: &Dyadic, (num, den): (i128, i128)) -> bool {
        // d = num/den  <=>  d * den == num
        (d * &Dyadic::from_int(den as i64)) == Dyadic::from_int(num as i64)
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_dyadic(&dy(1, 1), 1), w("00#1"));
        assert_eq!(encode_dyadic(&Dyadic::zero(), 0), w("00#"));
        assert_eq!(encode_dyadic(&dy(-5, 2), 2), w("11#01"));
        assert_eq!(encode_dyadic(&dy(1, 1), 3), w("00#100"));
    }

    #[test]
    fn negative_five_quarters_has_one_word() {
        // exactly one of the two candidate words reads as -5/4
        let target = dy(-5, 2);
        let a = same_value(&target, place_value("1101#01"));
        let b = same_value(&target, place_value("11#01"));
        assert!(!a && b);
        assert!(same_value(&dy(-21, 2), place_value("1101#01")));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_dyadic(&w("00#1")).unwrap(), dy(1, 1));
        assert_eq!(decode_dyadic(&w("00#")).unwrap(), Dyadic::zero());
        let v = decode_dyadic(&w("011#01")).unwrap();
        assert!(same_value(&v, place_value("011#01")));
        assert_eq!(v, dy(13, 2));
        assert_eq!(decode_dyadic(&w("10#1")).unwrap(), dy(-1, 1));
    }

    #[test]
    fn decode_rejects_junk() {
        for bad in ["", "0", "01", "0#", "#01", "00#1#", "001#1", "1##", "00"] {
            assert!(decode_dyadic(&w(bad)).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn truncate_examples() {
        assert_eq!(truncate_dyadic(&w("00#101"), 1).unwrap(), w("00#1"));
        assert_eq!(truncate_dyadic(&w("00#101"), 0).unwrap(), w("00#"));
        let t = truncate_dyadic(&w("011#011"), 2).unwrap();
        assert_eq!(t, w("011#01"));
        let err = (decode_dyadic(&w("011#011")).unwrap() - decode_dyadic(&t).unwrap()).abs();
        assert_eq!(err, dy(1, 3));
        assert!(err <= Dyadic::pow2(-2));
        assert_eq!(truncate_dyadic(&w("00#1"), 5).unwrap(), w("00#1"));
    }

    #[test]
    fn arithmetic() {
        let a = dy(3, 2);
        let b = dy(5, 3);
        assert_eq!(&a + &b, dy(11, 3));
        assert_eq!(&a - &b, dy(1, 3));
        assert_eq!(&a * &b, dy(15, 5));
        assert!(b < a);
        assert_eq!(dy(12, 0).checked_div(&dy(1, 3)), Some(Dyadic::from_int(96)));
        assert_eq!(dy(3, 1).checked_div(&dy(3, 3)), Some(Dyadic::from_int(4)));
        assert_eq!(Dyadic::one().checked_div(&Dyadic::from_int(3)), None);
        assert_eq!(dy(-7, 2).floor(), BigInt::from(-2));
        assert_eq!(dy(-7, 2).ceil(), BigInt::from(-1));
        assert_eq!(dy(7, 2).truncate(1), dy(3, 1));
        assert_eq!(dy(-7, 2).truncate(0), Dyadic::from_int(-1));
        assert_eq!(dy(3, 4).floor_log2(), Some(-3));
        assert_eq!(Dyadic::from_int(3).ceil_log2_abs(), Some(2));
        assert_eq!(Dyadic::from_int(4).ceil_log2_abs(), Some(2));
    }

    #[test]
    fn decimals() {
        assert_eq!(Dyadic::from_decimal("0.375").unwrap(), dy(3, 3));
        assert_eq!(Dyadic::from_decimal("-2.5").unwrap(), dy(-5, 1));
        assert_eq!(Dyadic::from_decimal("7").unwrap(), Dyadic::from_int(7));
        assert!(Dyadic::from_decimal("0.1").is_err());
        assert!(Dyadic::from_decimal("abc").is_err());
    }
}
