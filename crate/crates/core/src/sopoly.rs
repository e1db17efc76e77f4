//! Second-order polynomials in `n` and a length variable `l`, and a
//! hyper-linearity check `P(l, n) ≤ p(l(n+C) + n)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::encodings::LengthFn;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoPoly {
    Const(u64),
    N,
    L(Box<SoPoly>),
    Add(Box<SoPoly>, Box<SoPoly>),
    Mul(Box<SoPoly>, Box<SoPoly>),
}

impl std::ops::Add for SoPoly {
    type Output = SoPoly;

    fn add(self, rhs: SoPoly) -> SoPoly {
        SoPoly::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for SoPoly {
    type Output = SoPoly;

    fn mul(self, rhs: SoPoly) -> SoPoly {
        SoPoly::Mul(Box::new(self), Box::new(rhs))
    }
}

impl SoPoly {
    pub fn l(arg: SoPoly) -> SoPoly {
        SoPoly::L(Box::new(arg))
    }


    /// Saturating evaluation.
    pub fn eval(&self, l: &LengthFn, n: u64) -> u64 {
        match self {
            SoPoly::Const(c) => *c,
            SoPoly::N => n,
            SoPoly::L(a) => l.eval(a.eval(l, n)),
            SoPoly::Add(a, b) => a.eval(l, n).saturating_add(b.eval(l, n)),
            SoPoly::Mul(a, b) => a.eval(l, n).saturating_mul(b.eval(l, n)),
        }
    }

    /// Depth of `l`-nesting.
    pub fn l_depth(&self) -> usize {
        match self {
            SoPoly::Const(_) | SoPoly::N => 0,
            SoPoly::L(a) => 1 + a.l_depth(),
            SoPoly::Add(a, b) | SoPoly::Mul(a, b) => a.l_depth().max(b.l_depth()),
        }
    }

    /// The ordinary polynomial in `n`, if `l` does not occur.
    pub fn first_order(&self) -> Option<IntPoly> {
        match self {
            SoPoly::Const(c) => Some(IntPoly::new(vec![*c])),
            SoPoly::N => Some(IntPoly::new(vec![0, 1])),
            SoPoly::L(_) => None,
            SoPoly::Add(a, b) => Some(a.first_order()?.add(&b.first_order()?)),
            SoPoly::Mul(a, b) => Some(a.first_order()?.mul(&b.first_order()?)),
        }
    }

    /// Replaces every `n` and every `l(..)` by `x`.
    fn collapse(&self) -> IntPoly {
        match self {
            SoPoly::Const(c) => IntPoly::new(vec![*c]),
            SoPoly::N | SoPoly::L(_) => IntPoly::new(vec![0, 1]),
            SoPoly::Add(a, b) => a.collapse().add(&b.collapse()),
            SoPoly::Mul(a, b) => a.collapse().mul(&b.collapse()),
        }
    }

    fn l_args(&self, out: &mut Vec<SoPoly>) {
        match self {
            SoPoly::Const(_) | SoPoly::N => {}
            SoPoly::L(a) => out.push((**a).clone()),
            SoPoly::Add(a, b) | SoPoly::Mul(a, b) => {
                a.l_args(out);
                b.l_args(out);
            }
        }
    }
}

impl fmt::Display for SoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoPoly::Const(c) => write!(f, "{c}"),
            SoPoly::N => write!(f, "n"),
            SoPoly::L(a) => write!(f, "l({a})"),
            SoPoly::Add(a, b) => write!(f, "{a}+{b}"),
            SoPoly::Mul(a, b) => {
                let wrap = |p: &SoPoly, f: &mut fmt::Formatter<'_>| match p {
                    SoPoly::Add(..) => write!(f, "({p})"),
                    _ => write!(f, "{p}"),
                };
                wrap(a, f)?;
                write!(f, "*")?;
                wrap(b, f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {:?}", c as char))
        }
    }

    fn sum(&mut self) -> Result<SoPoly, ParseError> {
        let mut acc = self.product()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = acc + self.product()?;
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<SoPoly, ParseError> {
        let mut acc = self.atom()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.atom()?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<SoPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'n' | b'x') => {
                self.pos += 1;
                Ok(SoPoly::N)
            }
            Some(b'l') => {
                self.pos += 1;
                self.expect(b'(')?;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(SoPoly::l(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                match text.parse() {
                    Ok(v) => Ok(SoPoly::Const(v)),
                    Err(_) => self.err("constant out of range"),
                }
            }
            Some(c) => self.err(format!("unexpected {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

impl FromStr for SoPoly {
    type Err = ParseError;

    /// Integers, `n` (or `x`), `l(...)`, `+`, `*` and parentheses.
    fn from_str(s: &str) -> Result<SoPoly, ParseError> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.sum()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

/// A polynomial with nonnegative integer coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<u64>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<u64>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// `c·x^d`
    pub fn monomial(c: u64, d: usize) -> IntPoly {
        let mut v = vec![0; d + 1];
        v[d] = c;
        IntPoly::new(v)
    }

    /// `c·(x+1)^d`
    pub fn shifted_power(c: u64, d: usize) -> IntPoly {
        let base = IntPoly::new(vec![1, 1]);
        let mut acc = IntPoly::new(vec![c]);
        for _ in 0..d {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0u64, |acc, &c| acc.saturating_mul(x).saturating_add(c))
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &IntPoly, i: usize| p.coeffs.get(i).copied().unwrap_or(0);
        IntPoly::new((0..len).map(|i| get(self, i).saturating_add(get(other, i))).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::new(vec![]);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].saturating_add(a.saturating_mul(*b));
            }
        }
        IntPoly::new(out)
    }

    pub fn as_length(&self) -> LengthFn {
        let p = self.clone();
        LengthFn::from_fn(format!("p(x)={self}"), move |x| p.eval(x))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(d, c)| match d {
                0 => c.to_string(),
                1 if *c == 1 => "x".to_string(),
                1 => format!("{c}*x"),
                _ if *c == 1 => format!("x^{d}"),
                _ => format!("{c}*x^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntPolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("polynomial mentions l")]
    SecondOrder,
}

impl FromStr for IntPoly {
    type Err = IntPolyError;

    /// Same syntax as [`SoPoly`] without `l`; `x` and `n` both name the variable.
    fn from_str(s: &str) -> Result<IntPoly, IntPolyError> {
        s.parse::<SoPoly>()?.first_order().ok_or(IntPolyError::SecondOrder)
    }
}

/// `(p, C)` claiming `P(l, n) ≤ p(l(n+C) + n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperLinearWitness {
    pub p: IntPoly,
    pub c: u64,
}

impl HyperLinearWitness {
    pub fn new(p: IntPoly, c: u64) -> HyperLinearWitness {
        HyperLinearWitness { p, c }
    }

    pub fn bound(&self, l: &LengthFn, n: u64) -> u64 {
        self.p.eval(l.eval(n.saturating_add(self.c)).saturating_add(n))
    }
}

impl fmt::Display for HyperLinearWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p(x)={}, C={}", self.p, self.c)
    }
}

/// A sufficient syntactic condition: no nested `l`, and every `l`-argument is
/// `n + c` or a constant `c`. The derived witness takes `C` as the largest
/// such `c` and `p` as `P` with every atom replaced by `x`, which bounds `P`
/// because each atom is at most `l(n+C) + n`.
pub fn structural_witness(poly: &SoPoly) -> Option<HyperLinearWitness> {
    if poly.l_depth() > 1 {
        return None;
    }
    let mut args = Vec::new();
    poly.l_args(&mut args);
    let mut c = 0u64;
    for a in &args {
        let lin = a.first_order()?;
        if lin.degree() > 1 || lin.coeffs().get(1).copied().unwrap_or(0) > 1 {
            return None;
        }
        c = c.max(lin.coeffs().first().copied().unwrap_or(0));
    }
    Some(HyperLinearWitness { p: poly.collapse(), c })
}

#[derive(Debug, Clone)]
pub struct Separation {
    pub l: LengthFn,
    pub n: u64,
    pub lhs: u64,
    pub rhs: u64,
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l = {}, n = {}: P = {} > {}", self.l.label(), self.n, self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone)]
pub struct HyperLinearReport {
    pub checked: usize,
    pub first_violation: Option<Separation>,
}

impl HyperLinearReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks the witness bound at every `(l, n)` in the sample.
pub fn check_hyper_linear(poly: &SoPoly, w: &HyperLinearWitness, sample: &[(LengthFn, u64)]) -> HyperLinearReport {
    for (i, (l, n)) in sample.iter().enumerate() {
        let (lhs, rhs) = (poly.eval(l, *n), w.bound(l, *n));
        if lhs > rhs {
            return HyperLinearReport {
                checked: i + 1,
                first_violation: Some(Separation { l: l.clone(), n: *n, lhs, rhs }),
            };
        }
    }
    HyperLinearReport { checked: sample.len(), first_violation: None }
}

/// Six length functions times five values of `n`.
pub fn sample_grid() -> Vec<(LengthFn, u64)> {
    let ls = [
        LengthFn::constant(0),
        LengthFn::constant(7),
        LengthFn::identity(),
        LengthFn::affine(2, 1),
        LengthFn::from_fn("n^2", |n| n.saturating_mul(n)),
        LengthFn::step(Some(3), 100),
    ];
    let ns = [0, 1, 4, 9, 20];
    ls.iter().flat_map(|l| ns.iter().map(move |n| (l.clone(), *n))).collect()
}

pub const MAX_JUMP_LOG2: u32 = 20;

/// Searches step length functions for `(l, n)` with `P(l, n) > p(l(n+C) + n)`.
///
/// First single steps `0` up to `k`, `M` after, for `k ∈ [−1, n+C+4]`,
/// `M = 1, 2, 4, …, 2^20` and `n ≤ C + 8`. Then two-level steps `a` up to `k`,
/// `M` after, with `a ∈ [1, n+C+5]`, which is what defeats nested `l`.
pub fn separating_length(poly: &SoPoly, w: &HyperLinearWitness) -> Option<Separation> {
    let n_max = w.c + 8;
    let try_l = |l: LengthFn, n: u64| {
        let (lhs, rhs) = (poly.eval(&l, n), w.bound(&l, n));
        (lhs > rhs).then_some(Separation { l, n, lhs, rhs })
    };
    for n in 0..=n_max {
        for k in -1..=(n + w.c + 4) as i64 {
            for e in 0..=MAX_JUMP_LOG2 {
                let m = 1u64 << e;
                let k = (k >= 0).then_some(k as u64);
                if let Some(s) = try_l(LengthFn::step(k, m), n) {
                    return Some(s);
                }
            }
        }
    }
    for n in 0..=n_max {
        for k in 0..=n + w.c + 4 {
            for a in 1..=n + w.c + 5 {
                for e in 0..=MAX_JUMP_LOG2 {
                    let m = (1u64 << e).max(a);
                    if let Some(s) = try_l(LengthFn::steps(vec![(0, a), (k + 1, m)]), n) {
                        return Some(s);
                    }
                }
            }
        }
    }
    None
}

/// `c·(x+1)^d` for `c ∈ {1,2,5,10}`, `d ∈ {1,2,3}`, with `C ∈ 0..=4`.
pub fn witness_family() -> Vec<HyperLinearWitness> {
    let mut out = Vec::new();
    for c in [1, 2, 5, 10] {
        for d in 1..=3 {
            for lookahead in 0..=4 {
                out.push(HyperLinearWitness::new(IntPoly::shifted_power(c, d), lookahead));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SoPoly {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("l(n)+n").eval(&LengthFn::identity(), 4), 8);
        assert_eq!(p("l(l(n))").eval(&LengthFn::affine(1, 1), 0), 2);
        assert_eq!(p("l(n)*n+3").eval(&LengthFn::affine(2, 0), 5), 53);
        assert_eq!(p("2*(n+1)").eval(&LengthFn::identity(), 3), 8);
    }

    #[test]
    fn parse_errors() {
        assert!("l(n".parse::<SoPoly>().is_err());
        assert!("n+".parse::<SoPoly>().is_err());
        assert!("n n".parse::<SoPoly>().is_err());
        assert!("-1".parse::<SoPoly>().is_err());
        assert_eq!("l(x)".parse::<IntPoly>(), Err(IntPolyError::SecondOrder));
    }

    #[test]
    fn display_round_trips() {
        for s in ["l(n)+n", "5*l(n+2)+n*n", "l(n+3)*n", "(n+1)*(l(l(n))+2)"] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s}");
        }
    }

    #[test]
    fn int_poly() {
        let q: IntPoly = "x*x+5*x".parse().unwrap();
        assert_eq!(q.coeffs(), &[0, 5, 1]);
        assert_eq!(q.eval(3), 24);
        assert_eq!(IntPoly::shifted_power(2, 2).coeffs(), &[2, 4, 2]);
        assert_eq!(q.to_string(), "5*x+x^2");
        assert_eq!(IntPoly::new(vec![]).eval(9), 0);
        assert_eq!(IntPoly::monomial(1, 2).eval(u64::MAX), u64::MAX);
    }

    #[test]
    fn structural() {
        let w = structural_witness(&p("5*l(n+2)+n*n")).unwrap();
        assert_eq!((w.p.coeffs(), w.c), (&[0u64, 5, 1][..], 2));
        assert!(separating_length(&p("5*l(n+2)+n*n"), &w).is_none());
        assert_eq!(structural_witness(&p("l(n+3)")).unwrap().c, 3);
        assert!(structural_witness(&p("l(2*n)")).is_none());
        assert!(structural_witness(&p("l(l(n))")).is_none());
    }

    #[test]
    fn step_falsifier() {
        let w = HyperLinearWitness::new(IntPoly::new(vec![0, 1]), 0);
        let s = separating_length(&p("l(2*n)"), &w).unwrap();
        let report = check_hyper_linear(&p("l(2*n)"), &w, &[(s.l.clone(), s.n)]);
        assert!(!report.holds());
        assert!(separating_length(&p("l(l(n))"), &w).is_some());
        assert!(separating_length(&p("l(n)+n"), &w).is_none());
    }
}
