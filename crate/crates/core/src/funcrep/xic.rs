use std::fmt;
use std::sync::Arc;

use crate::encodings::{decode_dyadic, encode_dyadic, Dyadic, DyadicError, LengthFn, Symbol, Word};
use crate::machine::Name;

use super::exact::{PiecewiseLinear, PwlError, Sawtooth, SharedFunction};

/// A name under the interval representation, with the data needed to check it.
#[derive(Clone)]
pub struct XicName {
    pub name: Name,
    /// The length of `name`. Exact unless `length_exact` is false, in which
    /// case it is a lower bound.
    pub length: LengthFn,
    pub length_exact: bool,
    /// A modulus of continuity of the carried function used by the construction.
    pub modulus: LengthFn,
    pub function: Option<SharedFunction>,
}

impl XicName {
    pub fn label(&self) -> &str {
        self.name.label()
    }

    /// `n ↦ |φ|(n+1)`, a modulus of continuity of the named function.
    pub fn length_modulus(&self) -> LengthFn {
        self.length.shifted(1)
    }

    /// Same answers, empty memo and log.
    pub fn fresh(&self) -> XicName {
        XicName { name: self.name.fresh(), ..self.clone() }
    }

    pub fn query(&self, n: u64, r: &Dyadic) -> Word {
        self.name.query(&xic_query(n, &encode_dyadic(r, 0)))
    }
}

impl fmt::Debug for XicName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XicName({})", self.name.label())
    }
}

/// `1^n ## r`
pub fn xic_query(n: u64, r: &Word) -> Word {
    let mut a = Word::unary(n as usize);
    a.push(Symbol::Hash);
    a.push(Symbol::Hash);
    a.extend(r);
    a
}

/// Splits `1^n ## rest`.
fn split_token(a: &Word) -> Option<(u64, Word)> {
    let p = a.position(Symbol::Hash)?;
    if a.prefix(p).as_unary().is_none() || a.symbol(p + 1) != Some(Symbol::Hash) {
        return None;
    }
    Some((p as u64, a.suffix_from(p + 2)))
}

/// A well-formed `1^n ## r` with `r ∈ [0,1]`.
pub fn parse_xic_query(a: &Word) -> Option<(u64, Dyadic)> {
    let (n, rw) = split_token(a)?;
    let r = decode_dyadic(&rw).ok()?;
    r.in_unit_interval().then_some((n, r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XicAnswer {
    pub m: u64,
    pub q: Dyadic,
    pub q_word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnswerError {
    #[error("answer {0:?} is not of the form 1^m##q")]
    Shape(Word),
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
}

pub fn parse_xic_answer(a: &Word) -> Result<XicAnswer, AnswerError> {
    let (m, q_word) = split_token(a).ok_or_else(|| AnswerError::Shape(a.clone()))?;
    let q = decode_dyadic(&q_word)?;
    Ok(XicAnswer { m, q, q_word })
}

/// `1^m ## q`
pub fn xic_answer(m: u64, q: &Dyadic) -> Word {
    xic_query(m, &encode_dyadic(q, 0))
}

pub type IntervalEvaluator = Arc<dyn Fn(&Dyadic, u64) -> (Dyadic, u64) + Send + Sync>;

/// Bounds an interval evaluator warrants.
#[derive(Clone, Debug)]
pub struct EvaluatorBounds {
    /// `m ≤ m_bound(n)` for every answer at precision `n`.
    pub m_bound: LengthFn,
    /// `|encode(q)| ≤ q_len(n)` for every answer at precision `n`.
    pub q_len: LengthFn,
}

/// Length of the padding answer on `1^k`; covers every condition-1 answer at
/// query length `k` (which has precision at most `k − 5`).
fn padded_length(bounds: &EvaluatorBounds) -> LengthFn {
    let b = bounds.clone();
    LengthFn::from_fn("xic padding", move |k| {
        let forced = if k >= 5 { b.m_bound.eval(k - 5) + 2 + b.q_len.eval(k - 5) } else { 0 };
        b.m_bound.eval(k).max(forced)
    })
}

/// Wraps `F: (r, n) ↦ (q, m)` with `f([r ± 2^-m] ∩ [0,1]) ⊆ [q ± 2^-n]`.
///
/// `1^k` answers `1^pad(k)`, so the length is exactly `pad` and every `m` is
/// at most the length at its precision. Other words answer `ε`.
pub fn xic_from_interval_evaluator(
    label: impl Into<String>,
    evaluator: IntervalEvaluator,
    bounds: EvaluatorBounds,
    modulus: LengthFn,
) -> XicName {
    let pad = padded_length(&bounds);
    let p = pad.clone();
    let name = Name::new(label, move |a: &Word| {
        if let Some(k) = a.as_unary() {
            return Word::unary(p.eval(k as u64) as usize);
        }
        match parse_xic_query(a) {
            Some((n, r)) => {
                let (q, m) = evaluator(&r, n);
                xic_answer(m, &q)
            }
            None => Word::empty(),
        }
    })
    .with_declared_length(pad.clone());
    XicName { name, length: pad, length_exact: true, modulus, function: None }
}

/// Answers `(trunc(f(r), n+1), μ(n+1))` where `μ` is a modulus of `f`.
pub fn xic_from_exact(f: SharedFunction, modulus: LengthFn) -> XicName {
    let int_len = f.sup_abs().integer_numeral_len();
    let (g, mu) = (f.clone(), modulus.clone());
    let evaluator: IntervalEvaluator =
        Arc::new(move |r: &Dyadic, n: u64| (g.value(r).truncate(n + 1), mu.eval(n + 1)));
    let bounds = EvaluatorBounds {
        m_bound: modulus.shifted(1),
        q_len: LengthFn::from_fn(format!("n+{}", int_len + 3), move |n| n + int_len + 3),
    };
    let mut x = xic_from_interval_evaluator(f.label(), evaluator, bounds, modulus);
    x.function = Some(f);
    x
}

pub fn xic_zero() -> XicName {
    xic_from_exact(Arc::new(PiecewiseLinear::constant(Dyadic::zero()).with_label("zero")), LengthFn::constant(0))
}

pub fn xic_identity() -> XicName {
    xic_from_exact(Arc::new(PiecewiseLinear::identity()), LengthFn::identity())
}

/// The sawtooth with modulus `2n + 3`.
pub fn xic_sawtooth() -> XicName {
    xic_from_exact(Arc::new(Sawtooth), LengthFn::affine(2, 3))
}

/// A piecewise-linear function with modulus `n + s`, `2^s` bounding its slopes.
pub fn xic_pwl(f: PiecewiseLinear) -> XicName {
    let s = f.slope_log2();
    let flat = f.slopes().iter().all(Dyadic::is_zero);
    let modulus = if flat { LengthFn::constant(0) } else { LengthFn::affine(1, s) };
    xic_from_exact(Arc::new(f), modulus)
}

/// The tent of given height and slope centred in `[lo, hi]`, zero elsewhere.
pub fn xic_bump(lo: &Dyadic, hi: &Dyadic, height: &Dyadic, slope: &Dyadic) -> Result<XicName, PwlError> {
    let center = Dyadic::midpoint(lo, hi);
    let half = height.checked_div(slope).ok_or(PwlError::NonDyadicSlope(0))?;
    if &center - &half < *lo || &center + &half > *hi {
        return Err(PwlError::Bump);
    }
    Ok(xic_pwl(PiecewiseLinear::bump(&center, height, slope)?))
}

/// The hand-written name of the zero function used by the modulus argument:
/// `1^(n+1)##r ↦ 1^n##00#`, with `##r ↦ ##00#` and `1^k ↦ 1^(k+1)` added so
/// that both defining conditions hold. Its length is exactly `n + 1`.
pub fn tight_zero_name() -> XicName {
    let name = Name::new("zero (hand-written)", |a: &Word| {
        if let Some(k) = a.as_unary() {
            return Word::unary(k + 1);
        }
        match parse_xic_query(a) {
            Some((n, _)) => xic_answer(n.saturating_sub(1), &Dyadic::zero()),
            None => Word::empty(),
        }
    });
    let length = LengthFn::affine(1, 1);
    XicName {
        name: name.with_declared_length(length.clone()),
        length,
        length_exact: true,
        modulus: LengthFn::constant(0),
        function: Some(Arc::new(PiecewiseLinear::constant(Dyadic::zero()).with_label("zero"))),
    }
}

/// The zero function's name, corrupted to answer `q = 1` at precision 2.
pub fn broken_zero_name() -> XicName {
    let good = xic_zero();
    let inner = good.name.clone();
    let name = Name::new("zero (corrupted at n = 2)", move |a: &Word| match parse_xic_query(a) {
        Some((2, _)) => xic_answer(0, &Dyadic::one()),
        _ => inner.query(a),
    });
    XicName { name: name.with_declared_length(good.length.clone()), ..good }
}
