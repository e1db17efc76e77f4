use std::fmt;
use std::sync::Arc;

use crate::encodings::{
    decode_dyadic, encode_dyadic, project, CapExceeded, Dyadic, LengthFn, Side, Symbol, Word,
};
use crate::machine::{run, CostModel, CostTrace, Interrupt, Name, Operator, Oracle};

use super::exact::SharedFunction;
use super::xic::{parse_xic_query, xic_query, XicName};

pub type Approximation = Arc<dyn Fn(&Dyadic, u64) -> Dyadic + Send + Sync>;

/// A length-monotone name `⟨ψ, ψ′⟩`: `ψ(1^n)` has length a modulus at `n`,
/// `ψ′(1^n##r)` is within `2^-n` of `f(r)`.
#[derive(Clone)]
pub struct KcName {
    pub name: Name,
    pub psi: Name,
    pub psi_prime: Name,
    /// Every answer to a query of length `k` has length exactly `answer_len(k)`.
    pub answer_len: LengthFn,
    pub modulus: LengthFn,
    pub function: Option<SharedFunction>,
}

impl fmt::Debug for KcName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KcName({})", self.name.label())
    }
}

impl KcName {
    pub fn label(&self) -> &str {
        self.name.label()
    }
}

/// Builds a name from a modulus `μ` and `approx` with `|approx(r,n) − f(r)| ≤ 2^-n`.
///
/// All answers at query length `k` are padded to a common length `T(k)`:
/// `T(0) = 0`, otherwise the larger of `μ(k−1)` and, from `k = 6` on, the longest
/// approximation that fits (`int_len + k − 3`, with `int_len` the numeral length
/// of `sup_abs + 1`). `ψ(1^n)` is `1^T(n+1)`, so `|ψ(1^n)| ≥ μ(n)`. Approximations
/// are re-truncated to `n + 1` bits and padded with trailing fraction zeros.
/// Words starting with `#` answer `1^T(k)` rather than `ε`.
pub fn kc_from(
    label: impl Into<String>,
    modulus: LengthFn,
    approx: Approximation,
    sup_abs: &Dyadic,
    function: Option<SharedFunction>,
) -> KcName {
    let int_len = (&sup_abs.abs() + &Dyadic::one()).integer_numeral_len();
    let mu = modulus.clone();
    let t = LengthFn::from_fn("kc padding", move |k| {
        if k == 0 {
            return 0;
        }
        let approx_len = if k >= 6 { int_len + k - 3 } else { 0 };
        mu.eval(k - 1).max(approx_len)
    });
    let tt = t.clone();
    let name = Name::new(label, move |a: &Word| {
        let k = a.len() as u64;
        let total = tt.eval(k) as usize;
        if a.first() == Some(Symbol::One) {
            if let Some((n, r)) = parse_xic_query(&a.suffix_from(1)) {
                let q = approx(&r, n + 1).truncate(n + 1);
                let bare = encode_dyadic(&q, 0);
                let frac = (q.fraction_bits() as usize + total).saturating_sub(bare.len());
                let word = encode_dyadic(&q, frac);
                debug_assert_eq!(word.len(), total, "approximation longer than its padding");
                return word;
            }
        }
        if a.is_empty() {
            Word::empty()
        } else {
            Word::unary(total)
        }
    })
    .with_declared_length(t.clone());
    KcName {
        psi: project(&name, Side::Left),
        psi_prime: project(&name, Side::Right),
        name,
        answer_len: t,
        modulus,
        function,
    }
}

/// `kc_from` with exact values as approximations.
pub fn kc_from_exact(f: SharedFunction, modulus: LengthFn) -> KcName {
    let g = f.clone();
    let approx: Approximation = Arc::new(move |r: &Dyadic, _n: u64| g.value(r));
    kc_from(f.label(), modulus, approx, &f.sup_abs(), Some(f))
}

/// Exhaustive check of `|a| ≤ |b| ⇒ |φ(a)| ≤ |φ(b)|` over words of length ≤ `n_max`.
pub fn is_length_monotone(phi: &Name, n_max: usize, cap: usize) -> Result<bool, CapExceeded> {
    if n_max > cap {
        return Err(CapExceeded { requested: n_max, cap });
    }
    let mut longest_below = 0usize;
    for k in 0..=n_max {
        let mut shortest = usize::MAX;
        let mut longest = 0usize;
        for a in Word::all_of_length(k) {
            let l = phi.query(&a).len();
            shortest = shortest.min(l);
            longest = longest.max(l);
        }
        if shortest < longest_below {
            return Ok(false);
        }
        longest_below = longest_below.max(longest);
    }
    Ok(true)
}

struct ModulusOp {
    n: u64,
}

impl Operator for ModulusOp {
    fn id(&self) -> String {
        "kc-modulus".into()
    }

    fn apply(&self, oracle: &mut Oracle<'_>, _input: &Word) -> Result<Word, Interrupt> {
        let answer = oracle.ask(&Word::unary(self.n as usize).prepend(Symbol::Zero))?;
        Ok(Word::unary(answer.len()))
    }
}

/// `|ψ(1^n)|` by a single query.
pub fn kc_modulus(kc: &KcName, n: u64) -> (u64, CostTrace) {
    let r = run(&ModulusOp { n }, &kc.name, &Word::empty(), CostModel::default()).expect("modulus operator does not fault");
    (r.output.len() as u64, r.trace)
}

/// The translation to the interval representation, as an operator on a KC name.
///
/// On `1^n##r`: `m := |ψ(1^(n+1))|`, `q := ψ′(1^(n+1)##r)`, answer `1^m##q`.
/// On `1^k`: `1^pad(k)` with `pad(k) = T(k+2)` for `k < 5` and
/// `T(k−3) + 2 + T(k+2)` from there on, which is the longest answer to a
/// query of length `k`. Other words: `ε`.
pub struct KcToXic {
    answer_len: LengthFn,
}

impl KcToXic {
    pub fn new(kc: &KcName) -> KcToXic {
        KcToXic { answer_len: kc.answer_len.clone() }
    }

    pub fn padding(&self) -> LengthFn {
        let t = self.answer_len.clone();
        LengthFn::from_fn("kc→xic length", move |k| {
            if k >= 5 {
                t.eval(k - 3) + 2 + t.eval(k + 2)
            } else {
                t.eval(k + 2)
            }
        })
    }
}

impl Operator for KcToXic {
    fn id(&self) -> String {
        "kc-to-xic".into()
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        if let Some(k) = input.as_unary() {
            return Ok(Word::unary(self.padding().eval(k as u64) as usize));
        }
        let Some((n, _)) = parse_xic_query(input) else {
            return Ok(Word::empty());
        };
        let token = Word::unary(n as usize + 1);
        let m = oracle.ask(&token.prepend(Symbol::Zero))?.len() as u64;
        // r is forwarded verbatim
        let r_word = input.suffix_from(n as usize + 2);
        let q = oracle.ask(&xic_query(n + 1, &r_word).prepend(Symbol::One))?;
        decode_dyadic(&q).map_err(|e| Interrupt::Fault(e.to_string()))?;
        Ok(xic_query(m, &q))
    }
}

pub fn kc_to_xic(kc: &KcName) -> XicName {
    let op = KcToXic::new(kc);
    let length = op.padding();
    let source = kc.name.clone();
    let name = Name::new(format!("xic({})", kc.label()), move |a: &Word| match run(&op, &source, a, CostModel::default()) {
        Ok(r) => r.output,
        Err(_) => Word::empty(),
    })
    .with_declared_length(length.clone());
    let t = kc.answer_len.clone();
    XicName {
        name,
        length,
        length_exact: true,
        modulus: LengthFn::from_fn("kc modulus", move |n| t.eval(n + 1)),
        function: kc.function.clone(),
    }
}
