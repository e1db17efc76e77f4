//! Evaluation of a function name at a real name to a requested precision.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::encodings::{decode_dyadic, encode_dyadic, pair, Dyadic, Symbol, Word};
use crate::funcrep::{parse_xic_answer, xic_query, AnswerError, XicName};
use crate::machine::{run, Answer, CostModel, CostTrace, Fault, Interrupt, Operator, Oracle, QueryLog};
use crate::reals::RealName;

/// How the approximation index advances after an answer with `m > i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// `i := i + 1`
    #[default]
    Increment,
    /// `i := m`, the precision the name asked for.
    Suggested,
}

impl FromStr for Schedule {
    type Err = String;

    fn from_str(s: &str) -> Result<Schedule, String> {
        match s {
            "inc" | "increment" => Ok(Schedule::Increment),
            "suggested" => Ok(Schedule::Suggested),
            other => Err(format!("unknown schedule {other:?} (expected inc or suggested)")),
        }
    }
}

/// The evaluation loop as an operator on `⟨φ, ψ⟩` with input `1^n`.
///
/// Iteration `i` asks `ψ(1^i)` for `x_i`, clamps it to `[0,1]`, asks
/// `φ(1^n##x_i)` and stops with `q` once the answer's `m` is at most `i`.
/// Under the increment schedule only the first `i + 1` cells of a rejected
/// answer are read.
#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOperator {
    pub schedule: Schedule,
}

fn fault(msg: impl Into<String>) -> Interrupt {
    Interrupt::Fault(msg.into())
}

impl EvalOperator {
    /// Position of the first `#` if it lies within the first `limit + 1`
    /// cells; `None` if those cells are all `1`.
    fn find_hash(oracle: &mut Oracle<'_>, h: Answer, limit: Option<usize>) -> Result<Option<usize>, Interrupt> {
        let mut j = 0usize;
        loop {
            if limit.is_some_and(|l| j > l) {
                return Ok(None);
            }
            match oracle.cell(h, j)? {
                Some(Symbol::One) => j += 1,
                Some(Symbol::Hash) => return Ok(Some(j)),
                _ => return Err(fault("function name answer is not of the form 1^m##q")),
            }
        }
    }
}

impl Operator for EvalOperator {
    fn id(&self) -> String {
        format!("eval/{:?}", self.schedule)
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        let n = input.as_unary().ok_or_else(|| fault("input is not a precision token"))?;
        let (zero, one) = (Dyadic::zero(), Dyadic::one());
        let mut i = 0usize;
        loop {
            let xw = oracle.ask(&Word::unary(i).prepend(Symbol::One))?;
            let x = decode_dyadic(&xw).map_err(|e| fault(format!("real name: {e}")))?;
            let x = x.clamped(&zero, &one);
            let h = oracle.query(&xic_query(n as u64, &encode_dyadic(&x, 0)).prepend(Symbol::Zero))?;
            let limit = match self.schedule {
                Schedule::Increment => Some(i),
                Schedule::Suggested => None,
            };
            match Self::find_hash(oracle, h, limit)? {
                Some(m) if m <= i => {
                    let answer = oracle.read_all(h)?;
                    let parsed = parse_xic_answer(&answer).map_err(|e| fault(e.to_string()))?;
                    return Ok(parsed.q_word);
                }
                Some(m) => i = m,
                None => i += 1,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Dyadic,
    pub word: Word,
    /// Number of `φ` queries, i.e. loop iterations.
    pub iterations: u64,
    pub trace: CostTrace,
    pub log: QueryLog,
}

/// `f(x)` within `2^-n`.
pub fn evaluate(phi: &XicName, psi: &RealName, n: u64, schedule: Schedule) -> Result<Evaluation, Fault> {
    let oracle = pair(&phi.name, &psi.name);
    let op = EvalOperator { schedule };
    let r = run(&op, &oracle, &Word::unary(n as usize), CostModel::default())?;
    let value = decode_dyadic(&r.output).map_err(|e| Fault { operator: op.id(), message: e.to_string() })?;
    let iterations = r.log.queries().filter(|q| q.first() == Some(Symbol::Zero)).count() as u64;
    Ok(Evaluation { value, word: r.output, iterations, trace: r.trace, log: r.log })
}

/// An integer `B` with `|f| ≤ B` on `[0,1]`, from one query at `1/2` with
/// radius 1 and the name's length at 1:
/// `B = ⌈|q|⌉ + 1 + 2^max(|φ|(1) − 1, 0)`.
pub fn range_bound(phi: &XicName) -> Result<BigUint, AnswerError> {
    let answer = phi.name.query(&xic_query(1, &Word::from_str("00#1").expect("word")));
    let q = parse_xic_answer(&answer)?.q;
    let ceil_abs: BigInt = q.abs().ceil();
    let steps = BigUint::from(1u8) << (phi.length.eval(1).saturating_sub(1) as usize);
    Ok(ceil_abs.abs().to_biguint().expect("nonnegative") + BigUint::from(1u8) + steps)
}
