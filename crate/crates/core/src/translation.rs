//! From an evaluator over any representation to a producer of interval names.
//!
//! The evaluator is simulated with its real-number oracle answered by
//! truncations of the query point `r`; the deepest truncation it asked for
//! becomes the stability radius of the answer. Inputs that are not queries
//! are padded to a length the evaluator's budget cannot outgrow.

use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::encodings::{encode_dyadic, pair, Dyadic, LengthFn, Symbol, Word};
use crate::funcrep::{parse_xic_query, xic_query, SharedFunction, XicName};
use crate::machine::{run_budgeted, Budget, CostModel, Name, Operator, Outcome};
use crate::sopoly::{HyperLinearWitness, IntPoly};

pub const DEFAULT_LOOKAHEAD_CAP: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("lookahead {c} exceeds the cap {cap} (the padding branch makes 2·3^C queries)")]
    LookaheadTooLarge { c: u64, cap: u64 },
}

/// What went wrong in one simulated evaluation. The produced name answers `ε`
/// on that query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationFault {
    /// The evaluator overran `p(|φ|(n+C) + n)`: the witness is false.
    BudgetExceeded { query: Word, budget: u64, spent: u64 },
    Operator { query: Word, message: String },
}

impl fmt::Display for TranslationFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslationFault::BudgetExceeded { query, budget, spent } => {
                write!(f, "on {query}: budget {budget} exceeded (spent {spent})")
            }
            TranslationFault::Operator { query, message } => write!(f, "on {query}: {message}"),
        }
    }
}

/// One simulated evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainRun {
    pub n: u64,
    pub r: Dyadic,
    /// One more than the largest real-number precision asked, 0 if none.
    pub m: u64,
    pub cost: u64,
    pub budget: u64,
}

#[derive(Default)]
struct Journal {
    runs: Vec<MainRun>,
    faults: Vec<TranslationFault>,
}

pub struct Translation {
    pub name: Name,
    /// `n ↦ p(|φ(1^(n+C))| + n)`, the padding answer on `1^n`; a lower bound
    /// for the produced name's length.
    pub length_lower: LengthFn,
    pub witness: HyperLinearWitness,
    journal: Arc<Mutex<Journal>>,
}

impl Translation {
    pub fn runs(&self) -> Vec<MainRun> {
        self.journal.lock().expect("journal").runs.clone()
    }

    pub fn faults(&self) -> Vec<TranslationFault> {
        self.journal.lock().expect("journal").faults.clone()
    }

    /// The produced name as an interval name of `function`, for validation.
    pub fn as_xic(&self, function: Option<SharedFunction>) -> XicName {
        XicName {
            name: self.name.clone(),
            length: self.length_lower.clone(),
            length_exact: false,
            modulus: self.length_lower.shifted(1),
            function,
        }
    }
}

/// `a` with the symbol after its first `#` replaced by `#`; `a` itself when
/// there is no `#` or it is last.
pub fn hash_variant(a: &Word) -> Word {
    match a.position(Symbol::Hash) {
        Some(p) if p + 1 < a.len() => {
            let mut syms: Vec<Symbol> = a.symbols().collect();
            syms[p + 1] = Symbol::Hash;
            Word::from_symbols(syms)
        }
        _ => a.clone(),
    }
}

/// All words of length `c` over `{0,1,#}`.
fn prefixes(c: u64) -> Vec<Word> {
    Word::all_of_length(c as usize).collect()
}

/// The name of `r` the simulated evaluator sees: `1^k ↦ r` truncated to
/// `k + 1` fraction bits. Every `x` within `2^-(k+1)` of `r` has a name
/// giving the same answer up to precision `k`.
pub fn truncation_name(r: &Dyadic) -> Name {
    let r = r.clone();
    Name::new(format!("truncations of {r}"), move |a: &Word| match a.as_unary() {
        Some(k) => encode_dyadic(&r.truncate(k as u64 + 1), k + 1),
        None => Word::empty(),
    })
}
/// Realises the translation around `eval_op`, which must compute `f(x)` to
/// `2^-n` on `⟨φ, ψ⟩` and input `1^n` within `p(|φ|(n+C) + n)` for every name
/// `ψ` of `x`, `phi_length` being `|φ|`.
pub fn generic_translate<O>(
    eval_op: O,
    witness: HyperLinearWitness,
    phi: &Name,
    phi_length: LengthFn,
) -> Result<Translation, TranslateError>
where
    O: Operator + Send + Sync + 'static,
{
    generic_translate_capped(eval_op, witness, phi, phi_length, DEFAULT_LOOKAHEAD_CAP)
}

pub fn generic_translate_capped<O>(
    eval_op: O,
    witness: HyperLinearWitness,
    phi: &Name,
    phi_length: LengthFn,
    cap: u64,
) -> Result<Translation, TranslateError>
where
    O: Operator + Send + Sync + 'static,
{
    if witness.c > cap {
        return Err(TranslateError::LookaheadTooLarge { c: witness.c, cap });
    }
    let phi = phi.fresh();
    let journal = Arc::new(Mutex::new(Journal::default()));
    let (p, c) = (witness.p.clone(), witness.c);
    let cs = prefixes(c);

    let lower = {
        let (phi, p) = (phi.clone(), p.clone());
        LengthFn::from_fn(format!("{}(|φ(1^(n+{c}))|+n)", p), move |n| {
            let m = phi.query(&Word::unary((n + c) as usize)).len() as u64;
            p.eval(m + n)
        })
    };

    let j = journal.clone();
    let w = witness.clone();
    let name = Name::new(format!("translated({})", eval_op.id()), move |a: &Word| match parse_xic_query(a) {
        Some((n, r)) => main_branch(&eval_op, &w, &phi, &phi_length, &j, a, n, &r),
        None => junk_branch(&phi, &p, &cs, a),
    });
    Ok(Translation { name, length_lower: lower, witness, journal })
}

#[allow(clippy::too_many_arguments)]
fn main_branch<O: Operator>(
    op: &O,
    w: &HyperLinearWitness,
    phi: &Name,
    phi_length: &LengthFn,
    journal: &Mutex<Journal>,
    a: &Word,
    n: u64,
    r: &Dyadic,
) -> Word {
    let budget = w.bound(phi_length, n);
    let oracle = pair(phi, &truncation_name(r));
    let outcome = run_budgeted(op, &oracle, &Word::unary(n as usize), CostModel::default(), Budget::cost(budget));
    let mut j = journal.lock().expect("journal");
    match outcome {
        Ok(Outcome::Completed(run)) => {
            let right: Vec<u64> = run
                .log
                .queries()
                .filter(|q| q.first() == Some(Symbol::One))
                .filter_map(|q| q.suffix_from(1).as_unary())
                .map(|k| k as u64)
                .collect();
            let m = right.iter().max().map_or(0, |k| k + 1);
            j.runs.push(MainRun { n, r: r.clone(), m, cost: run.trace.abstract_cost, budget });
            xic_query(m, &run.output)
        }
        Ok(Outcome::Exhausted { trace, .. }) => {
            j.faults.push(TranslationFault::BudgetExceeded { query: a.clone(), budget, spent: trace.abstract_cost });
            Word::empty()
        }
        Err(f) => {
            j.faults.push(TranslationFault::Operator { query: a.clone(), message: f.message });
            Word::empty()
        }
    }
}

fn junk_branch(phi: &Name, p: &IntPoly, cs: &[Word], a: &Word) -> Word {
    let b = hash_variant(a);
    let m = cs
        .iter()
        .flat_map(|c| [c.concat(a), c.concat(&b)])
        .map(|q| phi.query(&q).len() as u64)
        .max()
        .unwrap_or(0);
    Word::unary(p.eval(m + a.len() as u64) as usize)
}

/// `K·(x+1)^2` with the least integer `K` covering every `(cost, x)` sample.
pub fn fit_quadratic(samples: impl IntoIterator<Item = (u64, u64)>) -> IntPoly {
    let k = samples
        .into_iter()
        .map(|(cost, x)| cost.div_ceil((x + 1) * (x + 1)))
        .max()
        .unwrap_or(1)
        .max(1);
    IntPoly::shifted_power(k, 2)
}
