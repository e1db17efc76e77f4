//! Fooling constructions against budget-limited candidate operators.
//!
//! Each pipeline runs a candidate, inspects exactly what it read, and builds
//! a second oracle that agrees on everything read but names a different
//! object. The candidate's output is then contradicted with exact arithmetic.

mod composition;
mod length;
mod mirror;
mod modulus;

use std::collections::HashSet;
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::encodings::{CapExceeded, Dyadic, LengthFn, Word};
use crate::funcrep::{parse_xic_query, xic_answer, ExactFunction, PiecewiseLinear, XicName};
use crate::machine::{run_budgeted, Budget, CostModel, Fault, Interrupt, Name, Operator, Oracle, Outcome, QueryLog};

pub use composition::{fool_composition, fool_composition_with, GridComposer, SilentComposer, CompositionFool};
pub use length::{fool_length, length_margin, padding_function, LENGTH_CAP, ConstantOp, IdentityOnOracle, LengthFool, Padding};
pub use mirror::{f_then_g, mirror_demo, mirror_oracle, random_oracle, BudgetedNaive, FRef, GRef, MirrorDemo, PrefixPeek};
pub use modulus::{fool_modulus, fool_modulus_with, GridProbe, ModulusFool, NullExtractor};

/// `9·p(N) < 2^N`: every logged query excludes at most five grid cells, so a
/// clean one survives with room to spare.
pub const MARGIN: u64 = 9;

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("candidate {candidate} exceeded its budget {budget} on input {input}")]
    Budget { candidate: String, input: Word, budget: u64 },
    #[error("no clean interval among 2^{cells_log2} cells ({queries} queried points)")]
    NoCleanInterval { cells_log2: u64, queries: usize },
    #[error("no N ≤ {limit} satisfies the margin inequality")]
    NoMargin { limit: u64 },
    #[error("no unqueried word of length {0}")]
    NoUnqueriedWord(usize),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Fault(#[from] Fault),
}

/// What a pipeline found, in a form that can be printed.
#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub construction: String,
    pub candidate: String,
    pub n: u64,
    pub clean_region: Option<String>,
    pub fooling_names: Vec<String>,
    pub output_original: String,
    pub output_fooling: String,
    /// Both runs read exactly the same cells.
    pub identical_views: bool,
    /// `(claim, exact value)` lines certifying the contradiction.
    pub witness: Vec<(String, String)>,
    pub contradiction: bool,
    pub logs: Vec<(String, QueryLog)>,
}

impl CounterexampleReport {
    /// Identical views, identical outputs and a certified contradiction.
    pub fn fooled(&self) -> bool {
        self.identical_views && self.output_original == self.output_fooling && self.contradiction
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction: {}", self.construction)?;
        writeln!(f, "candidate: {}", self.candidate)?;
        writeln!(f, "N: {}", self.n)?;
        if let Some(r) = &self.clean_region {
            writeln!(f, "clean region: {r}")?;
        }
        for name in &self.fooling_names {
            writeln!(f, "fooling name: {name}")?;
        }
        writeln!(f, "output (original): {}", self.output_original)?;
        writeln!(f, "output (fooling): {}", self.output_fooling)?;
        writeln!(f, "identical views: {}", self.identical_views)?;
        for (claim, exact) in &self.witness {
            writeln!(f, "witness: {claim} | {exact}")?;
        }
        writeln!(f, "contradiction: {}", self.contradiction)?;
        writeln!(f, "fooled: {}", self.fooled())?;
        for (label, log) in &self.logs {
            writeln!(f, "--- log {label} ({} queries)", log.len())?;
            f.write_str(&log.export())?;
        }
        Ok(())
    }
}

/// What the operator saw: each query with the cells it read.
pub fn views_agree(a: &QueryLog, b: &QueryLog) -> bool {
    a.visible_view() == b.visible_view()
}

/// Runs under a cost budget; exhaustion is a budget violation.
pub(crate) fn run_within<O: Operator + ?Sized>(
    op: &O,
    oracle: &Name,
    input: &Word,
    budget: u64,
) -> Result<crate::machine::Run, AdversaryError> {
    match run_budgeted(op, oracle, input, CostModel::default(), Budget::cost(budget))? {
        Outcome::Completed(r) => Ok(r),
        Outcome::Exhausted { .. } => {
            Err(AdversaryError::Budget { candidate: op.id(), input: input.clone(), budget })
        }
    }
}

/// Asks `q` only when the answer fits what is left of `budget` after keeping
/// `reserve` for the output; `None` when it does not.
pub(crate) fn bounded_ask(
    oracle: &mut Oracle<'_>,
    q: &Word,
    budget: u64,
    reserve: u64,
) -> Result<Option<Word>, Interrupt> {
    let fixed = oracle.spent() + q.len() as u64 + 1 + reserve;
    if fixed > budget {
        return Ok(None);
    }
    let (answer, complete) = oracle.ask_prefix(q, (budget - fixed) as usize)?;
    Ok(complete.then_some(answer))
}

/// Least `N ≥ start` with `9·p(N) < 2^N`.
pub fn margin_n(p: impl Fn(u64) -> u64, start: u64) -> Result<u64, AdversaryError> {
    margin_n_with(p, start, MARGIN)
}

/// Least `N ≥ start` with `margin·p(N) < 2^N`.
pub fn margin_n_with(p: impl Fn(u64) -> u64, start: u64, margin: u64) -> Result<u64, AdversaryError> {
    const LIMIT: u64 = 62;
    (start.max(1)..=LIMIT)
        .find(|&n| margin.saturating_mul(p(n)) < 1u64 << n)
        .ok_or(AdversaryError::NoMargin { limit: LIMIT })
}

/// The grid cell `[j·2^-e, (j+1)·2^-e]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub index: u64,
    pub log2_count: u64,
}

impl Cell {
    pub fn lo(&self) -> Dyadic {
        Dyadic::new(self.index, self.log2_count)
    }

    pub fn hi(&self) -> Dyadic {
        Dyadic::new(self.index + 1, self.log2_count)
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::new(2 * self.index + 1, self.log2_count + 1)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo(), self.hi())
    }
}

/// The least cell of width `2^-e` whose interior misses `[r − 2^-t, r + 2^-t]`
/// for every point `r`.
pub fn clean_cell(points: &[Dyadic], e: u64, t: u64) -> Result<Cell, AdversaryError> {
    assert!(e < 63, "grid too fine");
    let count = 1i128 << e;
    let rho = Dyadic::pow2(-(t as i64));
    let to_i = |b: num_bigint::BigInt| b.to_i128().expect("grid index fits");
    let mut ranges: Vec<(i128, i128)> = points
        .iter()
        .map(|r| {
            let lo = to_i((r - &rho).mul_pow2(e as i64).floor());
            let hi = to_i((r + &rho).mul_pow2(e as i64).ceil()) - 1;
            (lo.max(0), hi.min(count - 1))
        })
        .filter(|(a, b)| a <= b)
        .collect();
    ranges.sort();
    let mut next = 0i128;
    for (a, b) in ranges {
        if a > next {
            break;
        }
        next = next.max(b + 1);
    }
    if next >= count {
        return Err(AdversaryError::NoCleanInterval { cells_log2: e, queries: points.len() });
    }
    Ok(Cell { index: next as u64, log2_count: e })
}

/// Query points `r` of every well-formed interval query among `queries`.
pub fn queried_points<'a>(queries: impl IntoIterator<Item = &'a Word>) -> Vec<Dyadic> {
    queries.into_iter().filter_map(parse_xic_query).map(|(_, r)| r).collect()
}

/// Parameters of a name of a tent function that agrees with a zero name on
/// a set of words.
pub struct FoolingPlan {
    pub bump: PiecewiseLinear,
    /// `|slope| ≤ 2^(a+2)`, so `n ↦ n + a + 2` is a modulus of the tent.
    pub a: u64,
    /// Precisions up to this one keep the zero answers; the tent's peak is at
    /// most `2^-zero_upto`.
    pub zero_upto: u64,
}

/// `ψ′`: the zero name `base` on every word in `keep` and at every precision
/// up to `zero_upto`; exact tent answers `1^(P+a+3)##trunc(f(r), P+1)` at
/// higher precisions `P`; and, for each length `M > zero_upto`, the first
/// binary word with a `0` outside `keep` answers `1^(2M+a+4)`, which fixes
/// the length. Every other word is answered by `base`.
pub fn fooling_name(base: &XicName, keep: &HashSet<Word>, plan: FoolingPlan) -> XicName {
    let FoolingPlan { bump, a, zero_upto } = plan;
    let peak = bump.points().iter().map(|(_, y)| y.clone()).max().unwrap_or_else(Dyadic::zero);
    assert!(peak <= Dyadic::pow2(-(zero_upto as i64)), "zero answers must stay valid up to the threshold");
    let carriers_from = zero_upto + 1;
    let base_len = base.length.clone();
    let length = LengthFn::from_fn(format!("max(|ψ|, 2M+{} from {carriers_from})", a + 4), move |k| {
        let carrier = if k >= carriers_from { 2 * k + a + 4 } else { 0 };
        base_len.eval(k).max(carrier)
    });
    let keep = keep.clone();
    let zero = base.name.clone();
    let f = bump.clone();
    let name = Name::new(format!("ψ′({})", bump.label()), move |w: &Word| {
        if keep.contains(w) {
            return zero.query(w);
        }
        if let Some((p, r)) = parse_xic_query(w) {
            if p <= zero_upto {
                return zero.query(w);
            }
            return xic_answer(p + a + 3, &f.value(&r).truncate(p + 1));
        }
        let m = w.len() as u64;
        if m >= carriers_from && w.is_binary() && carrier(m as usize, &keep).as_ref() == Some(w) {
            return Word::unary((2 * m + a + 4) as usize);
        }
        zero.query(w)
    });
    let modulus = LengthFn::affine(1, a + 2);
    XicName {
        name: name.with_declared_length(length.clone()),
        length,
        length_exact: true,
        modulus,
        function: Some(std::sync::Arc::new(bump)),
    }
}

/// The first word of `{0,1}^m` containing a `0` and not in `keep`.
fn carrier(m: usize, keep: &HashSet<Word>) -> Option<Word> {
    Word::binary_of_length(m).find(|w| w.contains(crate::encodings::Symbol::Zero) && !keep.contains(w))
}
