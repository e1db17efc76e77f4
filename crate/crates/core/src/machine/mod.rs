//! Operators with one oracle, query logs and the abstract cost proxy.
//!
//! Cost of a run: `|input| + |output| + Σ (|query| + 1 + cells read)`. Cells
//! of an answer only count once they are read, unless the per-digit convention
//! is selected, in which case the whole answer is paid for when it is written.

mod name;

use std::fmt;

use thiserror::Error;

pub use name::{LengthViolation, Name};

use crate::encodings::{LengthFn, Symbol, Word, WordParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// An oracle call takes one step; answer cells are paid for as they are read.
    #[default]
    QueryOneStep,
    /// Every digit of the answer costs a step when written.
    PerDigitAnswer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AbortMode {
    /// An aborted query leaves the digits written so far visible.
    #[default]
    PrefixVisible,
    /// An aborted query reveals nothing.
    Blind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostModel {
    pub convention: Convention,
    pub abort: AbortMode,
}

impl CostModel {
    pub fn per_digit(abort: AbortMode) -> CostModel {
        CostModel { convention: Convention::PerDigitAnswer, abort }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostTrace {
    pub input_len: u64,
    pub output_len: u64,
    pub queries: u64,
    pub query_len_total: u64,
    pub cells_read: u64,
    pub abstract_cost: u64,
}

impl CostTrace {
    fn recompute(&mut self) {
        self.abstract_cost = self.input_len + self.output_len + self.query_len_total + self.queries + self.cells_read;
    }

    /// Componentwise sum, for operators that run sub-operators.
    pub fn absorb(&mut self, other: &CostTrace) {
        self.queries += other.queries;
        self.query_len_total += other.query_len_total;
        self.cells_read += other.cells_read + other.input_len + other.output_len;
        self.recompute();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_cost: u64,
    /// Positions of a single answer an operator may examine (the end of the
    /// answer counts as a position).
    pub max_cells: Option<u64>,
}

impl Budget {
    pub fn cost(max_cost: u64) -> Budget {
        Budget { max_cost, max_cells: None }
    }

    pub fn with_cell_cap(max_cost: u64, cap: u64) -> Budget {
        Budget { max_cost, max_cells: Some(cap) }
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Interrupt {
    Exhausted,
    Fault(String),
}

impl From<WordParseError> for Interrupt {
    fn from(e: WordParseError) -> Interrupt {
        Interrupt::Fault(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operator {operator} failed: {message}")]
pub struct Fault {
    pub operator: String,
    pub message: String,
}

/// One oracle call as seen by the instrumentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub query: Word,
    pub answer: Word,
    pub cells_read: u64,
    /// Positions examined, counting the end-of-answer position.
    pub examined: u64,
}

impl QueryRecord {
    /// What the operator could see: the read prefix and whether it saw the end.
    pub fn visible(&self) -> (Word, bool) {
        (self.answer.prefix(self.cells_read as usize), self.examined > self.answer.len() as u64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryLog {
    pub records: Vec<QueryRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogParseError {
    #[error("line {line}: expected three tab-separated fields")]
    Shape { line: usize },
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordParseError },
    #[error("line {line}: bad cell count")]
    Cells { line: usize },
}

impl QueryLog {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &QueryRecord> {
        self.records.iter()
    }

    pub fn queries(&self) -> impl Iterator<Item = &Word> {
        self.records.iter().map(|r| &r.query)
    }

    /// The operator-visible part of every record, in order.
    pub fn visible_view(&self) -> Vec<(Word, Word, bool)> {
        self.records
            .iter()
            .map(|r| {
                let (prefix, ended) = r.visible();
                (r.query.clone(), prefix, ended)
            })
            .collect()
    }

    pub fn observed_length(&self) -> LengthFn {
        observed_length_of(self.records.iter().map(|r| (r.query.len(), r.answer.len())))
    }

    /// One record per line: query, answer, cells read, separated by tabs.
    pub fn export(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&format!("{}\t{}\t{}\n", r.query, r.answer, r.cells_read));
        }
        s
    }

    pub fn parse(text: &str) -> Result<QueryLog, LogParseError> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(LogParseError::Shape { line: line_no });
            }
            let query: Word = fields[0].parse().map_err(|source| LogParseError::Word { line: line_no, source })?;
            let answer: Word = fields[1].parse().map_err(|source| LogParseError::Word { line: line_no, source })?;
            let cells_read: u64 = fields[2].parse().map_err(|_| LogParseError::Cells { line: line_no })?;
            if cells_read > answer.len() as u64 {
                return Err(LogParseError::Cells { line: line_no });
            }
            records.push(QueryRecord { query, answer, cells_read, examined: cells_read });
        }
        Ok(QueryLog { records })
    }
}

/// The least monotone function lying above every `(|query|, |answer|)` pair.
pub fn observed_length(log: &QueryLog) -> LengthFn {
    log.observed_length()
}

pub(crate) fn observed_length_of(pairs: impl IntoIterator<Item = (usize, usize)>) -> LengthFn {
    let mut pts: Vec<(u64, u64)> = pairs.into_iter().map(|(q, a)| (q as u64, a as u64)).collect();
    pts.sort();
    LengthFn::steps(pts)
}

/// Handle to an answer inside a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Answer(usize);

/// The only way an operator can reach its oracle.
pub struct Oracle<'a> {
    name: &'a Name,
    model: CostModel,
    budget: Option<Budget>,
    trace: CostTrace,
    log: QueryLog,
}

impl<'a> Oracle<'a> {
    fn new(name: &'a Name, model: CostModel, budget: Option<Budget>, input_len: u64) -> Oracle<'a> {
        let mut trace = CostTrace { input_len, ..CostTrace::default() };
        trace.recompute();
        Oracle { name, model, budget, trace, log: QueryLog::default() }
    }

    fn check_budget(&self) -> Result<(), Interrupt> {
        match self.budget {
            Some(b) if self.trace.abstract_cost > b.max_cost => Err(Interrupt::Exhausted),
            _ => Ok(()),
        }
    }

    /// Cost spent so far.
    pub fn spent(&self) -> u64 {
        self.trace.abstract_cost
    }

    pub fn budget(&self) -> Option<Budget> {
        self.budget
    }

    pub fn model(&self) -> CostModel {
        self.model
    }

    /// Charge for internal work of the operator (e.g. writing a long output piece
    /// by piece). Counted under cells read.
    pub fn charge(&mut self, steps: u64) -> Result<(), Interrupt> {
        self.trace.cells_read += steps;
        self.trace.recompute();
        self.check_budget()
    }

    /// Writes `q` to the query tape and calls the oracle.
    pub fn query(&mut self, q: &Word) -> Result<Answer, Interrupt> {
        let answer = self.name.query(q);
        self.trace.queries += 1;
        self.trace.query_len_total += q.len() as u64;
        self.log.records.push(QueryRecord { query: q.clone(), answer, cells_read: 0, examined: 0 });
        let h = Answer(self.log.records.len() - 1);
        self.trace.recompute();
        self.check_budget()?;
        if self.model.convention == Convention::PerDigitAnswer {
            let len = self.log.records[h.0].answer.len() as u64;
            self.examine(h, len + 1)?;
        }
        Ok(h)
    }

    fn examine(&mut self, h: Answer, positions: u64) -> Result<(), Interrupt> {
        let rec = &self.log.records[h.0];
        let alen = rec.answer.len() as u64;
        let want = positions.min(alen + 1);
        if want <= rec.examined {
            return Ok(());
        }
        if let Some(cap) = self.budget.and_then(|b| b.max_cells) {
            if want > cap {
                return Err(Interrupt::Exhausted);
            }
        }
        let new_cells = want.min(alen) - rec.cells_read;
        let rec = &mut self.log.records[h.0];
        rec.examined = want;
        rec.cells_read = want.min(alen);
        self.trace.cells_read += new_cells;
        self.trace.recompute();
        self.check_budget()
    }

    /// Reads the first `k` cells of an answer; shorter if the answer ends.
    pub fn read(&mut self, h: Answer, k: usize) -> Result<Word, Interrupt> {
        self.examine(h, k as u64)?;
        Ok(self.log.records[h.0].answer.prefix(k))
    }

    /// The symbol at position `j` of an answer, `None` past its end.
    pub fn cell(&mut self, h: Answer, j: usize) -> Result<Option<Symbol>, Interrupt> {
        self.examine(h, j as u64 + 1)?;
        Ok(self.log.records[h.0].answer.symbol(j))
    }

    /// Reads an answer to its end.
    pub fn read_all(&mut self, h: Answer) -> Result<Word, Interrupt> {
        let len = self.log.records[h.0].answer.len() as u64;
        self.examine(h, len + 1)?;
        Ok(self.log.records[h.0].answer.clone())
    }

    /// Query and read the whole answer.
    pub fn ask(&mut self, q: &Word) -> Result<Word, Interrupt> {
        let h = self.query(q)?;
        self.read_all(h)
    }

    /// Query, aborting once `k` answer cells have been produced. Returns the
    /// visible part and whether the answer was complete. Under the blind abort
    /// mode an aborted query shows nothing.
    pub fn ask_prefix(&mut self, q: &Word, k: usize) -> Result<(Word, bool), Interrupt> {
        let answer = self.name.query(q);
        let complete = answer.len() <= k;
        self.trace.queries += 1;
        self.trace.query_len_total += q.len() as u64;
        self.log.records.push(QueryRecord { query: q.clone(), answer, cells_read: 0, examined: 0 });
        let h = Answer(self.log.records.len() - 1);
        self.trace.recompute();
        self.check_budget()?;
        self.examine(h, if complete { k as u64 + 1 } else { k as u64 })?;
        let rec = &self.log.records[h.0];
        if !complete && self.model.abort == AbortMode::Blind {
            return Ok((Word::empty(), false));
        }
        Ok((rec.answer.prefix(k), complete))
    }

    pub fn log(&self) -> &QueryLog {
        &self.log
    }
}

/// A procedure with oracle access only through [`Oracle`].
pub trait Operator {
    fn id(&self) -> String;
    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt>;
}

impl<T: Operator + ?Sized> Operator for &T {
    fn id(&self) -> String {
        (**self).id()
    }
    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        (**self).apply(oracle, input)
    }
}

impl<T: Operator + ?Sized> Operator for Box<T> {
    fn id(&self) -> String {
        (**self).id()
    }
    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        (**self).apply(oracle, input)
    }
}

/// An operator given by a closure.
pub struct FnOperator<F> {
    id: String,
    f: F,
}

pub fn op_fn<F>(id: impl Into<String>, f: F) -> FnOperator<F>
where
    F: Fn(&mut Oracle<'_>, &Word) -> Result<Word, Interrupt>,
{
    FnOperator { id: id.into(), f }
}

impl<F> Operator for FnOperator<F>
where
    F: Fn(&mut Oracle<'_>, &Word) -> Result<Word, Interrupt>,
{
    fn id(&self) -> String {
        self.id.clone()
    }
    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        (self.f)(oracle, input)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub output: Word,
    pub trace: CostTrace,
    pub log: QueryLog,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Completed(Run),
    Exhausted { trace: CostTrace, log: QueryLog },
}

impl Outcome {
    pub fn output(&self) -> Option<&Word> {
        match self {
            Outcome::Completed(r) => Some(&r.output),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn log(&self) -> &QueryLog {
        match self {
            Outcome::Completed(r) => &r.log,
            Outcome::Exhausted { log, .. } => log,
        }
    }

    pub fn trace(&self) -> &CostTrace {
        match self {
            Outcome::Completed(r) => &r.trace,
            Outcome::Exhausted { trace, .. } => trace,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, Outcome::Exhausted { .. })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Completed(r) => write!(f, "output {:?} at cost {}", r.output, r.trace.abstract_cost),
            Outcome::Exhausted { trace, .. } => write!(f, "exhausted at cost {}", trace.abstract_cost),
        }
    }
}

fn execute<O: Operator + ?Sized>(
    op: &O,
    name: &Name,
    input: &Word,
    model: CostModel,
    budget: Option<Budget>,
) -> Result<Outcome, Fault> {
    let mut oracle = Oracle::new(name, model, budget, input.len() as u64);
    let result = if oracle.check_budget().is_err() { Err(Interrupt::Exhausted) } else { op.apply(&mut oracle, input) };
    match result {
        Ok(output) => {
            oracle.trace.output_len = output.len() as u64;
            oracle.trace.recompute();
            let Oracle { trace, log, .. } = oracle;
            if budget.is_some_and(|b| trace.abstract_cost > b.max_cost) {
                return Ok(Outcome::Exhausted { trace, log });
            }
            Ok(Outcome::Completed(Run { output, trace, log }))
        }
        Err(Interrupt::Exhausted) => {
            let Oracle { trace, log, .. } = oracle;
            Ok(Outcome::Exhausted { trace, log })
        }
        Err(Interrupt::Fault(message)) => Err(Fault { operator: op.id(), message }),
    }
}

/// Runs an operator without limits.
pub fn run<O: Operator + ?Sized>(op: &O, oracle: &Name, input: &Word, model: CostModel) -> Result<Run, Fault> {
    match execute(op, oracle, input, model, None)? {
        Outcome::Completed(r) => Ok(r),
        Outcome::Exhausted { .. } => Err(Fault {
            operator: op.id(),
            message: "reported exhaustion without a budget".to_string(),
        }),
    }
}

/// Runs an operator under a cost budget and an optional per-answer cell cap.
pub fn run_budgeted<O: Operator + ?Sized>(
    op: &O,
    oracle: &Name,
    input: &Word,
    model: CostModel,
    budget: Budget,
) -> Result<Outcome, Fault> {
    execute(op, oracle, input, model, Some(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::w;

    #[test]
    fn copy_operator_costs_input_and_output() {
        let op = op_fn("copy", |_o, a| Ok(a.clone()));
        let r = run(&op, &Name::constant_empty(), &w("01#"), CostModel::default()).unwrap();
        assert_eq!(r.output, w("01#"));
        assert_eq!(r.trace.queries, 0);
        assert_eq!(r.trace.abstract_cost, 6);
    }

    #[test]
    fn cells_are_charged_once() {
        let op = op_fn("twice", |o, a| {
            let h = o.query(a)?;
            o.read(h, 2)?;
            o.read(h, 1)?;
            o.read_all(h)
        });
        let name = Name::new("id", |a| a.clone());
        let r = run(&op, &name, &w("0101"), CostModel::default()).unwrap();
        assert_eq!(r.trace.cells_read, 4);
        assert_eq!(r.log.records[0].examined, 5);
        assert_eq!(r.trace.abstract_cost, 4 + 4 + (4 + 1 + 4));
    }

    #[test]
    fn cell_cap_exhausts() {
        let op = op_fn("read3", |o, a| {
            let h = o.query(a)?;
            o.read(h, 3)
        });
        let name = Name::new("id", |a| a.clone());
        let out = run_budgeted(&op, &name, &w("0101"), CostModel::default(), Budget::with_cell_cap(100, 2)).unwrap();
        assert!(out.is_exhausted());
        let out = run_budgeted(&op, &name, &w("0101"), CostModel::default(), Budget::with_cell_cap(100, 3)).unwrap();
        assert_eq!(out.output(), Some(&w("010")));
    }

    #[test]
    fn per_digit_blind_abort_hides_prefix() {
        let op = op_fn("peek", |o, a| Ok(o.ask_prefix(a, 2)?.0));
        let name = Name::new("id", |a| a.clone());
        let vis = run(&op, &name, &w("0110"), CostModel::per_digit(AbortMode::PrefixVisible)).unwrap();
        assert_eq!(vis.output, w("01"));
        let blind = run(&op, &name, &w("0110"), CostModel::per_digit(AbortMode::Blind)).unwrap();
        assert_eq!(blind.output, Word::empty());
        let short = run(&op, &name, &w("0"), CostModel::per_digit(AbortMode::Blind)).unwrap();
        assert_eq!(short.output, w("0"));
    }

    #[test]
    fn log_export_round_trips() {
        let op = op_fn("ask", |o, a| o.ask(a));
        let name = Name::new("rev", |a| a.reversed());
        let r = run(&op, &name, &w("01#"), CostModel::default()).unwrap();
        let text = r.log.export();
        assert_eq!(text, "01#\t#10\t3\n");
        let back = QueryLog::parse(&text).unwrap();
        assert_eq!(back.records[0].answer, w("#10"));
        assert!(QueryLog::parse("01\t1\n").is_err());
        assert!(QueryLog::parse("01\t1\t5\n").is_err());
    }

    #[test]
    fn observed_length_is_monotone_closure() {
        let empty = QueryLog::default();
        assert_eq!(empty.observed_length().eval(50), 0);
        let log = QueryLog {
            records: vec![QueryRecord { query: w("111"), answer: w("00000"), cells_read: 0, examined: 0 }],
        };
        let l = log.observed_length();
        assert_eq!(l.values(4), vec![0, 0, 0, 5, 5]);
    }
}
