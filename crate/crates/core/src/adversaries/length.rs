use std::collections::HashSet;

use crate::encodings::{CapExceeded, Symbol, Word};
use crate::machine::{Interrupt, Name, Operator, Oracle, QueryLog};
use crate::sopoly::IntPoly;

use super::{run_within, views_agree, AdversaryError, CounterexampleReport};

/// `F(φ) = φ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityOnOracle;

impl Operator for IdentityOnOracle {
    fn id(&self) -> String {
        "identity-on-oracle".into()
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        oracle.ask(input)
    }
}

/// Answers `0^k` without asking anything.
#[derive(Debug, Clone, Copy)]
pub struct ConstantOp(pub usize);

impl Operator for ConstantOp {
    fn id(&self) -> String {
        format!("constant 0^{}", self.0)
    }

    fn apply(&self, _oracle: &mut Oracle<'_>, _input: &Word) -> Result<Word, Interrupt> {
        Ok(Word::repeat(Symbol::Zero, self.0))
    }
}

/// `a ↦ 1^p(|a|)`: a string function whose output length is bounded below
/// by a given polynomial, computed in time linear in that length.
#[derive(Debug, Clone)]
pub struct Padding {
    pub p: IntPoly,
}

impl Operator for Padding {
    fn id(&self) -> String {
        format!("padding {}", self.p)
    }

    fn apply(&self, _oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        Ok(Word::unary(self.p.eval(input.len() as u64) as usize))
    }
}

pub fn padding_function(p: IntPoly) -> Padding {
    Padding { p }
}

pub struct LengthFool {
    pub report: CounterexampleReport,
    pub psi: Name,
    /// The unqueried word of length `2N` carrying the long answer.
    pub b: Word,
    /// Longest output over inputs of length at most `N`.
    pub l: u64,
}

/// Largest `N` [`fool_length`] accepts: it runs the candidate on all
/// `3^(≤N)` inputs twice.
pub const LENGTH_CAP: usize = 6;

/// `Σ_{k ≤ N} 3^k·p(k) < 3^(2N)`: the runs on all inputs of length at most
/// `N` cannot query every word of length `2N`.
fn margin_holds(p: &IntPoly, n: usize) -> bool {
    let total = (0..=n).fold(0u64, |acc, k| acc.saturating_add(3u64.pow(k as u32).saturating_mul(p.eval(k as u64))));
    total < 3u64.saturating_pow(2 * n as u32)
}

/// Least `N ≥ 1` satisfying the query margin, at most [`LENGTH_CAP`].
pub fn length_margin(p: &IntPoly) -> Result<usize, CapExceeded> {
    (1..=LENGTH_CAP)
        .find(|&n| margin_holds(p, n))
        .ok_or(CapExceeded { requested: LENGTH_CAP + 1, cap: LENGTH_CAP })
}

struct Sweep {
    outputs: Vec<(Word, Word)>,
    logs: Vec<QueryLog>,
}

fn sweep<O: Operator + ?Sized>(f: &O, name: &Name, n: usize, p: &IntPoly) -> Result<Sweep, AdversaryError> {
    let mut outputs = Vec::new();
    let mut logs = Vec::new();
    for a in Word::all_up_to(n) {
        let r = run_within(f, &name.fresh(), &a, p.eval(a.len() as u64))?;
        outputs.push((a, r.output));
        logs.push(r.log);
    }
    Ok(Sweep { outputs, logs })
}

fn digest(outputs: &[(Word, Word)]) -> String {
    let longest = outputs.iter().map(|(_, o)| o.len()).max().unwrap_or(0);
    let distinct: HashSet<&Word> = outputs.iter().map(|(_, o)| o).collect();
    format!("{} inputs, {} distinct outputs, longest {longest}", outputs.len(), distinct.len())
}

/// Runs `f` on the everywhere-`ε` name for every input of length at most
/// `N`, then hides an answer of length `L + 1` on a word of length `2N` none
/// of the runs asked.
pub fn fool_length<O: Operator + ?Sized>(f: &O, p: &IntPoly, n: usize) -> Result<LengthFool, AdversaryError> {
    if n > LENGTH_CAP {
        return Err(CapExceeded { requested: n, cap: LENGTH_CAP }.into());
    }
    if !margin_holds(p, n) {
        return Err(AdversaryError::NoMargin { limit: n as u64 });
    }
    let phi = Name::constant_empty();
    let original = sweep(f, &phi, n, p)?;
    let queried: HashSet<&Word> = original.logs.iter().flat_map(|l| l.queries()).collect();
    let b = Word::all_of_length(2 * n)
        .find(|w| !queried.contains(w))
        .ok_or(AdversaryError::NoUnqueriedWord(2 * n))?;
    let l = original.outputs.iter().map(|(_, o)| o.len()).max().unwrap_or(0);

    let hidden = b.clone();
    let long = Word::repeat(Symbol::Zero, l + 1);
    let psi = Name::new(format!("ε except {b} ↦ 0^{}", l + 1), move |a: &Word| {
        if *a == hidden {
            long.clone()
        } else {
            Word::empty()
        }
    });
    let fooled = sweep(f, &psi, n, p)?;

    let identical_views = original.logs.iter().zip(&fooled.logs).all(|(x, y)| views_agree(x, y));
    let fooled_l = fooled.outputs.iter().map(|(_, o)| o.len()).max().unwrap_or(0);
    let psi_at_2n = psi.query(&b).len();
    let report = CounterexampleReport {
        construction: "length".into(),
        candidate: f.id(),
        n: n as u64,
        clean_region: Some(format!("unqueried word {b} of length {}", 2 * n)),
        fooling_names: vec![psi.label().to_string()],
        output_original: digest(&original.outputs),
        output_fooling: digest(&fooled.outputs),
        identical_views: identical_views && original.outputs == fooled.outputs,
        witness: vec![(format!("|F(ψ)|({n}) = {fooled_l}"), format!("|ψ|({}) ≥ {psi_at_2n}", 2 * n))],
        contradiction: fooled_l < psi_at_2n,
        logs: Vec::new(),
    };
    Ok(LengthFool { report, psi, b, l: l as u64 })
}
