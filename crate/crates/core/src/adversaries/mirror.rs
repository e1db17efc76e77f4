use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encodings::{LengthFn, Symbol, Word};
use crate::machine::{run_budgeted, Budget, CostModel, Interrupt, Name, Operator, Oracle, Outcome};
use crate::sopoly::IntPoly;

use super::{AdversaryError, CounterexampleReport};

/// `ψ_i`: `ε ↦ 1^(C+1)`, `1^(C+1) ↦ 1^p(C+1)·i`, `ε` elsewhere.
pub fn mirror_oracle(p: &IntPoly, c: u64, i: bool) -> Name {
    let key = Word::unary(c as usize + 1);
    let mut long = Word::unary(p.eval(c + 1) as usize);
    long.push(if i { Symbol::One } else { Symbol::Zero });
    Name::new(format!("ψ_{}", i as u8), move |a: &Word| {
        if a.is_empty() {
            key.clone()
        } else if *a == key {
            long.clone()
        } else {
            Word::empty()
        }
    })
}

/// `F(φ)(a)`: the first symbol of `φ(φ(a))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FRef;

impl Operator for FRef {
    fn id(&self) -> String {
        "F".into()
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        let b = oracle.ask(input)?;
        let h = oracle.query(&b)?;
        Ok(oracle.cell(h, 0)?.map(|s| Word::from_symbols([s])).unwrap_or_default())
    }
}

/// `G(φ)(a)`: the reverse of `φ(reverse a)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GRef;

impl Operator for GRef {
    fn id(&self) -> String {
        "G".into()
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        Ok(oracle.ask(&input.reversed())?.reversed())
    }
}

/// `(F∘G)(ψ)` computed directly, without any budget.
pub fn f_then_g(psi: &Name) -> Name {
    let psi = psi.clone();
    Name::new(format!("F∘G({})", psi.label()), move |a: &Word| {
        let g = |w: &Word| psi.query(&w.reversed()).reversed();
        g(&g(a)).symbol(0).map(|s| Word::from_symbols([s])).unwrap_or_default()
    })
}

/// Computes `F∘G` the obvious way: reads every answer to its end.
#[derive(Debug, Clone, Copy, Default)]
pub struct BudgetedNaive;

impl Operator for BudgetedNaive {
    fn id(&self) -> String {
        "naive F∘G".into()
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        let b = oracle.ask(&input.reversed())?.reversed();
        let c = oracle.ask(&b.reversed())?.reversed();
        Ok(c.symbol(0).map(|s| Word::from_symbols([s])).unwrap_or_default())
    }
}

/// Like [`BudgetedNaive`] but reads at most `peek` cells of the second
/// answer and outputs the last one it saw.
#[derive(Debug, Clone, Copy)]
pub struct PrefixPeek {
    pub peek: usize,
}

impl Operator for PrefixPeek {
    fn id(&self) -> String {
        format!("prefix-peek {}", self.peek)
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        let b = oracle.ask(&input.reversed())?.reversed();
        let (seen, _) = oracle.ask_prefix(&b.reversed(), self.peek)?;
        Ok(seen.last().map(|s| Word::from_symbols([s])).unwrap_or_default())
    }
}

pub struct MirrorDemo {
    pub report: CounterexampleReport,
    pub outcomes: [Outcome; 2],
    /// `(F∘G)(ψ_0)(ε)` and `(F∘G)(ψ_1)(ε)`.
    pub values: [Word; 2],
}

/// Runs `candidate` on `ψ_0` and `ψ_1` with cost budget `p(C+1)` and at most
/// `p(C+1)` visible cells per answer.
pub fn mirror_demo<O: Operator + ?Sized>(p: &IntPoly, c: u64, candidate: &O) -> Result<MirrorDemo, AdversaryError> {
    let bound = p.eval(c + 1);
    let budget = Budget::with_cell_cap(bound, bound);
    let names = [mirror_oracle(p, c, false), mirror_oracle(p, c, true)];
    let run = |name: &Name| run_budgeted(candidate, &name.fresh(), &Word::empty(), CostModel::default(), budget);
    let outcomes = [run(&names[0])?, run(&names[1])?];
    let values = [f_then_g(&names[0]).query(&Word::empty()), f_then_g(&names[1]).query(&Word::empty())];
    let show = |o: &Outcome| match o.output() {
        Some(w) => format!("output {w:?}"),
        None => "exhausted".to_string(),
    };
    let report = CounterexampleReport {
        construction: "mirror".into(),
        candidate: candidate.id(),
        n: c,
        clean_region: None,
        fooling_names: names.iter().map(|n| n.label().to_string()).collect(),
        output_original: show(&outcomes[0]),
        output_fooling: show(&outcomes[1]),
        identical_views: outcomes[0].log().visible_view() == outcomes[1].log().visible_view()
            && outcomes[0].trace() == outcomes[1].trace(),
        witness: vec![
            ("(F∘G)(ψ_0)(ε)".into(), format!("{:?}", values[0])),
            ("(F∘G)(ψ_1)(ε)".into(), format!("{:?}", values[1])),
        ],
        contradiction: values[0] != values[1],
        logs: vec![("ψ_0".into(), outcomes[0].log().clone()), ("ψ_1".into(), outcomes[1].log().clone())],
    };
    Ok(MirrorDemo { report, outcomes, values })
}

/// A name answering each word `a` with a pseudo-random binary word of length
/// `l(|a|)`, fixed by `seed`.
pub fn random_oracle(l: LengthFn, seed: u64) -> Name {
    Name::new(format!("random {} seed {seed}", l.label()), move |a: &Word| {
        let mut h = DefaultHasher::new();
        (seed, a.as_bytes()).hash(&mut h);
        let mut rng = ChaCha8Rng::seed_from_u64(h.finish());
        let len = l.eval(a.len() as u64) as usize;
        Word::from_symbols((0..len).map(|_| if rng.gen() { Symbol::One } else { Symbol::Zero }))
    })
}
