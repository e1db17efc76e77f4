use std::collections::HashSet;
use std::sync::Arc;

use crate::encodings::{encode_dyadic, pair, Dyadic, LengthFn, Symbol, Word};
use crate::evaluation::{evaluate, Schedule};
use crate::funcrep::{
    tight_zero_name, parse_xic_answer, parse_xic_query, xic_answer, xic_from_exact, xic_query, xic_sawtooth, Composed,
    PiecewiseLinear, Sawtooth, XicName,
};
use crate::machine::{Interrupt, Operator, Oracle, QueryLog};
use crate::reals::real_from_dyadic;
use crate::sopoly::IntPoly;

use super::{
    bounded_ask, clean_cell, fooling_name, margin_n_with, queried_points, run_within, views_agree, AdversaryError, Cell,
    CounterexampleReport, FoolingPlan, MARGIN,
};

/// Largest input length enumerated while probing a composer.
const PROBE_CAP: u64 = 10;

/// Chains the two names the way one would for length-monotone names, but
/// asks `ψ` only at the grid point `⌊r·2^k⌋/2^k` and claims radius `2^-k`.
/// On `1^n##r`: `μ := |φ(1^(n+2))|`, `y := ψ(1^(μ+1)##r_k)`,
/// `q := φ(1^(n+1)##y)`, answer `1^k##q`. Every oracle call is cut short
/// when the budget would not cover it, and the answer falls back to `##00#`.
#[derive(Debug, Clone)]
pub struct GridComposer {
    pub grid: u64,
    pub budget: IntPoly,
}

fn left(q: &Word) -> Word {
    q.prepend(Symbol::Zero)
}

fn right(q: &Word) -> Word {
    q.prepend(Symbol::One)
}

impl Operator for GridComposer {
    fn id(&self) -> String {
        format!("grid-composer k={} [{}]", self.grid, self.budget)
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        let Some((n, r)) = parse_xic_query(input) else {
            return Ok(Word::empty());
        };
        let budget = self.budget.eval(input.len() as u64);
        let fallback = xic_answer(0, &Dyadic::zero());
        let reserve = self.grid + n + 8;
        let Some(mu) = bounded_ask(oracle, &left(&Word::unary(n as usize + 2)), budget, reserve)? else {
            return Ok(fallback);
        };
        let rk = r.truncate(self.grid);
        let q = right(&xic_query(mu.len() as u64 + 1, &encode_dyadic(&rk, 0)));
        let Some(Ok(y)) = bounded_ask(oracle, &q, budget, reserve)?.map(|a| parse_xic_answer(&a)) else {
            return Ok(fallback);
        };
        let y = y.q.clamped(&Dyadic::zero(), &Dyadic::one());
        let q = left(&xic_query(n + 1, &encode_dyadic(&y, 0)));
        let Some(Ok(v)) = bounded_ask(oracle, &q, budget, reserve)?.map(|a| parse_xic_answer(&a)) else {
            return Ok(fallback);
        };
        Ok(xic_answer(self.grid, &v.q))
    }
}

/// Claims `f∘g = 0` everywhere: `1^n##r ↦ 1^n##00#`, nothing asked.
#[derive(Debug, Clone, Copy, Default)]
pub struct SilentComposer;

impl Operator for SilentComposer {
    fn id(&self) -> String {
        "silent-composer".into()
    }

    fn apply(&self, _oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        Ok(match parse_xic_query(input) {
            Some((n, _)) => xic_answer(n, &Dyadic::zero()),
            None => Word::empty(),
        })
    }
}

pub struct CompositionFool {
    pub report: CounterexampleReport,
    pub psi_prime: XicName,
    pub bump: PiecewiseLinear,
    pub cell: Cell,
    /// The composer's answer at the cell midpoint, precision `N + 2`, on the
    /// fooling pair.
    pub probe: Word,
    /// `f(g′(mid))`, which is `2^-N`.
    pub exact: Dyadic,
    /// The honest evaluation of `f∘g′` at the midpoint to precision `N + 2`.
    pub honest: Dyadic,
}

struct Sweep {
    outputs: Vec<Word>,
    logs: Vec<QueryLog>,
}

fn sweep<O: Operator + ?Sized>(
    composer: &O,
    phi: &XicName,
    psi: &XicName,
    n: u64,
    p: &IntPoly,
) -> Result<Sweep, AdversaryError> {
    let oracle = pair(&phi.name.fresh(), &psi.name.fresh());
    let mut outputs = Vec::new();
    let mut logs = Vec::new();
    for a in Word::all_up_to(n as usize) {
        let r = run_within(composer, &oracle, &a, p.eval(a.len() as u64))?;
        outputs.push(r.output);
        logs.push(r.log);
    }
    Ok(Sweep { outputs, logs })
}

fn digest(outputs: &[Word]) -> String {
    let answered = outputs.iter().filter(|w| !w.is_empty()).count();
    let distinct: HashSet<&Word> = outputs.iter().collect();
    format!("{} inputs, {answered} answered, {} distinct", outputs.len(), distinct.len())
}

/// Probes `composer` on the sawtooth name paired with the hand-written zero
/// name for every input of length at most `N` (the least `N` with
/// `9·p(N) < 2^N`, capped at 10), then builds a tent `g′` of height
/// `3/4·2^-2N` whose name agrees with the zero name on everything asked.
pub fn fool_composition<O: Operator + ?Sized>(composer: &O, p: &IntPoly) -> Result<CompositionFool, AdversaryError> {
    fool_composition_with(composer, p, MARGIN)
}

/// [`fool_composition`] with `N` the least value satisfying `margin·p(N) < 2^N`.
pub fn fool_composition_with<O: Operator + ?Sized>(
    composer: &O,
    p: &IntPoly,
    margin: u64,
) -> Result<CompositionFool, AdversaryError> {
    let n = margin_n_with(|k| p.eval(k), 1, margin)?;
    if n > PROBE_CAP {
        return Err(crate::encodings::CapExceeded { requested: n as usize, cap: PROBE_CAP as usize }.into());
    }
    let phi = xic_sawtooth();
    let psi = tight_zero_name();
    let original = sweep(composer, &phi, &psi, n, p)?;

    let keep: HashSet<Word> = original
        .logs
        .iter()
        .flat_map(|l| l.queries())
        .filter(|q| q.first() == Some(Symbol::One))
        .map(|q| q.suffix_from(1))
        .collect();
    let points = queried_points(keep.iter());
    let cell = clean_cell(&points, 2 * n, 2 * n)?;
    let a = p.eval(n).saturating_sub(n);
    let mid = cell.mid();
    let peak = Dyadic::new(3, 2 * n + 2);
    let bump = PiecewiseLinear::bump(&mid, &peak, &Dyadic::new(3, 0).mul_pow2(a as i64))
        .expect("the tent fits its cell")
        .with_label(format!("tent at {mid} peak 3/4·2^-{} slope 3·2^{a}", 2 * n));
    let psi_prime = fooling_name(&psi, &keep, FoolingPlan { bump: bump.clone(), a, zero_upto: 2 * n });
    let fooled = sweep(composer, &phi, &psi_prime, n, p)?;

    let identical_views =
        original.logs.len() == fooled.logs.len() && original.logs.iter().zip(&fooled.logs).all(|(x, y)| views_agree(x, y));

    let probe_input = xic_query(n + 2, &encode_dyadic(&mid, 0));
    let oracle = pair(&phi.name.fresh(), &psi_prime.name.fresh());
    let probe = run_within(composer, &oracle, &probe_input, p.eval(probe_input.len() as u64))?;
    use crate::funcrep::ExactFunction;
    let exact = Sawtooth.value(&bump.value(&mid));
    let tolerance = Dyadic::pow2(-(n as i64 + 2));
    let claimed = parse_xic_answer(&probe.output).ok();
    let contradiction = match &claimed {
        Some(ans) => (&ans.q - &exact).abs() > tolerance,
        None => true,
    };

    let composed = Arc::new(Composed { outer: Arc::new(Sawtooth), inner: Arc::new(bump.clone()) });
    let honest_name = xic_from_exact(composed, LengthFn::affine(2, 5 + a));
    let honest = evaluate(&honest_name, &real_from_dyadic(&mid), n + 2, Schedule::Suggested)?.value;

    let report = CounterexampleReport {
        construction: "composition".into(),
        candidate: composer.id(),
        n,
        clean_region: Some(format!("{cell} (no query within 2^-{})", 2 * n)),
        fooling_names: vec![psi_prime.label().to_string()],
        output_original: digest(&original.outputs),
        output_fooling: digest(&fooled.outputs),
        identical_views: identical_views && original.outputs == fooled.outputs,
        witness: vec![
            (format!("claimed answer at {mid}, precision {}: {}", n + 2, probe.output), format!("f(g′(mid)) = {exact:?}")),
            ("honest evaluation".into(), format!("{honest:?}")),
        ],
        contradiction,
        logs: vec![("probe".into(), probe.log)],
    };
    Ok(CompositionFool { report, psi_prime, bump, cell, probe: probe.output, exact, honest })
}
