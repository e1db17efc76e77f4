use std::collections::HashSet;

use crate::encodings::{Dyadic, Word};
use crate::funcrep::{tight_zero_name, xic_query, ExactFunction, PiecewiseLinear, XicName};
use crate::machine::{Interrupt, Operator, Oracle};
use crate::sopoly::IntPoly;

use super::{
    bounded_ask, clean_cell, fooling_name, margin_n_with, queried_points, run_within, views_agree, AdversaryError, Cell,
    CounterexampleReport, FoolingPlan, MARGIN,
};

/// Probes the name at precision `N` on the grids `j/2^k`, `k = 0, 1, …`,
/// while its budget lasts, and outputs `1^m` for the largest `m` seen.
#[derive(Debug, Clone)]
pub struct GridProbe {
    pub budget: IntPoly,
}

impl Operator for GridProbe {
    fn id(&self) -> String {
        format!("grid-probe[{}]", self.budget)
    }

    fn apply(&self, oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        let n = input.as_unary().ok_or_else(|| Interrupt::Fault("input is not 1^N".into()))? as u64;
        let budget = self.budget.eval(n);
        let mut best = 0u64;
        'grid: for k in 0..=n {
            for j in 0..=(1u64 << k) {
                if k > 0 && j % 2 == 0 {
                    continue;
                }
                let q = xic_query(n, &crate::encodings::encode_dyadic(&Dyadic::new(j, k), 0));
                let reserve = best.max(n + 8);
                let Some(answer) = bounded_ask(oracle, &q, budget, reserve)? else {
                    break 'grid;
                };
                if let Ok(a) = crate::funcrep::parse_xic_answer(&answer) {
                    best = best.max(a.m);
                }
            }
        }
        Ok(Word::unary(best as usize))
    }
}

/// Asks nothing and claims `μ(N) = N`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullExtractor;

impl Operator for NullExtractor {
    fn id(&self) -> String {
        "null".into()
    }

    fn apply(&self, _oracle: &mut Oracle<'_>, input: &Word) -> Result<Word, Interrupt> {
        input.as_unary().ok_or_else(|| Interrupt::Fault("input is not 1^N".into()))?;
        Ok(input.clone())
    }
}

pub struct ModulusFool {
    pub report: CounterexampleReport,
    pub psi_prime: XicName,
    pub bump: PiecewiseLinear,
    pub cell: Cell,
    pub claimed: u64,
    /// The least valid modulus value of the tent at `N`, computed exactly.
    pub required: u64,
}

/// Least `k` with `|x − y| ≤ 2^-k ⇒ |f(x) − f(y)| ≤ 2^-n` for a tent of the
/// given peak and slope: the largest change over distance `δ` is
/// `min(slope·δ, peak)`.
fn tent_modulus(peak: &Dyadic, slope: &Dyadic, n: u64) -> u64 {
    let target = Dyadic::pow2(-(n as i64));
    (0..)
        .find(|&k| {
            let change = (slope * &Dyadic::pow2(-(k as i64))).min(peak.clone());
            change <= target
        })
        .expect("a tent has a modulus")
}

/// Runs `extractor` on the hand-written zero name at the least `N` with
/// `9·p(N) < 2^N` and builds a tent name it cannot tell apart from it.
pub fn fool_modulus<O: Operator + ?Sized>(extractor: &O, p: &IntPoly) -> Result<ModulusFool, AdversaryError> {
    fool_modulus_with(extractor, p, MARGIN)
}

/// [`fool_modulus`] with `N` the least value satisfying `margin·p(N) < 2^N`.
pub fn fool_modulus_with<O: Operator + ?Sized>(
    extractor: &O,
    p: &IntPoly,
    margin: u64,
) -> Result<ModulusFool, AdversaryError> {
    let n = margin_n_with(|k| p.eval(k), 1, margin)?;
    let budget = p.eval(n);
    let input = Word::unary(n as usize);
    let psi = tight_zero_name();
    let original = run_within(extractor, &psi.name, &input, budget)?;
    let claimed = original.output.as_unary().ok_or_else(|| {
        AdversaryError::Fault(crate::machine::Fault {
            operator: extractor.id(),
            message: format!("output {} is not unary", original.output),
        })
    })? as u64;

    let keep: HashSet<Word> = original.log.queries().cloned().collect();
    let points = queried_points(original.log.queries());
    let cell = clean_cell(&points, n, n - 1)?;
    let a = claimed.saturating_sub(n);
    let peak = Dyadic::new(3, n + 1);
    let slope = Dyadic::new(3, 0).mul_pow2(a as i64);
    let bump = PiecewiseLinear::bump(&cell.mid(), &peak, &slope)
        .expect("the tent fits its cell")
        .with_label(format!("tent at {} peak 3/2·2^-{n} slope 3·2^{a}", cell.mid()));
    let psi_prime = fooling_name(&psi, &keep, FoolingPlan { bump: bump.clone(), a, zero_upto: n - 1 });
    let fooled = run_within(extractor, &psi_prime.name.fresh(), &input, budget)?;

    let v = claimed.max(n);
    let mid = cell.mid();
    let step = Dyadic::pow2(-(v as i64));
    let other = if mid >= step { &mid - &step } else { &mid + &step };
    let change = (&bump.value(&mid) - &bump.value(&other)).abs();
    let required = tent_modulus(&peak, &slope, n);
    let contradiction = change > Dyadic::pow2(-(n as i64)) && required > claimed;

    let report = CounterexampleReport {
        construction: "modulus".into(),
        candidate: extractor.id(),
        n,
        clean_region: Some(format!("{cell} (no query within 2^-{})", n - 1)),
        fooling_names: vec![psi_prime.label().to_string()],
        output_original: original.output.to_string(),
        output_fooling: fooled.output.to_string(),
        identical_views: views_agree(&original.log, &fooled.log),
        witness: vec![
            (
                format!("claimed μ({n}) = {claimed}"),
                format!("|f'({mid}) − f'({other})| = {change:?} > 2^-{n} at distance 2^-{v}"),
            ),
            (format!("claimed μ({n}) = {claimed}"), format!("least valid value {required}")),
        ],
        contradiction,
        logs: vec![("original".into(), original.log), ("fooling".into(), fooled.log)],
    };
    Ok(ModulusFool { report, psi_prime, bump, cell, claimed, required })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_moduli() {
        // slope 3, peak 3/8: change 3·2^-k ≤ 2^-3 needs k = 5
        assert_eq!(tent_modulus(&Dyadic::new(3, 3), &Dyadic::from_int(3), 3), 5);
        // a peak below the target needs nothing
        assert_eq!(tent_modulus(&Dyadic::new(1, 5), &Dyadic::from_int(3), 3), 0);
    }

    #[test]
    fn null_extractor_is_fooled() {
        let f = fool_modulus(&NullExtractor, &IntPoly::monomial(1, 2)).unwrap();
        assert_eq!(f.report.n, 10);
        assert_eq!(f.claimed, 10);
        assert_eq!(f.cell.index, 0);
        assert!(f.required > 10);
        assert!(f.report.fooled(), "{}", f.report);
    }

    #[test]
    fn grid_probe_is_fooled_by_a_genuine_name() {
        let p = IntPoly::monomial(4, 2);
        let f = fool_modulus(&GridProbe { budget: p.clone() }, &p).unwrap();
        assert_eq!(f.report.n, 13);
        assert_eq!(f.claimed, 12);
        assert_eq!(f.required, 15);
        assert!(f.report.fooled(), "{}", f.report);
        let cfg = crate::funcrep::XicCheck {
            n_max: 24,
            exhaustive_n: 6,
            extra_points: vec![f.cell.mid(), f.cell.lo(), f.cell.hi()],
            ..Default::default()
        };
        let v = crate::funcrep::validate_xic(&f.psi_prime, &cfg).unwrap();
        assert!(v.is_clean(), "{:?}", v.violations);
    }
}
