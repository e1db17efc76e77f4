use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encodings::{encode_dyadic, exhaustive_lengths, CapExceeded, Dyadic, Word};
use crate::machine::LengthViolation;

use super::xic::{parse_xic_answer, parse_xic_query, xic_query, XicName};

#[derive(Debug, Clone)]
pub struct XicCheck {
    pub n_max: u64,
    /// Random `(r, n)` pairs for condition 1.
    pub samples: usize,
    /// Largest input length enumerated for the length comparison.
    pub exhaustive_n: usize,
    pub exhaustion_cap: usize,
    pub seed: u64,
    /// Points checked at every precision `n ≤ n_max`, besides 0, 1/2 and 1.
    pub extra_points: Vec<Dyadic>,
    pub max_r_bits: u64,
}

impl Default for XicCheck {
    fn default() -> XicCheck {
        XicCheck {
            n_max: 20,
            samples: 200,
            exhaustive_n: 8,
            exhaustion_cap: crate::encodings::DEFAULT_EXHAUSTION_CAP,
            seed: 0,
            extra_points: Vec::new(),
            max_r_bits: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XicViolation {
    Malformed { query: Word, answer: Word },
    Enclosure { n: u64, r: Dyadic, m: u64, q: Dyadic, min: Dyadic, max: Dyadic },
    LengthBound { query: Word, m: u64, length: u64 },
    LengthMismatch { k: usize, exhaustive: u64, analytic: u64 },
    DeclaredLength(LengthViolation),
}

#[derive(Debug, Clone, Default)]
pub struct XicReport {
    pub condition1_checked: usize,
    pub condition2_checked: usize,
    pub exhaustive_up_to: Option<usize>,
    pub cap: Option<CapExceeded>,
    pub violations: Vec<XicViolation>,
}

impl XicReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.cap.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("name has no exact function attached")]
pub struct NoExactFunction;

/// Checks both defining conditions against the attached exact function.
///
/// Condition 1 on fixed and random points; the length against exhaustive
/// enumeration up to `exhaustive_n`; condition 2 on every query the name has
/// logged so far (including those made by earlier runs).
pub fn validate_xic(x: &XicName, cfg: &XicCheck) -> Result<XicReport, NoExactFunction> {
    let f = x.function.clone().ok_or(NoExactFunction)?;
    let mut report = XicReport::default();

    let k_max = (cfg.n_max as usize).min(cfg.exhaustive_n);
    match exhaustive_lengths(&x.name, k_max, cfg.exhaustion_cap) {
        Ok(ex) => {
            report.exhaustive_up_to = Some(k_max);
            for (k, e) in ex.into_iter().enumerate() {
                let a = x.length.eval(k as u64);
                let ok = if x.length_exact { e == a } else { e >= a };
                if !ok {
                    report.violations.push(XicViolation::LengthMismatch { k, exhaustive: e, analytic: a });
                }
            }
        }
        Err(cap) => report.cap = Some(cap),
    }

    let check = |n: u64, r: &Dyadic, report: &mut XicReport| {
        let query = xic_query(n, &encode_dyadic(r, 0));
        let answer = x.name.query(&query);
        report.condition1_checked += 1;
        match parse_xic_answer(&answer) {
            Ok(a) => {
                let rad = Dyadic::pow2(-(a.m as i64));
                let (min, max) = f.range(&(r - &rad), &(r + &rad));
                let tol = Dyadic::pow2(-(n as i64));
                if min < &a.q - &tol || max > &a.q + &tol {
                    report.violations.push(XicViolation::Enclosure { n, r: r.clone(), m: a.m, q: a.q, min, max });
                }
            }
            Err(_) => report.violations.push(XicViolation::Malformed { query, answer }),
        }
    };

    let mut fixed = vec![Dyadic::zero(), Dyadic::new(1, 1), Dyadic::one()];
    fixed.extend(cfg.extra_points.iter().cloned());
    for n in 0..=cfg.n_max {
        for r in &fixed {
            check(n, r, &mut report);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.samples {
        let n = rng.gen_range(0..=cfg.n_max);
        let r = random_unit_dyadic(&mut rng, cfg.max_r_bits);
        check(n, &r, &mut report);
    }

    for (query, answer) in x.name.records() {
        let Some((n, _)) = parse_xic_query(&query) else { continue };
        report.condition2_checked += 1;
        match parse_xic_answer(&answer) {
            Ok(a) => {
                let length = x.length.eval(n);
                if a.m > length {
                    report.violations.push(XicViolation::LengthBound { query, m: a.m, length });
                }
            }
            Err(_) => report.violations.push(XicViolation::Malformed { query, answer }),
        }
    }
    for v in x.name.length_violations() {
        report.violations.push(XicViolation::DeclaredLength(v));
    }
    Ok(report)
}

/// Uniform numerator over `[0, 2^b]` with `b` uniform in `0..=max_bits`.
pub fn random_unit_dyadic<R: Rng>(rng: &mut R, max_bits: u64) -> Dyadic {
    let b = rng.gen_range(0..=max_bits.min(62));
    let num = rng.gen_range(0..=(1u64 << b));
    Dyadic::new(num as i64, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::xic::{broken_zero_name, tight_zero_name, xic_answer, xic_identity, xic_sawtooth, xic_zero};
    use crate::machine::Name;

    #[test]
    fn catalog_names_are_clean() {
        let cfg = XicCheck { n_max: 12, samples: 100, exhaustive_n: 6, ..XicCheck::default() };
        for x in [xic_zero(), xic_identity(), xic_sawtooth(), tight_zero_name()] {
            let r = validate_xic(&x, &cfg).unwrap();
            assert!(r.is_clean(), "{}: {:?}", x.label(), r.violations);
            assert!(r.condition2_checked > 0);
        }
    }

    #[test]
    fn corrupted_value_is_a_condition_one_violation() {
        let r = validate_xic(&broken_zero_name(), &XicCheck { n_max: 4, samples: 0, ..XicCheck::default() }).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, XicViolation::Enclosure { n: 2, .. })));
    }

    #[test]
    fn overlong_radius_is_a_condition_two_violation() {
        let good = xic_zero();
        let inner = good.name.clone();
        // m = 50 is a valid radius claim for zero, but exceeds the declared length
        let name = Name::new("greedy zero", move |a: &Word| match parse_xic_query(a) {
            Some((3, _)) => xic_answer(50, &Dyadic::zero()),
            _ => inner.query(a),
        });
        let x = XicName { name, length: good.length.clone(), length_exact: false, ..good };
        let r = validate_xic(&x, &XicCheck { n_max: 5, samples: 0, ..XicCheck::default() }).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, XicViolation::LengthBound { m: 50, .. })));
    }
}
