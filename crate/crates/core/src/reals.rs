//! Names of real numbers: `1^n ↦` a dyadic within `2^-n`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::encodings::{decode_dyadic, encode_dyadic, Dyadic, Word};
use crate::machine::Name;

type EnclosureFn = dyn Fn(u64) -> (Dyadic, Dyadic) + Send + Sync;

/// A name of a real together with, optionally, exact enclosures of the real.
#[derive(Clone)]
pub struct RealName {
    pub name: Name,
    exact: Option<Arc<EnclosureFn>>,
}

impl RealName {
    pub fn new(name: Name) -> RealName {
        RealName { name, exact: None }
    }

    /// Attaches an enclosure oracle: `k ↦ [lo, hi]` containing the real, of
    /// width at most `2^-k`.
    pub fn with_exact(mut self, f: impl Fn(u64) -> (Dyadic, Dyadic) + Send + Sync + 'static) -> RealName {
        self.exact = Some(Arc::new(f));
        self
    }

    pub fn enclosure(&self, k: u64) -> Option<(Dyadic, Dyadic)> {
        self.exact.as_ref().map(|f| f(k))
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Same answers and oracle, fresh query log.
    pub fn fresh(&self) -> RealName {
        RealName { name: self.name.fresh(), exact: self.exact.clone() }
    }
}

impl fmt::Debug for RealName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealName({})", self.name.label())
    }
}

/// `1^n ↦` `d` truncated to `n` fraction bits, written with exactly `n` of them.
pub fn real_from_dyadic(d: &Dyadic) -> RealName {
    let v = d.clone();
    let name = Name::new(format!("real {d}"), move |a: &Word| match a.as_unary() {
        Some(n) => encode_dyadic(&v.truncate(n as u64), n),
        None => Word::empty(),
    });
    let exact = d.clone();
    RealName::new(name).with_exact(move |_| (exact.clone(), exact.clone()))
}

/// Wraps an approximation sequence; the caller warrants `|approx(n) − x| ≤ 2^-n`.
pub fn real_from_sequence(
    label: impl Into<String>,
    approx: impl Fn(u64) -> Dyadic + Send + Sync + 'static,
) -> RealName {
    let name = Name::new(label, move |a: &Word| match a.as_unary() {
        Some(n) => encode_dyadic(&approx(n as u64), 0),
        None => Word::empty(),
    });
    RealName::new(name)
}

/// `⌊num · 2^k / den⌋ / 2^k`.
fn rational_floor(num: &BigInt, den: &BigInt, k: u64) -> Dyadic {
    let scaled = num << (k as usize);
    Dyadic::new(scaled.div_floor(den), k)
}

/// The rational `num/den`, named by its binary truncations to `n+1` bits.
pub fn real_from_rational(num: i64, den: u64) -> RealName {
    assert!(den > 0, "zero denominator");
    let (n_big, d_big) = (BigInt::from(num), BigInt::from(den));
    let (a, b) = (n_big.clone(), d_big.clone());
    let approx = move |n: u64| {
        // truncation toward zero of num/den to n+1 bits
        let fl = rational_floor(&num_traits::Signed::abs(&a), &b, n + 1);
        if a < BigInt::from(0) {
            -fl
        } else {
            fl
        }
    };
    real_from_sequence(format!("real {num}/{den}"), approx).with_exact(move |k| {
        let lo = rational_floor(&n_big, &d_big, k);
        let hi = &lo + &Dyadic::pow2(-(k as i64));
        (lo, hi)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealViolation {
    Malformed { n: u64, answer: Word },
    TooFar { n: u64, answer: Word },
}

impl RealViolation {
    pub fn precision(&self) -> u64 {
        match self {
            RealViolation::Malformed { n, .. } | RealViolation::TooFar { n, .. } => *n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealReport {
    pub checked: u64,
    pub first_violation: Option<RealViolation>,
    /// Precisions where the enclosure oracle could not decide within its refinement limit.
    pub undecided: Vec<u64>,
}

impl RealReport {
    pub fn is_clean(&self) -> bool {
        self.first_violation.is_none() && self.undecided.is_empty()
    }
}

/// Checks `|φ(1^n) − x| ≤ 2^-n` for all `n ≤ n_max` against the enclosure oracle.
///
/// Returns `None` when the name has no enclosure oracle.
pub fn validate_real_name(phi: &RealName, n_max: u64) -> Option<RealReport> {
    phi.exact.as_ref()?;
    let mut undecided = Vec::new();
    for n in 0..=n_max {
        let answer = phi.name.query(&Word::unary(n as usize));
        let q = match decode_dyadic(&answer) {
            Ok(q) => q,
            Err(_) => {
                return Some(RealReport {
                    checked: n + 1,
                    first_violation: Some(RealViolation::Malformed { n, answer }),
                    undecided,
                })
            }
        };
        match within(phi, &q, n) {
            Some(true) => {}
            Some(false) => {
                return Some(RealReport {
                    checked: n + 1,
                    first_violation: Some(RealViolation::TooFar { n, answer }),
                    undecided,
                })
            }
            None => undecided.push(n),
        }
    }
    Some(RealReport { checked: n_max + 1, first_violation: None, undecided })
}

/// Decides `|q − x| ≤ 2^-n` by refining the enclosure; `None` if still open
/// after 64 extra bits.
fn within(phi: &RealName, q: &Dyadic, n: u64) -> Option<bool> {
    let radius = Dyadic::pow2(-(n as i64));
    for k in [n + 2, n + 8, n + 16, n + 32, n + 64] {
        let (lo, hi) = phi.enclosure(k)?;
        let far = (q - &lo).abs().max((q - &hi).abs());
        if far <= radius {
            return Some(true);
        }
        let near = if *q < lo {
            &lo - q
        } else if *q > hi {
            q - &hi
        } else {
            Dyadic::zero()
        };
        if near > radius {
            return Some(false);
        }
    }
    // x may equal q ± 2^-n exactly, which no finite enclosure separates
    let (lo, hi) = phi.enclosure(n + 64)?;
    if lo == hi {
        return Some((q - &lo).abs() <= radius);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::w;

    #[test]
    fn dyadic_names() {
        let half = real_from_dyadic(&Dyadic::new(1, 1));
        assert_eq!(half.name.query(&w("111")), w("00#100"));
        let zero = real_from_dyadic(&Dyadic::zero());
        assert_eq!(zero.name.query(&w("1111")), w("00#0000"));
        let five_eighths = real_from_dyadic(&Dyadic::new(5, 3));
        let a = decode_dyadic(&five_eighths.name.query(&w("1"))).unwrap();
        assert_eq!(a, Dyadic::new(1, 1));
        assert_eq!(half.name.query(&w("1#")), Word::empty());
        assert!(validate_real_name(&half, 20).unwrap().is_clean());
    }

    #[test]
    fn one_third() {
        let third = real_from_rational(1, 3);
        let report = validate_real_name(&third, 30).unwrap();
        assert!(report.is_clean(), "{report:?}");
        let neg = real_from_rational(-1, 3);
        assert!(validate_real_name(&neg, 30).unwrap().is_clean());
    }

    #[test]
    fn corrupted_name_is_caught_at_its_first_bad_precision() {
        let good = real_from_dyadic(&Dyadic::one());
        let g = good.name.clone();
        let bad = RealName::new(Name::new("bad", move |a: &Word| {
            if a.as_unary() == Some(5) {
                w("00#")
            } else {
                g.query(a)
            }
        }))
        .with_exact(|_| (Dyadic::one(), Dyadic::one()));
        let report = validate_real_name(&bad, 10).unwrap();
        assert_eq!(report.first_violation.map(|v| v.precision()), Some(5));
    }

    #[test]
    fn sequence_towards_one() {
        let r = real_from_sequence("to one", |n| &Dyadic::one() - &Dyadic::pow2(-(n as i64) - 1))
            .with_exact(|_| (Dyadic::one(), Dyadic::one()));
        assert!(validate_real_name(&r, 25).unwrap().is_clean());
        assert!(validate_real_name(&real_from_sequence("none", |_| Dyadic::zero()), 3).is_none());
    }
}
