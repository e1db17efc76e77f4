use thiserror::Error;

use super::length::LengthFn;
use super::word::{Symbol, Word};
use crate::machine::Name;

/// Largest input length [`exhaustive_length`] enumerates by default.
pub const DEFAULT_EXHAUSTION_CAP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("exhaustive enumeration up to length {requested} exceeds the cap {cap}")]
pub struct CapExceeded {
    pub requested: usize,
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn tag(self) -> Symbol {
        match self {
            Side::Left => Symbol::Zero,
            Side::Right => Symbol::One,
        }
    }
}

/// `⟨φ,ψ⟩`: `0a ↦ φ(a)`, `1a ↦ ψ(a)`, everything else `ε`.
pub fn pair(phi: &Name, psi: &Name) -> Name {
    let (l, r) = (phi.clone(), psi.clone());
    let name = Name::new(format!("<{},{}>", phi.label(), psi.label()), move |a: &Word| match a.first() {
        Some(Symbol::Zero) => l.query(&a.suffix_from(1)),
        Some(Symbol::One) => r.query(&a.suffix_from(1)),
        _ => Word::empty(),
    });
    match (phi.declared_length(), psi.declared_length()) {
        (Some(lf), Some(rf)) => {
            let (lf, rf) = (lf.clone(), rf.clone());
            name.with_declared_length(LengthFn::from_fn("pair length", move |n| {
                if n == 0 {
                    0
                } else {
                    lf.eval(n - 1).max(rf.eval(n - 1))
                }
            }))
        }
        _ => name,
    }
}

/// The retraction of [`pair`] onto one side.
pub fn project(chi: &Name, side: Side) -> Name {
    let c = chi.clone();
    let tag = side.tag();
    Name::new(format!("{}.{:?}", chi.label(), side), move |a: &Word| c.query(&a.prepend(tag)))
}

/// `max{|φ(a)| : |a| ≤ n}` by enumerating all `3^0 + … + 3^n` words.
pub fn exhaustive_length(phi: &Name, n: usize) -> Result<u64, CapExceeded> {
    exhaustive_length_capped(phi, n, DEFAULT_EXHAUSTION_CAP)
}

pub fn exhaustive_length_capped(phi: &Name, n: usize, cap: usize) -> Result<u64, CapExceeded> {
    if n > cap {
        return Err(CapExceeded { requested: n, cap });
    }
    Ok(Word::all_up_to(n).map(|a| phi.query(&a).len() as u64).max().unwrap_or(0))
}

/// Exhaustive lengths at every `k ≤ n`, sharing one enumeration.
pub fn exhaustive_lengths(phi: &Name, n: usize, cap: usize) -> Result<Vec<u64>, CapExceeded> {
    if n > cap {
        return Err(CapExceeded { requested: n, cap });
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut running = 0u64;
    for k in 0..=n {
        for a in Word::all_of_length(k) {
            running = running.max(phi.query(&a).len() as u64);
        }
        out.push(running);
    }
    Ok(out)
}
