use std::fmt;
use std::sync::Arc;

/// A monotone nondecreasing function on the naturals.
///
/// Used for name lengths, moduli of continuity and step-function probes.
/// Monotonicity is the caller's warranty; [`LengthFn::is_monotone_on`] checks it
/// on a prefix.
#[derive(Clone)]
pub struct LengthFn {
    f: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
    label: Arc<str>,
}

impl LengthFn {
    pub fn from_fn(label: impl Into<String>, f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> LengthFn {
        LengthFn { f: Arc::new(f), label: Arc::from(label.into()) }
    }

    pub fn constant(c: u64) -> LengthFn {
        LengthFn::from_fn(format!("const {c}"), move |_| c)
    }

    pub fn identity() -> LengthFn {
        LengthFn::from_fn("n", |n| n)
    }

    /// `a·n + b`, saturating.
    pub fn affine(a: u64, b: u64) -> LengthFn {
        LengthFn::from_fn(format!("{a}n+{b}"), move |n| a.saturating_mul(n).saturating_add(b))
    }

    /// `0` for `j <= k`, `big` for `j > k`; `k = -1` is written as `None`.
    pub fn step(k: Option<u64>, big: u64) -> LengthFn {
        let label = match k {
            Some(k) => format!("step({k},{big})"),
            None => format!("const {big}"),
        };
        LengthFn::from_fn(label, move |j| match k {
            Some(k) if j <= k => 0,
            _ => big,
        })
    }

    /// A monotone step function from `(threshold, value)` pairs: the value of the
    /// last threshold not exceeding the argument, 0 before the first.
    pub fn steps(points: Vec<(u64, u64)>) -> LengthFn {
        let mut pts = points;
        pts.sort();
        let label = format!("steps{pts:?}");
        LengthFn::from_fn(label, move |j| {
            let mut v = 0;
            for (t, val) in &pts {
                if *t <= j {
                    v = v.max(*val);
                }
            }
            v
        })
    }

    pub fn eval(&self, n: u64) -> u64 {
        (self.f)(n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `n ↦ self(n + shift)`
    pub fn shifted(&self, shift: u64) -> LengthFn {
        let f = self.clone();
        LengthFn::from_fn(format!("{}∘(n+{shift})", self.label), move |n| f.eval(n.saturating_add(shift)))
    }

    /// Pointwise maximum.
    pub fn max_with(&self, other: &LengthFn) -> LengthFn {
        let (a, b) = (self.clone(), other.clone());
        LengthFn::from_fn(format!("max({},{})", self.label, other.label), move |n| a.eval(n).max(b.eval(n)))
    }

    pub fn is_monotone_on(&self, upto: u64) -> bool {
        (0..upto).all(|n| self.eval(n) <= self.eval(n + 1))
    }

    pub fn values(&self, upto: u64) -> Vec<u64> {
        (0..=upto).map(|n| self.eval(n)).collect()
    }
}

impl fmt::Debug for LengthFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LengthFn({})", self.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_shapes() {
        assert_eq!(LengthFn::constant(4).eval(100), 4);
        assert_eq!(LengthFn::affine(2, 3).eval(5), 13);
        let s = LengthFn::step(Some(3), 50);
        assert_eq!(s.values(5), vec![0, 0, 0, 0, 50, 50]);
        assert_eq!(LengthFn::step(None, 7).eval(0), 7);
        let st = LengthFn::steps(vec![(2, 5), (4, 9)]);
        assert_eq!(st.values(5), vec![0, 0, 5, 5, 9, 9]);
        assert!(st.is_monotone_on(20));
        assert_eq!(LengthFn::identity().shifted(3).eval(2), 5);
        let m = LengthFn::identity().max_with(&LengthFn::constant(3));
        assert_eq!(m.values(4), vec![3, 3, 3, 3, 4]);
    }
}
