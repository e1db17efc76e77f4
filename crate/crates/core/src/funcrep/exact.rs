use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::encodings::{decode_dyadic, encode_dyadic, Dyadic, DyadicError, Word};

/// A continuous function on `[0,1]` with exact dyadic evaluation and exact
/// extrema over dyadic intervals.
pub trait ExactFunction: Send + Sync {
    fn label(&self) -> String;

    /// `f(x)` for dyadic `x ∈ [0,1]`.
    fn value(&self, x: &Dyadic) -> Dyadic;

    /// `(min, max)` of `f` over `[lo, hi] ∩ [0,1]`; the intersection must be nonempty.
    fn range(&self, lo: &Dyadic, hi: &Dyadic) -> (Dyadic, Dyadic);

    /// An upper bound for `|f|` on `[0,1]`.
    fn sup_abs(&self) -> Dyadic;
}

pub type SharedFunction = Arc<dyn ExactFunction>;

fn clamp_unit(lo: &Dyadic, hi: &Dyadic) -> (Dyadic, Dyadic) {
    let (z, o) = (Dyadic::zero(), Dyadic::one());
    let lo = lo.clamped(&z, &o);
    let hi = hi.clamped(&z, &o);
    assert!(lo <= hi, "empty interval");
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PwlError {
    #[error("need at least two breakpoints")]
    TooFew,
    #[error("first breakpoint must be at x = 0")]
    Start,
    #[error("last breakpoint must be at x = 1")]
    End,
    #[error("breakpoints not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("slope of segment {0} is not dyadic")]
    NonDyadicSlope(usize),
    #[error("bump must have positive height and fit inside [0,1]")]
    Bump,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
}

/// A piecewise-linear function with dyadic breakpoints and dyadic slopes.
#[derive(Clone, PartialEq, Eq)]
pub struct PiecewiseLinear {
    points: Vec<(Dyadic, Dyadic)>,
    slopes: Vec<Dyadic>,
    label: String,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Dyadic, Dyadic)>) -> Result<PiecewiseLinear, PwlError> {
        if points.len() < 2 {
            return Err(PwlError::TooFew);
        }
        if !points[0].0.is_zero() {
            return Err(PwlError::Start);
        }
        if points[points.len() - 1].0 != Dyadic::one() {
            return Err(PwlError::End);
        }
        let mut slopes = Vec::with_capacity(points.len() - 1);
        for i in 1..points.len() {
            let dx = &points[i].0 - &points[i - 1].0;
            if !dx.is_positive() {
                return Err(PwlError::NotIncreasing(i));
            }
            let dy = &points[i].1 - &points[i - 1].1;
            slopes.push(dy.checked_div(&dx).ok_or(PwlError::NonDyadicSlope(i - 1))?);
        }
        let label = format!("pwl[{} pts]", points.len());
        Ok(PiecewiseLinear { points, slopes, label })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> PiecewiseLinear {
        self.label = label.into();
        self
    }

    pub fn constant(c: Dyadic) -> PiecewiseLinear {
        PiecewiseLinear::new(vec![(Dyadic::zero(), c.clone()), (Dyadic::one(), c.clone())])
            .expect("constant")
            .with_label(format!("const {c:?}"))
    }

    pub fn identity() -> PiecewiseLinear {
        PiecewiseLinear::new(vec![(Dyadic::zero(), Dyadic::zero()), (Dyadic::one(), Dyadic::one())])
            .expect("identity")
            .with_label("identity")
    }

    /// Zero outside `[center ± height/slope]`, a tent of the given height and
    /// slope inside.
    pub fn bump(center: &Dyadic, height: &Dyadic, slope: &Dyadic) -> Result<PiecewiseLinear, PwlError> {
        let half = height.checked_div(slope).ok_or(PwlError::NonDyadicSlope(0))?;
        let (a, b) = (center - &half, center + &half);
        if !half.is_positive() || a.is_negative() || b > Dyadic::one() {
            return Err(PwlError::Bump);
        }
        let mut pts = Vec::with_capacity(5);
        if a.is_positive() {
            pts.push((Dyadic::zero(), Dyadic::zero()));
        }
        pts.push((a, Dyadic::zero()));
        pts.push((center.clone(), height.clone()));
        let tail = b < Dyadic::one();
        pts.push((b, Dyadic::zero()));
        if tail {
            pts.push((Dyadic::one(), Dyadic::zero()));
        }
        Ok(PiecewiseLinear::new(pts)?.with_label(format!("bump({center:?},{height:?},{slope:?})")))
    }

    pub fn points(&self) -> &[(Dyadic, Dyadic)] {
        &self.points
    }

    pub fn slopes(&self) -> &[Dyadic] {
        &self.slopes
    }

    /// Smallest `s ≥ 0` with every `|slope| ≤ 2^s`.
    pub fn slope_log2(&self) -> u64 {
        self.slopes.iter().filter_map(|s| s.ceil_log2_abs()).max().unwrap_or(0).max(0) as u64
    }

    /// One breakpoint per line, `x-word y-word`; `;` starts a comment line.
    pub fn parse(text: &str) -> Result<PiecewiseLinear, PwlError> {
        let mut points = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with(';') {
                continue;
            }
            let err = |message: String| PwlError::Parse { line: i + 1, message };
            let mut parts = line.split_whitespace();
            let (Some(xs), Some(ys), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(err("expected two words".into()));
            };
            let xw: Word = xs.parse().map_err(|e: crate::encodings::WordParseError| err(e.to_string()))?;
            let yw: Word = ys.parse().map_err(|e: crate::encodings::WordParseError| err(e.to_string()))?;
            points.push((decode_dyadic(&xw)?, decode_dyadic(&yw)?));
        }
        PiecewiseLinear::new(points)
    }

    pub fn to_text(&self) -> String {
        self.points.iter().map(|(x, y)| format!("{} {}\n", encode_dyadic(x, 0), encode_dyadic(y, 0))).collect()
    }

    fn segment(&self, x: &Dyadic) -> usize {
        // last i with points[i].x <= x, capped at the last segment
        let i = self.points.partition_point(|(px, _)| px <= x);
        i.saturating_sub(1).min(self.slopes.len() - 1)
    }
}

impl fmt::Debug for PiecewiseLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        f.debug_list().entries(self.points.iter()).finish()
    }
}

impl ExactFunction for PiecewiseLinear {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn value(&self, x: &Dyadic) -> Dyadic {
        let i = self.segment(x);
        let (x0, y0) = &self.points[i];
        y0 + &(&self.slopes[i] * &(x - x0))
    }

    fn range(&self, lo: &Dyadic, hi: &Dyadic) -> (Dyadic, Dyadic) {
        let (lo, hi) = clamp_unit(lo, hi);
        let mut min = self.value(&lo);
        let mut max = min.clone();
        let hv = self.value(&hi);
        for v in std::iter::once(&hv).chain(self.points.iter().filter(|(x, _)| *x > lo && *x < hi).map(|(_, y)| y)) {
            if *v < min {
                min = v.clone();
            }
            if *v > max {
                max = v.clone();
            }
        }
        (min, max)
    }

    fn sup_abs(&self) -> Dyadic {
        self.points.iter().map(|(_, y)| y.abs()).max().unwrap_or_else(Dyadic::zero)
    }
}

/// `Σ_i 2^-i · max(1 − |2^(2i+2)·x − 3|, 0)`: tooth `i` lives on
/// `(2^(-2i-1), 2^(-2i))` and peaks at `3·2^(-2i-2)` with height `2^-i`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sawtooth;

impl Sawtooth {
    /// The tooth whose open support contains `x`, if any.
    pub fn tooth(x: &Dyadic) -> Option<u64> {
        let e = x.floor_log2()?;
        if e < 0 && (-e) % 2 == 1 {
            let i = ((-e - 1) / 2) as u64;
            // x in [2^(-2i-1), 2^(-2i)); the left end is a zero of the tooth
            if *x == Dyadic::pow2(e) {
                return None;
            }
            Some(i)
        } else {
            None
        }
    }

    pub fn peak(i: u64) -> Dyadic {
        Dyadic::new(3, 2 * i + 2)
    }

    pub fn height(i: u64) -> Dyadic {
        Dyadic::pow2(-(i as i64))
    }
}

impl ExactFunction for Sawtooth {
    fn label(&self) -> String {
        "sawtooth".into()
    }

    fn value(&self, x: &Dyadic) -> Dyadic {
        match Sawtooth::tooth(x) {
            Some(i) => {
                let t = &x.mul_pow2(2 * i as i64 + 2) - &Dyadic::from_int(3);
                &Sawtooth::height(i) * &(&Dyadic::one() - &t.abs())
            }
            None => Dyadic::zero(),
        }
    }

    fn range(&self, lo: &Dyadic, hi: &Dyadic) -> (Dyadic, Dyadic) {
        let (lo, hi) = clamp_unit(lo, hi);
        let (vl, vh) = (self.value(&lo), self.value(&hi));
        let mut max = vl.clone().max(vh.clone());
        if hi.is_positive() {
            // the highest tooth peak inside [lo, hi]
            let mut i = 0u64;
            while Sawtooth::peak(i) > hi {
                i += 1;
            }
            if Sawtooth::peak(i) >= lo {
                let h = Sawtooth::height(i);
                if h > max {
                    max = h;
                }
            }
        }
        let min = match (Sawtooth::tooth(&lo), Sawtooth::tooth(&hi)) {
            (Some(a), Some(b)) if a == b => vl.min(vh),
            _ => Dyadic::zero(),
        };
        (min, max)
    }

    fn sup_abs(&self) -> Dyadic {
        Dyadic::one()
    }
}

/// `f ∘ g`; `g` is expected to map `[0,1]` into `[0,1]` and its range is
/// clamped there before `f` is applied.
#[derive(Clone)]
pub struct Composed {
    pub outer: SharedFunction,
    pub inner: SharedFunction,
}

impl ExactFunction for Composed {
    fn label(&self) -> String {
        format!("{}∘{}", self.outer.label(), self.inner.label())
    }

    fn value(&self, x: &Dyadic) -> Dyadic {
        let y = self.inner.value(x).clamped(&Dyadic::zero(), &Dyadic::one());
        self.outer.value(&y)
    }

    fn range(&self, lo: &Dyadic, hi: &Dyadic) -> (Dyadic, Dyadic) {
        let (a, b) = self.inner.range(lo, hi);
        let (a, b) = clamp_unit(&a.clamped(&Dyadic::zero(), &Dyadic::one()), &b.clamped(&Dyadic::zero(), &Dyadic::one()));
        self.outer.range(&a, &b)
    }

    fn sup_abs(&self) -> Dyadic {
        self.outer.sup_abs()
    }
}
