//! Names of continuous functions on `[0,1]`: the interval representation
//! (`1^n##r ↦ 1^m##q`) and length-monotone modulus/approximation pairs.

mod exact;
mod kc;
mod validate;
mod xic;

pub use exact::{Composed, ExactFunction, PiecewiseLinear, PwlError, Sawtooth, SharedFunction};
pub use kc::{
    is_length_monotone, kc_from, kc_from_exact, kc_modulus, kc_to_xic, Approximation, KcName, KcToXic,
};
pub use validate::{random_unit_dyadic, validate_xic, NoExactFunction, XicCheck, XicReport, XicViolation};
pub use xic::{
    broken_zero_name, tight_zero_name, parse_xic_answer, parse_xic_query, xic_answer, xic_bump, xic_from_exact,
    xic_from_interval_evaluator, xic_identity, xic_pwl, xic_query, xic_sawtooth, xic_zero, AnswerError,
    EvaluatorBounds, IntervalEvaluator, XicAnswer, XicName,
};
