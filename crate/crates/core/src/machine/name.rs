use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::encodings::{LengthFn, Word};

type AnswerFn = dyn Fn(&Word) -> Word + Send + Sync;

/// A total, deterministic string function with a memo and a log of the
/// distinct words it has been asked.
///
/// Clones share the memo and log. [`Name::fresh`] gives a handle with the same
/// answers and empty bookkeeping.
#[derive(Clone)]
pub struct Name {
    inner: Arc<Inner>,
}

struct Inner {
    label: String,
    answer: Arc<AnswerFn>,
    declared_length: Option<LengthFn>,
    state: Mutex<State>,
}

#[derive(Default)]
struct State {
    memo: HashMap<Word, Word>,
    order: Vec<Word>,
    violations: Vec<LengthViolation>,
}

/// An answer longer than the declared length allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthViolation {
    pub query: Word,
    pub answer_len: usize,
    pub declared: u64,
}

impl Name {
    pub fn new(label: impl Into<String>, answer: impl Fn(&Word) -> Word + Send + Sync + 'static) -> Name {
        Name::from_parts(label.into(), Arc::new(answer), None)
    }

    fn from_parts(label: String, answer: Arc<AnswerFn>, declared_length: Option<LengthFn>) -> Name {
        Name {
            inner: Arc::new(Inner { label, answer, declared_length, state: Mutex::new(State::default()) }),
        }
    }

    /// The name answering `ε` everywhere.
    pub fn constant_empty() -> Name {
        Name::new("ε-constant", |_| Word::empty())
    }

    pub fn constant(answer: Word) -> Name {
        Name::new(format!("constant {answer}"), move |_| answer.clone())
    }

    /// Same answers, with a declared length that every answer is checked against.
    pub fn with_declared_length(&self, length: LengthFn) -> Name {
        Name::from_parts(self.inner.label.clone(), self.inner.answer.clone(), Some(length))
    }

    pub fn relabel(&self, label: impl Into<String>) -> Name {
        Name::from_parts(label.into(), self.inner.answer.clone(), self.inner.declared_length.clone())
    }

    /// Same answers and declared length; empty memo and log.
    pub fn fresh(&self) -> Name {
        Name::from_parts(self.inner.label.clone(), self.inner.answer.clone(), self.inner.declared_length.clone())
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn declared_length(&self) -> Option<&LengthFn> {
        self.inner.declared_length.as_ref()
    }

    pub fn query(&self, q: &Word) -> Word {
        if let Some(a) = self.inner.state.lock().expect("name state").memo.get(q) {
            return a.clone();
        }
        // computed outside the lock: answers may query other names
        let a = (self.inner.answer)(q);
        let mut st = self.inner.state.lock().expect("name state");
        if let Some(prev) = st.memo.get(q) {
            return prev.clone();
        }
        if let Some(len) = &self.inner.declared_length {
            let declared = len.eval(q.len() as u64);
            if a.len() as u64 > declared {
                st.violations.push(LengthViolation { query: q.clone(), answer_len: a.len(), declared });
            }
        }
        st.memo.insert(q.clone(), a.clone());
        st.order.push(q.clone());
        a
    }

    /// Distinct queries in first-asked order.
    pub fn queries(&self) -> Vec<Word> {
        self.inner.state.lock().expect("name state").order.clone()
    }

    /// `(query, answer)` for every distinct query so far.
    pub fn records(&self) -> Vec<(Word, Word)> {
        let st = self.inner.state.lock().expect("name state");
        st.order.iter().map(|q| (q.clone(), st.memo[q].clone())).collect()
    }

    pub fn was_queried(&self, q: &Word) -> bool {
        self.inner.state.lock().expect("name state").memo.contains_key(q)
    }

    pub fn query_count(&self) -> usize {
        self.inner.state.lock().expect("name state").order.len()
    }

    pub fn length_violations(&self) -> Vec<LengthViolation> {
        self.inner.state.lock().expect("name state").violations.clone()
    }

    /// Monotone closure of the logged `(|query|, |answer|)` pairs.
    pub fn observed_length(&self) -> LengthFn {
        let pairs: Vec<(usize, usize)> = self.records().iter().map(|(q, a)| (q.len(), a.len())).collect();
        super::observed_length_of(pairs)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Name({})", self.inner.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::w;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn memoizes_and_logs_distinct_queries() {
        let calls = Arc::new(AtomicUsize::new(0));
        let c = calls.clone();
        let n = Name::new("rev", move |a| {
            c.fetch_add(1, Ordering::SeqCst);
            a.reversed()
        });
        assert_eq!(n.query(&w("01#")), w("#10"));
        assert_eq!(n.query(&w("01#")), w("#10"));
        assert_eq!(n.query(&w("1")), w("1"));
        assert_eq!(calls.load(Ordering::SeqCst), 2);
        assert_eq!(n.queries(), vec![w("01#"), w("1")]);
        let f = n.fresh();
        assert_eq!(f.query_count(), 0);
        assert_eq!(f.query(&w("0#")), w("#0"));
    }

    #[test]
    fn declared_length_is_checked() {
        let n = Name::new("double", |a| a.concat(a)).with_declared_length(LengthFn::affine(2, 0));
        n.query(&w("011"));
        assert!(n.length_violations().is_empty());
        let bad = Name::new("double", |a| a.concat(a)).with_declared_length(LengthFn::identity());
        bad.query(&w("01"));
        assert_eq!(bad.length_violations().len(), 1);
        assert_eq!(bad.length_violations()[0].answer_len, 4);
    }
}
