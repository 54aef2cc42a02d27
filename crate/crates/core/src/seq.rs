//! Lazily evaluated infinite sequences of rationals.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::rational::{frac, Rational};

type EvalFn = dyn Fn(usize) -> Result<Rational> + Send + Sync;

/// An infinite sequence `k ↦ x_k`, optionally declared to vanish beyond a
/// finite support bound.
///
/// Evaluation is pure and may fail (weight sequences derived from invalid
/// data, columns of a singular inverse). Cloning is cheap.
#[derive(Clone)]
pub struct Seq {
    eval: Arc<EvalFn>,
    support_bound: Option<usize>,
    label: String,
}

impl Seq {
    pub fn from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Rational + Send + Sync + 'static,
    {
        Self::try_from_fn(label, move |k| Ok(f(k)))
    }

    pub fn try_from_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Result<Rational> + Send + Sync + 'static,
    {
        Seq {
            eval: Arc::new(f),
            support_bound: None,
            label: label.into(),
        }
    }

    /// Declares that every term past `bound` is zero. Evaluation beyond the
    /// bound short-circuits to zero without calling the closure.
    pub fn with_support_bound(mut self, bound: usize) -> Self {
        self.support_bound = Some(bound);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// A finitely supported sequence with the given leading terms.
    pub fn finite(label: impl Into<String>, terms: Vec<Rational>) -> Self {
        let bound = terms.len().saturating_sub(1);
        let terms = Arc::new(terms);
        Seq::from_fn(label, move |k| terms.get(k).cloned().unwrap_or_else(Rational::zero))
            .with_support_bound(bound)
    }

    pub fn zero() -> Self {
        Seq::from_fn("0", |_| Rational::zero()).with_support_bound(0)
    }

    /// `e = (1, 1, 1, ...)`.
    pub fn ones() -> Self {
        Seq::from_fn("e", |_| Rational::one())
    }

    /// `e⁽ʲ⁾`, the j-th unit sequence.
    pub fn unit(j: usize) -> Self {
        Seq::from_fn(format!("e({j})"), move |k| {
            if k == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .with_support_bound(j)
    }

    /// `1/(k+1)`.
    pub fn harmonic() -> Self {
        Seq::from_fn("1/(k+1)", |k| frac(1, k as i64 + 1))
    }

    pub fn constant(value: Rational) -> Self {
        let label = format!("const({value})");
        Seq::from_fn(label, move |_| value.clone())
    }

    pub fn eval(&self, k: usize) -> Result<Rational> {
        match self.support_bound {
            Some(bound) if k > bound => Ok(Rational::zero()),
            _ => (self.eval)(k),
        }
    }

    /// Terms `0..len`.
    pub fn prefix(&self, len: usize) -> Result<Vec<Rational>> {
        (0..len).map(|k| self.eval(k)).collect()
    }

    pub fn support_bound(&self) -> Option<usize> {
        self.support_bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Pointwise transformation, keeping the support bound when `f(0) = 0`
    /// is promised by the caller through `preserves_zero`.
    pub fn map<F>(&self, label: impl Into<String>, preserves_zero: bool, f: F) -> Seq
    where
        F: Fn(usize, Rational) -> Result<Rational> + Send + Sync + 'static,
    {
        let source = self.clone();
        let mapped = Seq::try_from_fn(label, move |k| f(k, source.eval(k)?));
        match (preserves_zero, self.support_bound) {
            (true, Some(bound)) => mapped.with_support_bound(bound),
            _ => mapped,
        }
    }

    /// Running sums `S_n = Σ_{k≤n} x_k`, memoized so that a prefix of
    /// length n costs O(n) additions in total.
    pub fn partial_sums(&self, label: impl Into<String>) -> Seq {
        let source = self.clone();
        let cache: Mutex<Vec<Rational>> = Mutex::new(Vec::new());
        Seq::try_from_fn(label, move |n| {
            let mut sums = cache.lock().expect("partial-sum cache poisoned");
            while sums.len() <= n {
                let k = sums.len();
                let next = match sums.last() {
                    Some(prev) => prev + source.eval(k)?,
                    None => source.eval(0)?,
                };
                sums.push(next);
            }
            Ok(sums[n].clone())
        })
    }

    /// Caches every evaluated term.
    pub fn memoized(&self) -> Seq {
        let source = self.clone();
        let cache: Mutex<Vec<Option<Rational>>> = Mutex::new(Vec::new());
        let memo = Seq::try_from_fn(self.label.clone(), move |k| {
            if let Some(Some(v)) = cache.lock().expect("sequence cache poisoned").get(k) {
                return Ok(v.clone());
            }
            let value = source.eval(k)?;
            let mut slots = cache.lock().expect("sequence cache poisoned");
            if slots.len() <= k {
                slots.resize(k + 1, None);
            }
            slots[k] = Some(value.clone());
            Ok(value)
        });
        match self.support_bound {
            Some(bound) => memo.with_support_bound(bound),
            None => memo,
        }
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seq")
            .field("label", &self.label)
            .field("support_bound", &self.support_bound)
            .finish()
    }
}
