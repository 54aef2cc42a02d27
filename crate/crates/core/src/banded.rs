//! Row-finite matrices: every row has finitely many nonzero entries, but
//! entries above the diagonal are allowed. Row finiteness is what makes
//! the products `A·T⁻¹` exact: each entry is a finite sum.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{require_truncation, Result};
use crate::rational::Rational;
use crate::seq::Seq;
use crate::triangle::{DenseTrunc, MatrixView, Triangle};

type RowFn = dyn Fn(usize) -> Result<Vec<Rational>> + Send + Sync;
type Row = Arc<[Rational]>;

/// A lazily evaluated matrix whose row n is produced as the finite vector
/// `(a_n0, ..., a_n,b(n))`; every entry past it is zero. There is no way to
/// build a row without a finite bound.
#[derive(Clone)]
pub struct BandedMatrix {
    inner: Arc<Inner>,
}

struct Inner {
    rows: Box<RowFn>,
    label: String,
    cache: Mutex<HashMap<usize, Row>>,
}

impl BandedMatrix {
    pub fn from_row_fn<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(usize) -> Result<Vec<Rational>> + Send + Sync + 'static,
    {
        BandedMatrix {
            inner: Arc::new(Inner {
                rows: Box::new(f),
                label: label.into(),
                cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Explicit leading rows; every later row is zero.
    pub fn from_rows(label: impl Into<String>, rows: Vec<Vec<Rational>>) -> Self {
        Self::from_row_fn(label, move |n| Ok(rows.get(n).cloned().unwrap_or_default()))
    }

    /// The band `[n - below, n + above]` around the diagonal, clipped at
    /// column 0, with entries from `f`.
    pub fn from_band<F>(label: impl Into<String>, below: usize, above: usize, f: F) -> Self
    where
        F: Fn(usize, usize) -> Result<Rational> + Send + Sync + 'static,
    {
        Self::from_row_fn(label, move |n| {
            let lo = n.saturating_sub(below);
            (0..=n + above)
                .map(|k| if k < lo { Ok(Rational::zero()) } else { f(n, k) })
                .collect()
        })
    }

    pub fn from_triangle(t: &Triangle) -> Self {
        let t = t.clone();
        Self::from_row_fn(t.label().to_owned(), move |n| Ok(t.row(n)?.to_vec()))
    }

    pub fn zero() -> Self {
        Self::from_rows("0", Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Row n with trailing zeros removed.
    pub fn row(&self, n: usize) -> Result<Row> {
        if let Some(row) = self.inner.cache.lock().expect("row cache poisoned").get(&n) {
            return Ok(row.clone());
        }
        let mut row = (self.inner.rows)(n)?;
        while row.last().is_some_and(Rational::is_zero) {
            row.pop();
        }
        let row: Row = row.into();
        self.inner
            .cache
            .lock()
            .expect("row cache poisoned")
            .insert(n, row.clone());
        Ok(row)
    }

    /// Last column holding a nonzero entry in row n, or `None` for a zero row.
    pub fn row_bound(&self, n: usize) -> Result<Option<usize>> {
        Ok(self.row(n)?.len().checked_sub(1))
    }

    pub fn entry(&self, n: usize, k: usize) -> Result<Rational> {
        Ok(self.row(n)?.get(k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Row n as a finitely supported sequence `k ↦ a_nk`.
    pub fn row_seq(&self, n: usize) -> Result<Seq> {
        let row = self.row(n)?.to_vec();
        Ok(Seq::finite(format!("{}[{n},·]", self.label()), row))
    }

    /// The N×N leading submatrix (entries right of column N−1 dropped).
    pub fn truncate(&self, size: usize) -> Result<DenseTrunc> {
        require_truncation(size)?;
        let rows = (0..size)
            .map(|n| self.row_prefix(n, size))
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseTrunc::from_rows(rows))
    }

    /// `(Ax)_n = Σ_k a_nk x_k` for `n < size`; exact since rows are finite.
    pub fn apply(&self, x: &Seq, size: usize) -> Result<Vec<Rational>> {
        require_truncation(size)?;
        (0..size)
            .map(|n| {
                let row = self.row(n)?;
                let mut acc = Rational::zero();
                for (k, a) in row.iter().enumerate() {
                    if !a.is_zero() {
                        acc += a * x.eval(k)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }
}

impl MatrixView for BandedMatrix {
    fn entry(&self, n: usize, k: usize) -> Result<Rational> {
        BandedMatrix::entry(self, n, k)
    }

    fn row_prefix(&self, n: usize, len: usize) -> Result<Vec<Rational>> {
        let mut out: Vec<Rational> = self.row(n)?.iter().take(len).cloned().collect();
        out.resize(len, Rational::zero());
        Ok(out)
    }
}

impl From<&Triangle> for BandedMatrix {
    fn from(t: &Triangle) -> Self {
        BandedMatrix::from_triangle(t)
    }
}

impl fmt::Debug for BandedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BandedMatrix").field("label", &self.inner.label).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn rows_trim_and_bound() {
        let m = BandedMatrix::from_rows("m", vec![vec![int(1), int(0)], vec![], vec![int(0), int(2), int(3)]]);
        assert_eq!(m.row_bound(0).unwrap(), Some(0));
        assert_eq!(m.row_bound(1).unwrap(), None);
        assert_eq!(m.row_bound(2).unwrap(), Some(2));
        assert_eq!(m.row_bound(9).unwrap(), None);
        assert_eq!(m.entry(2, 2).unwrap(), int(3));
        assert_eq!(m.entry(0, 7).unwrap(), int(0));
        assert_eq!(m.row_seq(2).unwrap().support_bound(), Some(2));
    }

    #[test]
    fn band_allows_superdiagonal() {
        let m = BandedMatrix::from_band("b", 1, 2, |n, k| Ok(int((n * 10 + k) as i64)));
        assert_eq!(m.row(3).unwrap().len(), 6);
        assert_eq!(m.entry(3, 1).unwrap(), int(0));
        assert_eq!(m.entry(3, 2).unwrap(), int(32));
        assert_eq!(m.entry(3, 5).unwrap(), int(35));
        assert_eq!(m.entry(0, 2).unwrap(), int(2));
        let x = Seq::finite("x", vec![int(1), int(1), int(1)]);
        assert_eq!(m.apply(&x, 2).unwrap(), vec![int(1 + 2), int(10 + 11 + 12)]);
    }

    #[test]
    fn triangle_as_banded() {
        let t = Triangle::from_fn("t", true, |n, k| Ok(int((n + k + 1) as i64)));
        let b = BandedMatrix::from(&t);
        assert_eq!(b.truncate(6).unwrap(), t.truncate(6).unwrap());
        let x = Seq::harmonic();
        assert_eq!(b.apply(&x, 6).unwrap(), t.apply(&x, 6).unwrap());
    }
}
