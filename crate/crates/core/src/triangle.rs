//! Lazy infinite lower-triangular matrices over the rationals.
//!
//! A [`Triangle`] is a shared handle to an immutable matrix whose rows are
//! computed on demand and cached in order. Entries above the diagonal are
//! zero by construction. Products and inverses are themselves lazy
//! triangles backed by the cached rows of their operands, so chains such as
//! `invert(compose(delta, cesaro))` cost O(N³) exact operations for an
//! N×N truncation instead of blowing up recursively.

use std::fmt;
use std::sync::{Arc, Mutex, Weak};

use num_traits::{One, Zero};

use crate::error::{require_truncation, Error, Result};
use crate::rational::{checked_recip, Rational};
use crate::seq::Seq;

type EntryFn = dyn Fn(usize, usize) -> Result<Rational> + Send + Sync;
type Row = Arc<[Rational]>;

/// Anything with addressable rational entries `(n, k) ↦ m_nk`.
pub trait MatrixView: Send + Sync {
    fn entry(&self, n: usize, k: usize) -> Result<Rational>;

    /// Entries `m_n0 .. m_n(len-1)`.
    fn row_prefix(&self, n: usize, len: usize) -> Result<Vec<Rational>> {
        (0..len).map(|k| self.entry(n, k)).collect()
    }
}

#[derive(Clone)]
pub struct Triangle {
    inner: Arc<Inner>,
}

struct Inner {
    source: Source,
    diag_nonzero: bool,
    label: String,
    rows: Mutex<Vec<Row>>,
    // Weak so that a triangle and its inverse do not keep each other alive.
    inverse: Mutex<Weak<Inner>>,
}

enum Source {
    Entries(Box<EntryFn>),
    /// Left factor applied after the right factor.
    Product(Triangle, Triangle),
    Inverse(Triangle),
}

impl Triangle {
    /// A triangle from an entry rule; `f` is only called with `k ≤ n`.
    pub fn from_fn<F>(label: impl Into<String>, diag_nonzero: bool, f: F) -> Self
    where
        F: Fn(usize, usize) -> Result<Rational> + Send + Sync + 'static,
    {
        Self::with_source(label.into(), diag_nonzero, Source::Entries(Box::new(f)))
    }

    fn with_source(label: String, diag_nonzero: bool, source: Source) -> Self {
        Triangle {
            inner: Arc::new(Inner {
                source,
                diag_nonzero,
                label,
                rows: Mutex::new(Vec::new()),
                inverse: Mutex::new(Weak::new()),
            }),
        }
    }

    pub fn identity() -> Self {
        Self::from_fn("I", true, |n, k| {
            Ok(if n == k { Rational::one() } else { Rational::zero() })
        })
    }

    pub fn zero() -> Self {
        Self::from_fn("0", false, |_, _| Ok(Rational::zero()))
    }

    /// `diag(d_0, d_1, ...)`. The nonzero-diagonal flag is only set when
    /// `d` is declared nowhere zero by the caller.
    pub fn diagonal(d: &Seq, diag_nonzero: bool) -> Self {
        let d = d.clone();
        Self::from_fn(format!("diag({})", d.label()), diag_nonzero, move |n, k| {
            if n == k {
                d.eval(n)
            } else {
                Ok(Rational::zero())
            }
        })
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn diag_nonzero(&self) -> bool {
        self.inner.diag_nonzero
    }

    pub fn relabel(&self, label: impl Into<String>) -> Triangle {
        let this = self.clone();
        Self::from_fn(label, self.diag_nonzero(), move |n, k| this.entry(n, k))
    }

    pub fn entry(&self, n: usize, k: usize) -> Result<Rational> {
        if k > n {
            return Ok(Rational::zero());
        }
        Ok(self.row(n)?[k].clone())
    }

    /// Row n, entries `0..=n`.
    pub fn row(&self, n: usize) -> Result<Row> {
        let mut rows = self.inner.rows.lock().expect("triangle row cache poisoned");
        while rows.len() <= n {
            let next = self.compute_row(rows.len(), &rows)?;
            rows.push(next);
        }
        Ok(rows[n].clone())
    }

    fn compute_row(&self, n: usize, earlier: &[Row]) -> Result<Row> {
        let row: Vec<Rational> = match &self.inner.source {
            Source::Entries(f) => {
                let row = (0..=n).map(|k| f(n, k)).collect::<Result<Vec<_>>>()?;
                if self.inner.diag_nonzero && row[n].is_zero() {
                    return Err(Error::Singular { row: n });
                }
                row
            }
            Source::Product(left, right) => {
                let left_row = left.row(n)?;
                let mut out = vec![Rational::zero(); n + 1];
                for (j, a) in left_row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let right_row = right.row(j)?;
                    for (k, b) in right_row.iter().enumerate() {
                        if !b.is_zero() {
                            out[k] += a * b;
                        }
                    }
                }
                out
            }
            Source::Inverse(source) => {
                // Forward substitution: row n of V solves Σ_j t_nj v_jk = δ_nk.
                let t = source.row(n)?;
                let pivot = checked_recip(&t[n]).map_err(|_| Error::Singular { row: n })?;
                let mut out = vec![Rational::zero(); n + 1];
                for (j, t_nj) in t.iter().enumerate().take(n) {
                    if t_nj.is_zero() {
                        continue;
                    }
                    for (k, v_jk) in earlier[j].iter().enumerate() {
                        if !v_jk.is_zero() {
                            out[k] -= t_nj * v_jk;
                        }
                    }
                }
                for v in out.iter_mut().take(n) {
                    *v *= &pivot;
                }
                out[n] = pivot;
                out
            }
        };
        Ok(row.into())
    }

    /// The N×N leading principal submatrix.
    pub fn truncate(&self, size: usize) -> Result<DenseTrunc> {
        require_truncation(size)?;
        let values = (0..size)
            .map(|n| {
                let row = self.row(n)?;
                let mut dense = row.to_vec();
                dense.resize(size, Rational::zero());
                Ok(dense)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseTrunc { values })
    }

    /// The first `size` coordinates of the transform `(Tx)_n = Σ_{k≤n} t_nk x_k`.
    /// For a triangle this finite sum is the whole coordinate.
    pub fn apply(&self, x: &Seq, size: usize) -> Result<Vec<Rational>> {
        require_truncation(size)?;
        let xs = x.prefix(size)?;
        (0..size)
            .map(|n| {
                let row = self.row(n)?;
                Ok(row
                    .iter()
                    .zip(&xs)
                    .filter(|(t, v)| !t.is_zero() && !v.is_zero())
                    .map(|(t, v)| t * v)
                    .sum())
            })
            .collect()
    }

    /// The transformed sequence `n ↦ (Tx)_n` as a lazy [`Seq`].
    pub fn transform(&self, x: &Seq) -> Seq {
        let (t, x) = (self.clone(), x.clone());
        let label = format!("{}·{}", self.label(), x.label());
        Seq::try_from_fn(label, move |n| {
            let row = t.row(n)?;
            let mut acc = Rational::zero();
            for (k, t_nk) in row.iter().enumerate() {
                if !t_nk.is_zero() {
                    acc += t_nk * x.eval(k)?;
                }
            }
            Ok(acc)
        })
        .memoized()
    }

    /// The matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Triangle) -> Triangle {
        Self::with_source(
            format!("{}·{}", self.label(), other.label()),
            self.diag_nonzero() && other.diag_nonzero(),
            Source::Product(self.clone(), other.clone()),
        )
    }

    /// The two-sided inverse, by forward substitution with memoized rows.
    /// Fails up front when the diagonal is not declared nonzero, and with
    /// [`Error::Singular`] naming the row if a zero pivot shows up anyway.
    /// While any handle to the inverse is alive, repeated calls share it
    /// and its row cache.
    pub fn invert(&self) -> Result<Triangle> {
        if !self.diag_nonzero() {
            return Err(Error::NotInvertible(self.label().to_owned()));
        }
        let mut slot = self.inner.inverse.lock().expect("inverse slot poisoned");
        if let Some(inner) = slot.upgrade() {
            return Ok(Triangle { inner });
        }
        let inverse = Self::with_source(
            format!("({})⁻¹", self.label()),
            true,
            Source::Inverse(self.clone()),
        );
        *slot = Arc::downgrade(&inverse.inner);
        Ok(inverse)
    }

    /// Column k as a sequence `n ↦ t_nk`.
    pub fn column(&self, k: usize) -> Seq {
        let t = self.clone();
        Seq::try_from_fn(format!("{}[·,{k}]", self.label()), move |n| t.entry(n, k))
    }
}

impl MatrixView for Triangle {
    fn entry(&self, n: usize, k: usize) -> Result<Rational> {
        Triangle::entry(self, n, k)
    }

    fn row_prefix(&self, n: usize, len: usize) -> Result<Vec<Rational>> {
        let mut out: Vec<Rational> = self.row(n)?.iter().take(len).cloned().collect();
        out.resize(len, Rational::zero());
        Ok(out)
    }
}

impl fmt::Debug for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Triangle")
            .field("label", &self.inner.label)
            .field("diag_nonzero", &self.inner.diag_nonzero)
            .finish()
    }
}

/// An N×N leading principal submatrix, fully materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTrunc {
    values: Vec<Vec<Rational>>,
}

impl DenseTrunc {
    pub fn from_rows(values: Vec<Vec<Rational>>) -> Self {
        let size = values.len();
        assert!(values.iter().all(|r| r.len() == size), "rows must form a square");
        DenseTrunc { values }
    }

    pub fn identity(size: usize) -> Self {
        let values = (0..size)
            .map(|n| {
                (0..size)
                    .map(|k| if n == k { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        DenseTrunc { values }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, n: usize, k: usize) -> &Rational {
        &self.values[n][k]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// Ordinary dense product; both operands must have the same size.
    pub fn mul(&self, other: &DenseTrunc) -> DenseTrunc {
        assert_eq!(self.size(), other.size(), "size mismatch");
        let size = self.size();
        let values = (0..size)
            .map(|n| {
                (0..size)
                    .map(|k| {
                        (0..size)
                            .filter(|&j| !self.values[n][j].is_zero())
                            .map(|j| &self.values[n][j] * &other.values[j][k])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        DenseTrunc { values }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        self.values
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.first_difference(&DenseTrunc::identity(self.size())).is_none()
    }

    /// First `(n, k)` in row-major order where the two truncations differ.
    pub fn first_difference(&self, other: &DenseTrunc) -> Option<(usize, usize)> {
        let size = self.size().min(other.size());
        (0..size)
            .flat_map(|n| (0..size).map(move |k| (n, k)))
            .find(|&(n, k)| self.values[n][k] != other.values[n][k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn delta() -> Triangle {
        Triangle::from_fn("Δ", true, |n, k| {
            Ok(if k == n {
                int(1)
            } else if k + 1 == n {
                int(-1)
            } else {
                int(0)
            })
        })
    }

    fn cesaro() -> Triangle {
        Triangle::from_fn("C", true, |n, _| Ok(frac(1, n as i64 + 1)))
    }

    fn dense(rows: &[&[i64]]) -> DenseTrunc {
        DenseTrunc::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn entries_above_diagonal_are_zero() {
        let probe = Triangle::from_fn("probe", false, |n, k| {
            assert!(k <= n);
            Ok(int(7))
        });
        assert_eq!(probe.entry(2, 5).unwrap(), int(0));
        assert_eq!(Triangle::identity().entry(5, 5).unwrap(), int(1));
        assert_eq!(Triangle::identity().entry(5, 2).unwrap(), int(0));
        assert_eq!(delta().entry(2, 1).unwrap(), int(-1));
    }

    #[test]
    fn truncation() {
        assert_eq!(delta().truncate(2).unwrap(), dense(&[&[1, 0], &[-1, 1]]));
        assert!(Triangle::identity().truncate(3).unwrap().is_identity());
        let c = cesaro().truncate(3).unwrap();
        assert_eq!(c.get(1, 0), &frac(1, 2));
        assert_eq!(c.get(2, 2), &frac(1, 3));
        assert_eq!(c.get(0, 2), &int(0));
        assert!(matches!(delta().truncate(0), Err(Error::InvalidTruncation { .. })));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(delta().apply(&Seq::ones(), 3).unwrap(), vec![int(1), int(0), int(0)]);
        assert_eq!(
            cesaro().apply(&Seq::unit(0), 4).unwrap(),
            vec![int(1), frac(1, 2), frac(1, 3), frac(1, 4)]
        );
        let h = Seq::harmonic();
        assert_eq!(Triangle::identity().apply(&h, 5).unwrap(), h.prefix(5).unwrap());
    }

    #[test]
    fn compose_examples() {
        let sum = Triangle::from_fn("Σ", true, |_, _| Ok(int(1)));
        assert!(delta().compose(&sum).truncate(8).unwrap().is_identity());
        let phi = delta().compose(&cesaro());
        assert_eq!(phi.entry(2, 1).unwrap(), frac(-1, 6));
        assert_eq!(phi.entry(2, 2).unwrap(), frac(1, 3));
        assert!(phi.diag_nonzero());
        assert!(!phi.compose(&Triangle::zero()).diag_nonzero());
    }

    #[test]
    fn invert_examples() {
        let sum = delta().invert().unwrap();
        for n in 0..6 {
            for k in 0..=n {
                assert_eq!(sum.entry(n, k).unwrap(), int(1));
            }
        }
        let c_inv = cesaro().invert().unwrap();
        assert_eq!(c_inv.entry(3, 3).unwrap(), int(4));
        assert_eq!(c_inv.entry(3, 2).unwrap(), int(-3));
        assert_eq!(c_inv.entry(3, 1).unwrap(), int(0));
        assert!(Triangle::identity().invert().unwrap().truncate(5).unwrap().is_identity());
    }

    #[test]
    fn invert_rejects_singular() {
        assert!(matches!(Triangle::zero().invert(), Err(Error::NotInvertible(_))));
        let lying = Triangle::from_fn("lying", true, |n, k| {
            Ok(if n == k && n != 3 { int(1) } else { int(0) })
        });
        assert_eq!(lying.entry(2, 2).unwrap(), int(1));
        assert_eq!(lying.entry(3, 3), Err(Error::Singular { row: 3 }));
        let inv = lying.invert().unwrap();
        assert_eq!(inv.entry(4, 0), Err(Error::Singular { row: 3 }));
    }

    #[test]
    fn transform_matches_apply() {
        let x = Seq::harmonic();
        let y = cesaro().transform(&x);
        assert_eq!(y.prefix(6).unwrap(), cesaro().apply(&x, 6).unwrap());
    }

    #[test]
    fn dense_product() {
        let a = delta().truncate(4).unwrap();
        let b = delta().invert().unwrap().truncate(4).unwrap();
        assert!(a.mul(&b).is_identity());
        assert_eq!(a.mul(&a).first_difference(&a), Some((1, 0)));
    }

    #[test]
    fn shared_across_threads() {
        let inv = delta().compose(&cesaro()).invert().unwrap();
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let inv = inv.clone();
                std::thread::spawn(move || inv.entry(20 + t, 3).unwrap())
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), int(1));
        }
    }
}
