//! Constructors for the named triangles: differences, sums, the Cesàro,
//! generalized weighted and Riesz means, and the domain matrices of
//! bv(C), bv(G) and bv(R) obtained by composing each mean with Δ.
//!
//! The domain matrices are always built as products. The closed forms in
//! [`closed_form`] exist only as independent oracles for them.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{checked_recip, frac, int, Rational};
use crate::seq::Seq;
use crate::triangle::Triangle;

/// Δ: `δ_nk = (-1)^(n-k)` for `n-1 ≤ k ≤ n`. Row 0 is the single entry 1.
pub fn delta() -> Triangle {
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

/// The summation matrix, `1` on and below the diagonal; the inverse of Δ.
pub fn sigma_sum() -> Triangle {
    Triangle::from_fn("S", true, |_, _| Ok(int(1)))
}

/// C₁: `c_nk = 1/(n+1)` for `k ≤ n`.
pub fn cesaro() -> Triangle {
    Triangle::from_fn("C₁", true, |n, _| Ok(frac(1, n as i64 + 1)))
}

/// C₁⁻¹ in closed form: `n+1` on the diagonal, `-n` just below it.
pub fn cesaro_inverse() -> Triangle {
    Triangle::from_fn("C₁⁻¹", true, |n, k| {
        Ok(if k == n {
            int(n as i64 + 1)
        } else if k + 1 == n {
            int(-(n as i64))
        } else {
            int(0)
        })
    })
}

fn nonzero(name: &'static str, seq: &Seq) -> Seq {
    seq.map(seq.label().to_owned(), true, move |index, value| {
        if value.is_zero() {
            return Err(Error::InvalidWeights {
                name,
                index,
                value: value.to_string(),
                requirement: "must be nonzero",
            });
        }
        Ok(value)
    })
}

/// Weights `u, v` of a generalized weighted mean, both nowhere zero.
/// Validity is checked lazily each time a term is probed.
#[derive(Clone, Debug)]
pub struct WeightPair {
    u: Seq,
    v: Seq,
}

impl WeightPair {
    pub fn new(u: Seq, v: Seq) -> Self {
        WeightPair {
            u: nonzero("u", &u.memoized()),
            v: nonzero("v", &v.memoized()),
        }
    }

    pub fn u(&self) -> &Seq {
        &self.u
    }

    pub fn v(&self) -> &Seq {
        &self.v
    }

    /// `1/u_n`, with `1/u_{-1} := 0`.
    pub fn inv_u(&self, n: isize) -> Result<Rational> {
        if n < 0 {
            return Ok(Rational::zero());
        }
        checked_recip(&self.u.eval(n as usize)?)
    }
}

/// Riesz weights `q` (strictly positive) with partial sums `Q_n = Σ_{k≤n} q_k`.
#[derive(Clone, Debug)]
pub struct RieszWeights {
    q: Seq,
    partial: Seq,
}

impl RieszWeights {
    pub fn new(q: Seq) -> Self {
        let q = q.memoized().map(q.label().to_owned(), true, |index, value| {
            if !value.is_positive() {
                return Err(Error::InvalidWeights {
                    name: "q",
                    index,
                    value: value.to_string(),
                    requirement: "must be positive",
                });
            }
            Ok(value)
        });
        let partial = q.partial_sums(format!("Σ{}", q.label()));
        RieszWeights { q, partial }
    }

    pub fn q(&self) -> &Seq {
        &self.q
    }

    /// `Q_n`, with `Q_{-1} := 0`.
    pub fn partial_sum(&self, n: isize) -> Result<Rational> {
        if n < 0 {
            return Ok(Rational::zero());
        }
        self.partial.eval(n as usize)
    }

    /// The same mean written as G(u, v) with `u_n = 1/Q_n`, `v = q`.
    pub fn as_weight_pair(&self) -> WeightPair {
        let partial = self.partial.clone();
        let u = Seq::try_from_fn("1/Q", move |n| checked_recip(&partial.eval(n)?));
        WeightPair::new(u, self.q.clone())
    }
}

/// G(u, v): `g_nk = u_n v_k` for `k ≤ n`.
pub fn weighted_mean(w: &WeightPair) -> Triangle {
    let w = w.clone();
    Triangle::from_fn("G(u,v)", true, move |n, k| Ok(w.u.eval(n)? * w.v.eval(k)?))
}

/// Rᵗ: `r_nk = q_k / Q_n` for `k ≤ n`.
pub fn riesz(r: &RieszWeights) -> Triangle {
    let r = r.clone();
    Triangle::from_fn("R", true, move |n, k| {
        let q_k = r.q.eval(k)?;
        Ok(q_k / r.partial_sum(n as isize)?)
    })
}

/// Φ = Δ·C₁, the domain matrix of bv(C).
pub fn phi() -> Triangle {
    delta().compose(&cesaro())
}

/// Γ = Δ·G(u, v), the domain matrix of bv(G).
pub fn gamma(w: &WeightPair) -> Triangle {
    delta().compose(&weighted_mean(w))
}

/// Σ = Δ·Rᵗ, the domain matrix of bv(R).
pub fn sigma_riesz(r: &RieszWeights) -> Triangle {
    delta().compose(&riesz(r))
}

/// Column k of `T⁻¹`: the k-th Schauder basis element of the domain of T.
/// Its T-transform is the unit sequence `e⁽ᵏ⁾`.
pub fn basis_column(t: &Triangle, k: usize) -> Result<Seq> {
    Ok(t.invert()?.column(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainLabel {
    C,
    G,
    R,
}

/// One of the three spaces bv(C), bv(G), bv(R): the mean, its domain matrix
/// Δ·mean, and the mean rewritten as a generalized weighted mean (used by
/// the corollary-form dual checks).
#[derive(Clone, Debug)]
pub struct Domain {
    label: DomainLabel,
    mean: Triangle,
    matrix: Triangle,
    weights: WeightPair,
}

impl Domain {
    pub fn cesaro() -> Self {
        let weights = WeightPair::new(
            Seq::from_fn("1/(n+1)", |n| frac(1, n as i64 + 1)),
            Seq::ones(),
        );
        Domain {
            label: DomainLabel::C,
            mean: cesaro(),
            matrix: phi(),
            weights,
        }
    }

    pub fn weighted(w: WeightPair) -> Self {
        Domain {
            label: DomainLabel::G,
            mean: weighted_mean(&w),
            matrix: gamma(&w),
            weights: w,
        }
    }

    pub fn riesz(r: RieszWeights) -> Self {
        Domain {
            label: DomainLabel::R,
            mean: riesz(&r),
            matrix: sigma_riesz(&r),
            weights: r.as_weight_pair(),
        }
    }

    pub fn label(&self) -> DomainLabel {
        self.label
    }

    pub fn mean(&self) -> &Triangle {
        &self.mean
    }

    /// Δ·mean.
    pub fn matrix(&self) -> &Triangle {
        &self.matrix
    }

    pub fn weights(&self) -> &WeightPair {
        &self.weights
    }
}

/// Entry formulas derived by hand. Used only to cross-check the lazily
/// composed and inverted matrices.
pub mod closed_form {
    use super::*;

    fn above(n: usize, k: usize) -> bool {
        k > n
    }

    /// Φ: `-1/(n(n+1))` below the diagonal, `1/(n+1)` on it.
    pub fn phi(n: usize, k: usize) -> Rational {
        let n_i = n as i64;
        if above(n, k) {
            Rational::zero()
        } else if k == n {
            frac(1, n_i + 1)
        } else {
            frac(-1, n_i * (n_i + 1))
        }
    }

    /// Γ: `(u_n − u_{n−1}) v_k` below the diagonal, `u_n v_n` on it.
    pub fn gamma(w: &WeightPair, n: usize, k: usize) -> Result<Rational> {
        if above(n, k) {
            return Ok(Rational::zero());
        }
        if k == n {
            return Ok(w.u().eval(n)? * w.v().eval(n)?);
        }
        Ok((w.u().eval(n)? - w.u().eval(n - 1)?) * w.v().eval(k)?)
    }

    /// Σ: `q_k (1/Q_n − 1/Q_{n−1})` below the diagonal, `q_n/Q_n` on it.
    pub fn sigma_riesz(r: &RieszWeights, n: usize, k: usize) -> Result<Rational> {
        if above(n, k) {
            return Ok(Rational::zero());
        }
        let q_k = r.q().eval(k)?;
        let big_q = r.partial_sum(n as isize)?;
        if k == n {
            return Ok(q_k / big_q);
        }
        let prev = r.partial_sum(n as isize - 1)?;
        Ok(q_k * (checked_recip(&big_q)? - checked_recip(&prev)?))
    }

    /// Φ⁻¹ column k at row n: `k+1` at `n = k`, `1` below.
    pub fn phi_basis(k: usize, n: usize) -> Rational {
        match n.cmp(&k) {
            std::cmp::Ordering::Less => Rational::zero(),
            std::cmp::Ordering::Equal => int(k as i64 + 1),
            std::cmp::Ordering::Greater => Rational::one(),
        }
    }

    /// Γ⁻¹ column k at row n: `1/(u_k v_k)` at `n = k`,
    /// `(1/v_n)(1/u_n − 1/u_{n−1})` below.
    pub fn gamma_basis(w: &WeightPair, k: usize, n: usize) -> Result<Rational> {
        match n.cmp(&k) {
            std::cmp::Ordering::Less => Ok(Rational::zero()),
            std::cmp::Ordering::Equal => checked_recip(&(w.u().eval(k)? * w.v().eval(k)?)),
            std::cmp::Ordering::Greater => {
                let diff = w.inv_u(n as isize)? - w.inv_u(n as isize - 1)?;
                Ok(diff * checked_recip(&w.v().eval(n)?)?)
            }
        }
    }

    /// Σ⁻¹ column k at row n: `Q_k/q_k` at `n = k`, `1` below.
    pub fn sigma_riesz_basis(r: &RieszWeights, k: usize, n: usize) -> Result<Rational> {
        match n.cmp(&k) {
            std::cmp::Ordering::Less => Ok(Rational::zero()),
            std::cmp::Ordering::Equal => Ok(r.partial_sum(k as isize)? / r.q().eval(k)?),
            std::cmp::Ordering::Greater => Ok(Rational::one()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::pow;

    fn geometric_weights() -> RieszWeights {
        RieszWeights::new(Seq::from_fn("2^k", |k| pow(&int(2), k as u32)))
    }

    fn sample_pair() -> WeightPair {
        WeightPair::new(
            Seq::from_fn("1/(n+2)", |n| frac(1, n as i64 + 2)),
            Seq::from_fn("k+1", |k| int(k as i64 + 1)),
        )
    }

    #[test]
    fn delta_entries() {
        let d = delta();
        assert_eq!(d.entry(0, 0).unwrap(), int(1));
        assert_eq!(d.entry(4, 3).unwrap(), int(-1));
        assert_eq!(d.entry(4, 2).unwrap(), int(0));
    }

    #[test]
    fn sum_entries() {
        let s = sigma_sum();
        assert_eq!(s.entry(3, 0).unwrap(), int(1));
        assert_eq!(s.entry(2, 3).unwrap(), int(0));
        assert!(delta().compose(&s).truncate(8).unwrap().is_identity());
        assert_eq!(s.truncate(12).unwrap(), delta().invert().unwrap().truncate(12).unwrap());
    }

    #[test]
    fn cesaro_entries() {
        let c = cesaro();
        assert_eq!(c.entry(0, 0).unwrap(), int(1));
        assert_eq!(c.entry(3, 1).unwrap(), frac(1, 4));
        assert_eq!(c.apply(&Seq::ones(), 5).unwrap(), vec![int(1); 5]);
        assert_eq!(
            cesaro_inverse().truncate(16).unwrap(),
            c.invert().unwrap().truncate(16).unwrap()
        );
    }

    #[test]
    fn weighted_mean_specializations() {
        let to_cesaro = WeightPair::new(Seq::harmonic(), Seq::ones());
        assert_eq!(
            weighted_mean(&to_cesaro).truncate(10).unwrap(),
            cesaro().truncate(10).unwrap()
        );
        let ones = WeightPair::new(Seq::ones(), Seq::ones());
        assert_eq!(weighted_mean(&ones).truncate(10).unwrap(), sigma_sum().truncate(10).unwrap());

        let r = geometric_weights();
        let as_g = weighted_mean(&r.as_weight_pair());
        assert_eq!(as_g.truncate(10).unwrap(), riesz(&r).truncate(10).unwrap());
    }

    #[test]
    fn riesz_entries() {
        let r = geometric_weights();
        let m = riesz(&r);
        assert_eq!(m.entry(2, 1).unwrap(), frac(2, 7));
        for n in 0..10 {
            let d = m.entry(n, n).unwrap();
            assert!(d.is_positive() && d <= int(1));
        }
        let unit = RieszWeights::new(Seq::ones());
        assert_eq!(riesz(&unit).truncate(10).unwrap(), cesaro().truncate(10).unwrap());
    }

    #[test]
    fn invalid_weights_are_reported_with_index() {
        let u = Seq::from_fn("bad", |n| if n == 3 { int(0) } else { int(1) });
        let g = weighted_mean(&WeightPair::new(u, Seq::ones()));
        assert_eq!(g.entry(2, 1).unwrap(), int(1));
        let err = g.entry(3, 0).unwrap_err();
        assert!(matches!(err, Error::InvalidWeights { name: "u", index: 3, .. }));

        let q = Seq::from_fn("bad q", |k| if k == 2 { int(-1) } else { int(1) });
        let err = riesz(&RieszWeights::new(q)).entry(4, 4).unwrap_err();
        assert!(matches!(err, Error::InvalidWeights { name: "q", index: 2, .. }));
    }

    #[test]
    fn domain_matrix_examples() {
        assert_eq!(phi().entry(3, 1).unwrap(), frac(-1, 12));
        let w = sample_pair();
        let g = gamma(&w);
        for n in 1..8 {
            for k in 0..n {
                let expected = (w.u().eval(n).unwrap() - w.u().eval(n - 1).unwrap())
                    * w.v().eval(k).unwrap();
                assert_eq!(g.entry(n, k).unwrap(), expected);
            }
        }
        let r = geometric_weights();
        let s = sigma_riesz(&r);
        for n in 0..8 {
            let expected = r.q().eval(n).unwrap() / r.partial_sum(n as isize).unwrap();
            assert_eq!(s.entry(n, n).unwrap(), expected);
        }
    }

    #[test]
    fn closed_forms_agree_with_products() {
        let (w, r) = (sample_pair(), geometric_weights());
        let (p, g, s) = (phi(), gamma(&w), sigma_riesz(&r));
        for n in 0..24 {
            for k in 0..24 {
                assert_eq!(p.entry(n, k).unwrap(), closed_form::phi(n, k), "Φ({n},{k})");
                assert_eq!(g.entry(n, k).unwrap(), closed_form::gamma(&w, n, k).unwrap());
                assert_eq!(s.entry(n, k).unwrap(), closed_form::sigma_riesz(&r, n, k).unwrap());
            }
        }
    }

    #[test]
    fn basis_columns() {
        let t2 = basis_column(&phi(), 2).unwrap();
        assert_eq!(
            (1..4).map(|n| t2.eval(n).unwrap()).collect::<Vec<_>>(),
            vec![int(0), int(3), int(1)]
        );
        let b = basis_column(&delta(), 3).unwrap();
        assert_eq!(b.prefix(6).unwrap(), vec![int(0), int(0), int(0), int(1), int(1), int(1)]);
        let t3 = basis_column(&phi(), 3).unwrap();
        assert_eq!(phi().apply(&t3, 6).unwrap(), Seq::unit(3).prefix(6).unwrap());
        assert!(basis_column(&Triangle::zero(), 0).is_err());
    }

    #[test]
    fn basis_closed_forms() {
        let (w, r) = (sample_pair(), geometric_weights());
        let (p, g, s) = (
            phi().invert().unwrap(),
            gamma(&w).invert().unwrap(),
            sigma_riesz(&r).invert().unwrap(),
        );
        for n in 0..20 {
            for k in 0..20 {
                assert_eq!(p.entry(n, k).unwrap(), closed_form::phi_basis(k, n));
                assert_eq!(g.entry(n, k).unwrap(), closed_form::gamma_basis(&w, k, n).unwrap());
                assert_eq!(s.entry(n, k).unwrap(), closed_form::sigma_riesz_basis(&r, k, n).unwrap());
            }
        }
    }
}
