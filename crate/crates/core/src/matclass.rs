//! Matrix classes into and out of the domains bv(C), bv(G), bv(R).
//!
//! For a domain matrix T (Φ, Γ or Σ):
//!
//! * `A ∈ (bv(T):Y)` iff every row of A lies in the β-dual of the domain and
//!   `E = A·T⁻¹ ∈ (ℓ₁:Y)`; with `y = Tx` one has `Ax = Ey`.
//! * `B ∈ (Y:bv(T))` iff `F = T·B ∈ (Y:ℓ₁)`; `Fz = T(Bz)`.
//!
//! E needs the whole tail of each row of A, so A must be row-finite
//! ([`BandedMatrix`]); then every entry of E is an exact finite sum.

use num_traits::Zero;
use serde::Serialize;

use crate::banded::BandedMatrix;
use crate::builders::{Domain, DomainLabel};
use crate::duals::{cond_l1_c, cond_l1_l1, cond_l1_linf, dual_test, ColumnLimits, ConditionStats, DualReport};
use crate::error::{require_checkpoint_truncation, Error, Result};
use crate::rational::Rational;
use crate::spaces::{policy, DualKind, SpaceId, Verdict};
use crate::triangle::Triangle;

/// `E = A·T⁻¹`: `e_nk = Σ_{j=k}^{b(n)} a_nj (T⁻¹)_jk`, where `b(n)` is the
/// row bound of A. Row n of E has the same bound.
///
/// For T = Φ this is `(k+1)a_nk + Σ_{j>k} a_nj`.
pub fn row_transform_e(a: &BandedMatrix, domain_matrix: &Triangle) -> Result<BandedMatrix> {
    let inverse = domain_matrix.invert()?;
    let a = a.clone();
    let label = format!("{}·{}", a.label(), inverse.label());
    Ok(BandedMatrix::from_row_fn(label, move |n| {
        let row = a.row(n)?;
        let mut out = vec![Rational::zero(); row.len()];
        for (j, a_nj) in row.iter().enumerate() {
            if a_nj.is_zero() {
                continue;
            }
            for (k, v_jk) in inverse.row(j)?.iter().enumerate() {
                if !v_jk.is_zero() {
                    out[k] += a_nj * v_jk;
                }
            }
        }
        Ok(out)
    }))
}

/// `F = T·B`: `f_nk = Σ_{j≤n} t_nj b_jk`. Row n of F is bounded by the
/// largest row bound among rows `0..=n` of B.
///
/// For T = Φ this is `b_nk/(n+1) − (1/(n(n+1))) Σ_{j<n} b_jk` when `n ≥ 1`.
pub fn left_transform_f(b: &BandedMatrix, domain_matrix: &Triangle) -> BandedMatrix {
    let (b, t) = (b.clone(), domain_matrix.clone());
    let label = format!("{}·{}", t.label(), b.label());
    BandedMatrix::from_row_fn(label, move |n| {
        let mut out: Vec<Rational> = Vec::new();
        for (j, t_nj) in t.row(n)?.iter().enumerate() {
            if t_nj.is_zero() {
                continue;
            }
            let row = b.row(j)?;
            if out.len() < row.len() {
                out.resize(row.len(), Rational::zero());
            }
            for (k, b_jk) in row.iter().enumerate() {
                if !b_jk.is_zero() {
                    out[k] += t_nj * b_jk;
                }
            }
        }
        Ok(out)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassDirection {
    FromBvDomain,
    IntoBvDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassVerdict {
    LikelyInClass,
    LikelyNotInClass,
    /// Part of the report vocabulary; the trend classifier never emits it,
    /// since no finite truncation certifies membership of an infinite matrix.
    CertifiedForTruncation,
    Inconclusive,
}

impl From<Verdict> for ClassVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::CertifiedIn | Verdict::LikelyIn => ClassVerdict::LikelyInClass,
            Verdict::LikelyOut => ClassVerdict::LikelyNotInClass,
            Verdict::Inconclusive => ClassVerdict::Inconclusive,
        }
    }
}

/// The (ℓ₁:Y) conditions evaluated on E or F.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformedCondition {
    pub matrix: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_entry: Option<ConditionStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_limits: Option<ColumnLimits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_l1: Option<ConditionStats>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub direction: ClassDirection,
    pub domain_label: DomainLabel,
    pub space: SpaceId,
    pub truncation: usize,
    /// Rows `0..rows_sampled` of A were checked against the β-dual.
    pub rows_sampled: usize,
    pub row_dual_checks: Vec<DualReport>,
    pub transformed_condition: TransformedCondition,
    pub verdict: ClassVerdict,
    pub scope: &'static str,
    pub policy: &'static str,
}

const FROM_SCOPE: &str = "A must be row-finite so that E = A*T^-1 is an exact finite sum; \
the row condition is checked on the first N/4 rows only";
const INTO_SCOPE: &str = "only Y = l1 is supported; F = T*B is tested with the (l1:l1) column-sum condition";

fn condition_for(e: &BandedMatrix, space: SpaceId, size: usize, matrix: &'static str) -> Result<TransformedCondition> {
    let mut cond = TransformedCondition {
        matrix,
        sup_entry: None,
        column_limits: None,
        column_l1: None,
        verdict: Verdict::Inconclusive,
    };
    cond.verdict = match space {
        SpaceId::L1 => {
            let stats = cond_l1_l1(e, size)?;
            let trend = stats.trend;
            cond.column_l1 = Some(stats);
            trend
        }
        SpaceId::C => {
            let c = cond_l1_c(e, size)?;
            let trend = Verdict::all([c.sup_entry.trend, c.limits.verdict()]);
            cond.sup_entry = Some(c.sup_entry);
            cond.column_limits = Some(c.limits);
            trend
        }
        SpaceId::Linf => {
            let stats = cond_l1_linf(e, size)?;
            let trend = stats.trend;
            cond.sup_entry = Some(stats);
            trend
        }
        other => return Err(Error::UnsupportedClass(format!("(bv(.):{other})"))),
    };
    Ok(cond)
}

/// Tests `A ∈ (bv(T):Y)` for `Y ∈ {ℓ₁, c, ℓ∞}`.
pub fn class_test_from_domain(
    a: &BandedMatrix,
    domain: &Domain,
    space: SpaceId,
    size: usize,
) -> Result<ClassReport> {
    if !matches!(space, SpaceId::L1 | SpaceId::C | SpaceId::Linf) {
        return Err(Error::UnsupportedClass(format!(
            "(bv({:?}):{space}); supported targets are l1, c, linf",
            domain.label()
        )));
    }
    require_checkpoint_truncation(size, 8)?;
    let t = domain.matrix();
    // Held so every row check shares one cached inverse.
    let _inverse = t.invert()?;
    let rows_sampled = size / 4;
    let row_dual_checks = (0..rows_sampled)
        .map(|n| dual_test(t, &a.row_seq(n)?, DualKind::Beta, size))
        .collect::<Result<Vec<_>>>()?;
    let e = row_transform_e(a, t)?;
    let transformed_condition = condition_for(&e, space, size, "E = A*T^-1")?;
    let verdict = Verdict::all(
        row_dual_checks
            .iter()
            .map(|r| r.verdict)
            .chain([transformed_condition.verdict]),
    );
    Ok(ClassReport {
        direction: ClassDirection::FromBvDomain,
        domain_label: domain.label(),
        space,
        truncation: size,
        rows_sampled,
        row_dual_checks,
        transformed_condition,
        verdict: verdict.into(),
        scope: FROM_SCOPE,
        policy: policy::POLICY,
    })
}

/// Tests `B ∈ (Y:bv(T))`; only `Y = ℓ₁` is supported.
pub fn class_test_into_domain(
    b: &BandedMatrix,
    domain: &Domain,
    space: SpaceId,
    size: usize,
) -> Result<ClassReport> {
    if space != SpaceId::L1 {
        return Err(Error::UnsupportedClass(format!(
            "({space}:bv({:?})); only l1 is supported as the source space",
            domain.label()
        )));
    }
    require_checkpoint_truncation(size, 8)?;
    let f = left_transform_f(b, domain.matrix());
    let transformed_condition = condition_for(&f, SpaceId::L1, size, "F = T*B")?;
    Ok(ClassReport {
        direction: ClassDirection::IntoBvDomain,
        domain_label: domain.label(),
        space,
        truncation: size,
        rows_sampled: 0,
        row_dual_checks: Vec::new(),
        verdict: transformed_condition.verdict.into(),
        transformed_condition,
        scope: INTO_SCOPE,
        policy: policy::POLICY,
    })
}
