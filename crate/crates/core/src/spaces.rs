//! Norms and finite-truncation membership diagnostics for the classical
//! sequence spaces and for matrix domains `X_A = {x : Ax ∈ X}`.
//!
//! Membership of an infinite sequence cannot be decided from finitely many
//! terms. Each report therefore carries the defining statistic of the space
//! at three checkpoints (N/4, N/2, N), an exact growth ratio, and a verdict
//! from a fixed, published trend policy. Only finitely supported inputs get
//! `certified_in`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{require_checkpoint_truncation, require_truncation, Error, Result};
use crate::rational::{frac, int, ser, ser_opt, Rational};
use crate::seq::Seq;
use crate::triangle::Triangle;

/// Trend policy constants. Reports embed [`POLICY`] verbatim.
pub mod policy {
    use super::*;

    /// A bounded-type statistic is stable when `stat(N)/stat(N/2) ≤ 1 + δ`.
    pub fn growth_tolerance() -> Rational {
        frac(1, 100)
    }

    /// A statistic diverges when `stat(N) ≥ 2·stat(N/4)`.
    pub fn divergence_factor() -> Rational {
        int(2)
    }

    /// A column converges at truncation when its oscillation over
    /// `[N/2, N]` is at most 10⁻⁶.
    pub fn column_tolerance() -> Rational {
        frac(1, 1_000_000)
    }

    pub const POLICY: &str = "heuristic trend policy over checkpoints N/4, N/2, N (exact rationals): \
bounded-type statistics are likely_in when stat(N)/stat(N/2) <= 1 + 1/100 and likely_out when \
stat(N) >= 2*stat(N/4); vanishing-type statistics (tail-window oscillation or magnitude over [m/2, m]) \
are likely_in when stat(N) = 0 or 2*stat(N) <= stat(N/4) and likely_out when stat(N) >= (1 - 1/100)*stat(N/4); \
a column limit exists at truncation when its oscillation over [N/2, N] is <= 1/1000000; otherwise \
inconclusive. certified_in is reserved for inputs with a declared finite support bound. \
These verdicts are finite evidence, not proofs.";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceId {
    L1,
    Linf,
    C,
    C0,
    Cs,
    Bs,
    Bv,
    Bv0,
}

impl SpaceId {
    pub const ALL: [SpaceId; 8] = [
        SpaceId::L1,
        SpaceId::Linf,
        SpaceId::C,
        SpaceId::C0,
        SpaceId::Cs,
        SpaceId::Bs,
        SpaceId::Bv,
        SpaceId::Bv0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SpaceId::L1 => "l1",
            SpaceId::Linf => "linf",
            SpaceId::C => "c",
            SpaceId::C0 => "c0",
            SpaceId::Cs => "cs",
            SpaceId::Bs => "bs",
            SpaceId::Bv => "bv",
            SpaceId::Bv0 => "bv0",
        }
    }

    /// What the membership statistic measures at checkpoint m.
    pub fn statistic_description(self) -> &'static str {
        match self {
            SpaceId::L1 => "sum_{k<=m} |x_k|",
            SpaceId::Linf => "max_{k<=m} |x_k|",
            SpaceId::Bs => "max_{i<=m} |sum_{k<=i} x_k|",
            SpaceId::Bv | SpaceId::Bv0 => "|x_0| + sum_{1<=k<=m} |x_k - x_{k-1}|",
            SpaceId::C => "max_{m/2<=i<j<=m} |x_i - x_j|",
            SpaceId::C0 => "max_{m/2<=k<=m} |x_k|",
            SpaceId::Cs => "max_{m/2<=i<j<=m} |s_i - s_j|, s_i = sum_{k<=i} x_k",
        }
    }

    fn vanishing_type(self) -> bool {
        matches!(self, SpaceId::C | SpaceId::C0 | SpaceId::Cs)
    }
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpaceId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse {
                position: 0,
                message: format!("unknown space {s:?} (expected one of l1, linf, c, c0, cs, bs, bv, bv0)"),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualKind {
    Alpha,
    Beta,
    Gamma,
}

impl FromStr for DualKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(DualKind::Alpha),
            "beta" => Ok(DualKind::Beta),
            "gamma" => Ok(DualKind::Gamma),
            _ => Err(Error::Parse {
                position: 0,
                message: format!("unknown dual kind {s:?} (expected alpha, beta or gamma)"),
            }),
        }
    }
}

/// The tabulated α-, β- and γ-duals of the classical spaces.
pub fn classical_dual(space: SpaceId, kind: DualKind) -> SpaceId {
    use SpaceId::*;
    match (space, kind) {
        (C0 | C | Linf, _) => L1,
        (L1, _) => Linf,
        (Cs | Bs | Bv | Bv0, DualKind::Alpha) => L1,
        (Cs, DualKind::Beta) => Bv,
        (Bs, DualKind::Beta) => Bv0,
        (Bv, DualKind::Beta) => Cs,
        (Bv0, DualKind::Beta) => Bs,
        (Cs | Bs, DualKind::Gamma) => Bv,
        (Bv | Bv0, DualKind::Gamma) => Bs,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedIn,
    LikelyIn,
    LikelyOut,
    Inconclusive,
}

impl Verdict {
    pub fn is_in(self) -> bool {
        matches!(self, Verdict::CertifiedIn | Verdict::LikelyIn)
    }

    /// Conservative conjunction: out if any part is out, in only if every
    /// part is in.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut all_in = true;
        let mut all_certified = true;
        for v in verdicts {
            if v == Verdict::LikelyOut {
                return Verdict::LikelyOut;
            }
            all_in &= v.is_in();
            all_certified &= v == Verdict::CertifiedIn;
        }
        match (all_certified, all_in) {
            (true, _) => Verdict::CertifiedIn,
            (false, true) => Verdict::LikelyIn,
            _ => Verdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub index: usize,
    #[serde(serialize_with = "ser")]
    pub statistic: Rational,
}

/// Checkpoint indices `N/4, N/2, N`.
pub fn checkpoint_indices(size: usize) -> [usize; 3] {
    [size / 4, size / 2, size]
}

/// `stat(N)/stat(N/2)`, when the denominator is nonzero.
pub fn growth_ratio(checkpoints: &[Checkpoint]) -> Option<Rational> {
    let [_, half, full] = checkpoints else {
        return None;
    };
    (!half.statistic.is_zero()).then(|| &full.statistic / &half.statistic)
}

/// Trend verdict for a statistic that stays bounded exactly when the
/// underlying condition holds (partial sums, running maxima).
pub fn classify_bounded(checkpoints: &[Checkpoint]) -> Verdict {
    let [quarter, half, full] = checkpoints else {
        return Verdict::Inconclusive;
    };
    let stable = match growth_ratio(checkpoints) {
        Some(ratio) => ratio <= int(1) + policy::growth_tolerance(),
        None => full.statistic.is_zero(),
    };
    if stable && half.statistic <= full.statistic {
        Verdict::LikelyIn
    } else if full.statistic >= policy::divergence_factor() * &quarter.statistic {
        Verdict::LikelyOut
    } else {
        Verdict::Inconclusive
    }
}

/// Trend verdict for a statistic that must tend to zero (tail oscillation,
/// tail magnitude).
pub fn classify_vanishing(checkpoints: &[Checkpoint]) -> Verdict {
    let [quarter, _, full] = checkpoints else {
        return Verdict::Inconclusive;
    };
    if full.statistic.is_zero()
        || policy::divergence_factor() * &full.statistic <= quarter.statistic
    {
        Verdict::LikelyIn
    } else if full.statistic >= (int(1) - policy::growth_tolerance()) * &quarter.statistic {
        Verdict::LikelyOut
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub space: SpaceId,
    pub truncation: usize,
    pub statistic: &'static str,
    pub checkpoints: Vec<Checkpoint>,
    #[serde(serialize_with = "ser_opt")]
    pub growth_ratio: Option<Rational>,
    pub verdict: Verdict,
    /// For bv₀ = bv ∩ c₀: the c₀ half, run alongside the bv statistic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auxiliary: Option<Box<MembershipReport>>,
    pub policy: &'static str,
}

/// `‖x‖_bv` over the first N+1 terms: `|x₀| + Σ_{k=1}^{N} |x_k − x_{k−1}|`.
pub fn bv_norm_prefix(x: &Seq, size: usize) -> Result<Rational> {
    require_truncation(size)?;
    Ok(bv_norm_of(&x.prefix(size + 1)?))
}

/// `‖x‖_{bv(A)} = ‖Ax‖_bv` over the first N+1 coordinates of Ax.
pub fn bv_a_norm_prefix(a: &Triangle, x: &Seq, size: usize) -> Result<Rational> {
    require_truncation(size)?;
    Ok(bv_norm_of(&a.apply(x, size + 1)?))
}

pub(crate) fn bv_norm_of(xs: &[Rational]) -> Rational {
    let Some(first) = xs.first() else {
        return Rational::zero();
    };
    first.abs() + xs.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum::<Rational>()
}

fn spread<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    let mut values = values.peekable();
    let Some(first) = values.peek().cloned() else {
        return Rational::zero();
    };
    let (lo, hi) = values.fold((first.clone(), first.clone()), |(lo, hi), v| {
        (if v < &lo { v.clone() } else { lo }, if v > &hi { v.clone() } else { hi })
    });
    hi - lo
}

fn running_sums(xs: &[Rational]) -> Vec<Rational> {
    xs.iter()
        .scan(Rational::zero(), |acc, x| {
            *acc += x;
            Some(acc.clone())
        })
        .collect()
}

/// The defining statistic of `space` at checkpoint m, over `xs[0..=m]`.
fn statistic(space: SpaceId, xs: &[Rational], m: usize) -> Rational {
    let head = &xs[..=m];
    let window = &head[m / 2..];
    let max_abs = |vals: &[Rational]| vals.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero);
    match space {
        SpaceId::L1 => head.iter().map(|v| v.abs()).sum(),
        SpaceId::Linf => max_abs(head),
        SpaceId::Bs => max_abs(&running_sums(head)),
        SpaceId::Bv | SpaceId::Bv0 => bv_norm_of(head),
        SpaceId::C => spread(window.iter()),
        SpaceId::C0 => max_abs(window),
        SpaceId::Cs => spread(running_sums(head)[m / 2..].iter()),
    }
}

fn report_from_prefix(xs: &[Rational], space: SpaceId, size: usize, certified: bool) -> MembershipReport {
    if space == SpaceId::Bv0 {
        let bv = report_from_prefix(xs, SpaceId::Bv, size, certified);
        let c0 = report_from_prefix(xs, SpaceId::C0, size, certified);
        return MembershipReport {
            space,
            verdict: Verdict::all([bv.verdict, c0.verdict]),
            auxiliary: Some(Box::new(c0)),
            ..bv
        };
    }
    let checkpoints: Vec<Checkpoint> = checkpoint_indices(size)
        .into_iter()
        .map(|index| Checkpoint {
            index,
            statistic: statistic(space, xs, index),
        })
        .collect();
    let verdict = if certified {
        Verdict::CertifiedIn
    } else if space.vanishing_type() {
        classify_vanishing(&checkpoints)
    } else {
        classify_bounded(&checkpoints)
    };
    MembershipReport {
        space,
        truncation: size,
        statistic: space.statistic_description(),
        growth_ratio: growth_ratio(&checkpoints),
        checkpoints,
        verdict,
        auxiliary: None,
        policy: policy::POLICY,
    }
}

/// Membership diagnostics for x in `space` from the terms `x_0..=x_N`.
pub fn membership(x: &Seq, space: SpaceId, size: usize) -> Result<MembershipReport> {
    require_checkpoint_truncation(size, 8)?;
    let certified = x.support_bound().is_some_and(|bound| bound <= size);
    Ok(report_from_prefix(&x.prefix(size + 1)?, space, size, certified))
}

/// Membership diagnostics for x in the matrix domain `space_A`, i.e. for
/// the transform Ax in `space`. With A = Φ, Γ or Σ and `space = l1` this is
/// the bv(C), bv(G) or bv(R) test.
pub fn domain_membership(
    x: &Seq,
    a: &Triangle,
    space: SpaceId,
    size: usize,
) -> Result<MembershipReport> {
    require_checkpoint_truncation(size, 8)?;
    Ok(report_from_prefix(&a.apply(x, size + 1)?, space, size, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{basis_column, cesaro, phi};
    use crate::rational::pow;
    use proptest::prelude::*;

    fn stats(r: &MembershipReport) -> Vec<Rational> {
        r.checkpoints.iter().map(|c| c.statistic.clone()).collect()
    }

    #[test]
    fn bv_norm_examples() {
        for n in [1, 5, 40] {
            assert_eq!(bv_norm_prefix(&Seq::ones(), n).unwrap(), int(1));
            assert_eq!(bv_norm_prefix(&Seq::unit(0), n).unwrap(), int(2));
            // Telescoping: 1 + Σ (1/k − 1/(k+1)) = 2 − 1/(N+1).
            let expected = int(2) - frac(1, n as i64 + 1);
            assert_eq!(bv_norm_prefix(&Seq::harmonic(), n).unwrap(), expected);
        }
        assert!(bv_norm_prefix(&Seq::ones(), 0).is_err());
    }

    #[test]
    fn bv_a_norm_examples() {
        let x = Seq::harmonic();
        assert_eq!(
            bv_a_norm_prefix(&Triangle::identity(), &x, 9).unwrap(),
            bv_norm_prefix(&x, 9).unwrap()
        );
        assert_eq!(bv_a_norm_prefix(&cesaro(), &Seq::ones(), 12).unwrap(), int(1));
        // C e⁽⁰⁾ = (1, 1/2, 1/3, 1/4): 1 + 1/2 + 1/6 + 1/12.
        assert_eq!(bv_a_norm_prefix(&cesaro(), &Seq::unit(0), 3).unwrap(), frac(7, 4));
    }

    #[test]
    fn membership_examples() {
        let geometric = Seq::from_fn("2^-k", |k| frac(1, 1) / pow(&int(2), k as u32));
        let r = membership(&geometric, SpaceId::L1, 32).unwrap();
        assert_eq!(r.verdict, Verdict::LikelyIn);
        assert_eq!(r.checkpoints[2].statistic, int(2) - frac(1, 1) / pow(&int(2), 32));

        let alternating = Seq::from_fn("(-1)^k", |k| int(if k % 2 == 0 { 1 } else { -1 }));
        let r = membership(&alternating, SpaceId::Bv, 16).unwrap();
        assert_eq!(r.verdict, Verdict::LikelyOut);
        assert_eq!(stats(&r), vec![int(9), int(17), int(33)]);

        let r = membership(&Seq::unit(5), SpaceId::C0, 16).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedIn);
        assert_eq!(r.growth_ratio, Some(int(0)));
    }

    #[test]
    fn membership_rejects_bad_truncation() {
        for n in [0, 4, 10] {
            assert!(matches!(
                membership(&Seq::ones(), SpaceId::L1, n),
                Err(Error::InvalidTruncation { .. })
            ));
        }
    }

    #[test]
    fn vanishing_statistics() {
        let alternating = Seq::from_fn("(-1)^k", |k| int(if k % 2 == 0 { 1 } else { -1 }));
        assert_eq!(membership(&alternating, SpaceId::C, 32).unwrap().verdict, Verdict::LikelyOut);
        assert_eq!(membership(&alternating, SpaceId::Bs, 32).unwrap().verdict, Verdict::LikelyIn);
        assert_eq!(membership(&Seq::ones(), SpaceId::C, 32).unwrap().verdict, Verdict::LikelyIn);
        assert_eq!(membership(&Seq::ones(), SpaceId::C0, 32).unwrap().verdict, Verdict::LikelyOut);
        assert_eq!(membership(&Seq::harmonic(), SpaceId::C0, 32).unwrap().verdict, Verdict::LikelyIn);
        assert_eq!(membership(&Seq::harmonic(), SpaceId::Cs, 32).unwrap().verdict, Verdict::LikelyOut);
        assert_eq!(membership(&Seq::harmonic(), SpaceId::L1, 64).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn bv0_runs_both_statistics() {
        let r = membership(&Seq::finite("5", vec![int(5)]), SpaceId::Bv0, 8).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedIn);
        let aux = r.auxiliary.as_ref().unwrap();
        assert_eq!(aux.space, SpaceId::C0);
        // e is in bv but not in c₀.
        let r = membership(&Seq::ones(), SpaceId::Bv0, 16).unwrap();
        assert_eq!(r.verdict, Verdict::LikelyOut);
        assert_eq!(stats(&r), vec![int(1); 3]);
    }

    #[test]
    fn domain_membership_examples() {
        let t = basis_column(&phi(), 3).unwrap();
        let r = domain_membership(&t, &phi(), SpaceId::L1, 16).unwrap();
        assert_eq!(r.verdict, Verdict::LikelyIn);
        assert_eq!(stats(&r), vec![int(1); 3]);

        let r = domain_membership(&Seq::ones(), &phi(), SpaceId::L1, 16).unwrap();
        assert_eq!(r.verdict, Verdict::LikelyIn);
        assert_eq!(stats(&r), vec![int(1); 3]);

        let linear = Seq::from_fn("n+1", |n| int(n as i64 + 1));
        let r = domain_membership(&linear, &cesaro(), SpaceId::Bv, 16).unwrap();
        assert_eq!(r.verdict, Verdict::LikelyOut);
        // C x = (n+2)/2, so the variation at m is 1 + m/2.
        assert_eq!(stats(&r), vec![int(3), int(5), int(9)]);
    }

    #[test]
    fn isomorphism_with_l1() {
        let y = Seq::finite("y", vec![frac(3, 2), int(-2), int(0), frac(1, 7)]);
        let x = phi().invert().unwrap().transform(&y);
        let expected: Rational = y.prefix(4).unwrap().iter().map(|v| v.abs()).sum();
        let r = domain_membership(&x, &phi(), SpaceId::L1, 16).unwrap();
        assert!(r.checkpoints.iter().all(|c| c.statistic == expected));
    }

    #[test]
    fn dual_table() {
        assert_eq!(classical_dual(SpaceId::Bv, DualKind::Beta), SpaceId::Cs);
        assert_eq!(classical_dual(SpaceId::L1, DualKind::Alpha), SpaceId::Linf);
        assert_eq!(classical_dual(SpaceId::C0, DualKind::Gamma), SpaceId::L1);
        assert_eq!(classical_dual(SpaceId::Cs, DualKind::Beta), SpaceId::Bv);
        assert_eq!(classical_dual(SpaceId::Bs, DualKind::Beta), SpaceId::Bv0);
        assert_eq!(classical_dual(SpaceId::Bv0, DualKind::Beta), SpaceId::Bs);
        assert_eq!(classical_dual(SpaceId::Cs, DualKind::Gamma), SpaceId::Bv);
        assert_eq!(classical_dual(SpaceId::Bv0, DualKind::Gamma), SpaceId::Bs);
        assert_eq!(classical_dual(SpaceId::Bv0, DualKind::Alpha), SpaceId::L1);
    }

    #[test]
    fn space_names_round_trip() {
        for id in SpaceId::ALL {
            assert_eq!(id.as_str().parse::<SpaceId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
        assert!("lp".parse::<SpaceId>().is_err());
    }

    proptest! {
        #[test]
        fn accumulating_statistics_are_monotone(terms in prop::collection::vec((-50i64..50, 1i64..12), 1..40)) {
            let xs: Vec<Rational> = terms.iter().map(|&(p, q)| frac(p, q)).collect();
            let mut padded = xs.clone();
            padded.resize(41, Rational::zero());
            let seq = Seq::from_fn("x", move |k| xs.get(k).cloned().unwrap_or_else(Rational::zero));
            for space in [SpaceId::L1, SpaceId::Linf, SpaceId::Bs, SpaceId::Bv] {
                let values: Vec<Rational> = (0..=40).map(|m| statistic(space, &padded, m)).collect();
                prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
            }
            let norms: Vec<Rational> = (1..40).map(|n| bv_norm_prefix(&seq, n).unwrap()).collect();
            prop_assert!(norms.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
