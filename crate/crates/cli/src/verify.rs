//! The `verify` suites: exact checks of the library's identities on
//! deterministic (seeded) instances. Every failing check records its first
//! counterexample.

use std::fmt::Display;

use bvspaces::banded::BandedMatrix;
use bvspaces::builders::{
    basis_column, cesaro, cesaro_inverse, closed_form, delta, gamma, phi, riesz, sigma_riesz, sigma_sum,
    weighted_mean, Domain, RieszWeights, WeightPair,
};
use bvspaces::duals::{alpha_assoc, cond_l1_l1, cond_l1_linf, dual_test, dual_test_domain, ConditionStats};
use bvspaces::matclass::{class_test_from_domain, class_test_into_domain, left_transform_f, row_transform_e};
use bvspaces::rational::{frac, int, max_abs};
use bvspaces::spaces::{DualKind, SpaceId, Verdict};
use bvspaces::{DenseTrunc, Error, Rational, Seq, Triangle};
use serde::Serialize;

use crate::instances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Bases,
    Duals,
    Matclass,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub n: usize,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// `None` when the check holds, otherwise the first counterexample.
type Outcome = Result<Option<String>, Error>;

struct Runner {
    suite: Suite,
    checks: Vec<CheckResult>,
}

impl Runner {
    fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let (passed, counterexample) = match f() {
            Ok(None) => (true, None),
            Ok(Some(c)) => (false, Some(c)),
            Err(e) => (false, Some(format!("error: {e}"))),
        };
        self.checks.push(CheckResult {
            suite: self.suite,
            name: name.into(),
            passed,
            counterexample,
        });
    }
}

fn differ(a: &DenseTrunc, b: &DenseTrunc) -> Option<String> {
    a.first_difference(b)
        .map(|(n, k)| format!("({n},{k}): left={}, right={}", a.get(n, k), b.get(n, k)))
}

fn differ_vec(a: &[Rational], b: &[Rational]) -> Option<String> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x != y)
        .map(|i| format!("[{i}]: left={}, right={}", a[i], b[i]))
}

fn differ_entries(
    size: usize,
    mut left: impl FnMut(usize, usize) -> Result<Rational, Error>,
    mut right: impl FnMut(usize, usize) -> Result<Rational, Error>,
) -> Outcome {
    for n in 0..size {
        for k in 0..size {
            let (l, r) = (left(n, k)?, right(n, k)?);
            if l != r {
                return Ok(Some(format!("({n},{k}): left={l}, right={r}")));
            }
        }
    }
    Ok(None)
}

fn expect_eq<T: PartialEq + Display>(what: &str, left: T, right: T) -> Option<String> {
    (left != right).then(|| format!("{what}: left={left}, right={right}"))
}

fn stats(c: &ConditionStats) -> Vec<Rational> {
    c.checkpoints.iter().map(|c| c.statistic.clone()).collect()
}

struct Fixtures {
    pairs: Vec<WeightPair>,
    riesz: RieszWeights,
}

impl Fixtures {
    fn new(rng: &mut rand::rngs::StdRng) -> Self {
        let mut pairs = vec![WeightPair::new(
            Seq::from_fn("1/(n+2)", |n| frac(1, n as i64 + 2)),
            Seq::from_fn("k+1", |k| int(k as i64 + 1)),
        )];
        pairs.push(instances::weight_pair(rng));
        pairs.push(instances::weight_pair(rng));
        Fixtures {
            pairs,
            riesz: instances::riesz_weights(rng),
        }
    }

    fn domains(&self) -> Vec<Domain> {
        vec![
            Domain::cesaro(),
            Domain::weighted(self.pairs[0].clone()),
            Domain::riesz(self.riesz.clone()),
        ]
    }
}

fn identities(r: &mut Runner, fx: &Fixtures, size: usize, rng: &mut rand::rngs::StdRng) {
    let w = &fx.pairs[0];
    let named: Vec<Triangle> = vec![
        delta(),
        sigma_sum(),
        cesaro(),
        cesaro_inverse(),
        weighted_mean(w),
        riesz(&fx.riesz),
        phi(),
        gamma(w),
        gamma(&fx.pairs[1]),
        sigma_riesz(&fx.riesz),
    ];
    for t in &named {
        r.check(format!("inverse is two-sided: {}", t.label()), || {
            let (a, b) = (t.truncate(size)?, t.invert()?.truncate(size)?);
            let id = DenseTrunc::identity(size);
            Ok(differ(&a.mul(&b), &id).or_else(|| differ(&b.mul(&a), &id)))
        });
        r.check(format!("double inverse: {}", t.label()), || {
            Ok(differ(&t.invert()?.invert()?.truncate(size)?, &t.truncate(size)?))
        });
    }
    r.check("delta·sum = I", || {
        Ok(differ(&delta().compose(&sigma_sum()).truncate(size)?, &DenseTrunc::identity(size)))
    });
    r.check("cesaro inverse closed form", || {
        Ok(differ(&cesaro_inverse().truncate(size)?, &cesaro().invert()?.truncate(size)?))
    });
    r.check("associativity Φ, G, Σ", || {
        let (a, b, c) = (phi(), weighted_mean(w), sigma_riesz(&fx.riesz));
        Ok(differ(
            &a.compose(&b.compose(&c)).truncate(size)?,
            &a.compose(&b).compose(&c).truncate(size)?,
        ))
    });
    r.check("Φ closed form", || {
        let p = phi();
        differ_entries(size + 1, |n, k| p.entry(n, k), |n, k| Ok(closed_form::phi(n, k)))
    });
    for (i, pair) in fx.pairs.iter().enumerate() {
        r.check(format!("Γ closed form, weights #{i}"), || {
            let g = gamma(pair);
            differ_entries(size + 1, |n, k| g.entry(n, k), |n, k| closed_form::gamma(pair, n, k))
        });
    }
    r.check("Σ closed form", || {
        let s = sigma_riesz(&fx.riesz);
        differ_entries(size + 1, |n, k| s.entry(n, k), |n, k| closed_form::sigma_riesz(&fx.riesz, n, k))
    });
    r.check("G(1/(n+1), e) = C₁", || {
        let g = weighted_mean(&WeightPair::new(Seq::harmonic(), Seq::ones()));
        Ok(differ(&g.truncate(size + 1)?, &cesaro().truncate(size + 1)?))
    });
    r.check("R(q = e) = C₁", || {
        let rz = riesz(&RieszWeights::new(Seq::ones()));
        Ok(differ(&rz.truncate(size + 1)?, &cesaro().truncate(size + 1)?))
    });
    for i in 0..3 {
        let x = instances::finite_seq(rng, 10);
        r.check(format!("apply/compose coherence #{i}"), || {
            let (a, b) = (phi(), gamma(w));
            Ok(differ_vec(&a.compose(&b).apply(&x, size)?, &a.apply(&b.transform(&x), size)?))
        });
    }
}

fn bases(r: &mut Runner, fx: &Fixtures, size: usize, rng: &mut rand::rngs::StdRng) {
    let w = &fx.pairs[0];
    let triangles = [phi(), gamma(w), sigma_riesz(&fx.riesz)];
    for t in &triangles {
        r.check(format!("T·basis(k) = e(k): {}", t.label()), || {
            // holding the inverse keeps its row cache shared across columns
            let _inverse = t.invert()?;
            for k in 0..size {
                let image = t.apply(&basis_column(t, k)?, size)?;
                if let Some(d) = differ_vec(&image, &Seq::unit(k).prefix(size)?) {
                    return Ok(Some(format!("k={k} {d}")));
                }
            }
            Ok(None)
        });
    }
    r.check("Φ basis closed form", || {
        let inv = phi().invert()?;
        differ_entries(size, |n, k| inv.entry(n, k), |n, k| Ok(closed_form::phi_basis(k, n)))
    });
    r.check("Γ basis closed form", || {
        let inv = gamma(w).invert()?;
        differ_entries(size, |n, k| inv.entry(n, k), |n, k| closed_form::gamma_basis(w, k, n))
    });
    r.check("Σ basis is 1 below the diagonal", || {
        let inv = sigma_riesz(&fx.riesz).invert()?;
        differ_entries(size, |n, k| inv.entry(n, k), |n, k| closed_form::sigma_riesz_basis(&fx.riesz, k, n))
    });
    r.check("Δ basis: 0 for n<k, 1 for n≥k", || {
        let d = delta();
        let _inverse = d.invert()?;
        differ_entries(size, |n, k| basis_column(&d, k)?.eval(n), |n, k| Ok(int(i64::from(n >= k))))
    });
    for t in &triangles {
        for i in 0..3 {
            let x = instances::finite_seq(rng, size.min(12));
            r.check(format!("reconstruction x = Σ (Tx)_k b(k) #{i}: {}", t.label()), || {
                let _inverse = t.invert()?;
                let coeffs = t.apply(&x, size)?;
                let mut rebuilt = vec![Rational::from_integer(0.into()); size];
                for (k, c) in coeffs.iter().enumerate() {
                    let b = basis_column(t, k)?;
                    for (n, slot) in rebuilt.iter_mut().enumerate().skip(k) {
                        *slot += c * b.eval(n)?;
                    }
                }
                Ok(differ_vec(&rebuilt, &x.prefix(size)?))
            });
        }
    }
}

fn duals(r: &mut Runner, fx: &Fixtures, size: usize, rng: &mut rand::rngs::StdRng) {
    r.check("α matrix of bv(C): a_n off the diagonal, (n+1)a_n on it", || {
        let a = instances::hashed_seq(rng_seed(rng), false, false);
        let b = alpha_assoc(&phi(), &a)?;
        differ_entries(
            size + 1,
            |n, k| b.entry(n, k),
            |n, k| {
                Ok(match n.cmp(&k) {
                    std::cmp::Ordering::Less => int(0),
                    std::cmp::Ordering::Equal => int(n as i64 + 1) * a.eval(n)?,
                    std::cmp::Ordering::Greater => a.eval(n)?,
                })
            },
        )
    });
    for (i, pair) in fx.pairs.iter().enumerate() {
        let domain = Domain::weighted(pair.clone());
        let a = instances::finite_seq(rng, size);
        for kind in [DualKind::Beta, DualKind::Gamma] {
            r.check(format!("bv(G) corollary cross-check, weights #{i}, {kind:?}"), || {
                let report = dual_test_domain(&domain, &a, kind, size)?;
                let check = report.corollary_cross_check.expect("β/γ carry a cross-check");
                Ok(if !check.matrix_agrees {
                    Some(format!("matrices differ at {:?}", check.first_mismatch))
                } else if !check.statistics_agree {
                    Some("condition statistics differ".into())
                } else {
                    None
                })
            });
        }
    }
    for domain in fx.domains() {
        let a = instances::finite_seq(rng, 10);
        for kind in [DualKind::Alpha, DualKind::Beta, DualKind::Gamma] {
            r.check(format!("finite a is in the {kind:?}-dual of bv({:?})", domain.label()), || {
                let v = dual_test(domain.matrix(), &a, kind, size)?.verdict;
                Ok((v != Verdict::CertifiedIn).then(|| format!("verdict {v:?}")))
            });
        }
    }
    r.check("β conditions imply the γ condition", || {
        for (i, a) in [Seq::harmonic(), Seq::ones(), instances::hashed_seq(rng_seed(rng), false, false)]
            .iter()
            .enumerate()
        {
            let beta = dual_test(&phi(), a, DualKind::Beta, size)?;
            let gamma = dual_test(&phi(), a, DualKind::Gamma, size)?;
            if beta.cond_sup_entry != gamma.cond_sup_entry || (beta.verdict.is_in() && !gamma.verdict.is_in()) {
                return Ok(Some(format!("sequence #{i}")));
            }
        }
        Ok(None)
    });
    r.check("Riesz with q = e reports exactly like Cesàro", || {
        let unit = sigma_riesz(&RieszWeights::new(Seq::ones()));
        let a = instances::hashed_seq(rng_seed(rng), false, false);
        for kind in [DualKind::Alpha, DualKind::Beta, DualKind::Gamma] {
            if dual_test(&unit, &a, kind, size)? != dual_test(&phi(), &a, kind, size)? {
                return Ok(Some(format!("{kind:?} reports differ")));
            }
        }
        Ok(None)
    });
    for i in 0..3 {
        let m = instances::banded(rng);
        r.check(format!("condition statistics equal brute force #{i}"), || {
            let dense = m.truncate(size)?;
            let brute_sup = max_abs(dense.rows().iter().flatten());
            let brute_col = (0..size)
                .map(|k| dense.rows().iter().map(|row| num_abs(&row[k])).sum::<Rational>())
                .max()
                .unwrap_or_else(|| int(0));
            Ok(expect_eq("sup", cond_l1_linf(&m, size)?.last().clone(), brute_sup)
                .or_else(|| expect_eq("column l1", cond_l1_l1(&m, size).ok()?.last().clone(), brute_col)))
        });
    }
}

fn num_abs(v: &Rational) -> Rational {
    if v < &int(0) {
        -v
    } else {
        v.clone()
    }
}

fn rng_seed(rng: &mut rand::rngs::StdRng) -> u64 {
    rand::Rng::gen(rng)
}

fn matclass(r: &mut Runner, fx: &Fixtures, size: usize, rng: &mut rand::rngs::StdRng) {
    for domain in fx.domains() {
        let t = domain.matrix().clone();
        for i in 0..2 {
            let (a, x) = (instances::banded(rng), instances::finite_seq(rng, 12));
            r.check(format!("Ax = E(Tx), bv({:?}) #{i}", domain.label()), || {
                let e = row_transform_e(&a, &t)?;
                Ok(differ_vec(&a.apply(&x, size)?, &e.apply(&t.transform(&x), size)?))
            });
            let (b, z) = (instances::banded(rng), instances::finite_seq(rng, 12));
            r.check(format!("Fz = T(Bz), bv({:?}) #{i}", domain.label()), || {
                let f = left_transform_f(&b, &t);
                let bz = Seq::finite("Bz", b.apply(&z, size)?);
                Ok(differ_vec(&f.apply(&z, size)?, &t.apply(&bz, size)?))
            });
        }
        r.check(format!("F = T·T⁻¹ has unit column sums, bv({:?})", domain.label()), || {
            let inv = BandedMatrix::from(&t.invert()?);
            let report = class_test_into_domain(&inv, &domain, SpaceId::L1, size)?;
            let got = stats(report.transformed_condition.column_l1.as_ref().expect("l1 condition"));
            Ok(got.iter().find(|s| **s != int(1)).map(|s| format!("statistic {s}")))
        });
    }
    r.check("G/R/C coherence of class statistics", || {
        let g = Domain::weighted(WeightPair::new(Seq::harmonic(), Seq::ones()));
        let rz = Domain::riesz(RieszWeights::new(Seq::ones()));
        let c = Domain::cesaro();
        let a = instances::banded(rng);
        for space in [SpaceId::L1, SpaceId::C, SpaceId::Linf] {
            let reference = class_test_from_domain(&a, &c, space, size)?;
            for other in [&g, &rz] {
                let rep = class_test_from_domain(&a, other, space, size)?;
                if rep.transformed_condition != reference.transformed_condition
                    || rep.row_dual_checks != reference.row_dual_checks
                {
                    return Ok(Some(format!("{space} statistics differ for {:?}", other.label())));
                }
            }
        }
        let into_ref = class_test_into_domain(&a, &c, SpaceId::L1, size)?;
        for other in [&g, &rz] {
            if class_test_into_domain(&a, other, SpaceId::L1, size)?.transformed_condition
                != into_ref.transformed_condition
            {
                return Ok(Some(format!("(l1:bv) statistics differ for {:?}", other.label())));
            }
        }
        Ok(None)
    });
}

/// Runs `suite` at truncation `size` (a multiple of 4, at least 8).
///
/// Suites run on separate threads. Each draws from its own stream seeded by
/// `(seed, suite)`, so a suite sees the same instances alone or within `all`.
pub fn run(suite: Suite, size: usize, seed: u64) -> VerifyReport {
    let fx = Fixtures::new(&mut instances::rng(seed));
    let selected: &[Suite] = match suite {
        Suite::All => &[Suite::Identities, Suite::Bases, Suite::Duals, Suite::Matclass],
        Suite::Identities => &[Suite::Identities],
        Suite::Bases => &[Suite::Bases],
        Suite::Duals => &[Suite::Duals],
        Suite::Matclass => &[Suite::Matclass],
    };
    let checks: Vec<CheckResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&part| {
                let fx = &fx;
                scope.spawn(move || {
                    let mut rng = instances::rng(seed ^ (part as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                    let mut runner = Runner { suite: part, checks: Vec::new() };
                    match part {
                        Suite::Identities => identities(&mut runner, fx, size, &mut rng),
                        Suite::Bases => bases(&mut runner, fx, size, &mut rng),
                        Suite::Duals => duals(&mut runner, fx, size, &mut rng),
                        Suite::Matclass => matclass(&mut runner, fx, size, &mut rng),
                        Suite::All => unreachable!(),
                    }
                    runner.checks
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("verify suite panicked")).collect()
    });
    let passed = checks.iter().filter(|c| c.passed).count();
    VerifyReport {
        suite,
        n: size,
        seed,
        passed,
        failed: checks.len() - passed,
        checks,
    }
}
