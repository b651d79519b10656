//! Exhaustive identity suites: the grids behind `verify` on the command line
//! and behind the acceptance tests. Each suite returns how many instances it
//! checked and which ones failed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::CycloOracle;
use crate::error::Result;
use crate::finite_field::{is_prime, FieldCtx};
use crate::gfunction::Evaluator;
use crate::identity_checks::{
    check_floor_quarters, check_floor_thirds, check_gamma_shift, check_product_formula,
    check_reflection, ShiftSign,
};
use crate::padic::{PadicCtx, Rat};
use crate::trace_formulas::{check_shift_relations, BranchStatus};

/// Outcome of one suite: instance count and failure descriptions.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// Primes p > 3 up to the bound.
pub fn odd_primes_upto(bound: u64) -> Vec<u64> {
    (5..=bound).filter(|&p| is_prime(p)).collect()
}

/// All prime powers q = p^r <= qmax with p > 3, ordered by q.
pub fn prime_powers_upto(qmax: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in odd_primes_upto(qmax) {
        let mut q = p;
        let mut r = 1u32;
        while q <= qmax {
            out.push((p, r, q));
            match q.checked_mul(p) {
                Some(next) => {
                    q = next;
                    r += 1;
                }
                None => break,
            }
        }
    }
    out.sort_by_key(|&(_, _, q)| q);
    out.into_iter().map(|(p, r, _)| (p, r)).collect()
}

/// Exact floor-sum identities over p in {5,7,11,13}, r in {1,2,3},
/// q = p^r <= qmax, all (l, i) in range.
pub fn floor_lemma_suite(qmax: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("floor-lemmas");
    for p in [5u64, 7, 11, 13] {
        for r in 1..=3u32 {
            let q = p.pow(r);
            if q > qmax {
                continue;
            }
            let ctx = FieldCtx::with_bound(p, r, qmax.max(q))?;
            for i in 0..r {
                for l in 0..=q - 2 {
                    if l >= 1 {
                        let res = check_floor_thirds(&ctx, l, i)?;
                        report.checked += 1;
                        if !res.pass {
                            report.failures.push(format!("thirds {}", res.params));
                        }
                    }
                    let res = check_floor_quarters(&ctx, l, i)?;
                    report.checked += 1;
                    if !res.pass {
                        report.failures.push(format!("quarters {}", res.params));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Gamma identities over every prime power q <= qmax (p > 3): reflection on
/// the full j-grid, the product formula for m in {2,3,4,6}, and both gamma
/// translation identities for t <= 6; all at precision N + bump.
pub fn gamma_identity_suite(qmax: u64, bump: u32) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("gamma-identities");
    for (p, r) in prime_powers_upto(qmax) {
        let field = FieldCtx::new(p, r)?;
        let n = crate::padic::default_precision(p, r, field.q()) + bump;
        let padic = PadicCtx::with_precision(&field, n)?;
        let ev = Evaluator::new(field.clone(), padic);
        let q = field.q();

        for j in 0..q - 1 {
            let x = Rat::new(j.into(), (q - 1).into());
            let res = check_reflection(&ev, &x)?;
            report.checked += 1;
            if !res.pass {
                report.failures.push(format!("reflection {}", res.params));
            }
        }

        for m in [2u64, 3, 4, 6] {
            if m % p == 0 {
                continue;
            }
            for j in 0..q {
                let x = Rat::new(j.into(), (q - 1).into());
                let res = check_product_formula(&ev, m, &x)?;
                report.checked += 1;
                if !res.pass {
                    report.failures.push(format!("product {}", res.params));
                }
            }
        }

        for t in 1..=6u64 {
            if t % p == 0 {
                continue;
            }
            for j in 0..q - 1 {
                for sign in [ShiftSign::Plus, ShiftSign::Minus] {
                    let res = check_gamma_shift(&ev, t, j, sign)?;
                    report.checked += 1;
                    if !res.pass {
                        report
                            .failures
                            .push(format!("shift {:?} {}", sign, res.params));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Cyclotomic oracle suite over explicit q values: orthogonality, Gauss-sum
/// inverses for every nontrivial k, the theta expansion for every nonzero
/// element, and Davenport-Hasse for m = 2 and (when q = 1 mod 3) m = 3 over
/// every psi.
pub fn oracle_suite(q_values: &[(u64, u32)]) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("cyclotomic-oracle");
    for &(p, r) in q_values {
        let field = FieldCtx::new(p, r)?;
        let oracle = CycloOracle::new(&field);
        let q = field.q();

        let res = oracle.verify_orthogonality();
        report.checked += 1;
        if !res.pass {
            report.failures.push(format!("orthogonality {}", res.params));
        }

        for k in 1..(q - 1) as i64 {
            let res = oracle.verify_gauss_inverse(k)?;
            report.checked += 1;
            if !res.pass {
                report.failures.push(format!("gauss-inverse {}", res.params));
            }
        }

        for alpha in field.elements().skip(1) {
            let res = oracle.verify_theta_expansion(&alpha)?;
            report.checked += 1;
            if !res.pass {
                report.failures.push(format!("theta {}", res.params));
            }
        }

        for m in [2u64, 3] {
            if (q - 1) % m != 0 {
                continue;
            }
            for psi in 0..q - 1 {
                let res = oracle.verify_davenport_hasse(m, psi)?;
                report.checked += 1;
                if !res.pass {
                    report.failures.push(format!("davenport-hasse {}", res.params));
                }
            }
        }
    }
    Ok(report)
}

fn admissible_pairs(ctx: &FieldCtx) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for ai in 1..ctx.q() {
        for bi in 1..ctx.q() {
            let a = ctx.from_index(ai).unwrap();
            let b = ctx.from_index(bi).unwrap();
            let curve = crate::finite_field::WeierstrassCurve::ShortW { a, b };
            if curve.is_nonsingular(ctx).unwrap() {
                out.push((ai, bi));
            }
        }
    }
    out
}

fn shift_relation_over(ev: &Evaluator, pairs: &[(u64, u64)], report: &mut SuiteReport) -> Result<()> {
    let ctx = ev.field();
    for &(ai, bi) in pairs {
        let a = ctx.from_index(ai).unwrap();
        let b = ctx.from_index(bi).unwrap();
        let rel = check_shift_relations(ev, &a, &b)?;
        report.checked += 1;
        if rel.square_branch == BranchStatus::Fail || rel.root_branch == BranchStatus::Fail {
            report.failures.push(format!(
                "q={} a={ai} b={bi}: {}",
                ctx.q(),
                rel.details
            ));
        }
    }
    Ok(())
}

/// Every curve y^2 = x^3 + ax + b with a, b nonzero and nonsingular over
/// F_{p^r}: both branches of the G-transformation identity hold wherever
/// applicable.
pub fn shift_relation_exhaustive(p: u64, r: u32) -> Result<SuiteReport> {
    let field = FieldCtx::new(p, r)?;
    let ev = Evaluator::for_field(&field);
    let mut report = SuiteReport::new("shift-relations");
    let pairs = admissible_pairs(&field);
    shift_relation_over(&ev, &pairs, &mut report)?;
    Ok(report)
}

/// Seeded random sample of admissible curves.
pub fn shift_relation_sampled(p: u64, r: u32, count: usize, seed: u64) -> Result<SuiteReport> {
    let field = FieldCtx::new(p, r)?;
    let ev = Evaluator::for_field(&field);
    let mut report = SuiteReport::new("shift-relations");
    let mut pairs = admissible_pairs(&field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pairs.shuffle(&mut rng);
    pairs.truncate(count);
    shift_relation_over(&ev, &pairs, &mut report)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_enumeration() {
        assert_eq!(
            prime_powers_upto(49),
            vec![
                (5, 1),
                (7, 1),
                (11, 1),
                (13, 1),
                (17, 1),
                (19, 1),
                (23, 1),
                (5, 2),
                (29, 1),
                (31, 1),
                (37, 1),
                (41, 1),
                (43, 1),
                (47, 1),
                (7, 2)
            ]
        );
        assert_eq!(odd_primes_upto(23), vec![5, 7, 11, 13, 17, 19, 23]);
    }

    #[test]
    fn floor_suite_small() {
        let rep = floor_lemma_suite(49).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failures);
        assert!(rep.checked > 0);
    }

    #[test]
    fn oracle_suite_tiny() {
        let rep = oracle_suite(&[(5, 1)]).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failures);
    }

    #[test]
    fn shift_relation_suite_small() {
        let rep = shift_relation_exhaustive(5, 1).unwrap();
        assert!(rep.passed(), "failures: {:?}", rep.failures);
        // 16 (a,b) pairs in F_5^x squared, minus singular ones
        assert!(rep.checked > 0 && rep.checked <= 16);

        let sampled = shift_relation_sampled(5, 1, 5, 1).unwrap();
        assert!(sampled.passed());
        assert!(sampled.checked <= 5);
    }
}
