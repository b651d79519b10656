//! McCarthy's p-adic hypergeometric function nGn.
//!
//! For parameters a_1..a_n, b_1..b_n in Q cap Z_p and t in F_q the value is
//!
//! ```text
//!  -1/(q-1) * sum_{j=0}^{q-2} (-1)^{jn} wbar^j(t)
//!     * prod_{i=1}^{n} prod_{k=0}^{r-1}
//!         (-p)^( -floor(<a_i p^k> - j p^k/(q-1)) - floor(<-b_i p^k> + j p^k/(q-1)) )
//!         * Gamma_p(<(a_i - j/(q-1)) p^k>) / Gamma_p(<a_i p^k>)
//!         * Gamma_p(<(-b_i + j/(q-1)) p^k>) / Gamma_p(<-b_i p^k>)
//! ```
//!
//! with w the Teichmuller character, wbar its inverse, <.> the fractional
//! part, and all exponent arithmetic exact-rational. The value lives in Q_q;
//! each (i, k) factor contributes an exponent in {-1, 0, 1}, so the valuation
//! is at least -n*r. For t = 0 every summand carries wbar^j(0) = 0 under the
//! chi(0) := 0 convention and the value is exact zero.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::finite_field::{FieldCtx, FqElem};
use crate::padic::{self, PadicCtx, PadicNum, PadicSum, Rat};

/// Parameter lists and argument of an nGn evaluation.
#[derive(Clone, Debug)]
pub struct GArgs {
    pub upper: Vec<Rat>,
    pub lower: Vec<Rat>,
    pub t: FqElem,
}

impl GArgs {
    pub fn new(upper: Vec<Rat>, lower: Vec<Rat>, t: FqElem) -> GArgs {
        GArgs { upper, lower, t }
    }
}

/// Result of an nGn evaluation.
#[derive(Clone, Debug)]
pub struct GValue {
    pub value: PadicNum,
}

/// Shared evaluation context: field, p-adic precision, and a gamma memo
/// keyed by the exact rational argument. Safe to share across threads; the
/// memo guarantees at most 2nr(q-1) + 2nr distinct gamma evaluations per
/// G call, and repeated calls with the same parameters hit the memo.
pub struct Evaluator {
    field: FieldCtx,
    padic: PadicCtx,
    memo: Mutex<HashMap<Rat, u64>>,
    misses: AtomicU64,
}

impl Evaluator {
    pub fn new(field: FieldCtx, padic: PadicCtx) -> Evaluator {
        Evaluator {
            field,
            padic,
            memo: Mutex::new(HashMap::new()),
            misses: AtomicU64::new(0),
        }
    }

    /// Evaluator at the default precision policy for the field.
    pub fn for_field(field: &FieldCtx) -> Evaluator {
        let padic = PadicCtx::for_field(field);
        Evaluator::new(field.clone(), padic)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn padic(&self) -> &PadicCtx {
        &self.padic
    }

    /// Memoized Gamma_p on exact rationals.
    pub fn gamma(&self, x: &Rat) -> Result<u64> {
        if let Some(&v) = self.memo.lock().unwrap().get(x) {
            return Ok(v);
        }
        let v = self.padic.gamma_u64(x)?;
        self.misses.fetch_add(1, Ordering::Relaxed);
        self.memo.lock().unwrap().insert(x.clone(), v);
        Ok(v)
    }

    /// Number of gamma evaluations that missed the memo so far.
    pub fn gamma_evaluations(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    fn validate(&self, args: &GArgs) -> Result<Prepared> {
        let n = args.upper.len();
        if n == 0 || args.lower.len() != n {
            return Err(Error::BadParameter(
                "upper and lower parameter lists must have equal positive length".into(),
            ));
        }
        if args.t.field() != self.field.id() {
            return Err(Error::MixedFields);
        }
        let p_big = BigInt::from(self.field.p());
        for x in args.upper.iter().chain(&args.lower) {
            if (x.denom() % &p_big) == BigInt::from(0) {
                return Err(Error::BadParameter(format!(
                    "parameter {x} is not a p-adic integer at p = {}",
                    self.field.p()
                )));
            }
        }
        // per (i, k): <a_i p^k>, <-b_i p^k>, and the two denominator gammas
        let r = self.field.r();
        let mut rows = Vec::with_capacity(n * r as usize);
        let mut denom: u64 = 1;
        for i in 0..n {
            for k in 0..r {
                let pk = Rat::from_integer(BigInt::from(self.field.p().pow(k)));
                let a_frac = padic::frac(&(&args.upper[i] * &pk));
                let b_frac = padic::frac(&(-&args.lower[i] * &pk));
                let ga = self.gamma(&a_frac)?;
                let gb = self.gamma(&b_frac)?;
                denom = mulmod(denom, mulmod(ga, gb, self.padic.pn()), self.padic.pn());
                rows.push(Row { a_frac, b_frac, pk_num: self.field.p().pow(k) });
            }
        }
        let denom_inv = padic::modinv_u64(denom, self.padic.pn());
        Ok(Prepared { n, rows, denom_inv })
    }

    /// The gamma-quotient scalar and (-p) exponent of the j-th summand.
    fn j_factor(&self, prep: &Prepared, j: u64) -> Result<(u64, i64)> {
        let q1 = self.field.q() - 1;
        let pn = self.padic.pn();
        let mut scalar = prep.denom_inv;
        let mut e_total: i64 = 0;
        for row in &prep.rows {
            let c = Rat::new(BigInt::from(j as u128 * row.pk_num as u128), BigInt::from(q1));
            let a_shift = &row.a_frac - &c;
            let b_shift = &row.b_frac + &c;
            e_total += -padic::floor_i64(&a_shift) - padic::floor_i64(&b_shift);
            let g1 = self.gamma(&padic::frac(&a_shift))?;
            let g2 = self.gamma(&padic::frac(&b_shift))?;
            scalar = mulmod(scalar, mulmod(g1, g2, pn), pn);
        }
        Ok((scalar, e_total))
    }

    /// Evaluates nGn at the given arguments.
    pub fn evaluate(&self, args: &GArgs) -> Result<GValue> {
        let prep = self.validate(args)?;
        if args.t.is_zero() {
            return Ok(GValue { value: PadicNum::Zero });
        }
        let q = self.field.q();
        let n = prep.n;

        let w = self.padic.teichmuller(&args.t);
        let winv = self.padic.inv(&w)?;
        let mut wbar_pow = self.padic.one();

        let mut sum = PadicSum::new(&self.padic);
        for j in 0..q - 1 {
            let (scalar, e_total) = self.j_factor(&prep, j)?;
            let scalar_num = self.scalar_unit(scalar);
            let mut term = self.padic.mul(&wbar_pow, &scalar_num);
            term = self.padic.mul_neg_p_pow(&term, e_total);
            if (j as u128 * n as u128) % 2 == 1 {
                term = self.padic.neg(&term);
            }
            sum.push(&term);
            wbar_pow = self.padic.mul(&wbar_pow, &winv);
        }
        let s = sum.finish()?;
        let norm = self
            .padic
            .from_rat(&Rat::new(BigInt::from(-1), BigInt::from(q - 1)));
        Ok(GValue { value: self.padic.mul(&s, &norm) })
    }

    /// One summand of the defining sum, with wbar^j recomputed from scratch;
    /// used to cross-check the incremental main loop.
    pub(crate) fn summand(&self, args: &GArgs, j: u64) -> Result<PadicNum> {
        let prep = self.validate(args)?;
        if args.t.is_zero() {
            return Ok(PadicNum::Zero);
        }
        let q1 = (self.field.q() - 1) as i64;
        let w = self.padic.teichmuller(&args.t);
        let wbar_j = self.padic.pow(&w, (-(j as i64)).rem_euclid(q1))?;
        let (scalar, e_total) = self.j_factor(&prep, j)?;
        let mut term = self.padic.mul(&wbar_j, &self.scalar_unit(scalar));
        term = self.padic.mul_neg_p_pow(&term, e_total);
        if (j as u128 * prep.n as u128) % 2 == 1 {
            term = self.padic.neg(&term);
        }
        Ok(term)
    }

    fn scalar_unit(&self, s: u64) -> PadicNum {
        let mut coeffs = vec![0; self.field.r() as usize];
        coeffs[0] = s;
        PadicNum::Unit { val: 0, coeffs, prec: self.padic.n() }
    }
}

struct Row {
    a_frac: Rat,
    b_frac: Rat,
    pk_num: u64,
}

struct Prepared {
    n: usize,
    rows: Vec<Row>,
    denom_inv: u64,
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::{trace_bruteforce, WeierstrassCurve};
    use crate::padic::rat;
    use rand::{Rng, SeedableRng};

    fn args_2g2(up: [(i64, i64); 2], lo: [(i64, i64); 2], t: FqElem) -> GArgs {
        GArgs::new(
            up.iter().map(|&(n, d)| rat(n, d)).collect(),
            lo.iter().map(|&(n, d)| rat(n, d)).collect(),
            t,
        )
    }

    #[test]
    fn value_matches_point_count_on_f5() {
        // 2G2[1/4,3/4; 1/3,2/3 | 2] over F_5 must equal phi(1) * a_5 / 5 for
        // y^2 = x^3 + x + 1, whose trace is -3 by direct count.
        let f5 = FieldCtx::new(5, 1).unwrap();
        let curve = WeierstrassCurve::ShortW { a: f5.one(), b: f5.one() };
        assert_eq!(trace_bruteforce(&f5, &curve).unwrap(), -3);

        let ev = Evaluator::for_field(&f5);
        let args = args_2g2([(1, 4), (3, 4)], [(1, 3), (2, 3)], f5.from_int(2));
        let g = ev.evaluate(&args).unwrap();
        let expected = ev.padic().from_rat(&rat(-3, 5));
        assert!(ev.padic().eq(&g.value, &expected), "got {}", ev.padic().render(&g.value));
    }

    #[test]
    fn value_matches_point_count_on_f7() {
        // 2G2[1/2,1/2; 1/3,2/3 | 2] over F_7 equals a_7 / (7 phi(6)) = -3/7
        // for y^2 = x^3 + 2x + 1.
        let f7 = FieldCtx::new(7, 1).unwrap();
        let curve = WeierstrassCurve::ShortW { a: f7.from_int(2), b: f7.one() };
        assert_eq!(trace_bruteforce(&f7, &curve).unwrap(), 3);
        assert_eq!(f7.quadratic_character(&f7.from_int(6)), -1);

        let ev = Evaluator::for_field(&f7);
        let args = args_2g2([(1, 2), (1, 2)], [(1, 3), (2, 3)], f7.from_int(2));
        let g = ev.evaluate(&args).unwrap();
        let expected = ev.padic().from_rat(&rat(-3, 7));
        assert!(ev.padic().eq(&g.value, &expected), "got {}", ev.padic().render(&g.value));
    }

    #[test]
    fn zero_argument_gives_exact_zero() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let ev = Evaluator::for_field(&f5);
        let args = args_2g2([(1, 4), (3, 4)], [(1, 3), (2, 3)], f5.zero());
        assert!(ev.evaluate(&args).unwrap().value.is_zero());
    }

    #[test]
    fn bad_parameters_rejected() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let ev = Evaluator::for_field(&f5);
        let args = GArgs::new(vec![rat(1, 5)], vec![rat(1, 3)], f5.from_int(2));
        assert!(matches!(ev.evaluate(&args).unwrap_err(), Error::BadParameter(_)));
        let args = GArgs::new(vec![], vec![], f5.from_int(2));
        assert!(matches!(ev.evaluate(&args).unwrap_err(), Error::BadParameter(_)));
        let f7 = FieldCtx::new(7, 1).unwrap();
        let args = args_2g2([(1, 4), (3, 4)], [(1, 3), (2, 3)], f7.from_int(2));
        assert_eq!(ev.evaluate(&args).unwrap_err(), Error::MixedFields);
    }

    #[test]
    fn gamma_memo_bounds_cold_calls() {
        let f13 = FieldCtx::new(13, 1).unwrap();
        let ev = Evaluator::for_field(&f13);
        let args = args_2g2([(1, 4), (3, 4)], [(1, 3), (2, 3)], f13.from_int(2));
        let g1 = ev.evaluate(&args).unwrap();
        let cold = ev.gamma_evaluations();
        assert!(cold <= 2 * 2 * 1 * 12 + 4, "cold gamma calls: {cold}");
        // second evaluation hits the memo entirely and reproduces the value
        let g2 = ev.evaluate(&args).unwrap();
        assert_eq!(ev.gamma_evaluations(), cold);
        assert!(ev.padic().eq(&g1.value, &g2.value));
    }

    #[test]
    fn summand_periodicity_in_j() {
        for p in [5u64, 13] {
            let f = FieldCtx::new(p, 1).unwrap();
            let ev = Evaluator::for_field(&f);
            let args = args_2g2([(1, 2), (1, 2)], [(1, 3), (2, 3)], f.from_int(2));
            for j in 0..p - 1 {
                let t1 = ev.summand(&args, j).unwrap();
                let t2 = ev.summand(&args, j + (p - 1)).unwrap();
                assert!(ev.padic().eq(&t1, &t2), "periodicity fails at p={p}, j={j}");
            }
        }
    }

    #[test]
    fn incremental_sum_matches_direct_summands() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let ev = Evaluator::for_field(&f7);
        let args = args_2g2([(1, 2), (1, 2)], [(1, 4), (3, 4)], f7.from_int(3));
        let g = ev.evaluate(&args).unwrap();
        let mut sum = PadicSum::new(ev.padic());
        for j in 0..6 {
            sum.push(&ev.summand(&args, j).unwrap());
        }
        let s = sum.finish().unwrap();
        let norm = ev.padic().from_rat(&rat(-1, 6));
        let direct = ev.padic().mul(&s, &norm);
        assert!(ev.padic().eq(&g.value, &direct));
    }

    #[test]
    fn valuation_bound_and_precision_stability() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let param_sets: [([(i64, i64); 2], [(i64, i64); 2]); 3] = [
            ([(1, 4), (3, 4)], [(1, 3), (2, 3)]),
            ([(1, 2), (1, 2)], [(1, 3), (2, 3)]),
            ([(1, 2), (1, 2)], [(1, 4), (3, 4)]),
        ];
        let fields = [
            FieldCtx::new(5, 1).unwrap(),
            FieldCtx::new(7, 1).unwrap(),
            FieldCtx::new(13, 1).unwrap(),
            FieldCtx::new(5, 2).unwrap(),
        ];
        let mut checked = 0;
        while checked < 50 {
            let f = &fields[rng.gen_range(0..fields.len())];
            let (up, lo) = param_sets[rng.gen_range(0..param_sets.len())];
            let t_idx = rng.gen_range(1..f.q());
            let t = f.from_index(t_idx).unwrap();
            let n_default = crate::padic::default_precision(f.p(), f.r(), f.q());

            let ev = Evaluator::new(f.clone(), PadicCtx::with_precision(f, n_default).unwrap());
            let hi = Evaluator::new(f.clone(), PadicCtx::with_precision(f, n_default + 2).unwrap());
            let args = args_2g2(up, lo, t);
            let g = ev.evaluate(&args).unwrap();
            let g_hi = hi.evaluate(&args).unwrap();
            if let Some(v) = g.value.valuation() {
                assert!(v >= -2 * f.r() as i64, "valuation bound violated: {v}");
            }
            assert!(
                ev.padic().eq(&g.value, &ev.padic().truncate(&g_hi.value)),
                "precision stability fails at q={} t={t_idx}",
                f.q()
            );
            checked += 1;
        }
    }
}
