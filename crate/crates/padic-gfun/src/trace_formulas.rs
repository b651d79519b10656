//! Closed-form traces of Frobenius via special values of 2G2, the curve
//! shifts feeding them, and the transformation relations between G-values
//! with different parameters.
//!
//! Four formulas are implemented, all returning `q * phi(.) * 2G2[... | t]`
//! decoded into the unique integer of the Hasse window:
//!
//! - `trace_short_direct`: y^2 = x^3 + ax + b (j != 0, 1728) with parameters
//!   [1/4, 3/4; 1/3, 2/3] at t = -27 b^2 / (4 a^3);
//! - `trace_via_e1_shift`: same curve when -a/3 is a square, via the root k
//!   of 3k^2 + a = 0, parameters [1/2, 1/2; 1/3, 2/3];
//! - `trace_via_e2_shift`: same curve when x^3 + ax + b has a root h,
//!   parameters [1/2, 1/2; 1/4, 3/4];
//! - `trace_e1` / `trace_e2`: curves already in the shapes
//!   y^2 = x^3 + cx^2 + d and y^2 = x^3 + fx^2 + gx.

use crate::error::{Error, Result};
use crate::finite_field::{hasse_bound, trace_bruteforce, FieldCtx, FqElem, WeierstrassCurve};
use crate::gfunction::{Evaluator, GArgs, GValue};
use crate::padic::{rat, PadicCtx, PadicNum, Rat};

/// How a trace value was obtained.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Method {
    BruteForce,
    ShortDirect,
    E1Shift,
    E2Shift,
    E1Form,
    E2Form,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::BruteForce => "brute",
            Method::ShortDirect => "short-direct",
            Method::E1Shift => "e1-shift",
            Method::E2Shift => "e2-shift",
            Method::E1Form => "e1-form",
            Method::E2Form => "e2-form",
        }
    }

    pub fn all_formulas() -> [Method; 5] {
        [
            Method::ShortDirect,
            Method::E1Shift,
            Method::E2Shift,
            Method::E1Form,
            Method::E2Form,
        ]
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome of one trace computation.
#[derive(Clone, Debug)]
pub struct TraceReport {
    pub curve: WeierstrassCurve,
    pub method: Method,
    pub applicable: bool,
    /// Decoded integer trace; present iff applicable.
    pub value: Option<i64>,
    /// The raw G-value behind the formula.
    pub gvalue: Option<GValue>,
    /// The undecoded q * phi * G value, for exact cross-checks.
    pub aq_padic: Option<PadicNum>,
    pub details: String,
}

fn halves_thirds() -> (Vec<Rat>, Vec<Rat>) {
    (vec![rat(1, 2), rat(1, 2)], vec![rat(1, 3), rat(2, 3)])
}

fn halves_quarters() -> (Vec<Rat>, Vec<Rat>) {
    (vec![rat(1, 2), rat(1, 2)], vec![rat(1, 4), rat(3, 4)])
}

fn quarters_thirds() -> (Vec<Rat>, Vec<Rat>) {
    (vec![rat(1, 4), rat(3, 4)], vec![rat(1, 3), rat(2, 3)])
}

/// Decodes a p-adic value with nonnegative valuation into the unique integer
/// z with |z| <= floor(2 sqrt q) congruent to it, when one exists.
pub fn padic_to_hasse_integer(ctx: &PadicCtx, v: &PadicNum, q: u64) -> Option<i64> {
    let bound = hasse_bound(q) as u64;
    match v {
        PadicNum::Zero => Some(0),
        PadicNum::Unit { val, coeffs, prec } => {
            if *val < 0 {
                return None;
            }
            // the integer must lie in Z_p: non-constant mantissa coefficients
            // vanish within the valid digits
            if coeffs[1..].iter().any(|&c| c != 0) {
                return None;
            }
            let md = ((*val).saturating_add(*prec as i64) as u64).min(ctx.n() as u64) as u32;
            let modulus = pow_u64(ctx.p(), md);
            if modulus <= 2 * bound {
                return None; // not enough digits to decode uniquely
            }
            let val_digits = (*val as u64).min(md as u64) as u32;
            let residue = if *val as u64 >= md as u64 {
                0
            } else {
                coeffs[0] % pow_u64(ctx.p(), md - val_digits) * pow_u64(ctx.p(), val_digits)
            };
            if residue <= bound {
                Some(residue as i64)
            } else if residue >= modulus - bound {
                Some(residue as i64 - modulus as i64)
            } else {
                None
            }
        }
    }
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.pow(e)
}

/// Shift x -> x + k with 3k^2 + a = 0, taking y^2 = x^3 + ax + b to the E1
/// shape y^2 = x^3 + 3k x^2 + (k^3 + ak + b). Returns the deterministic
/// (smaller) root k and the shifted curve, or None when -a/3 is a non-residue.
pub fn shift_to_e1(
    ctx: &FieldCtx,
    a: &FqElem,
    b: &FqElem,
) -> Result<Option<(FqElem, WeierstrassCurve)>> {
    if a.is_zero() {
        return Err(Error::JInvariantZero);
    }
    let curve = WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() };
    curve.validate(ctx)?;
    let target = ctx.div(&ctx.neg(a), &ctx.from_int(3))?;
    let k = match ctx.sqrt(&target) {
        None => return Ok(None),
        Some(k) => k,
    };
    Ok(Some(e1_from_k(ctx, a, b, &k)?))
}

fn e1_from_k(
    ctx: &FieldCtx,
    a: &FqElem,
    b: &FqElem,
    k: &FqElem,
) -> Result<(FqElem, WeierstrassCurve)> {
    let c = ctx.mul(&ctx.from_int(3), k)?;
    let k3 = ctx.pow(k, 3)?;
    let d = ctx.add(&ctx.add(&k3, &ctx.mul(a, k)?)?, b)?;
    Ok((k.clone(), WeierstrassCurve::E1 { c, d }))
}

/// Shift x -> x + h with h a root of x^3 + ax + b, taking the curve to the
/// E2 shape y^2 = x^3 + 3h x^2 + (3h^2 + a) x. Returns the smallest root
/// (every root is nonzero because b != 0) or None when the cubic is rootless.
pub fn shift_to_e2(
    ctx: &FieldCtx,
    a: &FqElem,
    b: &FqElem,
) -> Result<Option<(FqElem, WeierstrassCurve)>> {
    if b.is_zero() {
        return Err(Error::JInvariant1728);
    }
    let curve = WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() };
    curve.validate(ctx)?;
    let roots = ctx.cubic_roots(a, b);
    let h = match roots.first() {
        None => return Ok(None),
        Some(h) => h.clone(),
    };
    Ok(Some(e2_from_h(ctx, a, &h)?))
}

fn e2_from_h(ctx: &FieldCtx, a: &FqElem, h: &FqElem) -> Result<(FqElem, WeierstrassCurve)> {
    let f = ctx.mul(&ctx.from_int(3), h)?;
    let h2 = ctx.mul(h, h)?;
    let g = ctx.add(&ctx.mul(&ctx.from_int(3), &h2)?, a)?;
    Ok((h.clone(), WeierstrassCurve::E2 { f, g }))
}

fn formula_trace(
    ev: &Evaluator,
    curve: WeierstrassCurve,
    method: Method,
    sign: i32,
    upper: Vec<Rat>,
    lower: Vec<Rat>,
    t: FqElem,
    details: String,
) -> Result<TraceReport> {
    debug_assert!(sign == 1 || sign == -1);
    let q = ev.field().q();
    let g = ev.evaluate(&GArgs::new(upper, lower, t))?;
    let factor = ev.padic().from_int(q as i128 * sign as i128);
    let aq = ev.padic().mul(&g.value, &factor);
    let value = padic_to_hasse_integer(ev.padic(), &aq, q).ok_or(Error::NoHasseInteger)?;
    Ok(TraceReport {
        curve,
        method,
        applicable: true,
        value: Some(value),
        gvalue: Some(g),
        aq_padic: Some(aq),
        details,
    })
}

/// a_q(E1) = q phi(d) 2G2[1/2,1/2; 1/3,2/3 | -27d / (4c^3)] for
/// y^2 = x^3 + c x^2 + d with c != 0.
pub fn trace_e1(ev: &Evaluator, c: &FqElem, d: &FqElem) -> Result<TraceReport> {
    let ctx = ev.field();
    let curve = WeierstrassCurve::E1 { c: c.clone(), d: d.clone() };
    curve.validate(ctx).map_err(degenerate)?;
    let c3 = ctx.pow(c, 3)?;
    let num = ctx.mul(&ctx.from_int(-27), d)?;
    let den = ctx.mul(&ctx.from_int(4), &c3)?;
    let t = ctx.div(&num, &den)?;
    let sign = ctx.quadratic_character(d);
    let (up, lo) = halves_thirds();
    let details = format!("t = {t}, sign = phi(d) = {sign}");
    formula_trace(ev, curve, Method::E1Form, sign, up, lo, t, details)
}

/// a_q(E2) = q phi(-g) 2G2[1/2,1/2; 1/4,3/4 | 4g / f^2] for
/// y^2 = x^3 + f x^2 + g x with f != 0.
pub fn trace_e2(ev: &Evaluator, f: &FqElem, g: &FqElem) -> Result<TraceReport> {
    let ctx = ev.field();
    let curve = WeierstrassCurve::E2 { f: f.clone(), g: g.clone() };
    curve.validate(ctx).map_err(degenerate)?;
    let f2 = ctx.mul(f, f)?;
    let t = ctx.div(&ctx.mul(&ctx.from_int(4), g)?, &f2)?;
    let sign = ctx.quadratic_character(&ctx.neg(g));
    let (up, lo) = halves_quarters();
    let details = format!("t = {t}, sign = phi(-g) = {sign}");
    formula_trace(ev, curve, Method::E2Form, sign, up, lo, t, details)
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::SingularCurve => Error::DegenerateCurve("discriminant is zero".into()),
        other => other,
    }
}

/// a_q = q phi(b) 2G2[1/4,3/4; 1/3,2/3 | -27 b^2 / (4 a^3)] for
/// y^2 = x^3 + ax + b with j != 0, 1728; holds over every F_q with p > 3.
pub fn trace_short_direct(ev: &Evaluator, a: &FqElem, b: &FqElem) -> Result<TraceReport> {
    let ctx = ev.field();
    if a.is_zero() {
        return Err(Error::JInvariantZero);
    }
    if b.is_zero() {
        return Err(Error::JInvariant1728);
    }
    let curve = WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() };
    curve.validate(ctx)?;
    let b2 = ctx.mul(b, b)?;
    let a3 = ctx.pow(a, 3)?;
    let num = ctx.mul(&ctx.from_int(-27), &b2)?;
    let den = ctx.mul(&ctx.from_int(4), &a3)?;
    let t = ctx.div(&num, &den)?;
    let sign = ctx.quadratic_character(b);
    let (up, lo) = quarters_thirds();
    let details = format!("t = {t}, sign = phi(b) = {sign}");
    formula_trace(ev, curve, Method::ShortDirect, sign, up, lo, t, details)
}

/// Trace via the E1 shift when -a/3 is a square; marked not-applicable
/// otherwise. The formula is evaluated directly from k:
/// a_q = q phi(k^3+ak+b) 2G2[1/2,1/2; 1/3,2/3 | -(k^3+ak+b) / (4k^3)].
pub fn trace_via_e1_shift(ev: &Evaluator, a: &FqElem, b: &FqElem) -> Result<TraceReport> {
    match shift_to_e1(ev.field(), a, b)? {
        None => Ok(not_applicable(
            WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() },
            Method::E1Shift,
            "-a/3 is not a quadratic residue",
        )),
        Some((k, _)) => trace_via_e1_shift_with_k(ev, a, b, &k),
    }
}

/// Same formula with an explicit root k of 3k^2 + a = 0 (the theorem holds
/// for every such root).
pub fn trace_via_e1_shift_with_k(
    ev: &Evaluator,
    a: &FqElem,
    b: &FqElem,
    k: &FqElem,
) -> Result<TraceReport> {
    let ctx = ev.field();
    let three_k2 = ctx.mul(&ctx.from_int(3), &ctx.mul(k, k)?)?;
    if !ctx.add(&three_k2, a)?.is_zero() {
        return Err(Error::BadInput("k does not satisfy 3k^2 + a = 0".into()));
    }
    let curve = WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() };
    curve.validate(ctx)?;
    let k3 = ctx.pow(k, 3)?;
    let d = ctx.add(&ctx.add(&k3, &ctx.mul(a, k)?)?, b)?;
    debug_assert!(!d.is_zero(), "nonsingularity forces k^3 + ak + b != 0");
    let t = ctx.div(&ctx.neg(&d), &ctx.mul(&ctx.from_int(4), &k3)?)?;
    let sign = ctx.quadratic_character(&d);
    let (up, lo) = halves_thirds();
    let details = format!("k = {k}, t = {t}, sign = phi(k^3+ak+b) = {sign}");
    formula_trace(ev, curve, Method::E1Shift, sign, up, lo, t, details)
}

/// Trace via the E2 shift when x^3 + ax + b has a (necessarily nonzero)
/// root; marked not-applicable otherwise:
/// a_q = q phi(-3h^2-a) 2G2[1/2,1/2; 1/4,3/4 | 4(3h^2+a) / (9h^2)].
pub fn trace_via_e2_shift(ev: &Evaluator, a: &FqElem, b: &FqElem) -> Result<TraceReport> {
    match shift_to_e2(ev.field(), a, b)? {
        None => Ok(not_applicable(
            WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() },
            Method::E2Shift,
            "x^3 + ax + b has no root",
        )),
        Some((h, _)) => trace_via_e2_shift_with_h(ev, a, b, &h),
    }
}

/// Same formula with an explicit root h of x^3 + ax + b = 0.
pub fn trace_via_e2_shift_with_h(
    ev: &Evaluator,
    a: &FqElem,
    b: &FqElem,
    h: &FqElem,
) -> Result<TraceReport> {
    let ctx = ev.field();
    if b.is_zero() {
        return Err(Error::JInvariant1728);
    }
    let h3 = ctx.pow(h, 3)?;
    let probe = ctx.add(&ctx.add(&h3, &ctx.mul(a, h)?)?, b)?;
    if !probe.is_zero() {
        return Err(Error::BadInput("h is not a root of x^3 + ax + b".into()));
    }
    let curve = WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() };
    curve.validate(ctx)?;
    let h2 = ctx.mul(h, h)?;
    let g = ctx.add(&ctx.mul(&ctx.from_int(3), &h2)?, a)?;
    debug_assert!(!g.is_zero(), "nonsingularity forces 3h^2 + a != 0");
    let t = ctx.div(
        &ctx.mul(&ctx.from_int(4), &g)?,
        &ctx.mul(&ctx.from_int(9), &h2)?,
    )?;
    let sign = ctx.quadratic_character(&ctx.neg(&g));
    let (up, lo) = halves_quarters();
    let details = format!("h = {h}, t = {t}, sign = phi(-3h^2-a) = {sign}");
    formula_trace(ev, curve, Method::E2Shift, sign, up, lo, t, details)
}

fn not_applicable(curve: WeierstrassCurve, method: Method, why: &str) -> TraceReport {
    TraceReport {
        curve,
        method,
        applicable: false,
        value: None,
        gvalue: None,
        aq_padic: None,
        details: why.into(),
    }
}

/// Brute-force counterpart packaged as a report.
pub fn trace_report_bruteforce(ctx: &FieldCtx, curve: &WeierstrassCurve) -> Result<TraceReport> {
    let value = trace_bruteforce(ctx, curve)?;
    Ok(TraceReport {
        curve: curve.clone(),
        method: Method::BruteForce,
        applicable: true,
        value: Some(value),
        gvalue: None,
        aq_padic: None,
        details: "character-sum point count".into(),
    })
}

/// Outcome of one branch of the G-value transformation identity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BranchStatus {
    Pass,
    NotApplicable,
    Fail,
}

/// Per-branch outcome of the transformation between 2G2 values with
/// different parameters attached to one curve y^2 = x^3 + ax + b.
#[derive(Clone, Debug)]
pub struct ShiftRelationReport {
    pub base: GValue,
    /// branch through k with a = -3k^2 (checked for every valid k)
    pub square_branch: BranchStatus,
    /// branch through roots h of x^3 + ax + b (checked for every root)
    pub root_branch: BranchStatus,
    pub details: String,
}

impl ShiftRelationReport {
    pub fn passed(&self) -> bool {
        self.square_branch != BranchStatus::Fail && self.root_branch != BranchStatus::Fail
    }
}

/// Verifies, as full p-adic equality at working precision:
///
/// ```text
/// 2G2[1/4,3/4; 1/3,2/3 | -27b^2/(4a^3)]
///   = phi(b(k^3+ak+b)) 2G2[1/2,1/2; 1/3,2/3 | -(k^3+ak+b)/(4k^3)]   if a = -3k^2
///   = phi(-b(3h^2+a))  2G2[1/2,1/2; 1/4,3/4 | 4(3h^2+a)/(9h^2)]     if h^3+ah+b = 0
/// ```
pub fn check_shift_relations(ev: &Evaluator, a: &FqElem, b: &FqElem) -> Result<ShiftRelationReport> {
    let ctx = ev.field();
    if a.is_zero() {
        return Err(Error::JInvariantZero);
    }
    if b.is_zero() {
        return Err(Error::JInvariant1728);
    }
    let curve = WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() };
    curve.validate(ctx)?;

    let b2 = ctx.mul(b, b)?;
    let a3 = ctx.pow(a, 3)?;
    let t0 = ctx.div(&ctx.mul(&ctx.from_int(-27), &b2)?, &ctx.mul(&ctx.from_int(4), &a3)?)?;
    let (up, lo) = quarters_thirds();
    let base = ev.evaluate(&GArgs::new(up, lo, t0))?;

    let mut details = Vec::new();

    let square_branch = {
        let target = ctx.div(&ctx.neg(a), &ctx.from_int(3))?;
        match ctx.sqrt(&target) {
            None => BranchStatus::NotApplicable,
            Some(k0) => {
                let mut status = BranchStatus::Pass;
                for k in [k0.clone(), ctx.neg(&k0)] {
                    let k3 = ctx.pow(&k, 3)?;
                    let d = ctx.add(&ctx.add(&k3, &ctx.mul(a, &k)?)?, b)?;
                    let t = ctx.div(&ctx.neg(&d), &ctx.mul(&ctx.from_int(4), &k3)?)?;
                    let sign = ctx.quadratic_character(&ctx.mul(b, &d)?);
                    let (up, lo) = halves_thirds();
                    let g = ev.evaluate(&GArgs::new(up, lo, t))?;
                    let rhs = ev.padic().mul(&g.value, &ev.padic().from_int(sign as i128));
                    if !ev.padic().eq(&base.value, &rhs) {
                        status = BranchStatus::Fail;
                        details.push(format!("square branch fails at k = {k}"));
                    }
                }
                status
            }
        }
    };

    let root_branch = {
        let roots = ctx.cubic_roots(a, b);
        if roots.is_empty() {
            BranchStatus::NotApplicable
        } else {
            let mut status = BranchStatus::Pass;
            for h in roots {
                let h2 = ctx.mul(&h, &h)?;
                let g_coef = ctx.add(&ctx.mul(&ctx.from_int(3), &h2)?, a)?;
                let t = ctx.div(
                    &ctx.mul(&ctx.from_int(4), &g_coef)?,
                    &ctx.mul(&ctx.from_int(9), &h2)?,
                )?;
                let sign = ctx.quadratic_character(&ctx.neg(&ctx.mul(b, &g_coef)?));
                let (up, lo) = halves_quarters();
                let g = ev.evaluate(&GArgs::new(up, lo, t))?;
                let rhs = ev.padic().mul(&g.value, &ev.padic().from_int(sign as i128));
                if !ev.padic().eq(&base.value, &rhs) {
                    status = BranchStatus::Fail;
                    details.push(format!("root branch fails at h = {h}"));
                }
            }
            status
        }
    };

    Ok(ShiftRelationReport {
        base,
        square_branch,
        root_branch,
        details: details.join("; "),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn evaluator(p: u64, r: u32) -> Evaluator {
        let f = FieldCtx::new(p, r).unwrap();
        Evaluator::for_field(&f)
    }

    #[test]
    fn shift_to_e1_examples() {
        let ev = evaluator(7, 1);
        let f7 = ev.field();
        let (k, curve) = shift_to_e1(f7, &f7.from_int(2), &f7.one()).unwrap().unwrap();
        assert_eq!(k, f7.from_int(2));
        assert_eq!(
            curve,
            WeierstrassCurve::E1 { c: f7.from_int(6), d: f7.from_int(6) }
        );
        // trace is preserved by the shift
        let orig = WeierstrassCurve::ShortW { a: f7.from_int(2), b: f7.one() };
        assert_eq!(trace_bruteforce(f7, &orig).unwrap(), 3);
        assert_eq!(trace_bruteforce(f7, &curve).unwrap(), 3);

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        assert!(shift_to_e1(f5, &f5.one(), &f5.one()).unwrap().is_none());
        assert_eq!(
            shift_to_e1(f5, &f5.zero(), &f5.one()).unwrap_err(),
            Error::JInvariantZero
        );
    }

    #[test]
    fn shift_to_e2_examples() {
        let ev = evaluator(7, 1);
        let f7 = ev.field();
        let (h, curve) = shift_to_e2(f7, &f7.from_int(2), &f7.from_int(4)).unwrap().unwrap();
        assert_eq!(h, f7.one());
        assert_eq!(
            curve,
            WeierstrassCurve::E2 { f: f7.from_int(3), g: f7.from_int(5) }
        );
        let orig = WeierstrassCurve::ShortW { a: f7.from_int(2), b: f7.from_int(4) };
        assert_eq!(trace_bruteforce(f7, &orig).unwrap(), -2);
        assert_eq!(trace_bruteforce(f7, &curve).unwrap(), -2);

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        assert!(shift_to_e2(f5, &f5.one(), &f5.one()).unwrap().is_none());
        assert_eq!(
            shift_to_e2(f5, &f5.one(), &f5.zero()).unwrap_err(),
            Error::JInvariant1728
        );
    }

    #[test]
    fn trace_e1_examples() {
        let ev = evaluator(7, 1);
        let f7 = ev.field();
        let rep = trace_e1(&ev, &f7.from_int(6), &f7.from_int(6)).unwrap();
        assert_eq!(rep.value, Some(3));

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        let rep = trace_e1(&ev5, &f5.from_int(3), &f5.one()).unwrap();
        let curve = WeierstrassCurve::E1 { c: f5.from_int(3), d: f5.one() };
        assert_eq!(rep.value, Some(trace_bruteforce(f5, &curve).unwrap()));
        // t = -27/(4*27) = -1/4 = 1 mod 5
        let t = f5
            .div(&f5.mul(&f5.from_int(-27), &f5.one()).unwrap(), &f5.from_int(4 * 27))
            .unwrap();
        assert_eq!(t, f5.one());

        // singular: 4 + 27 d = 0 mod 7 at d = 4
        let err = trace_e1(&ev, &f7.one(), &f7.from_int(4)).unwrap_err();
        assert!(matches!(err, Error::DegenerateCurve(_)));
        let err = trace_e1(&ev, &f7.zero(), &f7.one()).unwrap_err();
        assert!(matches!(err, Error::DegenerateCurve(_)));
    }

    #[test]
    fn trace_e2_examples() {
        let ev = evaluator(7, 1);
        let f7 = ev.field();
        let rep = trace_e2(&ev, &f7.from_int(3), &f7.from_int(5)).unwrap();
        assert_eq!(rep.value, Some(-2));

        // f^2 = 4 g0 at g0 = 2 mod 7
        let err = trace_e2(&ev, &f7.one(), &f7.from_int(2)).unwrap_err();
        assert!(matches!(err, Error::DegenerateCurve(_)));

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        let rep = trace_e2(&ev5, &f5.one(), &f5.one()).unwrap();
        let curve = WeierstrassCurve::E2 { f: f5.one(), g: f5.one() };
        assert_eq!(rep.value, Some(trace_bruteforce(f5, &curve).unwrap()));
    }

    #[test]
    fn trace_short_direct_examples() {
        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        let rep = trace_short_direct(&ev5, &f5.one(), &f5.one()).unwrap();
        assert_eq!(rep.value, Some(-3));

        let ev7 = evaluator(7, 1);
        let f7 = ev7.field();
        let rep = trace_short_direct(&ev7, &f7.from_int(2), &f7.one()).unwrap();
        assert_eq!(rep.value, Some(3));

        assert_eq!(
            trace_short_direct(&ev5, &f5.zero(), &f5.one()).unwrap_err(),
            Error::JInvariantZero
        );
        assert_eq!(
            trace_short_direct(&ev5, &f5.one(), &f5.zero()).unwrap_err(),
            Error::JInvariant1728
        );
    }

    #[test]
    fn trace_via_e1_shift_examples() {
        let ev7 = evaluator(7, 1);
        let f7 = ev7.field();
        let rep = trace_via_e1_shift(&ev7, &f7.from_int(2), &f7.one()).unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.value, Some(3));
        // t = -6/32 = 2 mod 7
        assert!(rep.details.contains("t = 2"));

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        let rep = trace_via_e1_shift(&ev5, &f5.one(), &f5.one()).unwrap();
        assert!(!rep.applicable);
        assert_eq!(rep.value, None);

        assert_eq!(
            trace_via_e1_shift(&ev5, &f5.zero(), &f5.one()).unwrap_err(),
            Error::JInvariantZero
        );
    }

    #[test]
    fn trace_via_e2_shift_examples() {
        let ev7 = evaluator(7, 1);
        let f7 = ev7.field();
        let rep = trace_via_e2_shift(&ev7, &f7.from_int(2), &f7.from_int(4)).unwrap();
        assert!(rep.applicable);
        assert_eq!(rep.value, Some(-2));
        // t = 20/9 = 3 mod 7
        assert!(rep.details.contains("t = 3"));

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        let rep = trace_via_e2_shift(&ev5, &f5.one(), &f5.one()).unwrap();
        assert!(!rep.applicable);

        assert_eq!(
            trace_via_e2_shift(&ev5, &f5.one(), &f5.zero()).unwrap_err(),
            Error::JInvariant1728
        );
    }

    #[test]
    fn every_root_choice_agrees() {
        let ev7 = evaluator(7, 1);
        let f7 = ev7.field();
        let a = f7.from_int(2);
        let b = f7.one();
        let brute = trace_bruteforce(
            f7,
            &WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() },
        )
        .unwrap();
        let k0 = f7.sqrt(&f7.div(&f7.neg(&a), &f7.from_int(3)).unwrap()).unwrap();
        for k in [k0.clone(), f7.neg(&k0)] {
            let rep = trace_via_e1_shift_with_k(&ev7, &a, &b, &k).unwrap();
            assert_eq!(rep.value, Some(brute));
        }

        let a = f7.from_int(6);
        let b = f7.from_int(2);
        let roots = f7.cubic_roots(&a, &b);
        if !roots.is_empty() {
            let brute = trace_bruteforce(
                f7,
                &WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() },
            )
            .unwrap();
            for h in roots {
                let rep = trace_via_e2_shift_with_h(&ev7, &a, &b, &h).unwrap();
                assert_eq!(rep.value, Some(brute));
            }
        }
    }

    #[test]
    fn shift_relation_examples() {
        let ev7 = evaluator(7, 1);
        let f7 = ev7.field();
        let rep = check_shift_relations(&ev7, &f7.from_int(2), &f7.one()).unwrap();
        assert_eq!(rep.square_branch, BranchStatus::Pass);
        assert_eq!(rep.root_branch, BranchStatus::NotApplicable);

        let rep = check_shift_relations(&ev7, &f7.from_int(2), &f7.from_int(4)).unwrap();
        assert_eq!(rep.root_branch, BranchStatus::Pass);
        assert_eq!(rep.square_branch, BranchStatus::Pass);

        let ev5 = evaluator(5, 1);
        let f5 = ev5.field();
        let rep = check_shift_relations(&ev5, &f5.one(), &f5.one()).unwrap();
        assert_eq!(rep.square_branch, BranchStatus::NotApplicable);
        assert_eq!(rep.root_branch, BranchStatus::NotApplicable);
    }

    #[test]
    fn hasse_decode_examples() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let c = PadicCtx::with_precision(&f7, 3).unwrap();
        let v = c.from_int(3);
        assert_eq!(padic_to_hasse_integer(&c, &v, 7), Some(3));
        let v = c.from_int(-2);
        assert_eq!(padic_to_hasse_integer(&c, &v, 7), Some(-2));

        let f5 = FieldCtx::new(5, 1).unwrap();
        let c5 = PadicCtx::with_precision(&f5, 3).unwrap();
        let v = PadicNum::Unit { val: 0, coeffs: vec![17], prec: 3 };
        assert_eq!(padic_to_hasse_integer(&c5, &v, 5), None);
        assert_eq!(padic_to_hasse_integer(&c5, &PadicNum::Zero, 5), Some(0));
        // negative valuation cannot be an integer
        let v = PadicNum::Unit { val: -1, coeffs: vec![3], prec: 3 };
        assert_eq!(padic_to_hasse_integer(&c5, &v, 5), None);
    }
}
