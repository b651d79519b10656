//! Direct numeric verification of the gamma-function identities underpinning
//! the trace formulas: the multiplication (product) formula, the reflection
//! formula, the two translation identities mixing Teichmuller values with
//! gamma products, and the two exact floor-sum identities that pin down the
//! powers of (-p) in the G-function summands.
//!
//! Every check compares canonical encodings exactly; there is no tolerance
//! parameter anywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::finite_field::FieldCtx;
use crate::gfunction::Evaluator;
use crate::padic::{self, PadicNum, Rat};

/// Which identity a result refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdentityKind {
    ProductFormula,
    Reflection,
    GammaShiftPlus,
    GammaShiftMinus,
    FloorThirds,
    FloorQuarters,
    Orthogonality,
    GaussInverse,
    ThetaExpansion,
    DavenportHasse,
}

/// Outcome of one identity instance: both sides rendered plus the verdict.
#[derive(Clone, Debug)]
pub struct IdentityResult {
    pub kind: IdentityKind,
    pub params: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl IdentityResult {
    pub(crate) fn new(
        kind: IdentityKind,
        params: String,
        lhs: String,
        rhs: String,
        pass: bool,
    ) -> IdentityResult {
        IdentityResult { kind, params, lhs, rhs, pass }
    }
}

/// Direction of the gamma translation identity: `Plus` shifts arguments by
/// +j/(q-1) (with omega(t^{t j})), `Minus` by -j/(q-1) (with omega(t^{-t j})).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftSign {
    Plus,
    Minus,
}

fn scalar_num(ev: &Evaluator, s: u64) -> PadicNum {
    let mut coeffs = vec![0; ev.field().r() as usize];
    coeffs[0] = s;
    PadicNum::Unit { val: 0, coeffs, prec: ev.padic().n() }
}

/// Multiplication formula for Gamma_p: for p not dividing m, 0 <= x <= 1 and
/// (q-1)x integral,
///
/// ```text
/// prod_{i<r} prod_{h<m} Gamma_p(<((x+h)/m) p^i>)
///   = omega(m^((1-x)(1-q))) prod_{i<r} Gamma_p(<x p^i>)
///                                      prod_{0<h<m} Gamma_p(<h p^i / m>)
/// ```
pub fn check_product_formula(ev: &Evaluator, m: u64, x: &Rat) -> Result<IdentityResult> {
    let ctx = ev.field();
    let (p, q, r) = (ctx.p(), ctx.q(), ctx.r());
    if m == 0 || m % p == 0 {
        return Err(Error::BadInput(format!("m = {m} must be positive and prime to p")));
    }
    if x < &Rat::zero() || x > &Rat::one() {
        return Err(Error::BadInput(format!("x = {x} must lie in [0, 1]")));
    }
    let scaled = x * Rat::from_integer(BigInt::from(q - 1));
    if !scaled.is_integer() {
        return Err(Error::BadInput(format!("(q-1) x = {scaled} must be an integer")));
    }

    let pn = ev.padic().pn();
    let mut lhs_scalar: u64 = 1;
    let mut rhs_scalar: u64 = 1;
    for i in 0..r {
        let pi = Rat::from_integer(BigInt::from(p.pow(i)));
        for h in 0..m {
            let arg = padic::frac(&(&(x + Rat::from_integer(BigInt::from(h))) / Rat::from_integer(BigInt::from(m)) * &pi));
            lhs_scalar = mulmod(lhs_scalar, ev.gamma(&arg)?, pn);
        }
        rhs_scalar = mulmod(rhs_scalar, ev.gamma(&padic::frac(&(x * &pi)))?, pn);
        for h in 1..m {
            let arg = padic::frac(&(Rat::new(BigInt::from(h), BigInt::from(m)) * &pi));
            rhs_scalar = mulmod(rhs_scalar, ev.gamma(&arg)?, pn);
        }
    }

    // omega applied to the field element m raised to (1-x)(1-q), an integer
    let e = (Rat::one() - x) * Rat::from_integer(BigInt::from(1i64 - q as i64));
    debug_assert!(e.is_integer());
    let e = i64::try_from(&e.to_integer()).expect("exponent fits i64");
    let m_elem = ctx.from_int(m as i64);
    let m_pow = ctx.pow(&m_elem, e)?;
    let omega = ev.padic().teichmuller(&m_pow);

    let lhs = scalar_num(ev, lhs_scalar);
    let rhs = ev.padic().mul(&omega, &scalar_num(ev, rhs_scalar));
    let pass = ev.padic().eq(&lhs, &rhs);
    Ok(IdentityResult::new(
        IdentityKind::ProductFormula,
        format!("q={q} m={m} x={x}"),
        ev.padic().render(&lhs),
        ev.padic().render(&rhs),
        pass,
    ))
}

/// Reflection formula: Gamma_p(x) Gamma_p(1-x) = (-1)^x0 with x0 in {1..p}
/// congruent to x mod p.
pub fn check_reflection(ev: &Evaluator, x: &Rat) -> Result<IdentityResult> {
    let p = ev.field().p();
    let pn = ev.padic().pn();
    let g1 = ev.gamma(x)?;
    let g2 = ev.gamma(&(Rat::one() - x))?;
    let lhs = mulmod(g1, g2, pn);
    let x0 = {
        let rep = ev.padic().integer_rep(x)? % p;
        if rep == 0 {
            p
        } else {
            rep
        }
    };
    let rhs = if x0 % 2 == 1 { pn - 1 } else { 1 };
    Ok(IdentityResult::new(
        IdentityKind::Reflection,
        format!("p={p} x={x} x0={x0}"),
        lhs.to_string(),
        rhs.to_string(),
        lhs == rhs,
    ))
}

/// Translation identities mixing omega and gamma products. With w = omega and
/// all fractions exact, `Plus` verifies
///
/// ```text
/// w(t^{tj}) prod_i Gamma_p(<t p^i j/(q-1)>) prod_{0<h<t} Gamma_p(<h p^i/t>)
///   = prod_i prod_{h<t} Gamma_p(<p^i h/t + p^i j/(q-1)>)
/// ```
///
/// and `Minus` the mirrored identity with w(t^{-tj}) and arguments
/// <p^i (1+h)/t - p^i j/(q-1)>.
pub fn check_gamma_shift(ev: &Evaluator, t: u64, j: u64, sign: ShiftSign) -> Result<IdentityResult> {
    let ctx = ev.field();
    let (p, q, r) = (ctx.p(), ctx.q(), ctx.r());
    if t == 0 || t % p == 0 {
        return Err(Error::BadInput(format!("t = {t} must be positive and prime to p")));
    }
    if j > q - 2 {
        return Err(Error::BadInput(format!("j = {j} out of range [0, q-2]")));
    }
    let pn = ev.padic().pn();
    let q1 = BigInt::from(q - 1);

    let mut lhs_scalar: u64 = 1;
    let mut rhs_scalar: u64 = 1;
    for i in 0..r {
        let pi = BigInt::from(p.pow(i));
        let j_shift = Rat::new(&pi * BigInt::from(j), q1.clone());
        let main_arg = match sign {
            ShiftSign::Plus => Rat::new(&pi * BigInt::from(t * j), q1.clone()),
            ShiftSign::Minus => -Rat::new(&pi * BigInt::from(t * j), q1.clone()),
        };
        lhs_scalar = mulmod(lhs_scalar, ev.gamma(&padic::frac(&main_arg))?, pn);
        for h in 1..t {
            let arg = Rat::new(&pi * BigInt::from(h), BigInt::from(t));
            lhs_scalar = mulmod(lhs_scalar, ev.gamma(&padic::frac(&arg))?, pn);
        }
        for h in 0..t {
            let arg = match sign {
                ShiftSign::Plus => {
                    Rat::new(&pi * BigInt::from(h), BigInt::from(t)) + &j_shift
                }
                ShiftSign::Minus => {
                    Rat::new(&pi * BigInt::from(1 + h), BigInt::from(t)) - &j_shift
                }
            };
            rhs_scalar = mulmod(rhs_scalar, ev.gamma(&padic::frac(&arg))?, pn);
        }
    }

    let e = match sign {
        ShiftSign::Plus => (t * j) as i64,
        ShiftSign::Minus => -((t * j) as i64),
    };
    let t_elem = ctx.from_int(t as i64);
    let omega = ev.padic().teichmuller(&ctx.pow(&t_elem, e)?);
    let lhs = ev.padic().mul(&omega, &scalar_num(ev, lhs_scalar));
    let rhs = scalar_num(ev, rhs_scalar);
    let pass = ev.padic().eq(&lhs, &rhs);
    let kind = match sign {
        ShiftSign::Plus => IdentityKind::GammaShiftPlus,
        ShiftSign::Minus => IdentityKind::GammaShiftMinus,
    };
    Ok(IdentityResult::new(
        kind,
        format!("q={q} t={t} j={j}"),
        ev.padic().render(&lhs),
        ev.padic().render(&rhs),
        pass,
    ))
}

/// Floor-sum identity controlling the (-p) exponents of the
/// [1/2,1/2; 1/3,2/3] parameter set; exact integer arithmetic. For
/// 1 <= l <= q-2 and 0 <= i < r:
///
/// ```text
/// floor(-lu) - 2 floor(-2lu) - floor(3lu) - 1
///   = -2 floor(<p^i/2> - lu) - floor(<-p^i/3> + lu) - floor(<-2p^i/3> + lu)
/// ```
///
/// with u = p^i/(q-1).
pub fn check_floor_thirds(ctx: &FieldCtx, l: u64, i: u32) -> Result<IdentityResult> {
    floor_identity(ctx, l, i, 1, IdentityKind::FloorThirds)
}

/// Floor-sum identity for the [1/2,1/2; 1/4,3/4] parameter set; for
/// 0 <= l <= q-2 and 0 <= i < r:
///
/// ```text
/// floor(2lu) + 2 floor(-lu) - 2 floor(-2lu) - floor(4lu)
///   = -2 floor(<p^i/2> - lu) - floor(<-p^i/4> + lu) - floor(<-3p^i/4> + lu)
/// ```
pub fn check_floor_quarters(ctx: &FieldCtx, l: u64, i: u32) -> Result<IdentityResult> {
    floor_identity(ctx, l, i, 0, IdentityKind::FloorQuarters)
}

fn floor_identity(
    ctx: &FieldCtx,
    l: u64,
    i: u32,
    l_min: u64,
    kind: IdentityKind,
) -> Result<IdentityResult> {
    let (p, q, r) = (ctx.p(), ctx.q(), ctx.r());
    if l < l_min || l > q - 2 {
        return Err(Error::BadInput(format!("l = {l} out of range [{l_min}, q-2]")));
    }
    if i >= r {
        return Err(Error::BadInput(format!("i = {i} out of range [0, r-1]")));
    }
    let pi = p.pow(i) as i64;
    let lu = Rat::new(BigInt::from(l as i64 * pi), BigInt::from(q as i64 - 1));
    let fl = |x: &Rat| padic::floor_i64(x);
    let half = padic::frac(&Rat::new(BigInt::from(pi), BigInt::from(2)));

    let (lhs, rhs) = match kind {
        IdentityKind::FloorThirds => {
            let lhs = fl(&-&lu) - 2 * fl(&(-&lu * Rat::from_integer(BigInt::from(2))))
                - fl(&(&lu * Rat::from_integer(BigInt::from(3))))
                - 1;
            let third1 = padic::frac(&Rat::new(BigInt::from(-pi), BigInt::from(3)));
            let third2 = padic::frac(&Rat::new(BigInt::from(-2 * pi), BigInt::from(3)));
            let rhs = -2 * fl(&(&half - &lu)) - fl(&(&third1 + &lu)) - fl(&(&third2 + &lu));
            (lhs, rhs)
        }
        IdentityKind::FloorQuarters => {
            let lhs = fl(&(&lu * Rat::from_integer(BigInt::from(2))))
                + 2 * fl(&-&lu)
                - 2 * fl(&(-&lu * Rat::from_integer(BigInt::from(2))))
                - fl(&(&lu * Rat::from_integer(BigInt::from(4))));
            let quarter1 = padic::frac(&Rat::new(BigInt::from(-pi), BigInt::from(4)));
            let quarter3 = padic::frac(&Rat::new(BigInt::from(-3 * pi), BigInt::from(4)));
            let rhs = -2 * fl(&(&half - &lu)) - fl(&(&quarter1 + &lu)) - fl(&(&quarter3 + &lu));
            (lhs, rhs)
        }
        _ => unreachable!("floor_identity only handles the floor kinds"),
    };
    Ok(IdentityResult::new(
        kind,
        format!("q={q} i={i} l={l}"),
        lhs.to_string(),
        rhs.to_string(),
        lhs == rhs,
    ))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::rat;

    fn ev(p: u64, r: u32) -> Evaluator {
        Evaluator::for_field(&FieldCtx::new(p, r).unwrap())
    }

    #[test]
    fn product_formula_examples() {
        let e = ev(5, 1);
        // m = 1: both sides collapse
        assert!(check_product_formula(&e, 1, &rat(1, 2)).unwrap().pass);
        // x = 0, m = 2, q = 5
        assert!(check_product_formula(&e, 2, &rat(0, 1)).unwrap().pass);
        // precondition: (q-1) x must be integral
        assert!(matches!(
            check_product_formula(&e, 3, &rat(1, 3)).unwrap_err(),
            Error::BadInput(_)
        ));
        // p | m rejected
        assert!(matches!(
            check_product_formula(&e, 5, &rat(0, 1)).unwrap_err(),
            Error::BadInput(_)
        ));
        // x outside [0, 1] rejected
        assert!(matches!(
            check_product_formula(&e, 2, &rat(5, 4)).unwrap_err(),
            Error::BadInput(_)
        ));
    }

    #[test]
    fn product_formula_grid_small() {
        for (p, r) in [(5u64, 1u32), (7, 1), (5, 2)] {
            let e = ev(p, r);
            let q = e.field().q();
            for m in [2u64, 3, 4, 6] {
                if m % p == 0 {
                    continue;
                }
                for j in 0..q {
                    let x = rat(j as i64, (q - 1) as i64);
                    let res = check_product_formula(&e, m, &x).unwrap();
                    assert!(res.pass, "product formula fails: {}", res.params);
                }
            }
        }
    }

    #[test]
    fn reflection_examples() {
        let e5 = ev(5, 1);
        let r = check_reflection(&e5, &rat(0, 1)).unwrap();
        assert!(r.pass);
        assert!(r.params.contains("x0=5"));

        let e7 = ev(7, 1);
        assert!(check_reflection(&e7, &rat(1, 2)).unwrap().pass);
        let r = check_reflection(&e5, &rat(3, 1)).unwrap();
        assert!(r.pass);
        assert!(r.params.contains("x0=3"));
        assert!(matches!(
            check_reflection(&e5, &rat(1, 5)).unwrap_err(),
            Error::NotPadicInteger { .. }
        ));
    }

    #[test]
    fn reflection_grid_small() {
        for (p, r) in [(5u64, 1u32), (7, 1), (5, 2), (7, 2)] {
            let e = ev(p, r);
            let q = e.field().q();
            for j in 0..q - 1 {
                let x = rat(j as i64, (q - 1) as i64);
                let res = check_reflection(&e, &x).unwrap();
                assert!(res.pass, "reflection fails: {}", res.params);
            }
        }
    }

    #[test]
    fn gamma_shift_examples() {
        let e5 = ev(5, 1);
        // t = 1 collapses both variants
        for j in 0..4 {
            assert!(check_gamma_shift(&e5, 1, j, ShiftSign::Plus).unwrap().pass);
            assert!(check_gamma_shift(&e5, 1, j, ShiftSign::Minus).unwrap().pass);
        }
        assert!(check_gamma_shift(&e5, 2, 1, ShiftSign::Plus).unwrap().pass);
        let e7 = ev(7, 1);
        assert!(check_gamma_shift(&e7, 3, 4, ShiftSign::Minus).unwrap().pass);
        // p | t rejected
        assert!(matches!(
            check_gamma_shift(&e5, 5, 1, ShiftSign::Plus).unwrap_err(),
            Error::BadInput(_)
        ));
        assert!(matches!(
            check_gamma_shift(&e5, 2, 99, ShiftSign::Plus).unwrap_err(),
            Error::BadInput(_)
        ));
    }

    #[test]
    fn gamma_shift_grid_small() {
        for (p, r) in [(5u64, 1u32), (7, 1), (5, 2)] {
            let e = ev(p, r);
            let q = e.field().q();
            for t in 1..=6u64 {
                if t % p == 0 {
                    continue;
                }
                for j in 0..q - 1 {
                    for sign in [ShiftSign::Plus, ShiftSign::Minus] {
                        let res = check_gamma_shift(&e, t, j, sign).unwrap();
                        assert!(res.pass, "gamma shift fails: {} {:?}", res.params, sign);
                    }
                }
            }
        }
    }

    #[test]
    fn floor_thirds_examples() {
        let f7 = FieldCtx::new(7, 1).unwrap();
        let r = check_floor_thirds(&f7, 1, 0).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, "0");
        assert_eq!(r.rhs, "0");
        assert!(check_floor_thirds(&f7, 3, 0).unwrap().pass);

        let f25 = FieldCtx::new(5, 2).unwrap();
        assert!(check_floor_thirds(&f25, 13, 1).unwrap().pass);

        assert!(matches!(
            check_floor_thirds(&f7, 0, 0).unwrap_err(),
            Error::BadInput(_)
        ));
        assert!(matches!(
            check_floor_thirds(&f7, 1, 1).unwrap_err(),
            Error::BadInput(_)
        ));
    }

    #[test]
    fn floor_quarters_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r = check_floor_quarters(&f5, 0, 0).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, "0");
        assert!(check_floor_quarters(&f5, 2, 0).unwrap().pass);

        let f49 = FieldCtx::new(7, 2).unwrap();
        assert!(check_floor_quarters(&f49, 30, 1).unwrap().pass);
    }

    #[test]
    fn floor_identities_exhaustive_small() {
        for (p, r) in [(5u64, 1u32), (7, 1), (5, 2), (7, 2)] {
            let ctx = FieldCtx::new(p, r).unwrap();
            let q = ctx.q();
            for i in 0..r {
                for l in 0..=q - 2 {
                    if l >= 1 {
                        assert!(check_floor_thirds(&ctx, l, i).unwrap().pass, "thirds q={q} l={l} i={i}");
                    }
                    assert!(check_floor_quarters(&ctx, l, i).unwrap().pass, "quarters q={q} l={l} i={i}");
                }
            }
        }
    }
}
