//! Arithmetic in F_{p^r} with a polynomial-basis representation, the quadratic
//! character, deterministic root finding, and brute-force point counting.
//!
//! Everything here is exact and exhaustively checkable: fields are desk-scale
//! (q bounded by [`size_bound`]), the modulus and generator are chosen
//! deterministically, and the trace of Frobenius is obtained from the
//! character sum `a_q = -sum_x phi(x^3 + ...)`, which serves as the oracle
//! against which every p-adic formula in the crate is verified.

use crate::error::{Error, Result};

/// Default upper bound on q = p^r. Protects the O(q) cost that each
/// G-function summand and every exhaustive scan pays.
pub const DEFAULT_Q_BOUND: u64 = 2048;

/// Environment variable overriding the size bound.
pub const Q_BOUND_ENV: &str = "PADIC_GFUN_Q_MAX";

/// The size bound currently in effect.
pub fn size_bound() -> u64 {
    std::env::var(Q_BOUND_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_Q_BOUND)
}

/// Identifies a field up to the deterministic construction: two contexts with
/// the same (p, r) are interchangeable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldId {
    pub p: u64,
    pub r: u32,
}

/// An element of F_{p^r}: `coeffs[i]` is the coefficient of x^i, reduced mod p.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FqElem {
    field: FieldId,
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl std::fmt::Display for FqElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Elements print as their index sum(c_i p^i); unambiguous given the field.
        let mut idx: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            idx = idx * self.field.p + c;
        }
        write!(f, "{idx}")
    }
}

/// Immutable description of F_{p^r}: prime, degree, irreducible modulus and a
/// fixed multiplicative generator. Construction is deterministic, so repeated
/// calls with the same (p, r) yield identical contexts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldCtx {
    p: u64,
    r: u32,
    q: u64,
    modulus: Vec<u64>,
    generator: FqElem,
}

impl FieldCtx {
    /// Builds F_{p^r} with the default size bound.
    pub fn new(p: u64, r: u32) -> Result<FieldCtx> {
        Self::with_bound(p, r, size_bound())
    }

    /// Builds F_{p^r}, requiring q = p^r <= bound.
    pub fn with_bound(p: u64, r: u32, bound: u64) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::CompositeP { p });
        }
        if p <= 3 {
            return Err(Error::UnsupportedP { p });
        }
        if r == 0 {
            return Err(Error::InvalidConfig("extension degree r must be >= 1".into()));
        }
        let mut q: u64 = 1;
        for _ in 0..r {
            q = q
                .checked_mul(p)
                .filter(|&q| q <= bound)
                .ok_or(Error::SizeExceeded { q: u64::MAX, bound })?;
        }
        if q > bound {
            return Err(Error::SizeExceeded { q, bound });
        }

        let modulus = smallest_irreducible(p, r);
        let mut ctx = FieldCtx {
            p,
            r,
            q,
            modulus,
            generator: FqElem {
                field: FieldId { p, r },
                coeffs: vec![0; r as usize],
            },
        };
        ctx.generator = ctx.find_generator();
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The monic irreducible modulus, little-endian, length r+1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> &FqElem {
        &self.generator
    }

    pub fn id(&self) -> FieldId {
        FieldId { p: self.p, r: self.r }
    }

    fn check(&self, x: &FqElem) -> Result<()> {
        if x.field != self.id() {
            return Err(Error::MixedFields);
        }
        Ok(())
    }

    fn wrap(&self, coeffs: Vec<u64>) -> FqElem {
        debug_assert_eq!(coeffs.len(), self.r as usize);
        FqElem { field: self.id(), coeffs }
    }

    pub fn zero(&self) -> FqElem {
        self.wrap(vec![0; self.r as usize])
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// Embeds an integer as a constant (prime-subfield) element.
    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.p as i64;
        let c = n.rem_euclid(p) as u64;
        let mut coeffs = vec![0; self.r as usize];
        coeffs[0] = c;
        self.wrap(coeffs)
    }

    /// Element with index `idx` in the canonical ordering: the base-p digits
    /// of idx are the coefficients, low digit = constant term.
    pub fn from_index(&self, idx: u64) -> Result<FqElem> {
        if idx >= self.q {
            return Err(Error::BadInput(format!(
                "element index {idx} out of range for q = {}",
                self.q
            )));
        }
        let mut coeffs = vec![0; self.r as usize];
        let mut v = idx;
        for c in coeffs.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        Ok(self.wrap(coeffs))
    }

    pub fn index_of(&self, x: &FqElem) -> u64 {
        let mut idx: u64 = 0;
        for &c in x.coeffs.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    /// All field elements in ascending canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q).map(move |i| self.from_index(i).expect("index in range"))
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        Ok(self.wrap(coeffs))
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        Ok(self.wrap(coeffs))
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        let coeffs = a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect();
        self.wrap(coeffs)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_raw(&a.coeffs, &b.coeffs)))
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.r as usize;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce by the monic modulus
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &m) in self.modulus.iter().enumerate().take(self.r as usize) {
                let pos = d - r + k;
                prod[pos] = (prod[pos] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        prod.truncate(r);
        prod
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid in F_p[x] against the modulus
        let mut coeffs = poly_inv_mod(&a.coeffs, &self.modulus, self.p);
        coeffs.resize(self.r as usize, 0);
        Ok(self.wrap(coeffs))
    }

    pub fn div(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        let bi = self.inv(b)?;
        self.mul(a, &bi)
    }

    /// x^e. The exponent is reduced mod q-1 for nonzero bases; negative
    /// exponents of zero are a division by zero.
    pub fn pow(&self, x: &FqElem, e: i64) -> Result<FqElem> {
        self.check(x)?;
        if x.is_zero() {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(self.zero()),
                std::cmp::Ordering::Equal => Ok(self.one()),
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
            };
        }
        let m = (self.q - 1) as i64;
        let e = e.rem_euclid(m) as u64;
        let mut result = self.one();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(result)
    }

    /// The quadratic character phi, extended by phi(0) = 0; computed as
    /// x^((q-1)/2) mapped to {-1, 0, +1}.
    pub fn quadratic_character(&self, x: &FqElem) -> i32 {
        assert_eq!(x.field, self.id(), "element from a different field");
        if x.is_zero() {
            return 0;
        }
        let y = self.pow(x, ((self.q - 1) / 2) as i64).expect("nonzero base");
        if y == self.one() {
            1
        } else {
            -1
        }
    }

    /// Deterministic square root: the smaller of the two roots in element
    /// order when x is a square, None otherwise. sqrt(0) = 0.
    pub fn sqrt(&self, x: &FqElem) -> Option<FqElem> {
        assert_eq!(x.field, self.id(), "element from a different field");
        self.elements()
            .find(|y| self.mul(y, y).expect("same field") == *x)
    }

    /// All roots of x^3 + a x + b in ascending element order, by exhaustive
    /// evaluation.
    pub fn cubic_roots(&self, a: &FqElem, b: &FqElem) -> Vec<FqElem> {
        assert_eq!(a.field, self.id());
        assert_eq!(b.field, self.id());
        self.elements()
            .filter(|x| {
                let x2 = self.mul(x, x).unwrap();
                let x3 = self.mul(&x2, x).unwrap();
                let ax = self.mul(a, x).unwrap();
                let v = self.add(&self.add(&x3, &ax).unwrap(), b).unwrap();
                v.is_zero()
            })
            .collect()
    }

    /// j-invariant 1728 * 4a^3 / (4a^3 + 27b^2) of y^2 = x^3 + ax + b.
    pub fn j_invariant(&self, a: &FqElem, b: &FqElem) -> Result<FqElem> {
        self.check(a)?;
        self.check(b)?;
        let a3 = self.pow(a, 3)?;
        let four_a3 = self.mul(&self.from_int(4), &a3)?;
        let b2 = self.mul(b, b)?;
        let disc = self.add(&four_a3, &self.mul(&self.from_int(27), &b2)?)?;
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        let num = self.mul(&self.from_int(1728), &four_a3)?;
        self.div(&num, &disc)
    }

    fn find_generator(&self) -> FqElem {
        let factors = factorize(self.q - 1);
        for idx in 1..self.q {
            let g = self.from_index(idx).unwrap();
            let is_gen = factors.iter().all(|&(l, _)| {
                self.pow(&g, ((self.q - 1) / l) as i64).unwrap() != self.one()
            });
            if is_gen {
                return g;
            }
        }
        unreachable!("F_q^x is cyclic; a generator always exists");
    }
}

/// One of the three Weierstrass shapes the trace formulas speak about.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WeierstrassCurve {
    /// y^2 = x^3 + a x + b
    ShortW { a: FqElem, b: FqElem },
    /// y^2 = x^3 + c x^2 + d, with c != 0
    E1 { c: FqElem, d: FqElem },
    /// y^2 = x^3 + f x^2 + g x, with f != 0
    E2 { f: FqElem, g: FqElem },
}

impl WeierstrassCurve {
    /// The cubic right-hand side evaluated at x.
    pub fn rhs_at(&self, ctx: &FieldCtx, x: &FqElem) -> Result<FqElem> {
        let x2 = ctx.mul(x, x)?;
        let x3 = ctx.mul(&x2, x)?;
        match self {
            WeierstrassCurve::ShortW { a, b } => {
                ctx.add(&ctx.add(&x3, &ctx.mul(a, x)?)?, b)
            }
            WeierstrassCurve::E1 { c, d } => {
                ctx.add(&ctx.add(&x3, &ctx.mul(c, &x2)?)?, d)
            }
            WeierstrassCurve::E2 { f, g } => {
                ctx.add(&ctx.add(&x3, &ctx.mul(f, &x2)?)?, &ctx.mul(g, x)?)
            }
        }
    }

    /// Nonsingularity of the underlying curve.
    pub fn is_nonsingular(&self, ctx: &FieldCtx) -> Result<bool> {
        Ok(match self {
            WeierstrassCurve::ShortW { a, b } => {
                let a3 = ctx.pow(a, 3)?;
                let b2 = ctx.mul(b, b)?;
                let disc = ctx.add(
                    &ctx.mul(&ctx.from_int(4), &a3)?,
                    &ctx.mul(&ctx.from_int(27), &b2)?,
                )?;
                !disc.is_zero()
            }
            WeierstrassCurve::E1 { c, d } => {
                let c3 = ctx.pow(c, 3)?;
                let t = ctx.add(&ctx.mul(&ctx.from_int(4), &c3)?, &ctx.mul(&ctx.from_int(27), d)?)?;
                !d.is_zero() && !t.is_zero()
            }
            WeierstrassCurve::E2 { f, g } => {
                let f2 = ctx.mul(f, f)?;
                let t = ctx.sub(&f2, &ctx.mul(&ctx.from_int(4), g)?)?;
                !g.is_zero() && !t.is_zero()
            }
        })
    }

    /// Enforces the shape invariants: nonsingularity plus c != 0 / f != 0 on
    /// the E1 / E2 forms.
    pub fn validate(&self, ctx: &FieldCtx) -> Result<()> {
        match self {
            WeierstrassCurve::E1 { c, .. } if c.is_zero() => {
                return Err(Error::DegenerateCurve("E1 form requires c != 0".into()));
            }
            WeierstrassCurve::E2 { f, .. } if f.is_zero() => {
                return Err(Error::DegenerateCurve("E2 form requires f != 0".into()));
            }
            _ => {}
        }
        if !self.is_nonsingular(ctx)? {
            return Err(Error::SingularCurve);
        }
        Ok(())
    }

    pub fn describe(&self, ctx: &FieldCtx) -> String {
        match self {
            WeierstrassCurve::ShortW { a, b } => {
                format!("y^2 = x^3 + {a}*x + {b} over F_{}", ctx.q())
            }
            WeierstrassCurve::E1 { c, d } => {
                format!("y^2 = x^3 + {c}*x^2 + {d} over F_{}", ctx.q())
            }
            WeierstrassCurve::E2 { f, g } => {
                format!("y^2 = x^3 + {f}*x^2 + {g}*x over F_{}", ctx.q())
            }
        }
    }
}

/// Trace of Frobenius a_q = q + 1 - #E(F_q), computed as -sum_x phi(rhs(x)).
pub fn trace_bruteforce(ctx: &FieldCtx, curve: &WeierstrassCurve) -> Result<i64> {
    curve.validate(ctx)?;
    let mut sum: i64 = 0;
    for x in ctx.elements() {
        let v = curve.rhs_at(ctx, &x)?;
        sum += ctx.quadratic_character(&v) as i64;
    }
    let a = -sum;
    debug_assert!(a.abs() <= hasse_bound(ctx.q()));
    Ok(a)
}

/// Largest integer z with z^2 <= 4q, i.e. floor(2 sqrt q).
pub fn hasse_bound(q: u64) -> i64 {
    let mut z = (4.0 * q as f64).sqrt() as u64;
    while (z + 1) * (z + 1) <= 4 * q {
        z += 1;
    }
    while z * z > 4 * q {
        z -= 1;
    }
    z as i64
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

// --- dense polynomial arithmetic over F_p, little-endian coefficient vectors ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_deg(a: &[u64]) -> usize {
    let mut d = a.len();
    while d > 1 && a[d - 1] == 0 {
        d -= 1;
    }
    d - 1
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn scalar_inv(a: u64, p: u64) -> u64 {
    // extended Euclid on integers
    let (mut t, mut new_t): (i64, i64) = (0, 1);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let qt = r / new_r;
        (t, new_t) = (new_t, t - qt * new_t);
        (r, new_r) = (new_r, r - qt * new_r);
    }
    assert_eq!(r, 1, "inverse of non-unit mod {p}");
    t.rem_euclid(p as i64) as u64
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a mod m (m nonzero).
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    poly_trim(&mut a);
    let dm = poly_deg(m);
    let lead_inv = scalar_inv(m[dm], p);
    while !poly_is_zero(&a) && poly_deg(&a) >= dm {
        let da = poly_deg(&a);
        let c = a[da] * lead_inv % p;
        let shift = da - dm;
        for (k, &mc) in m.iter().enumerate().take(dm + 1) {
            let pos = shift + k;
            a[pos] = (a[pos] + p * p - c * mc % p) % p;
        }
        poly_trim(&mut a);
    }
    a
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    // normalize monic
    if !poly_is_zero(&a) {
        let d = poly_deg(&a);
        let inv = scalar_inv(a[d], p);
        for c in a.iter_mut() {
            *c = *c * inv % p;
        }
    }
    a
}

/// Inverse of a modulo m in F_p[x]; panics if gcd(a, m) != 1.
fn poly_inv_mod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    poly_trim(&mut a);
    let (mut t, mut new_t): (Vec<u64>, Vec<u64>) = (vec![0], vec![1]);
    let (mut r, mut new_r) = (m.to_vec(), a);
    poly_trim(&mut r);
    while !poly_is_zero(&new_r) {
        // r = qt * new_r + rem
        let (qt, rem) = poly_divrem(&r, &new_r, p);
        let tq = poly_mul(&qt, &new_t, p);
        let mut t2 = vec![0u64; t.len().max(tq.len())];
        for (i, v) in t2.iter_mut().enumerate() {
            let x = *t.get(i).unwrap_or(&0);
            let y = *tq.get(i).unwrap_or(&0);
            *v = (x + p - y % p) % p;
        }
        poly_trim(&mut t2);
        (t, new_t) = (new_t, t2);
        (r, new_r) = (new_r, rem);
    }
    assert_eq!(poly_deg(&r), 0, "non-invertible element");
    let inv = scalar_inv(r[0], p);
    let mut out = t;
    for c in out.iter_mut() {
        *c = *c * inv % p;
    }
    poly_trim(&mut out);
    out
}

fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let db = poly_deg(b);
    if poly_is_zero(&rem) || poly_deg(&rem) < db {
        return (vec![0], rem);
    }
    let mut quo = vec![0u64; poly_deg(&rem) - db + 1];
    let lead_inv = scalar_inv(b[db], p);
    while !poly_is_zero(&rem) && poly_deg(&rem) >= db {
        let da = poly_deg(&rem);
        let c = rem[da] * lead_inv % p;
        let shift = da - db;
        quo[shift] = c;
        for (k, &bc) in b.iter().enumerate().take(db + 1) {
            let pos = shift + k;
            rem[pos] = (rem[pos] + p * p - c * bc % p) % p;
        }
        poly_trim(&mut rem);
    }
    poly_trim(&mut quo);
    (quo, rem)
}

/// x^(p^d) mod f, by d successive p-th powers.
fn poly_frobenius_power(f: &[u64], p: u64, d: u32) -> Vec<u64> {
    let mut h = vec![0, 1]; // x
    for _ in 0..d {
        h = poly_powmod(&h, p, f, p);
    }
    h
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = poly_deg(f) as u32;
    if r == 1 {
        return true;
    }
    // f of degree r is irreducible iff no irreducible factor of degree <= r/2:
    // gcd(x^(p^d) - x, f) = 1 for all 1 <= d <= r/2.
    for d in 1..=(r / 2) {
        let mut h = poly_frobenius_power(f, p, d);
        // h - x
        if h.len() < 2 {
            h.resize(2, 0);
        }
        h[1] = (h[1] + p - 1) % p;
        let mut h = h;
        poly_trim(&mut h);
        let g = poly_gcd(&h, f, p);
        if poly_deg(&g) != 0 || poly_is_zero(&g) {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree r over F_p: the
/// coefficient tuple (c_{r-1}, ..., c_0) is minimized, which is the numeric
/// order of sum(c_i p^i).
fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1]; // x
    }
    let mut count: u64 = 1;
    for _ in 0..r {
        count *= p;
    }
    for idx in 0..count {
        let mut f = vec![0u64; r as usize + 1];
        let mut v = idx;
        for c in f.iter_mut().take(r as usize) {
            *c = v % p;
            v /= p;
        }
        f[r as usize] = 1;
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, r: u32) -> FieldCtx {
        FieldCtx::new(p, r).unwrap()
    }

    #[test]
    fn field_create_small_primes() {
        let f5 = f(5, 1);
        assert_eq!(f5.q(), 5);
        assert_eq!(f5.modulus(), &[0, 1]);
        assert_eq!(f5.index_of(f5.generator()), 2);

        let f7 = f(7, 1);
        assert_eq!(f7.index_of(f7.generator()), 3);

        // independent oracle: direct powering
        for (p, g) in [(5u64, 2u64), (7, 3)] {
            let mut seen = std::collections::HashSet::new();
            let mut x = 1u64;
            for _ in 0..p - 1 {
                x = x * g % p;
                seen.insert(x);
            }
            assert_eq!(seen.len(), (p - 1) as usize, "order of {g} mod {p}");
        }
    }

    #[test]
    fn field_create_f25_modulus_matches_exhaustive_scan() {
        let f25 = f(5, 2);
        assert_eq!(f25.q(), 25);
        // oracle: first monic quadratic with no root in F_5
        let mut expected = None;
        'outer: for c1 in 0..5u64 {
            for c0 in 0..5u64 {
                let has_root = (0..5u64).any(|x| (x * x + c1 * x + c0) % 5 == 0);
                if !has_root {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        assert_eq!(f25.modulus(), expected.unwrap().as_slice());
        // generator has order 24
        let g = f25.generator().clone();
        for l in [2i64, 3] {
            assert_ne!(f25.pow(&g, 24 / l).unwrap(), f25.one());
        }
        assert_eq!(f25.pow(&g, 24).unwrap(), f25.one());
    }

    #[test]
    fn field_create_rejects_bad_p() {
        assert_eq!(FieldCtx::new(6, 1).unwrap_err(), Error::CompositeP { p: 6 });
        assert_eq!(FieldCtx::new(3, 1).unwrap_err(), Error::UnsupportedP { p: 3 });
        assert!(matches!(
            FieldCtx::with_bound(5, 6, 2048).unwrap_err(),
            Error::SizeExceeded { .. }
        ));
    }

    #[test]
    fn deterministic_reconstruction() {
        assert_eq!(f(7, 2), f(7, 2));
        assert_eq!(f(5, 3), f(5, 3));
    }

    #[test]
    fn arith_examples() {
        let f7 = f(7, 1);
        let three = f7.from_int(3);
        assert_eq!(f7.inv(&three).unwrap(), f7.from_int(5));

        let f5 = f(5, 1);
        assert_eq!(f5.pow(&f5.from_int(2), 4).unwrap(), f5.one());

        // x * x in F_25 equals the remainder of x^2 mod the modulus
        let f25 = f(5, 2);
        let x = f25.from_index(5).unwrap(); // the polynomial x
        let x2 = f25.mul(&x, &x).unwrap();
        let rem = poly_rem(&[0, 0, 1], f25.modulus(), 5);
        let mut rem = rem;
        rem.resize(2, 0);
        assert_eq!(x2.coeffs(), rem.as_slice());
    }

    #[test]
    fn arith_errors() {
        let f5 = f(5, 1);
        let f7 = f(7, 1);
        assert_eq!(f5.inv(&f5.zero()).unwrap_err(), Error::DivisionByZero);
        assert_eq!(
            f5.add(&f5.one(), &f7.one()).unwrap_err(),
            Error::MixedFields
        );
        assert_eq!(f5.pow(&f5.zero(), -1).unwrap_err(), Error::DivisionByZero);
        assert_eq!(f5.pow(&f5.zero(), 0).unwrap(), f5.one());
    }

    #[test]
    fn quadratic_character_f7() {
        let f7 = f(7, 1);
        assert_eq!(f7.quadratic_character(&f7.zero()), 0);
        // oracle: exhaustive squaring
        let squares: std::collections::HashSet<u64> = (1..7u64).map(|x| x * x % 7).collect();
        assert!(squares.contains(&2));
        assert!(!squares.contains(&3));
        assert_eq!(f7.quadratic_character(&f7.from_int(2)), 1);
        assert_eq!(f7.quadratic_character(&f7.from_int(3)), -1);
    }

    #[test]
    fn quadratic_character_multiplicative_exhaustive() {
        for (p, r) in [(5, 1), (7, 1), (5, 2), (7, 2)] {
            let ctx = f(p, r);
            let elems: Vec<FqElem> = ctx.elements().skip(1).collect();
            for x in &elems {
                for y in &elems {
                    let xy = ctx.mul(x, y).unwrap();
                    assert_eq!(
                        ctx.quadratic_character(&xy),
                        ctx.quadratic_character(x) * ctx.quadratic_character(y)
                    );
                }
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let f7 = f(7, 1);
        assert_eq!(f7.sqrt(&f7.from_int(4)).unwrap(), f7.from_int(2));
        assert_eq!(f7.sqrt(&f7.from_int(3)), None);
        assert_eq!(f7.sqrt(&f7.zero()).unwrap(), f7.zero());
    }

    #[test]
    fn sqrt_contract_exhaustive() {
        for (p, r) in [(7, 1), (5, 2)] {
            let ctx = f(p, r);
            let mut with_root = 0;
            for x in ctx.elements() {
                if let Some(y) = ctx.sqrt(&x) {
                    assert_eq!(ctx.mul(&y, &y).unwrap(), x);
                    if !x.is_zero() {
                        with_root += 1;
                    }
                }
            }
            assert_eq!(with_root, (ctx.q() - 1) / 2);
        }
    }

    #[test]
    fn cubic_roots_examples() {
        let f7 = f(7, 1);
        let roots = f7.cubic_roots(&f7.from_int(2), &f7.from_int(4));
        assert_eq!(roots, vec![f7.from_int(1)]);

        let f5 = f(5, 1);
        assert!(f5.cubic_roots(&f5.one(), &f5.one()).is_empty());
        assert_eq!(f5.cubic_roots(&f5.zero(), &f5.zero()), vec![f5.zero()]);
    }

    #[test]
    fn cubic_roots_match_exhaustive_oracle() {
        let ctx = f(11, 1);
        for ai in 0..11 {
            for bi in 0..11 {
                let a = ctx.from_index(ai).unwrap();
                let b = ctx.from_index(bi).unwrap();
                let expected: Vec<u64> = (0..11)
                    .filter(|&x| (x * x * x + ai * x + bi) % 11 == 0)
                    .collect();
                let got: Vec<u64> = ctx
                    .cubic_roots(&a, &b)
                    .iter()
                    .map(|e| ctx.index_of(e))
                    .collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn trace_bruteforce_examples() {
        let f5 = f(5, 1);
        let c = WeierstrassCurve::ShortW { a: f5.one(), b: f5.zero() };
        assert_eq!(trace_bruteforce(&f5, &c).unwrap(), 2);

        let f7 = f(7, 1);
        let c = WeierstrassCurve::ShortW { a: f7.one(), b: f7.zero() };
        assert_eq!(trace_bruteforce(&f7, &c).unwrap(), 0);

        let c = WeierstrassCurve::ShortW { a: f7.from_int(2), b: f7.one() };
        assert_eq!(trace_bruteforce(&f7, &c).unwrap(), 3);
    }

    #[test]
    fn trace_bruteforce_rejects_singular() {
        let f5 = f(5, 1);
        let c = WeierstrassCurve::ShortW { a: f5.zero(), b: f5.zero() };
        assert_eq!(trace_bruteforce(&f5, &c).unwrap_err(), Error::SingularCurve);
        let c = WeierstrassCurve::E1 { c: f5.zero(), d: f5.one() };
        assert!(matches!(
            trace_bruteforce(&f5, &c).unwrap_err(),
            Error::DegenerateCurve(_)
        ));
    }

    #[test]
    fn hasse_bound_holds_exhaustively() {
        for (p, r) in [(5u64, 1u32), (7, 1), (11, 1), (13, 1), (5, 2)] {
            let ctx = f(p, r);
            let bound = hasse_bound(ctx.q());
            for ai in 0..ctx.q() {
                for bi in 0..ctx.q() {
                    let a = ctx.from_index(ai).unwrap();
                    let b = ctx.from_index(bi).unwrap();
                    let c = WeierstrassCurve::ShortW { a, b };
                    if let Ok(t) = trace_bruteforce(&ctx, &c) {
                        assert!(t.abs() <= bound, "Hasse violated at q={} a={ai} b={bi}", ctx.q());
                    }
                }
            }
        }
    }

    #[test]
    fn j_invariant_examples() {
        let f7 = f(7, 1);
        assert_eq!(
            f7.j_invariant(&f7.zero(), &f7.one()).unwrap(),
            f7.zero()
        );
        assert_eq!(
            f7.j_invariant(&f7.one(), &f7.zero()).unwrap(),
            f7.from_int(1728)
        );
        let f5 = f(5, 1);
        assert_eq!(
            f5.j_invariant(&f5.one(), &f5.one()).unwrap(),
            f5.from_int(2)
        );
        assert_eq!(
            f5.j_invariant(&f5.zero(), &f5.zero()).unwrap_err(),
            Error::SingularCurve
        );
    }

    #[test]
    fn element_order_is_index_order() {
        let ctx = f(5, 2);
        let elems: Vec<FqElem> = ctx.elements().collect();
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(ctx.index_of(e), i as u64);
            assert_eq!(ctx.from_index(i as u64).unwrap(), *e);
        }
    }

    #[test]
    fn hasse_bound_values() {
        assert_eq!(hasse_bound(5), 4);
        assert_eq!(hasse_bound(7), 5);
        assert_eq!(hasse_bound(25), 10);
        assert_eq!(hasse_bound(49), 14);
    }
}
