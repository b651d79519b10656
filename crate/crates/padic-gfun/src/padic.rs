//! Precision-bounded arithmetic in Z_p, Q_p and the unramified extension Q_q,
//! Teichmuller lifts, and Morita's p-adic gamma function.
//!
//! Values are represented as unit mantissa times p^valuation. The mantissa is
//! a polynomial of degree < r over Z/p^N (a Galois ring element); r = 1
//! specializes to Q_p. Relative precision is tracked per value: a mantissa
//! carries `prec <= N` valid digits, and additions that cancel digits lower it.
//! A value whose normalized relative precision drops below the guard
//! threshold is an error rather than silently compared noise.
//!
//! Gamma values Gamma_p(x) for x in Z_p are computed through the integer
//! representative n = x mod p^N: Gamma_p(n) = (-1)^n prod_{0<j<n, p∤j} j,
//! which agrees with Gamma_p(x) to precision N by continuity. A full table of
//! size p^N is built lazily when p^N is small enough; above the bound a block
//! decomposition makes single evaluations O(p^(N/2)) instead of O(p^N).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero as NumZero;

use crate::error::{Error, Result};
use crate::finite_field::{FieldCtx, FqElem};

/// Exact rational number used for G-function parameters and floor/fractional
/// arithmetic.
pub type Rat = num_rational::BigRational;

/// Convenience constructor.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Greatest integer <= x, exact.
pub fn floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// floor(x) as i64; panics on overflow (exponent arithmetic in this crate
/// stays far below i64 range).
pub fn floor_i64(x: &Rat) -> i64 {
    let f = floor(x);
    i64::try_from(&f).expect("floor fits in i64")
}

/// Fractional part <x> = x - floor(x), in [0, 1).
pub fn frac(x: &Rat) -> Rat {
    x - Rat::from_integer(floor(x))
}

/// Relative-precision guard: normalized values with fewer valid digits than
/// this are an error.
pub const DEFAULT_GUARD_DIGITS: u32 = 3;

/// Full gamma tables are built for p^N up to this bound.
pub const GAMMA_TABLE_BOUND: u64 = 1 << 22;

/// Default working precision: the smallest M with p^M >= 4 sqrt(q) + 1
/// (enough to separate integers in the Hasse window), plus r digits consumed
/// by the q-multiplication in the trace formulas, plus two guard digits.
pub fn default_precision(p: u64, r: u32, q: u64) -> u32 {
    let mut m = 0u32;
    let mut pm: u128 = 1;
    while (pm - 1) * (pm - 1) < 16 * q as u128 {
        pm *= p as u128;
        m += 1;
    }
    m + r + 2
}

struct PadicCtxInner {
    field: FieldCtx,
    n: u32,
    pn: u64,
    /// p^0 .. p^N
    p_pows: Vec<u64>,
    /// coefficient-wise lift of the field modulus, length r+1, monic
    modulus: Vec<u64>,
    guard: u32,
    gamma_table: OnceLock<Vec<u64>>,
    blocks: OnceLock<BlockCoeffs>,
    prefix_cache: Mutex<BTreeMap<u64, u64>>,
}

/// Context for Z_q / Q_q arithmetic at fixed relative precision N.
/// Cheap to clone and share across threads; gamma tables are built at most
/// once regardless of concurrent use.
#[derive(Clone)]
pub struct PadicCtx(Arc<PadicCtxInner>);

/// An element of Q_q: exact zero, or unit mantissa times p^val.
#[derive(Clone, Debug)]
pub enum PadicNum {
    Zero,
    Unit {
        val: i64,
        /// degree-<r mantissa, each coefficient in [0, p^prec), not all
        /// divisible by p
        coeffs: Vec<u64>,
        prec: u32,
    },
}

impl PadicNum {
    pub fn is_zero(&self) -> bool {
        matches!(self, PadicNum::Zero)
    }

    pub fn valuation(&self) -> Option<i64> {
        match self {
            PadicNum::Zero => None,
            PadicNum::Unit { val, .. } => Some(*val),
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            PadicNum::Zero => None,
            PadicNum::Unit { prec, .. } => Some(*prec),
        }
    }

    pub fn unit_coeffs(&self) -> Option<&[u64]> {
        match self {
            PadicNum::Zero => None,
            PadicNum::Unit { coeffs, .. } => Some(coeffs),
        }
    }
}

impl std::fmt::Debug for PadicCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PadicCtx(p={}, r={}, N={})",
            self.p(),
            self.r(),
            self.n()
        )
    }
}

impl PadicCtx {
    /// Context over the given field at the default precision policy.
    pub fn for_field(field: &FieldCtx) -> PadicCtx {
        let n = default_precision(field.p(), field.r(), field.q());
        Self::with_precision(field, n).expect("default precision fits u64")
    }

    /// Context at explicit relative precision N >= 1.
    pub fn with_precision(field: &FieldCtx, n: u32) -> Result<PadicCtx> {
        if n == 0 {
            return Err(Error::InvalidConfig("precision N must be >= 1".into()));
        }
        let mut p_pows = Vec::with_capacity(n as usize + 1);
        let mut v: u64 = 1;
        p_pows.push(v);
        for _ in 0..n {
            v = v
                .checked_mul(field.p())
                .filter(|&v| v <= 1 << 62)
                .ok_or_else(|| {
                    Error::InvalidConfig(format!(
                        "p^N = {}^{} does not fit the 62-bit coefficient domain",
                        field.p(),
                        n
                    ))
                })?;
            p_pows.push(v);
        }
        let pn = v;
        let modulus = field.modulus().to_vec();
        Ok(PadicCtx(Arc::new(PadicCtxInner {
            field: field.clone(),
            n,
            pn,
            p_pows,
            modulus,
            guard: DEFAULT_GUARD_DIGITS,
            gamma_table: OnceLock::new(),
            blocks: OnceLock::new(),
            prefix_cache: Mutex::new(BTreeMap::new()),
        })))
    }

    pub fn field(&self) -> &FieldCtx {
        &self.0.field
    }

    pub fn p(&self) -> u64 {
        self.0.field.p()
    }

    pub fn r(&self) -> u32 {
        self.0.field.r()
    }

    pub fn q(&self) -> u64 {
        self.0.field.q()
    }

    /// Relative precision N (number of significant p-adic digits).
    pub fn n(&self) -> u32 {
        self.0.n
    }

    pub fn pn(&self) -> u64 {
        self.0.pn
    }

    pub fn guard(&self) -> u32 {
        self.0.guard
    }

    fn pk(&self, k: u32) -> u64 {
        self.0.p_pows[k as usize]
    }

    // ---- scalar helpers mod p^N ----

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        (a as u128 * b as u128 % self.0.pn as u128) as u64
    }

    fn mulmod_m(a: u64, b: u64, m: u64) -> u64 {
        (a as u128 * b as u128 % m as u128) as u64
    }

    // ---- mantissa (Galois ring) helpers: vectors of length r, coeffs mod p^N ----

    fn zq_one(&self) -> Vec<u64> {
        let mut v = vec![0; self.r() as usize];
        v[0] = 1;
        v
    }

    fn zq_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.r() as usize;
        let pn = self.0.pn as u128;
        if r == 1 {
            return vec![(a[0] as u128 * b[0] as u128 % pn) as u64];
        }
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let t = (prod[i + j] as u128 + x as u128 * y as u128 % pn) % pn;
                prod[i + j] = t as u64;
            }
        }
        for d in (r..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (k, &m) in self.0.modulus.iter().enumerate().take(r) {
                if m == 0 {
                    continue;
                }
                let sub = (c as u128 * m as u128 % pn) as u64;
                let pos = d - r + k;
                prod[pos] = (prod[pos] + self.0.pn - sub) % self.0.pn;
            }
        }
        prod.truncate(r);
        prod
    }

    fn zq_pow(&self, base: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = self.zq_one();
        let mut base = base.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.zq_mul(&result, &base);
            }
            base = self.zq_mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Newton inversion of a unit mantissa mod (p^N, modulus).
    fn zq_inv(&self, u: &[u64]) -> Vec<u64> {
        let field = &self.0.field;
        let resid: Vec<u64> = u.iter().map(|&c| c % self.p()).collect();
        let e = field
            .from_index(resid.iter().rev().fold(0, |acc, &c| acc * self.p() + c))
            .expect("residue in range");
        assert!(!e.is_zero(), "inverting a non-unit mantissa");
        let e_inv = field.inv(&e).expect("unit");
        let mut x: Vec<u64> = e_inv.coeffs().to_vec();
        let iters = 64 - (self.n() as u64).leading_zeros() + 1;
        for _ in 0..iters {
            // x <- x (2 - u x)
            let ux = self.zq_mul(u, &x);
            let mut two_minus = vec![0u64; self.r() as usize];
            for (i, t) in two_minus.iter_mut().enumerate() {
                let base = if i == 0 { 2 % self.0.pn } else { 0 };
                *t = (base + self.0.pn - ux[i]) % self.0.pn;
            }
            x = self.zq_mul(&x, &two_minus);
        }
        debug_assert_eq!(self.zq_mul(u, &x), self.zq_one());
        x
    }

    fn reduce_coeffs(&self, coeffs: &mut [u64], prec: u32) {
        let m = self.pk(prec);
        for c in coeffs.iter_mut() {
            *c %= m;
        }
    }

    fn coeffs_unit_shift(&self, coeffs: &[u64], within: u32) -> Option<u32> {
        // smallest s < within with some coefficient not divisible by p^(s+1);
        // None when all coefficients vanish mod p^within
        let mut s = within;
        for &c in coeffs {
            if c % self.pk(within) == 0 {
                continue;
            }
            let mut v = 0u32;
            let mut c = c % self.pk(within);
            while c % self.p() == 0 {
                c /= self.p();
                v += 1;
            }
            s = s.min(v);
        }
        if s >= within {
            None
        } else {
            Some(s)
        }
    }

    fn make_unit(&self, val: i64, mut coeffs: Vec<u64>, avail: u32) -> Result<PadicNum> {
        // `coeffs` valid mod p^avail at valuation `val`; normalize to a unit
        // mantissa or exact zero.
        match self.coeffs_unit_shift(&coeffs, avail) {
            None => Ok(PadicNum::Zero),
            Some(s) => {
                let prec = avail - s;
                if prec < self.0.guard {
                    return Err(Error::PrecisionExhausted {
                        remaining: prec,
                        guard: self.0.guard,
                    });
                }
                let ps = self.pk(s);
                for c in coeffs.iter_mut() {
                    *c = (*c % self.pk(avail)) / ps;
                }
                self.reduce_coeffs(&mut coeffs, prec);
                Ok(PadicNum::Unit {
                    val: val + s as i64,
                    coeffs,
                    prec,
                })
            }
        }
    }

    // ---- constructors ----

    pub fn from_int(&self, n: i128) -> PadicNum {
        if n == 0 {
            return PadicNum::Zero;
        }
        let mut v = 0i64;
        let mut n = n;
        while n % self.p() as i128 == 0 {
            n /= self.p() as i128;
            v += 1;
        }
        let unit = (n.rem_euclid(self.0.pn as i128)) as u64;
        let mut coeffs = vec![0; self.r() as usize];
        coeffs[0] = unit;
        PadicNum::Unit {
            val: v,
            coeffs,
            prec: self.n(),
        }
    }

    /// Embeds an exact rational into Q_p at precision N. Negative valuation
    /// is allowed when p divides the denominator.
    pub fn from_rat(&self, x: &Rat) -> PadicNum {
        if x.is_zero() {
            return PadicNum::Zero;
        }
        let p_big = BigInt::from(self.p());
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        let mut v = 0i64;
        while (&num % &p_big).is_zero() {
            num /= &p_big;
            v += 1;
        }
        while (&den % &p_big).is_zero() {
            den /= &p_big;
            v -= 1;
        }
        let pn_big = BigInt::from(self.0.pn);
        let num_mod = num.mod_floor(&pn_big);
        let den_mod = den.mod_floor(&pn_big);
        let num_u = u64::try_from(&num_mod).expect("reduced mod p^N");
        let den_u = u64::try_from(&den_mod).expect("reduced mod p^N");
        let unit = self.mulmod(num_u, modinv_u64(den_u, self.0.pn));
        let mut coeffs = vec![0; self.r() as usize];
        coeffs[0] = unit;
        PadicNum::Unit {
            val: v,
            coeffs,
            prec: self.n(),
        }
    }

    pub fn one(&self) -> PadicNum {
        self.from_int(1)
    }

    // ---- arithmetic ----

    pub fn mul(&self, a: &PadicNum, b: &PadicNum) -> PadicNum {
        match (a, b) {
            (PadicNum::Zero, _) | (_, PadicNum::Zero) => PadicNum::Zero,
            (
                PadicNum::Unit { val: va, coeffs: ca, prec: pa },
                PadicNum::Unit { val: vb, coeffs: cb, prec: pb },
            ) => {
                let prec = (*pa).min(*pb);
                let mut coeffs = self.zq_mul(ca, cb);
                self.reduce_coeffs(&mut coeffs, prec);
                PadicNum::Unit { val: va + vb, coeffs, prec }
            }
        }
    }

    pub fn neg(&self, a: &PadicNum) -> PadicNum {
        match a {
            PadicNum::Zero => PadicNum::Zero,
            PadicNum::Unit { val, coeffs, prec } => {
                let m = self.pk(*prec);
                let coeffs = coeffs.iter().map(|&c| (m - c % m) % m).collect();
                PadicNum::Unit { val: *val, coeffs, prec: *prec }
            }
        }
    }

    pub fn inv(&self, a: &PadicNum) -> Result<PadicNum> {
        match a {
            PadicNum::Zero => Err(Error::DivisionByZero),
            PadicNum::Unit { val, coeffs, prec } => {
                // lift mantissa to full width for the Newton iteration, then
                // truncate back
                let mut wide = coeffs.clone();
                self.reduce_coeffs(&mut wide, *prec);
                let mut inv = self.zq_inv(&wide);
                self.reduce_coeffs(&mut inv, *prec);
                Ok(PadicNum::Unit { val: -val, coeffs: inv, prec: *prec })
            }
        }
    }

    pub fn div(&self, a: &PadicNum, b: &PadicNum) -> Result<PadicNum> {
        let bi = self.inv(b)?;
        Ok(self.mul(a, &bi))
    }

    pub fn add(&self, a: &PadicNum, b: &PadicNum) -> Result<PadicNum> {
        match (a, b) {
            (PadicNum::Zero, x) | (x, PadicNum::Zero) => Ok(x.clone()),
            (
                PadicNum::Unit { val: va, coeffs: ca, prec: pa },
                PadicNum::Unit { val: vb, coeffs: cb, prec: pb },
            ) => {
                let vmin = (*va).min(*vb);
                let abs = (va + *pa as i64).min(vb + *pb as i64);
                let w = ((abs - vmin) as u32).min(self.n());
                if w == 0 {
                    return Err(Error::PrecisionExhausted { remaining: 0, guard: self.0.guard });
                }
                let m = self.pk(w);
                let sa = ((va - vmin) as u32).min(w);
                let sb = ((vb - vmin) as u32).min(w);
                let fa = self.pk(sa) % m;
                let fb = self.pk(sb) % m;
                let mut out = vec![0u64; self.r() as usize];
                for (i, o) in out.iter_mut().enumerate() {
                    let x = Self::mulmod_m(ca[i] % m, fa, m);
                    let y = Self::mulmod_m(cb[i] % m, fb, m);
                    *o = (x + y) % m;
                }
                self.make_unit(vmin, out, w)
            }
        }
    }

    pub fn sub(&self, a: &PadicNum, b: &PadicNum) -> Result<PadicNum> {
        let nb = self.neg(b);
        self.add(a, &nb)
    }

    pub fn pow(&self, a: &PadicNum, e: i64) -> Result<PadicNum> {
        match a {
            PadicNum::Zero => match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(PadicNum::Zero),
                std::cmp::Ordering::Equal => Ok(self.one()),
                std::cmp::Ordering::Less => Err(Error::DivisionByZero),
            },
            _ => {
                let base = if e < 0 { self.inv(a)? } else { a.clone() };
                let mut e = e.unsigned_abs();
                let mut result = self.one();
                let mut base = base;
                while e > 0 {
                    if e & 1 == 1 {
                        result = self.mul(&result, &base);
                    }
                    base = self.mul(&base, &base);
                    e >>= 1;
                }
                Ok(result)
            }
        }
    }

    /// Multiply by (-p)^e.
    pub fn mul_neg_p_pow(&self, a: &PadicNum, e: i64) -> PadicNum {
        match a {
            PadicNum::Zero => PadicNum::Zero,
            PadicNum::Unit { val, coeffs, prec } => {
                let x = PadicNum::Unit { val: val + e, coeffs: coeffs.clone(), prec: *prec };
                if e.rem_euclid(2) == 1 {
                    self.neg(&x)
                } else {
                    x
                }
            }
        }
    }

    /// Exact-at-precision equality: valuations match and mantissas agree on
    /// the common valid digits.
    pub fn eq(&self, a: &PadicNum, b: &PadicNum) -> bool {
        match (a, b) {
            (PadicNum::Zero, PadicNum::Zero) => true,
            (PadicNum::Zero, _) | (_, PadicNum::Zero) => false,
            (
                PadicNum::Unit { val: va, coeffs: ca, prec: pa },
                PadicNum::Unit { val: vb, coeffs: cb, prec: pb },
            ) => {
                if va != vb {
                    return false;
                }
                let m = self.pk((*pa).min(*pb));
                ca.iter().zip(cb).all(|(&x, &y)| x % m == y % m)
            }
        }
    }

    /// Truncates a value computed at higher precision down to this context's
    /// precision (same p and r required).
    pub fn truncate(&self, a: &PadicNum) -> PadicNum {
        match a {
            PadicNum::Zero => PadicNum::Zero,
            PadicNum::Unit { val, coeffs, prec } => {
                let prec = (*prec).min(self.n());
                let mut coeffs = coeffs.clone();
                self.reduce_coeffs(&mut coeffs, prec);
                PadicNum::Unit { val: *val, coeffs, prec }
            }
        }
    }

    pub fn render(&self, a: &PadicNum) -> String {
        match a {
            PadicNum::Zero => "0".into(),
            PadicNum::Unit { val, coeffs, prec } => {
                if self.r() == 1 {
                    format!("{}^{} * {} (mod {}^{})", self.p(), val, coeffs[0], self.p(), prec)
                } else {
                    format!("{}^{} * {:?} (mod {}^{})", self.p(), val, coeffs, self.p(), prec)
                }
            }
        }
    }

    // ---- accumulation with a conservative absolute-precision floor ----

    /// Sums terms while tracking the minimum absolute precision across them,
    /// normalizing once at the end. This avoids spurious guard trips on
    /// transient cancellations inside long sums.
    pub fn sum<I: IntoIterator<Item = PadicNum>>(&self, terms: I) -> Result<PadicNum> {
        let mut acc = PadicSum::new(self);
        for t in terms {
            acc.push(&t);
        }
        acc.finish()
    }

    // ---- Teichmuller lift ----

    /// The Teichmuller representative of x: the unique (q-1)-th root of unity
    /// in Z_q congruent to x mod p; zero maps to exact zero.
    pub fn teichmuller(&self, x: &FqElem) -> PadicNum {
        assert_eq!(x.field(), self.0.field.id(), "element from a different field");
        if x.is_zero() {
            return PadicNum::Zero;
        }
        let mut z: Vec<u64> = x.coeffs().to_vec();
        for _ in 0..(2 * self.n() as usize + 4) {
            let znext = self.zq_pow(&z, self.q());
            let stable = znext == z;
            z = znext;
            if stable {
                break;
            }
        }
        debug_assert_eq!(self.zq_pow(&z, self.q()), z, "Teichmuller iteration converged");
        PadicNum::Unit { val: 0, coeffs: z, prec: self.n() }
    }

    // ---- Morita's p-adic gamma function ----

    /// Integer representative of a p-adic integer x: the unique n in
    /// [0, p^N) with n = x mod p^N.
    pub fn integer_rep(&self, x: &Rat) -> Result<u64> {
        let p_big = BigInt::from(self.p());
        if (x.denom() % &p_big).is_zero() {
            return Err(Error::NotPadicInteger { x: x.to_string(), p: self.p() });
        }
        let pn_big = BigInt::from(self.0.pn);
        let num = x.numer().mod_floor(&pn_big);
        let den = x.denom().mod_floor(&pn_big);
        let num_u = u64::try_from(&num).expect("reduced");
        let den_u = u64::try_from(&den).expect("reduced");
        Ok(self.mulmod(num_u, modinv_u64(den_u, self.0.pn)))
    }

    /// Gamma_p(x) for x in Q cap Z_p, as a unit scalar mod p^N.
    pub fn gamma_u64(&self, x: &Rat) -> Result<u64> {
        Ok(self.gamma_rep(self.integer_rep(x)?))
    }

    /// Gamma_p(x) as a PadicNum (always a unit, valuation 0).
    pub fn gamma(&self, x: &Rat) -> Result<PadicNum> {
        let g = self.gamma_u64(x)?;
        let mut coeffs = vec![0; self.r() as usize];
        coeffs[0] = g;
        Ok(PadicNum::Unit { val: 0, coeffs, prec: self.n() })
    }

    /// The full gamma table Gamma_p(n) for 0 <= n < p^N, built lazily;
    /// None when p^N exceeds [`GAMMA_TABLE_BOUND`].
    pub fn gamma_table(&self) -> Option<&[u64]> {
        if self.0.pn > GAMMA_TABLE_BOUND {
            return None;
        }
        Some(self.0.gamma_table.get_or_init(|| {
            let pn = self.0.pn;
            let p = self.p();
            let mut t = Vec::with_capacity(pn as usize);
            t.push(1u64);
            for n in 0..pn - 1 {
                let step = if n % p == 0 { pn - 1 } else { pn - n };
                let prev = *t.last().unwrap();
                t.push(Self::mulmod_m(prev, step, pn));
            }
            t
        }))
    }

    pub(crate) fn gamma_rep(&self, n: u64) -> u64 {
        if let Some(t) = self.gamma_table() {
            return t[n as usize];
        }
        self.gamma_rep_blocks(n)
    }

    /// Gamma_p(n) via the block decomposition: with B = p^ceil(N/2), the
    /// product of the prime-to-p integers in (kB, (k+1)B] is linear in kB
    /// mod p^N, so prefix products over whole blocks cost O(1) per block and
    /// only the final partial block is walked directly.
    pub(crate) fn gamma_rep_blocks(&self, n: u64) -> u64 {
        let pn = self.0.pn;
        if n == 0 {
            return 1;
        }
        let blocks = self.0.blocks.get_or_init(|| self.build_blocks());
        let m = n - 1;
        let big_k = m / blocks.block;
        let rem = m % blocks.block;
        let mut g = self.block_prefix(blocks, big_k);
        let base = big_k * blocks.block;
        let p = self.p();
        for j in 1..=rem {
            if j % p != 0 {
                g = Self::mulmod_m(g, (base + j) % pn, pn);
            }
        }
        if n % 2 == 1 {
            g = (pn - g) % pn;
        }
        g
    }

    fn build_blocks(&self) -> BlockCoeffs {
        let s = self.n().div_ceil(2);
        let block = self.pk(s);
        let pn = self.0.pn;
        let p = self.p();
        let mut c0: u64 = 1;
        let mut c1: u64 = 0;
        for j in 1..=block {
            if j % p == 0 {
                continue;
            }
            // (c0 + c1 X)(j + X) truncated at X^2, since X = kB has X^2 = 0 mod p^N
            c1 = (Self::mulmod_m(c1, j, pn) + c0) % pn;
            c0 = Self::mulmod_m(c0, j, pn);
        }
        BlockCoeffs { block, c0, c1 }
    }

    fn block_prefix(&self, blocks: &BlockCoeffs, big_k: u64) -> u64 {
        let pn = self.0.pn;
        let mut cache = self.0.prefix_cache.lock().unwrap();
        let (mut k0, mut prod) = cache
            .range(..=big_k)
            .next_back()
            .map(|(&k, &v)| (k, v))
            .unwrap_or((0, 1));
        const CHECKPOINT_STRIDE: u64 = 1024;
        while k0 < big_k {
            let x = k0 * blocks.block % pn;
            let f = (blocks.c0 + Self::mulmod_m(blocks.c1, x, pn)) % pn;
            prod = Self::mulmod_m(prod, f, pn);
            k0 += 1;
            if k0 % CHECKPOINT_STRIDE == 0 {
                cache.insert(k0, prod);
            }
        }
        cache.insert(big_k, prod);
        prod
    }
}

struct BlockCoeffs {
    block: u64,
    c0: u64,
    c1: u64,
}

/// Incremental sum with deferred normalization; see [`PadicCtx::sum`].
pub struct PadicSum<'a> {
    ctx: &'a PadicCtx,
    any: bool,
    vfloor: i64,
    abs_floor: i64,
    acc: Vec<u64>,
}

impl<'a> PadicSum<'a> {
    pub fn new(ctx: &'a PadicCtx) -> Self {
        PadicSum {
            ctx,
            any: false,
            vfloor: 0,
            abs_floor: i64::MAX,
            acc: vec![0; ctx.r() as usize],
        }
    }

    pub fn push(&mut self, x: &PadicNum) {
        let (val, coeffs, prec) = match x {
            PadicNum::Zero => return,
            PadicNum::Unit { val, coeffs, prec } => (*val, coeffs, *prec),
        };
        let pn = self.ctx.pn();
        if !self.any {
            self.any = true;
            self.vfloor = val;
        } else if val < self.vfloor {
            let shift = ((self.vfloor - val) as u32).min(self.ctx.n());
            let f = self.ctx.pk(shift) % pn;
            for c in self.acc.iter_mut() {
                *c = PadicCtx::mulmod_m(*c, f, pn);
            }
            self.vfloor = val;
        }
        let shift = ((val - self.vfloor) as u32).min(self.ctx.n());
        let f = self.ctx.pk(shift) % pn;
        for (a, &c) in self.acc.iter_mut().zip(coeffs) {
            *a = (*a + PadicCtx::mulmod_m(c, f, pn)) % pn;
        }
        self.abs_floor = self.abs_floor.min(val + prec as i64);
    }

    pub fn finish(self) -> Result<PadicNum> {
        if !self.any {
            return Ok(PadicNum::Zero);
        }
        let w = ((self.abs_floor - self.vfloor) as u32).min(self.ctx.n());
        self.ctx.make_unit(self.vfloor, self.acc, w)
    }
}

pub(crate) fn modinv_u64(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "inverse of non-unit {a} mod {m}");
    t.rem_euclid(m as i128) as u64
}
