//! Exact verification of the character-sum toolbox in cyclotomic integer
//! rings: orthogonality relations, Gauss-sum inverses, the expansion of the
//! additive character through Gauss sums, and the Davenport-Hasse relation.
//!
//! Everything runs in Z[zeta] with zeta a primitive p(q-1)-th root of unity:
//! zeta^(q-1) serves as zeta_p and zeta^p as zeta_{q-1}, so one ring hosts
//! both the additive and the multiplicative characters. Arithmetic is exact
//! (arbitrary-precision integer coefficients modulo the cyclotomic polynomial
//! Phi_m), and deliberately independent of all p-adic code so this module can
//! falsify the others.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::finite_field::{FieldCtx, FqElem};
use crate::identity_checks::{IdentityKind, IdentityResult};

/// Z[zeta_m] as Z[x] / Phi_m(x).
#[derive(Clone, Debug)]
pub struct CycloRing {
    m: u64,
    phi: usize,
    /// Phi_m, monic, little-endian, length phi+1
    modulus: Vec<BigInt>,
}

/// An element of the ring: phi(m) integer coefficients, degree < phi(m).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycloElem {
    coeffs: Vec<BigInt>,
}

impl CycloElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

impl CycloRing {
    /// Ring of the m-th roots of unity; Phi_m is built by repeated exact
    /// division of x^d - 1 by the cyclotomic polynomials of proper divisors.
    pub fn new(m: u64) -> CycloRing {
        let modulus = cyclotomic_poly(m);
        CycloRing { m, phi: modulus.len() - 1, modulus }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem { coeffs: vec![BigInt::zero(); self.phi] }
    }

    pub fn from_int(&self, n: i64) -> CycloElem {
        let mut e = self.zero();
        e.coeffs[0] = BigInt::from(n);
        e
    }

    pub fn one(&self) -> CycloElem {
        self.from_int(1)
    }

    /// zeta^e, exponent taken mod m.
    pub fn zeta_pow(&self, e: u64) -> CycloElem {
        let e = (e % self.m) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        self.reduce(raw)
    }

    fn reduce(&self, mut raw: Vec<BigInt>) -> CycloElem {
        for pos in (self.phi..raw.len()).rev() {
            if raw[pos].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut raw[pos], BigInt::zero());
            for (k, mc) in self.modulus.iter().enumerate().take(self.phi) {
                if !mc.is_zero() {
                    let delta = &c * mc;
                    raw[pos - self.phi + k] -= delta;
                }
            }
        }
        raw.resize(self.phi, BigInt::zero());
        CycloElem { coeffs: raw }
    }

    pub fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &CycloElem) -> CycloElem {
        CycloElem { coeffs: a.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let mut raw = vec![BigInt::zero(); 2 * self.phi];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                raw[i + j] += x * y;
            }
        }
        self.reduce(raw)
    }

    pub fn scale(&self, a: &CycloElem, s: i64) -> CycloElem {
        let s = BigInt::from(s);
        CycloElem { coeffs: a.coeffs.iter().map(|x| x * &s).collect() }
    }

    /// The Galois map zeta -> zeta^u (u coprime to the conductor).
    pub fn automorphism(&self, a: &CycloElem, u: u64) -> CycloElem {
        let mut out = self.zero();
        for (i, c) in a.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = self.zeta_pow(i as u64 * u % self.m);
            for (o, mc) in out.coeffs.iter_mut().zip(&mono.coeffs) {
                *o += c * mc;
            }
        }
        out
    }
}

/// Discrete logarithms over the fixed field generator, and the F_p-trace of
/// every element: the data behind the dual generator T (multiplicative) and
/// theta (additive character).
#[derive(Clone, Debug)]
pub struct CharacterTable {
    dlog: Vec<Option<u64>>,
    trace: Vec<u64>,
}

impl CharacterTable {
    pub fn build(ctx: &FieldCtx) -> CharacterTable {
        let q = ctx.q() as usize;
        let mut dlog = vec![None; q];
        let mut x = ctx.one();
        for s in 0..ctx.q() - 1 {
            dlog[ctx.index_of(&x) as usize] = Some(s);
            x = ctx.mul(&x, ctx.generator()).expect("same field");
        }
        let mut trace = vec![0u64; q];
        for e in ctx.elements() {
            let mut t = ctx.zero();
            for i in 0..ctx.r() {
                let conj = ctx.pow(&e, ctx.p().pow(i) as i64).expect("field power");
                t = ctx.add(&t, &conj).expect("same field");
            }
            debug_assert!(
                t.coeffs().iter().skip(1).all(|&c| c == 0),
                "trace lands in the prime subfield"
            );
            trace[ctx.index_of(&e) as usize] = t.coeffs()[0];
        }
        CharacterTable { dlog, trace }
    }

    /// Discrete log base the field generator; None for zero.
    pub fn dlog(&self, index: u64) -> Option<u64> {
        self.dlog[index as usize]
    }

    /// tr(alpha) = alpha + alpha^p + ... + alpha^(p^(r-1)), as an integer in
    /// [0, p).
    pub fn trace_fp(&self, index: u64) -> u64 {
        self.trace[index as usize]
    }
}

/// Gauss sum of the character T^m_char over the given table, exact in the
/// cyclotomic ring. The ring conductor must host both zeta_p and zeta_{q-1},
/// i.e. be a multiple of p(q-1).
pub fn gauss_sum_in(
    ctx: &FieldCtx,
    ring: &CycloRing,
    table: &CharacterTable,
    m_char: i64,
) -> Result<CycloElem> {
    let (p, q) = (ctx.p(), ctx.q());
    if ring.conductor() % (p * (q - 1)) != 0 {
        return Err(Error::ConductorMismatch);
    }
    let stretch = ring.conductor() / (p * (q - 1));
    let q1 = (q - 1) as i64;
    let mut raw = vec![BigInt::zero(); ring.conductor() as usize];
    for idx in 1..q {
        let s = table.dlog(idx).expect("nonzero element") as i64;
        let mult = (m_char as i128 * s as i128).rem_euclid(q1 as i128) as u64;
        let addv = table.trace_fp(idx);
        let e = (p * mult + (q - 1) * addv) % (p * (q - 1)) * stretch;
        raw[e as usize] += BigInt::one();
    }
    Ok(ring.reduce(raw))
}

/// Exact verification oracle for one field: the ring of p(q-1)-th roots of
/// unity plus the character tables.
pub struct CycloOracle {
    field: FieldCtx,
    ring: CycloRing,
    table: CharacterTable,
}

impl CycloOracle {
    pub fn new(field: &FieldCtx) -> CycloOracle {
        let ring = CycloRing::new(field.p() * (field.q() - 1));
        let table = CharacterTable::build(field);
        CycloOracle { field: field.clone(), ring, table }
    }

    pub fn ring(&self) -> &CycloRing {
        &self.ring
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// zeta_{q-1}^e
    fn zeta_q1(&self, e: i64) -> CycloElem {
        let q1 = (self.field.q() - 1) as i64;
        self.ring.zeta_pow(self.field.p() * e.rem_euclid(q1) as u64)
    }

    /// theta(alpha) = zeta_p^tr(alpha)
    fn theta(&self, index: u64) -> CycloElem {
        self.ring
            .zeta_pow((self.field.q() - 1) * self.table.trace_fp(index))
    }

    /// G(T^m_char) = sum_x T^m_char(x) theta(x), with chi(0) = 0.
    pub fn gauss_sum(&self, m_char: i64) -> CycloElem {
        gauss_sum_in(&self.field, &self.ring, &self.table, m_char)
            .expect("oracle ring has the right conductor")
    }

    /// Both orthogonality relations, exhaustive over characters and elements.
    pub fn verify_orthogonality(&self) -> IdentityResult {
        let q = self.field.q();
        let mut pass = true;
        let mut failures = Vec::new();
        // sum_x chi(x): q-1 for the trivial character, 0 otherwise
        for m in 0..q - 1 {
            let mut sum = self.ring.zero();
            for s in 0..q - 1 {
                let term = self.zeta_q1((m as i64) * (s as i64));
                sum = self.ring.add(&sum, &term);
            }
            let expected = if m == 0 {
                self.ring.from_int((q - 1) as i64)
            } else {
                self.ring.zero()
            };
            if sum != expected {
                pass = false;
                failures.push(format!("chi = T^{m}"));
            }
        }
        // sum_chi chi(x): q-1 at x = 1, 0 otherwise
        for idx in 1..q {
            let s = self.table.dlog(idx).unwrap();
            let mut sum = self.ring.zero();
            for m in 0..q - 1 {
                let term = self.zeta_q1((m as i64) * (s as i64));
                sum = self.ring.add(&sum, &term);
            }
            let expected = if s == 0 {
                self.ring.from_int((q - 1) as i64)
            } else {
                self.ring.zero()
            };
            if sum != expected {
                pass = false;
                failures.push(format!("x with dlog {s}"));
            }
        }
        IdentityResult::new(
            IdentityKind::Orthogonality,
            format!("q={q}"),
            "character sums".into(),
            if failures.is_empty() { "all zero / q-1".into() } else { failures.join(", ") },
            pass,
        )
    }

    /// G_k G_{-k} = q T^k(-1) for nontrivial T^k.
    pub fn verify_gauss_inverse(&self, k: i64) -> Result<IdentityResult> {
        let q = self.field.q();
        if k.rem_euclid((q - 1) as i64) == 0 {
            return Err(Error::TrivialCharacter { k });
        }
        let lhs = self.ring.mul(&self.gauss_sum(k), &self.gauss_sum(-k));
        let minus_one_dlog = ((q - 1) / 2) as i64;
        let rhs = self
            .ring
            .scale(&self.zeta_q1(k * minus_one_dlog), q as i64);
        let pass = lhs == rhs;
        Ok(IdentityResult::new(
            IdentityKind::GaussInverse,
            format!("q={q} k={k}"),
            format!("G_k G_-k, degree-{} element", self.ring.degree()),
            format!("q T^{k}(-1)"),
            pass,
        ))
    }

    /// (q-1) theta(alpha) = sum_m G_{-m} T^m(alpha), denominators cleared.
    pub fn verify_theta_expansion(&self, alpha: &FqElem) -> Result<IdentityResult> {
        if alpha.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let q = self.field.q();
        let idx = self.field.index_of(alpha);
        let s = self.table.dlog(idx).unwrap() as i64;
        let lhs = self.ring.scale(&self.theta(idx), (q - 1) as i64);
        let mut rhs = self.ring.zero();
        for m in 0..(q - 1) as i64 {
            let term = self.ring.mul(&self.gauss_sum(-m), &self.zeta_q1(m * s));
            rhs = self.ring.add(&rhs, &term);
        }
        let pass = lhs == rhs;
        Ok(IdentityResult::new(
            IdentityKind::ThetaExpansion,
            format!("q={q} alpha={alpha}"),
            "(q-1) theta(alpha)".into(),
            "sum_m G_-m T^m(alpha)".into(),
            pass,
        ))
    }

    /// Davenport-Hasse: prod_{chi^m=1} G(chi psi)
    ///   = -G(psi^m) psi(m^-m) prod_{chi^m=1} G(chi), for q = 1 mod m.
    pub fn verify_davenport_hasse(&self, m: u64, psi_index: u64) -> Result<IdentityResult> {
        let q = self.field.q();
        if m == 0 || (q - 1) % m != 0 {
            return Err(Error::BadModulus { q, m });
        }
        let step = ((q - 1) / m) as i64;
        let psi = psi_index as i64;

        let mut lhs = self.ring.one();
        for s in 0..m as i64 {
            lhs = self.ring.mul(&lhs, &self.gauss_sum(s * step + psi));
        }

        let mut rhs = self.gauss_sum(m as i64 * psi);
        // psi(m^-m): the field element m raised to -m, evaluated by T^psi
        let m_elem = self.field.from_int(m as i64);
        let m_pow = self.field.pow(&m_elem, -(m as i64))?;
        let s_dlog = self.table.dlog(self.field.index_of(&m_pow)).unwrap() as i64;
        rhs = self.ring.mul(&rhs, &self.zeta_q1(psi * s_dlog));
        for s in 0..m as i64 {
            rhs = self.ring.mul(&rhs, &self.gauss_sum(s * step));
        }
        let rhs = self.ring.neg(&rhs);
        let pass = lhs == rhs;
        Ok(IdentityResult::new(
            IdentityKind::DavenportHasse,
            format!("q={q} m={m} psi=T^{psi_index}"),
            "prod G(chi psi)".into(),
            "-G(psi^m) psi(m^-m) prod G(chi)".into(),
            pass,
        ))
    }
}

/// Phi_m by exact division: Phi_d = (x^d - 1) / prod_{e|d, e<d} Phi_e for
/// each divisor d of m in ascending order.
fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    let mut memo: HashMap<u64, Vec<BigInt>> = HashMap::new();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = BigInt::from(-1);
        num[d as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for e in 1..d {
            if d % e == 0 {
                den = poly_mul_int(&den, &memo[&e]);
            }
        }
        memo.insert(d, poly_div_exact(&num, &den));
    }
    memo.remove(&m).unwrap()
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials with monic divisor; panics if the
/// division leaves a remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let dn = rem.len() - 1;
    assert!(dn >= dd);
    let mut quo = vec![BigInt::zero(); dn - dd + 1];
    for pos in (dd..=dn).rev() {
        let c = rem[pos].clone();
        if c.is_zero() {
            continue;
        }
        let shift = pos - dd;
        quo[shift] = c.clone();
        for (k, dc) in den.iter().enumerate() {
            let delta = &c * dc;
            rem[shift + k] -= delta;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division must be exact");
    quo
}
