//! Bulk verification sweeps over curve families, with deterministic csv /
//! json / text artifacts.
//!
//! Output determinism contract: identical configuration (including the sample
//! seed and thread count) produces byte-identical csv and json artifacts.
//! Per-record timings are therefore opt-in; with `timing` disabled the micros
//! column is written as 0. Records appear in curve enumeration order
//! regardless of how many threads computed them.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite_field::{hasse_bound, is_prime, trace_bruteforce, FieldCtx, WeierstrassCurve};
use crate::gfunction::Evaluator;
use crate::padic::PadicCtx;
use crate::trace_formulas::{
    trace_e1, trace_e2, trace_short_direct, trace_via_e1_shift, trace_via_e2_shift, Method,
    TraceReport,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CurveFamily {
    ShortW,
    E1,
    E2,
}

impl CurveFamily {
    pub fn label(&self) -> &'static str {
        match self {
            CurveFamily::ShortW => "short",
            CurveFamily::E1 => "e1",
            CurveFamily::E2 => "e2",
        }
    }

    fn default_methods(&self) -> Vec<Method> {
        match self {
            CurveFamily::ShortW => vec![Method::ShortDirect, Method::E1Shift, Method::E2Shift],
            CurveFamily::E1 => vec![Method::E1Form],
            CurveFamily::E2 => vec![Method::E2Form],
        }
    }
}

#[derive(Clone, Debug)]
pub enum CurveFilter {
    All,
    Sample { seed: u64, count: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub degrees: Vec<u32>,
    pub families: Vec<CurveFamily>,
    pub filter: CurveFilter,
    /// Override of the default precision policy.
    pub precision: Option<u32>,
    /// Methods to run; empty means every method the family admits.
    pub methods: Vec<Method>,
    pub format: OutputFormat,
    pub threads: Option<usize>,
    /// Record wall-clock micros per record. Off by default so artifacts are
    /// byte-identical across runs.
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            primes: vec![5, 7, 11, 13, 17, 19, 23],
            degrees: vec![1],
            families: vec![CurveFamily::ShortW, CurveFamily::E1, CurveFamily::E2],
            filter: CurveFilter::All,
            precision: None,
            methods: Vec::new(),
            format: OutputFormat::Text,
            threads: None,
            timing: false,
        }
    }
}

/// The default verification profile: all curves over F_p for p <= 23, plus
/// 500 seeded-random curves over each of F_25 and F_49.
pub fn default_sweep_profile(format: OutputFormat, timing: bool) -> Vec<SweepConfig> {
    vec![
        SweepConfig { format, timing, ..Default::default() },
        SweepConfig {
            primes: vec![5, 7],
            degrees: vec![2],
            filter: CurveFilter::Sample { seed: 1, count: 500 },
            format,
            timing,
            ..Default::default()
        },
    ]
}

/// One (curve, method) row. `a` and `b` are the canonical element indices of
/// the two coefficients of the family shape.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRecord {
    pub q: u64,
    pub p: u64,
    pub r: u32,
    pub a: u64,
    pub b: u64,
    pub method: &'static str,
    pub applicable: bool,
    pub value: Option<i64>,
    pub brute: i64,
    #[serde(rename = "match")]
    pub matched: bool,
    pub micros: u64,
}

#[derive(Clone, Debug, Default)]
pub struct MethodCounts {
    pub rows: usize,
    pub applicable: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub curves: usize,
    pub records: usize,
    pub mismatches: usize,
    pub per_method: BTreeMap<&'static str, MethodCounts>,
    pub seeds: Vec<u64>,
    pub hasse_violations: usize,
}

impl SweepSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.hasse_violations == 0
    }

    pub fn merge(&mut self, other: SweepSummary) {
        self.curves += other.curves;
        self.records += other.records;
        self.mismatches += other.mismatches;
        self.hasse_violations += other.hasse_violations;
        self.seeds.extend(other.seeds);
        for (k, v) in other.per_method {
            let e = self.per_method.entry(k).or_default();
            e.rows += v.rows;
            e.applicable += v.applicable;
            e.mismatches += v.mismatches;
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "curves: {}, records: {}, mismatches: {}, hasse violations: {}\n",
            self.curves, self.records, self.mismatches, self.hasse_violations
        );
        for (m, c) in &self.per_method {
            s.push_str(&format!(
                "  {m}: {} rows, {} applicable, {} mismatches\n",
                c.rows, c.applicable, c.mismatches
            ));
        }
        if !self.seeds.is_empty() {
            s.push_str(&format!("  sample seeds: {:?}\n", self.seeds));
        }
        s
    }
}

/// All nonsingular curves of the family over the field, as ascending
/// coefficient index pairs.
pub fn enumerate_curves(ctx: &FieldCtx, family: CurveFamily) -> Vec<(u64, u64)> {
    let q = ctx.q();
    let mut out = Vec::new();
    for ai in 0..q {
        for bi in 0..q {
            let a = ctx.from_index(ai).unwrap();
            let b = ctx.from_index(bi).unwrap();
            let curve = build_curve(family, a, b);
            if curve.validate(ctx).is_ok() {
                out.push((ai, bi));
            }
        }
    }
    out
}

fn build_curve(family: CurveFamily, a: crate::finite_field::FqElem, b: crate::finite_field::FqElem) -> WeierstrassCurve {
    match family {
        CurveFamily::ShortW => WeierstrassCurve::ShortW { a, b },
        CurveFamily::E1 => WeierstrassCurve::E1 { c: a, d: b },
        CurveFamily::E2 => WeierstrassCurve::E2 { f: a, g: b },
    }
}

fn method_applies(family: CurveFamily, method: Method) -> bool {
    matches!(
        (family, method),
        (_, Method::BruteForce)
            | (CurveFamily::ShortW, Method::ShortDirect)
            | (CurveFamily::ShortW, Method::E1Shift)
            | (CurveFamily::ShortW, Method::E2Shift)
            | (CurveFamily::E1, Method::E1Form)
            | (CurveFamily::E2, Method::E2Form)
    )
}

fn run_method(
    ev: &Evaluator,
    family: CurveFamily,
    ai: u64,
    bi: u64,
    method: Method,
    brute: i64,
) -> Result<(bool, Option<i64>, bool)> {
    let ctx = ev.field();
    let a = ctx.from_index(ai).unwrap();
    let b = ctx.from_index(bi).unwrap();
    if method == Method::BruteForce {
        return Ok((true, Some(brute), true));
    }
    let report: Option<TraceReport> = match (family, method) {
        (CurveFamily::ShortW, Method::ShortDirect) => {
            if a.is_zero() || b.is_zero() {
                None
            } else {
                Some(trace_short_direct(ev, &a, &b)?)
            }
        }
        (CurveFamily::ShortW, Method::E1Shift) => {
            if a.is_zero() {
                None
            } else {
                Some(trace_via_e1_shift(ev, &a, &b)?)
            }
        }
        (CurveFamily::ShortW, Method::E2Shift) => {
            if b.is_zero() {
                None
            } else {
                Some(trace_via_e2_shift(ev, &a, &b)?)
            }
        }
        (CurveFamily::E1, Method::E1Form) => Some(trace_e1(ev, &a, &b)?),
        (CurveFamily::E2, Method::E2Form) => Some(trace_e2(ev, &a, &b)?),
        _ => None,
    };
    match report {
        None => Ok((false, None, true)),
        Some(rep) if !rep.applicable => Ok((false, None, true)),
        Some(rep) => {
            let decoded_ok = rep.value == Some(brute);
            // second, independent comparison: the undecoded p-adic value must
            // equal the embedded brute-force integer
            let padic_ok = match &rep.aq_padic {
                Some(w) => ev.padic().eq(w, &ev.padic().from_int(brute as i128)),
                None => false,
            };
            Ok((true, rep.value, decoded_ok && padic_ok))
        }
    }
}

struct FieldJobResult {
    records: Vec<SweepRecord>,
    curves: usize,
}

fn sweep_field(
    cfg: &SweepConfig,
    p: u64,
    r: u32,
    summary_seeds: &mut Vec<u64>,
) -> Result<FieldJobResult> {
    let field = FieldCtx::new(p, r)?;
    let padic = match cfg.precision {
        Some(n) => PadicCtx::with_precision(&field, n)?,
        None => PadicCtx::for_field(&field),
    };
    let ev = Evaluator::new(field.clone(), padic);

    let mut jobs: Vec<(CurveFamily, u64, u64)> = Vec::new();
    for &family in &cfg.families {
        let mut curves = enumerate_curves(&field, family);
        if let CurveFilter::Sample { seed, count } = cfg.filter {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            curves.shuffle(&mut rng);
            curves.truncate(count);
            if !summary_seeds.contains(&seed) {
                summary_seeds.push(seed);
            }
        }
        jobs.extend(curves.into_iter().map(|(a, b)| (family, a, b)));
    }

    let methods_for = |family: CurveFamily| -> Vec<Method> {
        if cfg.methods.is_empty() {
            family.default_methods()
        } else {
            cfg.methods
                .iter()
                .copied()
                .filter(|&m| method_applies(family, m))
                .collect()
        }
    };

    let run_one = |&(family, ai, bi): &(CurveFamily, u64, u64)| -> Result<Vec<SweepRecord>> {
        let a = field.from_index(ai).unwrap();
        let b = field.from_index(bi).unwrap();
        let curve = build_curve(family, a, b);
        let brute = trace_bruteforce(&field, &curve)?;
        let mut rows = Vec::new();
        for method in methods_for(family) {
            let start = Instant::now();
            let (applicable, value, matched) = run_method(&ev, family, ai, bi, method, brute)?;
            let micros = if cfg.timing {
                start.elapsed().as_micros() as u64
            } else {
                0
            };
            rows.push(SweepRecord {
                q: field.q(),
                p,
                r,
                a: ai,
                b: bi,
                method: method.label(),
                applicable,
                value,
                brute,
                matched,
                micros,
            });
        }
        Ok(rows)
    };

    let results: Vec<Result<Vec<SweepRecord>>> = match cfg.threads {
        Some(k) if k > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            pool.install(|| jobs.par_iter().map(run_one).collect())
        }
        Some(_) => jobs.iter().map(run_one).collect(),
        None => jobs.par_iter().map(run_one).collect(),
    };

    let mut records = Vec::new();
    let curves = jobs.len();
    for r in results {
        records.extend(r?);
    }
    Ok(FieldJobResult { records, curves })
}

/// Runs the sweep and writes records in the configured format. Returns the
/// summary; the caller decides where to print it (it is never part of the
/// csv/json artifact).
pub fn run_sweep(cfg: &SweepConfig, out: &mut dyn Write) -> Result<SweepSummary> {
    for &p in &cfg.primes {
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        if p <= 3 {
            return Err(Error::InvalidConfig(format!("p = {p} not supported, need p > 3")));
        }
    }
    if cfg.primes.is_empty() || cfg.degrees.is_empty() || cfg.families.is_empty() {
        return Err(Error::InvalidConfig(
            "primes, degrees and families must be nonempty".into(),
        ));
    }

    let mut summary = SweepSummary::default();
    let mut all_records = Vec::new();
    for &p in &cfg.primes {
        for &r in &cfg.degrees {
            let res = sweep_field(cfg, p, r, &mut summary.seeds)?;
            summary.curves += res.curves;
            all_records.extend(res.records);
        }
    }

    for rec in &all_records {
        summary.records += 1;
        let counts = summary.per_method.entry(rec.method).or_default();
        counts.rows += 1;
        if rec.applicable {
            counts.applicable += 1;
        }
        if !rec.matched {
            counts.mismatches += 1;
            summary.mismatches += 1;
        }
        let bound = hasse_bound(rec.q);
        if rec.brute.abs() > bound || rec.value.map_or(false, |v| v.abs() > bound) {
            summary.hasse_violations += 1;
        }
    }

    write_records(cfg, &summary, &all_records, out)?;
    Ok(summary)
}

fn write_records(
    cfg: &SweepConfig,
    summary: &SweepSummary,
    records: &[SweepRecord],
    out: &mut dyn Write,
) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidConfig(format!("write failed: {e}"));
    match cfg.format {
        OutputFormat::Csv => {
            if let CurveFilter::Sample { seed, count } = cfg.filter {
                writeln!(out, "# seed={seed} count={count}").map_err(io)?;
            }
            writeln!(out, "q,p,r,a,b,method,applicable,value,brute,match,micros").map_err(io)?;
            for rec in records {
                let value = rec.value.map_or(String::new(), |v| v.to_string());
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    rec.q,
                    rec.p,
                    rec.r,
                    rec.a,
                    rec.b,
                    rec.method,
                    rec.applicable,
                    value,
                    rec.brute,
                    rec.matched,
                    rec.micros
                )
                .map_err(io)?;
            }
        }
        OutputFormat::Json => {
            if let CurveFilter::Sample { seed, count } = cfg.filter {
                writeln!(out, "{{\"meta\":{{\"seed\":{seed},\"count\":{count}}}}}").map_err(io)?;
            }
            for rec in records {
                let line = serde_json::to_string(rec)
                    .map_err(|e| Error::InvalidConfig(format!("json: {e}")))?;
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        OutputFormat::Text => {
            for rec in records {
                let value = rec.value.map_or("-".into(), |v| v.to_string());
                let verdict = if !rec.applicable {
                    "n/a"
                } else if rec.matched {
                    "ok"
                } else {
                    "MISMATCH"
                };
                let mut line = format!(
                    "q={} a={} b={} {:<13} value={:<4} brute={:<4} {}",
                    rec.q, rec.a, rec.b, rec.method, value, rec.brute, verdict
                );
                if cfg.timing {
                    line.push_str(&format!(" ({} us)", rec.micros));
                }
                writeln!(out, "{line}").map_err(io)?;
            }
            write!(out, "{}", summary.render()).map_err(io)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_matches_direct_count() {
        let ctx = FieldCtx::new(7, 1).unwrap();
        let curves = enumerate_curves(&ctx, CurveFamily::ShortW);
        // q^2 minus the (a, b) with 4a^3 + 27b^2 = 0
        let singular = (0..7u64)
            .flat_map(|a| (0..7u64).map(move |b| (a, b)))
            .filter(|&(a, b)| (4 * a * a * a + 27 * b * b) % 7 == 0)
            .count();
        assert_eq!(curves.len(), 49 - singular);

        let e1 = enumerate_curves(&ctx, CurveFamily::E1);
        let direct = (1..7u64)
            .flat_map(|c| (1..7u64).map(move |d| (c, d)))
            .filter(|&(c, d)| (4 * c * c * c + 27 * d) % 7 != 0)
            .count();
        assert_eq!(e1.len(), direct);

        let e2 = enumerate_curves(&ctx, CurveFamily::E2);
        let direct = (1..7u64)
            .flat_map(|f| (1..7u64).map(move |g| (f, g)))
            .filter(|&(f, g)| (f * f + 28 - 4 * g) % 7 != 0)
            .count();
        assert_eq!(e2.len(), direct);
    }

    #[test]
    fn small_sweep_is_clean_and_deterministic() {
        let cfg = SweepConfig {
            primes: vec![5, 7],
            degrees: vec![1],
            format: OutputFormat::Csv,
            ..Default::default()
        };
        let mut out1 = Vec::new();
        let s1 = run_sweep(&cfg, &mut out1).unwrap();
        assert!(s1.passed(), "{}", s1.render());
        let mut out2 = Vec::new();
        run_sweep(&cfg, &mut out2).unwrap();
        assert_eq!(out1, out2, "csv artifact must be byte-identical");
        let text = String::from_utf8(out1).unwrap();
        assert!(text.starts_with("q,p,r,a,b,method,applicable,value,brute,match,micros\n"));
    }

    #[test]
    fn sampled_sweep_reproducible() {
        let cfg = SweepConfig {
            primes: vec![5],
            degrees: vec![2],
            families: vec![CurveFamily::ShortW],
            filter: CurveFilter::Sample { seed: 9, count: 20 },
            format: OutputFormat::Json,
            ..Default::default()
        };
        let mut out1 = Vec::new();
        let s = run_sweep(&cfg, &mut out1).unwrap();
        assert!(s.passed(), "{}", s.render());
        assert_eq!(s.curves, 20);
        assert_eq!(s.seeds, vec![9]);
        let mut out2 = Vec::new();
        run_sweep(&cfg, &mut out2).unwrap();
        assert_eq!(out1, out2);
        let text = String::from_utf8(out1).unwrap();
        assert!(text.starts_with("{\"meta\":{\"seed\":9,\"count\":20}}\n"));
    }

    #[test]
    fn config_validation() {
        let cfg = SweepConfig { primes: vec![4], ..Default::default() };
        assert!(matches!(
            run_sweep(&cfg, &mut Vec::new()).unwrap_err(),
            Error::InvalidConfig(_)
        ));
        let cfg = SweepConfig { primes: vec![3], ..Default::default() };
        assert!(matches!(
            run_sweep(&cfg, &mut Vec::new()).unwrap_err(),
            Error::InvalidConfig(_)
        ));
        let cfg = SweepConfig { primes: vec![], ..Default::default() };
        assert!(matches!(
            run_sweep(&cfg, &mut Vec::new()).unwrap_err(),
            Error::InvalidConfig(_)
        ));
    }

    #[test]
    fn thread_count_does_not_change_artifact() {
        let base = SweepConfig {
            primes: vec![5],
            degrees: vec![1],
            format: OutputFormat::Csv,
            ..Default::default()
        };
        let mut seq = Vec::new();
        run_sweep(&SweepConfig { threads: Some(1), ..base.clone() }, &mut seq).unwrap();
        let mut par = Vec::new();
        run_sweep(&SweepConfig { threads: Some(3), ..base.clone() }, &mut par).unwrap();
        assert_eq!(seq, par);
    }
}
