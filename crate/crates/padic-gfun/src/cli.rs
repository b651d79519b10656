//! Command-line surface. One thin binary with four subcommands:
//!
//! - `trace`: single-curve inspection, every applicable formula against the
//!   brute-force count;
//! - `sweep`: bulk verification with csv / json / text artifacts;
//! - `gfun`: raw nGn evaluation;
//! - `verify`: the identity suites (floor lemmas, gamma identities,
//!   cyclotomic oracle, G-transformation relations).
//!
//! Exit codes: 0 all checks agree, 1 a verification mismatch (or exhausted
//! precision), 2 usage or input errors.

use std::fs::File;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::finite_field::{trace_bruteforce, FieldCtx, FqElem, WeierstrassCurve};
use crate::gfunction::{Evaluator, GArgs};
use crate::padic::{PadicCtx, Rat};
use crate::sweep::{
    default_sweep_profile, run_sweep, CurveFamily, CurveFilter, OutputFormat, SweepConfig,
    SweepSummary,
};
use crate::trace_formulas::{
    padic_to_hasse_integer, trace_e1, trace_e2, trace_short_direct, trace_via_e1_shift,
    trace_via_e2_shift, TraceReport,
};
use crate::verify::{
    floor_lemma_suite, gamma_identity_suite, odd_primes_upto, oracle_suite, prime_powers_upto,
    shift_relation_exhaustive, shift_relation_sampled, SuiteReport,
};

#[derive(Parser)]
#[command(
    name = "padic-gfun",
    about = "Traces of Frobenius of elliptic curves via p-adic hypergeometric G-values, with exact verification",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the trace of Frobenius of one curve by every applicable method
    Trace(TraceArgs),
    /// Verify formulas against brute force over many curves, emitting records
    Sweep(SweepArgs),
    /// Evaluate the nGn function at explicit parameters
    Gfun(GfunArgs),
    /// Run identity verification suites
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TraceArgs {
    /// Field characteristic (prime > 3)
    #[arg(long)]
    p: u64,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// First curve coefficient (a for y^2=x^3+ax+b; c / f for the e1 / e2
    /// forms). Integer for r = 1, element index for r > 1.
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    /// Second curve coefficient (b, d or g)
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    /// Curve shape
    #[arg(long, value_enum, default_value_t = FormArg::Short)]
    form: FormArg,
    /// Override the relative p-adic precision
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Short,
    E1,
    E2,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated primes (default: the built-in profile)
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Comma-separated extension degrees
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<u32>>,
    /// Curve families: short, e1, e2
    #[arg(long, value_delimiter = ',')]
    families: Option<Vec<FamilyArg>>,
    /// Sample this many curves per family instead of enumerating all
    #[arg(long)]
    sample: Option<usize>,
    /// Seed for sampled sweeps
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write records to a file instead of stdout
    #[arg(long)]
    output: Option<String>,
    /// Override the relative p-adic precision
    #[arg(long)]
    precision: Option<u32>,
    /// Worker threads for curve evaluation
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall-clock micros per record (makes artifacts non-reproducible)
    #[arg(long, default_value_t = false)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Short,
    E1,
    E2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct GfunArgs {
    /// Upper parameters, comma-separated rationals like 1/4,3/4
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    upper: Vec<String>,
    /// Lower parameters
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lower: Vec<String>,
    /// Argument t (integer for r = 1, element index for r > 1)
    #[arg(long, allow_hyphen_values = true)]
    t: i64,
    /// Field characteristic
    #[arg(long)]
    p: u64,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Override the relative p-adic precision
    #[arg(long, short = 'N')]
    precision: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run
    #[arg(value_enum)]
    suite: SuiteArg,
    /// Bound on q (suite-specific default)
    #[arg(long)]
    qmax: Option<u64>,
    /// Seed for sampled portions
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sample size for prime-power fields
    #[arg(long, default_value_t = 500)]
    sample: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Gamma,
    Oracle,
    Corollary,
    All,
}

/// Entry point: parses std::env args, runs, returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::PrecisionExhausted { .. } | Error::NoHasseInteger => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Trace(args) => cmd_trace(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Gfun(args) => cmd_gfun(args),
        Cmd::Verify(args) => cmd_verify(args),
    }
}

fn element_from_cli(ctx: &FieldCtx, v: i64) -> Result<FqElem> {
    if ctx.r() == 1 {
        Ok(ctx.from_int(v))
    } else {
        let idx = u64::try_from(v)
            .map_err(|_| Error::BadInput(format!("element index {v} must be nonnegative")))?;
        ctx.from_index(idx)
    }
}

fn cmd_trace(args: TraceArgs) -> Result<i32> {
    let field = FieldCtx::new(args.p, args.r)?;
    let padic = match args.precision {
        Some(n) => PadicCtx::with_precision(&field, n)?,
        None => PadicCtx::for_field(&field),
    };
    let ev = Evaluator::new(field.clone(), padic);
    let a = element_from_cli(&field, args.a)?;
    let b = element_from_cli(&field, args.b)?;

    let curve = match args.form {
        FormArg::Short => WeierstrassCurve::ShortW { a: a.clone(), b: b.clone() },
        FormArg::E1 => WeierstrassCurve::E1 { c: a.clone(), d: b.clone() },
        FormArg::E2 => WeierstrassCurve::E2 { f: a.clone(), g: b.clone() },
    };
    curve.validate(&field)?;
    println!("curve: {}", curve.describe(&field));
    if let WeierstrassCurve::ShortW { a, b } = &curve {
        println!("j-invariant: {}", field.j_invariant(a, b)?);
    }
    let brute = trace_bruteforce(&field, &curve)?;
    println!("brute force: a_q = {brute}");

    let reports: Vec<TraceReport> = match args.form {
        FormArg::Short => {
            let mut reps = Vec::new();
            if !a.is_zero() && !b.is_zero() {
                reps.push(trace_short_direct(&ev, &a, &b)?);
            } else {
                println!(
                    "short-direct: not applicable (j = {})",
                    if a.is_zero() { "0" } else { "1728" }
                );
            }
            if !a.is_zero() {
                reps.push(trace_via_e1_shift(&ev, &a, &b)?);
            } else {
                println!("e1-shift: not applicable (j = 0)");
            }
            if !b.is_zero() {
                reps.push(trace_via_e2_shift(&ev, &a, &b)?);
            } else {
                println!("e2-shift: not applicable (j = 1728)");
            }
            reps
        }
        FormArg::E1 => vec![trace_e1(&ev, &a, &b)?],
        FormArg::E2 => vec![trace_e2(&ev, &a, &b)?],
    };

    let mut all_agree = true;
    for rep in &reports {
        if !rep.applicable {
            println!("{}: not applicable ({})", rep.method, rep.details);
            continue;
        }
        let value = rep.value.expect("applicable report has a value");
        let agree = value == brute;
        all_agree &= agree;
        let gरender = rep
            .gvalue
            .as_ref()
            .map(|g| ev.padic().render(&g.value))
            .unwrap_or_default();
        println!(
            "{}: a_q = {value} [{}] G = {} -> {}",
            rep.method,
            rep.details,
            gरender,
            if agree { "agrees" } else { "MISMATCH" }
        );
    }
    Ok(if all_agree { 0 } else { 1 })
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let format = match args.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    let scope_given = args.primes.is_some() || args.degrees.is_some() || args.families.is_some()
        || args.sample.is_some();

    let configs = if scope_given {
        let families = args
            .families
            .map(|fs| {
                fs.into_iter()
                    .map(|f| match f {
                        FamilyArg::Short => CurveFamily::ShortW,
                        FamilyArg::E1 => CurveFamily::E1,
                        FamilyArg::E2 => CurveFamily::E2,
                    })
                    .collect::<Vec<_>>()
            })
            .unwrap_or_else(|| vec![CurveFamily::ShortW, CurveFamily::E1, CurveFamily::E2]);
        vec![SweepConfig {
            primes: args.primes.unwrap_or_else(|| vec![5, 7, 11, 13, 17, 19, 23]),
            degrees: args.degrees.unwrap_or_else(|| vec![1]),
            families,
            filter: match args.sample {
                Some(count) => CurveFilter::Sample { seed: args.seed, count },
                None => CurveFilter::All,
            },
            precision: args.precision,
            methods: Vec::new(),
            format,
            threads: args.threads,
            timing: args.timing,
        }]
    } else {
        let mut profile = default_sweep_profile(format, args.timing);
        for cfg in &mut profile {
            cfg.precision = args.precision;
            cfg.threads = args.threads;
        }
        profile
    };

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| Error::InvalidConfig(format!("cannot create {path}: {e}")))?,
        ),
        None => Box::new(std::io::stdout()),
    };

    let mut total = SweepSummary::default();
    for cfg in &configs {
        let summary = run_sweep(cfg, &mut out)?;
        total.merge(summary);
    }
    drop(out);

    // Summary goes to stderr when the artifact occupies stdout, so csv/json
    // stay clean.
    if args.output.is_none() && format != OutputFormat::Text {
        eprint!("{}", total.render());
    } else if args.output.is_some() {
        print!("{}", total.render());
    }
    Ok(if total.passed() { 0 } else { 1 })
}

fn parse_rats(items: &[String]) -> Result<Vec<Rat>> {
    items
        .iter()
        .map(|s| {
            Rat::from_str(s.trim())
                .map_err(|e| Error::BadInput(format!("cannot parse rational '{s}': {e}")))
        })
        .collect()
}

fn cmd_gfun(args: GfunArgs) -> Result<i32> {
    let field = FieldCtx::new(args.p, args.r)?;
    let padic = match args.precision {
        Some(n) => PadicCtx::with_precision(&field, n)?,
        None => PadicCtx::for_field(&field),
    };
    let ev = Evaluator::new(field.clone(), padic.clone());
    let upper = parse_rats(&args.upper)?;
    let lower = parse_rats(&args.lower)?;
    let t = element_from_cli(&field, args.t)?;
    let g = ev.evaluate(&GArgs::new(upper, lower, t))?;

    println!("G = {}", padic.render(&g.value));
    if let (Some(val), Some(coeffs), Some(prec)) =
        (g.value.valuation(), g.value.unit_coeffs(), g.value.precision())
    {
        if field.r() == 1 {
            let mut digits = Vec::new();
            let mut m = coeffs[0];
            for _ in 0..prec {
                digits.push(m % field.p());
                m /= field.p();
            }
            println!("mantissa digits (low to high): {digits:?}");
        }
        if val >= -(field.r() as i64) {
            let q_big = padic.from_int(field.q() as i128);
            let scaled = padic.mul(&g.value, &q_big);
            if let Some(z) = padic_to_hasse_integer(&padic, &scaled, field.q()) {
                println!("q*G = {z} (integer in the Hasse window); G = {z}/{}", field.q());
            }
        }
    } else {
        println!("exact zero");
    }
    Ok(0)
}

fn report_suite(rep: &SuiteReport) -> bool {
    if rep.passed() {
        println!("{}: {} checks, all pass", rep.name, rep.checked);
        true
    } else {
        println!(
            "{}: {} checks, {} FAILURES",
            rep.name,
            rep.checked,
            rep.failures.len()
        );
        for f in rep.failures.iter().take(20) {
            println!("  FAIL {f}");
        }
        false
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let mut ok = true;
    let run_lemmas = matches!(args.suite, SuiteArg::Lemmas | SuiteArg::All);
    let run_gamma = matches!(args.suite, SuiteArg::Gamma | SuiteArg::All);
    let run_oracle = matches!(args.suite, SuiteArg::Oracle | SuiteArg::All);
    let run_corollary = matches!(args.suite, SuiteArg::Corollary | SuiteArg::All);

    if run_lemmas {
        let rep = floor_lemma_suite(args.qmax.unwrap_or(2197))?;
        ok &= report_suite(&rep);
    }
    if run_gamma {
        let qmax = args.qmax.unwrap_or(49);
        let mut rep = gamma_identity_suite(qmax, 0)?;
        rep.merge(gamma_identity_suite(qmax, 2)?);
        ok &= report_suite(&rep);
    }
    if run_oracle {
        let qmax = args.qmax.unwrap_or(13);
        let qs: Vec<(u64, u32)> = prime_powers_upto(qmax);
        let rep = oracle_suite(&qs)?;
        ok &= report_suite(&rep);
    }
    if run_corollary {
        let qmax = args.qmax.unwrap_or(49);
        let mut rep = SuiteReport { name: "shift-relations".into(), ..Default::default() };
        for p in odd_primes_upto(qmax.min(23)) {
            rep.merge(shift_relation_exhaustive(p, 1)?);
        }
        for (p, r) in [(5u64, 2u32), (7, 2)] {
            if p.pow(r) as u64 <= qmax {
                rep.merge(shift_relation_sampled(p, r, args.sample, args.seed)?);
            }
        }
        ok &= report_suite(&rep);
    }
    Ok(if ok { 0 } else { 1 })
}
