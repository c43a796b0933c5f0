use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use markoff_core::arith::{
    abbreviate_decimal, factorize, parse_primorial_expr, render_primorial, FactorPolicy,
    Factorization,
};
use markoff_core::connectivity::{
    algorithm1_sweep, algorithm1_sweep_exact, certify_failure_one_side, reduced_adjacent_primes,
    test_prime, Combine, Mode, Outcome, TestOptions, Verdict,
};
use markoff_core::divisors::tau;
use markoff_core::markoff::{
    build_graph, count_from_orders, fibonacci_orbit, orbit_orders_with, orbit_seed,
    trace_order_table, Field,
};
use markoff_core::reduction::{count_reduced, for_each_reduced_between};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Map, Value};

use crate::table::{run_table_with, SampleMode, SampleResult, TableRequest, RNG_ALGORITHM};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "markoff", version, about = "Connectivity checks for Markoff graphs mod p")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Factor cache file (one `n = p^a * ...` per line). Defaults to $MARKOFF_CACHE.
    #[arg(long, global = true)]
    factors: Option<PathBuf>,
    /// Write JSON lines here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the divisor test on one prime.
    TestPrime {
        #[arg(value_parser = parse_big)]
        p: BigUint,
        #[arg(long, value_enum, default_value_t = ModeArg::Md)]
        mode: ModeArg,
        /// Take `M_d` as the union of the per-`k` maximal sets instead of the sum.
        #[arg(long)]
        md_union: bool,
        /// Exit with status 1 unless the outcome is Connected.
        #[arg(long)]
        expect_connected: bool,
    },
    /// Sweep reduced numbers and print the certified lower end `a`.
    Sweep {
        #[arg(long, value_parser = parse_big)]
        from: BigUint,
        #[arg(long, value_parser = parse_big)]
        to: BigUint,
        /// Decide every reduced number in exact arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Count (or list) reduced numbers in `[from, to]`.
    Reduced {
        #[arg(long, value_parser = parse_big, default_value = "1")]
        from: BigUint,
        #[arg(long, value_parser = parse_big)]
        to: BigUint,
        #[arg(long)]
        list: bool,
    },
    /// Build Markoff graphs mod p by exhaustive search.
    Bruteforce {
        /// A single prime; omit to use --up-to.
        p: Option<u64>,
        /// Every prime 3 < p <= this bound.
        #[arg(long)]
        up_to: Option<u64>,
    },
    /// Reproduce one row (or a range of rows) of the certified-share table.
    Table {
        #[arg(long)]
        n: u32,
        /// Last exponent of the range; defaults to --n.
        #[arg(long)]
        n_to: Option<u32>,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long, value_enum, default_value_t = SampleArg::Consecutive)]
        mode: SampleArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print one record per sampled prime as well.
        #[arg(long)]
        per_prime: bool,
    },
    /// Find a failure certificate that needs only one side factored.
    CertifyOneSide {
        /// The prime; omit to use --census-to.
        #[arg(value_parser = parse_big)]
        p: Option<BigUint>,
        /// `-` for p - 1, `+` for p + 1.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_side, default_value = "-")]
        side: i8,
        /// Run over every prime below this bound adjacent to a reduced number.
        #[arg(long, value_parser = parse_big)]
        census_to: Option<BigUint>,
        /// Miller-Rabin rounds for the census.
        #[arg(long, default_value_t = 16)]
        rounds: usize,
    },
    /// Check the orbit class-count bound for all small primes.
    CorvajaCheck {
        #[arg(long, default_value_t = 199)]
        p_max: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Walk (3, 3F_{2n-1}, 3F_{2n+1}) mod p looking for a full-order coordinate.
    FibOrbit {
        /// A single prime; omit to use --count.
        p: Option<u64>,
        /// The first this many primes above 3.
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Evaluate an expression such as `863#*53#*3^3*2^5+1`.
    ParseExpr { expr: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Md,
    Td,
}


#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleArg {
    Consecutive,
    Random,
}

fn usage(msg: &str) -> markoff_core::Error {
    markoff_core::Error::PreconditionViolated(msg.into())
}

fn parse_side(s: &str) -> Result<i8, String> {
    match s {
        "-" | "-1" => Ok(-1),
        "+" | "+1" | "1" => Ok(1),
        _ => Err(format!("expected + or -, got {s:?}")),
    }
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    parse_primorial_expr(s).map_err(|e| e.to_string())
}

/// JSON-lines writer that stamps every record with the run context.
struct Sink {
    out: Box<dyn Write>,
    base: Map<String, Value>,
}

impl Sink {
    fn emit(&mut self, kind: &str, fields: Value) -> anyhow::Result<()> {
        let mut rec = Map::new();
        rec.insert("record".into(), kind.into());
        rec.extend(self.base.clone());
        if let Value::Object(f) = fields {
            rec.extend(f);
        }
        writeln!(self.out, "{}", Value::Object(rec))?;
        Ok(())
    }
}

fn policy_json(policy: &FactorPolicy) -> Value {
    json!({
        "trial_division_bound": policy.trial_division_bound,
        "pollard_rho_budget": policy.pollard_rho_budget,
        "allow_probable_primes": policy.allow_probable_primes,
        "cache": policy.cache_path.as_ref().map(|p| p.display().to_string()),
    })
}

/// Decimal when short; otherwise abbreviated decimal plus an expression.
fn big_json(n: &BigUint, f: Option<&Factorization>) -> Value {
    big_json_expr(n, f.map(render_primorial))
}

fn big_json_expr(n: &BigUint, expr: Option<String>) -> Value {
    let s = n.to_string();
    if s.len() <= 40 {
        return Value::String(s);
    }
    json!({
        "decimal": abbreviate_decimal(n, 12),
        "digits": s.len(),
        "expr": expr,
    })
}

/// Runs the command line and returns the process exit status.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            use markoff_core::Error as E;
            match e.downcast_ref::<E>() {
                Some(E::Parse { .. } | E::PreconditionViolated(_) | E::DomainMismatch(_)) => 2,
                _ => 1,
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let cache = cli
        .common
        .factors
        .clone()
        .or_else(|| std::env::var_os("MARKOFF_CACHE").map(PathBuf::from));
    let mut policy = FactorPolicy::default();
    if let Some(path) = cache {
        if path.exists() {
            policy = policy
                .with_cache_file(&path)
                .with_context(|| format!("loading {}", path.display()))?;
        }
    }
    let out: Box<dyn Write> = match &cli.common.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let mut base = Map::new();
    base.insert("version".into(), VERSION.into());
    base.insert("policy".into(), policy_json(&policy));
    base.insert("mode".into(), Value::Null);
    base.insert("seed".into(), Value::Null);
    let mut sink = Sink { out, base };
    let code = dispatch(cli.command, &policy, &mut sink)?;
    sink.out.flush()?;
    Ok(code)
}

fn dispatch(cmd: Command, policy: &FactorPolicy, sink: &mut Sink) -> anyhow::Result<i32> {
    match cmd {
        Command::ParseExpr { expr } => {
            let v = parse_primorial_expr(&expr)?;
            writeln!(sink.out, "{v}")?;
            Ok(0)
        }
        Command::TestPrime {
            p,
            mode,
            md_union,
            expect_connected,
        } => {
            let opts = TestOptions {
                mode: match mode {
                    ModeArg::Md => Mode::Md,
                    ModeArg::Td => Mode::Td,
                },
                combine: if md_union {
                    Combine::Union
                } else {
                    Combine::Sum
                },
                ..TestOptions::default()
            };
            if p < BigUint::from(3u32) {
                bail!(markoff_core::Error::PreconditionViolated(
                    "p must be an odd prime".into()
                ));
            }
            let start = Instant::now();
            let fm = factorize(&(&p - 1u32), policy)?;
            let fp = factorize(&(&p + 1u32), policy)?;
            let v = test_prime(&p, &fm, &fp, &opts)?;
            let mut rec = verdict_json(&v, &fm, &fp);
            rec["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            sink.emit("test-prime", rec)?;
            Ok(if expect_connected && v.outcome != Outcome::Connected {
                1
            } else {
                0
            })
        }
        Command::Sweep { from, to, exact } => {
            let s = if exact {
                algorithm1_sweep_exact(&from, &to)
            } else {
                algorithm1_sweep(&from, &to)
            };
            let largest = s
                .stats
                .largest_failing
                .as_ref()
                .map(|e| Factorization::from_exponents(e));
            let a_expr = match &largest {
                Some(f) if f.value() + 1u32 == s.a => format!("{}+1", render_primorial(f)),
                _ => s.a.to_string(),
            };
            sink.emit(
                "sweep",
                json!({
                    "mode": if exact { "exact" } else { "fast" },
                    "from": big_json(&from, None),
                    "to": big_json(&to, None),
                    "a": big_json_expr(&s.a, Some(a_expr.clone())),
                    "a_expr": a_expr,
                    "examined": s.stats.examined,
                    "failing": s.stats.failing,
                    "exact_fallbacks": s.stats.exact_fallbacks,
                    "largest_failing": largest.as_ref().map(render_primorial),
                }),
            )?;
            Ok(0)
        }
        Command::Reduced { from, to, list } => {
            if list {
                let mut all = Vec::new();
                for_each_reduced_between(&from, &to, |r| all.push(r));
                all.sort_by(|a, b| a.value().cmp(b.value()));
                for r in &all {
                    sink.emit(
                        "reduced",
                        json!({"n": big_json(r.value(), Some(&r.factorization)),
                               "exponents": r.exponents,
                               "expr": render_primorial(&r.factorization)}),
                    )?;
                }
            }
            let below = if from > BigUint::from(1u32) {
                count_reduced(&(&from - 1u32))
            } else {
                0
            };
            sink.emit(
                "reduced-count",
                json!({"from": big_json(&from, None), "to": big_json(&to, None),
                       "count": count_reduced(&to) - below}),
            )?;
            Ok(0)
        }
        Command::Bruteforce { p, up_to } => {
            let primes: Vec<u64> = match (p, up_to) {
                (Some(p), _) => vec![p],
                (None, Some(n)) => markoff_core::arith::primes_up_to(n)
                    .into_iter()
                    .filter(|&p| p > 3)
                    .collect(),
                (None, None) => bail!(usage("give a prime or --up-to")),
            };
            let mut all_ok = true;
            for p in primes {
                let g = build_graph(p)?;
                let divisible = g.sizes_divisible_by_p();
                let negation = g.negation_closed();
                let outside = g.outside_largest();
                let ok = p <= 3 || (divisible && negation && outside % (4 * p) == 0);
                all_ok &= ok;
                sink.emit(
                    "bruteforce",
                    json!({"p": p, "vertices": g.vertex_count(),
                           "components": g.component_count(),
                           "component_sizes": g.component_sizes(),
                           "sizes_divisible_by_p": divisible,
                           "negation_closed": negation,
                           "outside_largest": outside,
                           "outside_divisible_by_4p": outside % (4 * p) == 0}),
                )?;
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Table {
            n,
            n_to,
            m,
            mode,
            seed,
            per_prime,
        } => {
            if m == 0 {
                bail!(usage("--m must be at least 1"));
            }
            let mode = match mode {
                SampleArg::Consecutive => SampleMode::Consecutive,
                SampleArg::Random => SampleMode::Random,
            };
            for n in n..=n_to.unwrap_or(n) {
                let req = TableRequest { n, m, mode, seed };
                let mut lines = Vec::new();
                let row = run_table_with(&req, policy, |i, p, r| {
                    if per_prime {
                        lines.push(sample_json(i, p, r));
                    }
                });
                let ctx = json!({"mode": mode.as_str(), "seed": seed, "rng": RNG_ALGORITHM});
                for l in lines {
                    let mut v = ctx.clone();
                    v.as_object_mut().expect("object").extend(l.as_object().cloned().expect("object"));
                    sink.emit("table-prime", v)?;
                }
                let mut v = ctx;
                v.as_object_mut().expect("object").extend(
                    json!({"n": row.n, "m": m, "tested": row.tested,
                           "connected_count": row.connected_count,
                           "percentage": row.percentage,
                           "excluded_unfactorable": row.excluded_unfactorable,
                           "test_mode": "Md"})
                    .as_object()
                    .cloned()
                    .expect("object"),
                );
                sink.emit("table-row", v)?;
            }
            Ok(0)
        }
        Command::CertifyOneSide {
            p,
            side,
            census_to,
            rounds,
        } => {
            match (p, census_to) {
                (Some(p), _) => {
                    let n = if side < 0 { &p - 1u32 } else { &p + 1u32 };
                    let f = factorize(&n, policy)?;
                    let w = certify_failure_one_side(&p, side, &f)?;
                    sink.emit("one-side", one_side_json(&p, side, &f, w.as_ref()))?;
                    Ok(if w.is_some() { 0 } else { 1 })
                }
                (None, Some(limit)) => {
                    let primes = reduced_adjacent_primes(&limit, rounds);
                    let mut certified = 0usize;
                    let mut failures = 0usize;
                    for ap in &primes {
                        let (side, r) = &ap.sides[0];
                        let w = certify_failure_one_side(&ap.p, *side, &r.factorization)?;
                        if w.is_some() {
                            certified += 1;
                        } else {
                            failures += 1;
                        }
                        sink.emit(
                            "one-side",
                            one_side_json(&ap.p, *side, &r.factorization, w.as_ref()),
                        )?;
                    }
                    sink.emit(
                        "one-side-census",
                        json!({"limit": big_json(&limit, None), "rounds": rounds,
                               "primes": primes.len(), "certified": certified,
                               "uncertified": failures}),
                    )?;
                    Ok(if failures == 0 { 0 } else { 1 })
                }
                (None, None) => bail!(usage("give a prime or --census-to")),
            }
        }
        Command::CorvajaCheck {
            p_max,
            samples,
            seed,
        } => {
            let s = corvaja_sweep(p_max, samples, seed)?;
            sink.emit(
                "corvaja-check",
                json!({"p_max": p_max, "samples": samples, "seed": seed, "rng": "chacha20",
                       "checks": s.checks, "violations": s.violations,
                       "degenerate": s.degenerate, "max_ratio": s.max_ratio}),
            )?;
            Ok(if s.violations == 0 { 0 } else { 1 })
        }
        Command::FibOrbit { p, count } => {
            let primes: Vec<u64> = match p {
                Some(p) => vec![p],
                None => markoff_core::arith::first_primes(count + 2)
                    .into_iter()
                    .filter(|&p| p > 3)
                    .take(count)
                    .collect(),
            };
            let mut misses = 0;
            for &p in &primes {
                let o = fibonacci_orbit(&Field::new(p)?)?;
                if o.first_hit.is_none() {
                    misses += 1;
                }
                if primes.len() == 1 || o.first_hit.is_none() {
                    sink.emit(
                        "fib-orbit",
                        json!({"p": p, "period": o.period, "first_hit": o.first_hit}),
                    )?;
                }
            }
            if primes.len() > 1 {
                sink.emit(
                    "fib-orbit-summary",
                    json!({"primes": primes.len(), "largest": primes.last(), "misses": misses}),
                )?;
            }
            Ok(if misses == 0 { 0 } else { 1 })
        }
    }
}

fn verdict_json(v: &Verdict, fm: &Factorization, fp: &Factorization) -> Value {
    let mw = v.max_witness().map(|w| {
        let m = w.count as f64;
        let p = v.p.to_f64().unwrap_or(f64::INFINITY);
        json!({"d": w.d.to_string(), "side": w.side, "interval": w.interval, "count": w.count,
               "lower": 2.0 * (2.0 * p).sqrt() / m, "upper": 81.0 * m.powi(3) / 4.0})
    });
    json!({
        "p": big_json(&v.p, None),
        "mode": format!("{:?}", v.mode),
        "combine": format!("{:?}", v.combine).to_lowercase(),
        "outcome": format!("{:?}", v.outcome),
        "p_minus_1": render_primorial(fm),
        "p_plus_1": render_primorial(fp),
        "tau_minus": tau(fm).to_string(),
        "tau_plus": tau(fp).to_string(),
        "failing_count": v.failing_count(),
        "max_Md": v.max_count,
        "max_witness": mw,
        "witnesses": v.witnesses.iter().map(|w| json!({"d": w.d.to_string(), "side": w.side,
            "interval": w.interval, "count": w.count})).collect::<Vec<_>>(),
        "endgame": v.endgame.iter().map(|e| json!({"side": e.side, "value": e.value})).collect::<Vec<_>>(),
        "second_interval_skipped": v.second_interval_skipped,
    })
}

fn sample_json(i: usize, p: &BigUint, r: &SampleResult) -> Value {
    match r {
        SampleResult::Tested(v) => json!({"index": i, "p": p.to_string(),
            "outcome": format!("{:?}", v.outcome), "failing_count": v.failing_count(),
            "max_Md": v.max_count}),
        SampleResult::Excluded(e) => json!({"index": i, "p": p.to_string(),
            "outcome": "Excluded", "reason": e.to_string()}),
    }
}

fn one_side_json(
    p: &BigUint,
    side: i8,
    f: &Factorization,
    w: Option<&markoff_core::connectivity::OneSideWitness>,
) -> Value {
    json!({
        "p": big_json(p, None),
        "side": side,
        "factored": render_primorial(f),
        "witness": w.map(|w| json!({"d": big_json(&w.d, None), "count": w.count.to_string(),
                                     "exact": w.exact, "verified": w.holds(p)})),
    })
}

/// Totals from [`corvaja_sweep`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorvajaSummary {
    pub checks: u64,
    pub violations: u64,
    /// `(r, s)` pairs skipped: `r + 1/r = 0`, or no orbit stays in `F_p`.
    pub degenerate: u64,
    pub max_ratio: f64,
}

/// Every odd prime `p <= p_max`, every `r` of order above 2 with `r + 1/r`
/// in `F_p`, `samples` seeded orbits each, and every `d | p +- 1`.
pub fn corvaja_sweep(p_max: u64, samples: usize, seed: u64) -> anyhow::Result<CorvajaSummary> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut s = CorvajaSummary::default();
    for p in markoff_core::arith::primes_up_to(p_max).into_iter().skip(1) {
        let f = Field::new(p)?;
        let table = trace_order_table(&f);
        let ds: Vec<u64> = (1..=p + 1)
            .filter(|d| (p - 1) % d == 0 || (p + 1) % d == 0)
            .collect();
        let mut rs = Vec::new();
        for a in 0..p {
            let r = f.root_of_trace(a);
            rs.push(r);
            rs.push(f.inv2(r).expect("unit"));
        }
        rs.sort_by_key(|r| (r.u, r.v));
        rs.dedup();
        for r in rs {
            if f.order(r).expect("unit") <= 2 {
                continue;
            }
            for _ in 0..samples {
                let seed_s = (0..4 * p).find_map(|_| orbit_seed(&f, r, rng.gen_range(0..p)));
                let Some(sv) = seed_s else {
                    s.degenerate += 1;
                    continue;
                };
                let Ok((t, orders)) = orbit_orders_with(&f, r, sv, |y| table[y as usize]) else {
                    s.degenerate += 1;
                    continue;
                };
                for &d in &ds {
                    let c = count_from_orders(&f, t, &orders, d)?;
                    s.checks += 1;
                    s.max_ratio = s.max_ratio.max(c.count as f64 / c.bound);
                    if !c.holds() {
                        s.violations += 1;
                    }
                }
            }
        }
    }
    Ok(s)
}
