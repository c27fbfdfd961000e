use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use knomial_core::{
    chain_bound, refine_root, verify_isolation, IsolatedRoot, Isolation, Isolator, RefineOutcome, RefineState, Sign,
    SparsePolynomial, Stats,
};
use serde::Serialize;

use crate::corpus::{self, CorpusShape};
use crate::format::{self, ReportJson, RootJson, RootsJson, StatsJson};
use crate::CliError;

/// Largest accepted `--width-bits`.
pub const MAX_WIDTH_BITS: u64 = 1 << 32;

/// Width used by `verify` and `bench` when none is given.
const CHECK_WIDTH_BITS: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Expr(String),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Isolate,
    Refine { interval: String },
    Verify,
    Bench,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<Input>,
    pub width_bits: Option<u64>,
    pub positive_only: bool,
    pub json: bool,
    pub stats: bool,
    pub seed: u64,
    pub count: Option<usize>,
    /// Print the intervals handed to refinement on stderr.
    pub verbose: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            width_bits: None,
            positive_only: false,
            json: false,
            stats: false,
            seed: 1,
            count: None,
            verbose: false,
        }
    }

    fn polynomial(&self) -> Result<Option<SparsePolynomial>, CliError> {
        let text = match &self.input {
            None => return Ok(None),
            Some(Input::Expr(s)) => s.clone(),
            Some(Input::File(path)) => std::fs::read_to_string(path)?,
        };
        format::parse_polynomial(&text).map(Some)
    }

    fn require_polynomial(&self) -> Result<SparsePolynomial, CliError> {
        self.polynomial()?.ok_or_else(|| CliError::Usage("an input polynomial is required (--expr or --file)".into()))
    }
}

pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if let Some(b) = cfg.width_bits {
        if b == 0 || b > MAX_WIDTH_BITS {
            return Err(CliError::Usage(format!("--width-bits must be in 1..={MAX_WIDTH_BITS}")));
        }
    }
    match &cfg.command {
        Command::Isolate => isolate(cfg, out, err),
        Command::Refine { interval } => refine(cfg, interval, out),
        Command::Verify => verify(cfg, out),
        Command::Bench => bench(cfg, out),
    }
}

fn isolate_with(iso: &Isolator, p: &SparsePolynomial, positive_only: bool, stats: &mut Stats) -> Result<Isolation, CliError> {
    let mut all = iso.run(p, stats)?;
    if positive_only {
        all.roots.retain(|r| r.interval.lo.sign() == Sign::Positive);
    }
    Ok(all)
}

fn emit_roots(cfg: &RunConfig, roots: Vec<RootJson>, stats: &Stats, out: &mut dyn Write) -> Result<(), CliError> {
    let doc = RootsJson { roots, stats: StatsJson::from(stats) };
    if cfg.json {
        writeln!(out, "{}", serde_json::to_string(&doc).expect("serializable"))?;
        return Ok(());
    }
    write!(out, "{}", format::roots_text(&doc.roots))?;
    if cfg.stats {
        write!(out, "{}", format::stats_text(&doc.stats))?;
    }
    Ok(())
}

fn isolate(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let p = cfg.require_polynomial()?;
    let mut iso = Isolator::new().record_refine_inputs(cfg.verbose);
    if let Some(b) = cfg.width_bits {
        iso = iso.target_bits(b);
    }
    let mut stats = Stats::default();
    let res = if cfg.positive_only && !cfg.verbose {
        let (q, _) = p.strip_power()?;
        Isolation { roots: iso.isolate_positive(&q, &mut stats)?, refine_inputs: Vec::new() }
    } else {
        isolate_with(&iso, &p, cfg.positive_only, &mut stats)?
    };
    for r in &res.refine_inputs {
        writeln!(err, "refine level {}: ({}, {}) for {}", r.level, r.state.a, r.state.b, r.poly)?;
    }
    emit_roots(cfg, res.roots.iter().map(RootJson::from).collect(), &stats, out)
}

fn refine(cfg: &RunConfig, interval: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let p = cfg.require_polynomial()?;
    let (lo, hi) = format::parse_interval(interval)?;
    let (sa, sb) = (p.sign_exact(&lo), p.sign_exact(&hi));
    let mut stats = Stats::default();
    let outcome = if sa == Sign::Zero {
        RefineOutcome::Point(lo)
    } else if sb == Sign::Zero {
        RefineOutcome::Point(hi)
    } else if !sa.opposes(sb) {
        return Err(CliError::Usage(format!("p has the same sign at both ends of {interval}")));
    } else {
        let bits = match cfg.width_bits {
            Some(b) => b,
            None => {
                let m = p.magnitude();
                chain_bound(m.degree, m.coeff_bits, m.terms as u64)?.l
            }
        };
        refine_root(&p, RefineState::new(lo, hi, sa, sb)?, bits, &mut stats)?
    };
    let (a, b) = outcome.bounds();
    emit_roots(cfg, vec![RootJson::new(&a, &b, 1)], &stats, out)
}

fn check(p: &SparsePolynomial, bits: u64, stats: &mut Stats) -> Result<(Vec<IsolatedRoot>, ReportJson), CliError> {
    let roots = Isolator::new().target_bits(bits).isolate_all(p, stats)?;
    let report = verify_isolation(p, &roots)?;
    Ok((roots, ReportJson::from(&report)))
}

fn passed(r: &ReportJson) -> bool {
    r.count_match && r.multiplicity_match && r.containment && r.disjointness
}

#[derive(Serialize)]
struct Failure {
    polynomial: String,
    diagnostics: Vec<String>,
}

#[derive(Serialize)]
struct CorpusSummary {
    seed: u64,
    checked: usize,
    failed: Vec<Failure>,
    stats: StatsJson,
}

fn verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let bits = cfg.width_bits.unwrap_or(CHECK_WIDTH_BITS);
    let mut stats = Stats::default();
    if let Some(p) = cfg.polynomial()? {
        let (_, report) = check(&p, bits, &mut stats)?;
        if cfg.json {
            writeln!(out, "{}", serde_json::to_string(&report).expect("serializable"))?;
        } else {
            writeln!(
                out,
                "count {}  multiplicity {}  containment {}  disjointness {}",
                report.count_match, report.multiplicity_match, report.containment, report.disjointness
            )?;
            for d in &report.diagnostics {
                writeln!(out, "  {d}")?;
            }
        }
        return if passed(&report) { Ok(()) } else { Err(CliError::Verify(report.diagnostics.join("; "))) };
    }

    let count = cfg.count.unwrap_or(500);
    let mut failed = Vec::new();
    for p in corpus::corpus(cfg.seed, count, CorpusShape::default()) {
        let diagnostics = match check(&p, bits, &mut stats) {
            Ok((_, r)) if passed(&r) => continue,
            Ok((_, r)) => r.diagnostics,
            Err(e) => vec![e.to_string()],
        };
        failed.push(Failure { polynomial: p.to_string(), diagnostics });
    }
    let summary = CorpusSummary { seed: cfg.seed, checked: count, failed, stats: StatsJson::from(&stats) };
    if cfg.json {
        writeln!(out, "{}", serde_json::to_string(&summary).expect("serializable"))?;
    } else {
        writeln!(out, "seed {}: {} checked, {} failed", summary.seed, summary.checked, summary.failed.len())?;
        for f in &summary.failed {
            writeln!(out, "  {}: {}", f.polynomial, f.diagnostics.join("; "))?;
        }
        if cfg.stats {
            write!(out, "{}", format::stats_text(&summary.stats))?;
        }
    }
    match summary.failed.len() {
        0 => Ok(()),
        n => Err(CliError::Verify(format!("{n} of {count} corpus polynomials"))),
    }
}

#[derive(Serialize)]
struct BenchRow {
    degree: u64,
    terms: usize,
    instances: usize,
    roots: usize,
    evaluations: u64,
    iterations: u64,
    max_precision_bits: u64,
}

const BENCH_DEGREES: [u64; 5] = [1 << 4, 1 << 8, 1 << 12, 1 << 16, 1 << 20];
const BENCH_TERMS: [usize; 3] = [2, 4, 6];
const BENCH_TAU: u32 = 8;

fn bench(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let bits = cfg.width_bits.unwrap_or(CHECK_WIDTH_BITS);
    let instances = cfg.count.unwrap_or(3);
    let iso = Isolator::new().target_bits(bits);
    let mut rng = corpus::rng(cfg.seed);
    let mut rows = Vec::new();
    if !cfg.json {
        writeln!(out, "{:>8} {:>2} {:>6} {:>12} {:>10} {:>9} {:>9}", "n", "k", "roots", "evaluations", "iterations", "max_prec", "ms")?;
    }
    for &n in &BENCH_DEGREES {
        for &k in &BENCH_TERMS {
            let mut stats = Stats::default();
            let mut roots = 0;
            let t0 = Instant::now();
            for _ in 0..instances {
                let p = corpus::knomial(&mut rng, k, n, BENCH_TAU);
                roots += iso.isolate_all(&p, &mut stats)?.len();
            }
            let ms = t0.elapsed().as_millis();
            let row = BenchRow {
                degree: n,
                terms: k,
                instances,
                roots,
                evaluations: stats.evaluations,
                iterations: stats.refinement_iterations,
                max_precision_bits: stats.max_precision_bits,
            };
            if !cfg.json {
                writeln!(
                    out,
                    "{:>8} {:>2} {:>6} {:>12} {:>10} {:>9} {:>9}",
                    row.degree, row.terms, row.roots, row.evaluations, row.iterations, row.max_precision_bits, ms
                )?;
            }
            rows.push(row);
        }
    }
    if cfg.json {
        writeln!(out, "{}", serde_json::to_string(&rows).expect("serializable"))?;
    }
    Ok(())
}
