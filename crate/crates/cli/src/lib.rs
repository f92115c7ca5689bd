//! `primespan` command-line front end.

pub mod emit;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use primespan_core::bounds::IntervalRule;
use primespan_core::verify::{self, default_lemma_base, ClaimId, ClaimReport, VerifyOptions};
use primespan_core::{f_of_k, Boundary, SieveConfig};

pub use emit::{emit_reports, emit_rule_table, read_csv_violations, Format};

#[derive(Debug, Parser)]
#[command(
    name = "primespan",
    version,
    about = "Prime interval bounds: sieve, compare and verify"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Sieve segment size in numbers (>= 1024)
    #[arg(long, global = true, default_value_t = primespan_core::sieve::DEFAULT_SEGMENT_SIZE)]
    pub segment_size: u64,
    /// Worker threads [default: all cores]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
    /// Output format for --out (and for compare on stdout)
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the full report here
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Violations kept per report; the total is always counted
    #[arg(long, global = true, default_value_t = verify::DEFAULT_VIOLATION_CAP)]
    pub violation_cap: usize,
    /// Zero all wall-clock fields so reruns are byte-identical
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// No progress on stderr
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustively check one claim over a range
    Verify(VerifyArgs),
    /// Tabulate prime-bearing interval ends g(n) for several rules
    Compare(CompareArgs),
    /// Scan prime gaps up to a limit
    Gaps(GapsArgs),
    /// Count primes in a range, or find the nth prime
    Sieve(SieveArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// t1, t2, t3, gap-interval, firoozbakht, gap-upper, prop4, prop6,
    /// nth-prime-bounds, l1, l2, l3
    pub claim: ClaimId,
    /// Largest k [t1: 100, t2: 50, t3: 1000000, l1/l2: 10000]
    #[arg(long)]
    pub k_max: Option<u64>,
    /// Largest n [t1/t2: 10000, gap-interval: 10000000, l3: 1000000]
    #[arg(long)]
    pub n_max: Option<u64>,
    /// Largest r for l2 [default: 100]
    #[arg(long, allow_negative_numbers = true)]
    pub r_max: Option<i64>,
    /// Upper limit [firoozbakht/gap-upper: 100000000, prop4/prop6/nth-prime-bounds: 1000000]
    #[arg(long)]
    pub limit: Option<u64>,
    /// open-open, open-closed, closed-open or closed-closed
    /// [t1/gap-interval: open-open, t2: closed-closed]
    #[arg(long)]
    pub boundary: Option<Boundary>,
    /// For l1-l3, report both log bases instead of the default one
    #[arg(long)]
    pub both_bases: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, default_value_t = 240)]
    pub from: u64,
    #[arg(long, default_value_t = 300)]
    pub to: u64,
    /// Comma-separated: bertrand, nagura, schoenfeld, dusart1998,
    /// dusart2010, dusart2016, papergap
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "bertrand,nagura,papergap"
    )]
    pub rules: Vec<IntervalRule>,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    /// Gaps with p_(n+1) <= limit; --out writes every record
    #[arg(long, default_value_t = 1_000_000)]
    pub limit: u64,
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long, default_value_t = 0)]
    pub from: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub to: u64,
    /// Print p_n instead of counting
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub nth: Option<u64>,
}

/// Failures mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Parses `argv` and runs it, returning the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = io::stdout();
    // stderr stays unlocked: progress is printed from worker threads
    match run(&cli, &mut stdout.lock(), &mut io::stderr()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Runs a parsed command. Returns 1 when a verification finds violations.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let c = &cli.common;
    let sieve = SieveConfig::from_env()
        .map_err(usage)?
        .with_segment_size(c.segment_size);
    let mut opts = VerifyOptions {
        sieve,
        violation_cap: c.violation_cap,
        ..VerifyOptions::default()
    };
    opts.workers = c.workers.map(|w| w as usize);
    match &cli.command {
        Command::Verify(args) => run_verify(c, opts, args, out, err),
        Command::Compare(args) => run_compare(c, &opts.sieve, args, out, err),
        Command::Gaps(args) => run_gaps(c, &opts.sieve, args, out),
        Command::Sieve(args) => run_sieve(c, &opts.sieve, args, out),
    }
}

fn with_output(
    path: Option<&PathBuf>,
    stdout: &mut dyn Write,
    write: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush()?;
        }
        None => write(stdout)?,
    }
    Ok(())
}

fn progress_printer(label: String) -> verify::ProgressFn {
    let start = Instant::now();
    let last = Mutex::new(start);
    Arc::new(move |done, total| {
        let mut last = last.lock().unwrap_or_else(|e| e.into_inner());
        let now = Instant::now();
        if now.duration_since(*last) < Duration::from_secs(2) && done < total {
            return;
        }
        *last = now;
        let secs = now.duration_since(start).as_secs_f64().max(1e-9);
        let rate = done as f64 / secs;
        let eta = if rate > 0.0 {
            total.saturating_sub(done) as f64 / rate
        } else {
            0.0
        };
        let pct = if total == 0 {
            100.0
        } else {
            100.0 * done as f64 / total as f64
        };
        eprintln!("{label}: {pct:5.1}%  {rate:.3e}/s  eta {eta:.0}s");
    })
}

fn run_verify(
    c: &Common,
    mut opts: VerifyOptions,
    args: &VerifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let claim = args.claim;
    if !c.quiet {
        opts.progress = Some(progress_printer(claim.to_string()));
    }
    let boundary = |default| args.boundary.unwrap_or(default);
    let reports: Vec<ClaimReport> = match claim {
        ClaimId::T1 => vec![verify::verify_theorem1(
            &opts,
            args.k_max.unwrap_or(100),
            args.n_max.unwrap_or(10_000),
            boundary(Boundary::OpenOpen),
        )
        .map_err(usage)?],
        ClaimId::T2 => vec![verify::verify_theorem2(
            &opts,
            args.k_max.unwrap_or(50),
            args.n_max.unwrap_or(10_000),
            boundary(Boundary::ClosedClosed),
        )
        .map_err(usage)?],
        ClaimId::T3 => {
            vec![verify::verify_theorem3(&opts, args.k_max.unwrap_or(1_000_000)).map_err(usage)?]
        }
        ClaimId::GapInterval => vec![verify::verify_gap_interval(
            &opts,
            args.n_max.unwrap_or(10_000_000),
            boundary(Boundary::OpenOpen),
        )
        .map_err(usage)?],
        ClaimId::Firoozbakht => {
            vec![
                verify::verify_firoozbakht(&opts, args.limit.unwrap_or(100_000_000))
                    .map_err(usage)?,
            ]
        }
        ClaimId::GapUpper => {
            vec![
                verify::verify_gap_upper(&opts, args.limit.unwrap_or(100_000_000))
                    .map_err(usage)?,
            ]
        }
        ClaimId::Prop4 | ClaimId::Prop6 | ClaimId::NthPrimeBounds => {
            verify::verify_basic_props(&opts, args.limit.unwrap_or(1_000_000))
                .map_err(usage)?
                .into_iter()
                .filter(|r| r.claim == claim)
                .collect()
        }
        ClaimId::L1 | ClaimId::L2 | ClaimId::L3 => {
            let k_max = args.k_max.unwrap_or(10_000);
            // keep the unused sweeps small
            let (k_max, r_max, n_max) = match claim {
                ClaimId::L3 => (5, -2, args.n_max.unwrap_or(1_000_000)),
                ClaimId::L2 => (k_max, args.r_max.unwrap_or(100), 5),
                _ => (k_max, -2, 5),
            };
            verify::verify_lemmas(&opts, k_max, r_max, n_max)
                .map_err(usage)?
                .into_iter()
                .filter(|r| r.claim == claim)
                .filter(|r| args.both_bases || r.log_base == default_lemma_base(claim))
                .collect()
        }
    };
    let reports: Vec<ClaimReport> = if c.no_timing {
        reports.iter().map(ClaimReport::without_timing).collect()
    } else {
        reports
    };

    for r in &reports {
        write_summary(out, r, c.no_timing)?;
    }
    if let Some(path) = &c.out {
        with_output(Some(path), out, |w| emit_reports(w, &reports, c.format))?;
        writeln!(err, "wrote {}", path.display())?;
    }
    Ok(if reports.iter().all(ClaimReport::holds) {
        0
    } else {
        1
    })
}

const LISTED_VIOLATIONS: usize = 20;

fn write_summary(out: &mut dyn Write, r: &ClaimReport, no_timing: bool) -> io::Result<()> {
    let mut head = r.claim.to_string();
    if let Some(b) = r.boundary {
        head.push_str(&format!(" [{b}]"));
    }
    if let Some(b) = r.log_base {
        head.push_str(&format!(" [{}]", b.as_str()));
    }
    write!(
        out,
        "{head}: {} scanned={} violations={}",
        if r.holds() { "HOLDS" } else { "FAILS" },
        r.scanned,
        r.violation_count
    )?;
    if let Some(m) = &r.min_slack {
        write!(out, " min_slack={} at {}", m.slack, m.param)?;
    }
    if !no_timing {
        write!(out, " ({:.3}s)", r.elapsed.as_secs_f64())?;
    }
    writeln!(out)?;
    writeln!(out, "  range: {}", r.range)?;
    if !r.violations.is_empty() {
        let shown: Vec<&str> = r
            .violations
            .iter()
            .take(LISTED_VIOLATIONS)
            .map(|v| v.param.as_str())
            .collect();
        write!(out, "  violations: {}", shown.join(" "))?;
        let rest = r.violation_count - shown.len() as u64;
        if rest > 0 {
            write!(out, " (+{rest} more)")?;
        }
        writeln!(out)?;
    }
    if let Some(l) = &r.lattice {
        writeln!(
            out,
            "  lattice n = k f(k): points={} violations={}",
            l.points,
            l.violations.len()
        )?;
    }
    for note in &r.notes {
        writeln!(out, "  note: {note}")?;
    }
    Ok(())
}

fn run_compare(
    c: &Common,
    sieve: &SieveConfig,
    args: &CompareArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let table = verify::compare_rules(sieve, args.from, args.to, &args.rules).map_err(usage)?;
    if args.rules.contains(&IntervalRule::PaperGap) && (args.from..=args.to).contains(&240) {
        let f = f_of_k(240).map_err(usage)?;
        let g = IntervalRule::PaperGap.g(240).map_err(usage)?;
        writeln!(
            err,
            "note: papergap at n = 240 is {g} with f(240) = {f}; 280 would need a divisor of 6"
        )?;
    }
    with_output(c.out.as_ref(), out, |w| {
        emit_rule_table(w, &table, c.format)
    })?;
    Ok(0)
}

fn run_gaps(
    c: &Common,
    sieve: &SieveConfig,
    args: &GapsArgs,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let max = sieve.max_gap_up_to(args.limit).map_err(usage)?;
    writeln!(
        out,
        "max gap below {}: g = {} at n = {} ({} -> {})",
        args.limit, max.g_n, max.n, max.p_n, max.p_next
    )?;
    if let Some(path) = &c.out {
        let stream = sieve.iterate_gaps(args.limit).map_err(usage)?;
        with_output(Some(path), out, |w| match c.format {
            Format::Csv => {
                let mut csv = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(w);
                for rec in stream {
                    csv.serialize(rec).map_err(io::Error::other)?;
                }
                csv.flush()
            }
            Format::Json => {
                let recs: Vec<_> = stream.collect();
                serde_json::to_writer(&mut *w, &recs)?;
                w.write_all(b"\n")
            }
        })?;
    }
    Ok(0)
}

fn run_sieve(
    c: &Common,
    sieve: &SieveConfig,
    args: &SieveArgs,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if let Some(n) = args.nth {
        let p = sieve.nth_prime(n).map_err(usage)?;
        writeln!(out, "p_{n} = {p}")?;
        return Ok(0);
    }
    let table = sieve.sieve(args.from, args.to).map_err(usage)?;
    writeln!(
        out,
        "primes in [{}, {}]: {}",
        args.from,
        args.to,
        table.len()
    )?;
    if let Some(path) = &c.out {
        with_output(Some(path), out, |w| match c.format {
            Format::Csv => {
                writeln!(w, "p")?;
                for p in table.primes() {
                    writeln!(w, "{p}")?;
                }
                Ok(())
            }
            Format::Json => {
                let primes: Vec<u64> = table.primes().collect();
                serde_json::to_writer(&mut *w, &primes)?;
                w.write_all(b"\n")
            }
        })?;
    }
    Ok(0)
}
