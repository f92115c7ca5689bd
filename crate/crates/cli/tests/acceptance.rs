//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FALSIFIED` are expected to print FAIL; the run
//! only exits non-zero when some other criterion fails, or when a known
//! falsification unexpectedly passes.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use primespan_core::verify::{
    default_lemma_base, verify_basic_props, verify_firoozbakht, verify_gap_interval,
    verify_gap_upper, verify_lemmas, verify_theorem1, verify_theorem2, verify_theorem3,
};
use primespan_core::{nth_prime, prime_count, Boundary, ClaimReport, SieveConfig, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lemma 2 fails for small k once r is large: the right side grows like
/// r (f(k) + 1) while p_(f(k)+k+r) grows like r ln r.
const KNOWN_FALSIFIED: &[u32] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn summary(r: &ClaimReport) -> String {
    let slack = r
        .min_slack
        .as_ref()
        .map_or("-".to_string(), |m| format!("{} at {}", m.slack, m.param));
    format!(
        "scanned={} violations={} min_slack={slack}",
        r.scanned, r.violation_count
    )
}

fn clean(r: &ClaimReport) -> bool {
    r.holds() && r.min_slack_value().is_some_and(|s| s > 0.0)
}

fn naive_sieve(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    is_prime[0] = false;
    if limit >= 1 {
        is_prime[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if is_prime[i] {
            let mut j = i * i;
            while j <= limit {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_prime
}

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest prime above `x`: gap checks up to it cover every prime below `x`.
fn limit_past(x: u64) -> u64 {
    let config = SieveConfig::default().with_limit(2 * x);
    let table = config.sieve(x, x + 10_000).unwrap();
    table.next_prime_after(x).unwrap()
}

fn c1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let config = SieveConfig::default().with_segment_size(1024);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let a = rng.gen_range(0..=100_000u64);
        let b = rng.gen_range(0..=100_000u64);
        let (lo, hi) = (a.min(b), a.max(b));
        let got: Vec<u64> = config.sieve(lo, hi).unwrap().primes().collect();
        let want: Vec<u64> = (lo..=hi).filter(|&n| trial_division(n)).collect();
        mismatches += usize::from(got != want);
    }
    outcome(
        mismatches == 0,
        format!("1000 subranges, {mismatches} mismatches"),
    )
}

fn c2() -> Outcome {
    let oracle = naive_sieve(16_000_000);
    let pi_oracle = oracle[..=1_000_000].iter().filter(|&&p| p).count() as u64;
    let p_oracle = oracle
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .nth(999_999)
        .map(|(i, _)| i as u64)
        .unwrap();
    let pi = prime_count(1_000_000).unwrap();
    let p = nth_prime(1_000_000).unwrap();
    outcome(
        pi == 78498 && p == 15485863 && pi == pi_oracle && p == p_oracle,
        format!("pi(10^6)={pi} (oracle {pi_oracle}), p_(10^6)={p} (oracle {p_oracle})"),
    )
}

fn c3(opts: &VerifyOptions) -> ClaimReport {
    verify_theorem1(opts, 100, 10_000, Boundary::OpenOpen).unwrap()
}

fn c4(opts: &VerifyOptions) -> ClaimReport {
    verify_theorem2(opts, 50, 10_000, Boundary::ClosedClosed).unwrap()
}

fn c5(opts: &VerifyOptions) -> ClaimReport {
    verify_theorem3(opts, 1_000_000).unwrap()
}

fn c6(opts: &VerifyOptions) -> ClaimReport {
    verify_gap_interval(opts, 10_000_000, Boundary::OpenOpen).unwrap()
}

fn c7(opts: &VerifyOptions) -> ClaimReport {
    // the last gap below 10^9 ends just past the default sieve limit
    let mut opts = opts.clone();
    opts.sieve = opts.sieve.with_limit(2_000_000_000);
    verify_firoozbakht(&opts, limit_past(1_000_000_000)).unwrap()
}

fn c8(opts: &VerifyOptions) -> ClaimReport {
    verify_gap_upper(opts, limit_past(100_000_000)).unwrap()
}

fn c6_outcome(r: &ClaimReport) -> Outcome {
    let flagged = |n: u64| r.violations.iter().any(|v| v.param == format!("n={n}"));
    let lattice = r.lattice.as_ref().unwrap();
    let listed: Vec<&str> = r.violations.iter().map(|v| v.param.as_str()).collect();
    outcome(
        flagged(2) && flagged(5) && lattice.violations.is_empty() && lattice.points > 0,
        format!(
            "violations [{}], lattice points={} lattice violations={}",
            listed.join(" "),
            lattice.points,
            lattice.violations.len()
        ),
    )
}

fn c9(opts: &VerifyOptions) -> Outcome {
    let reports = verify_basic_props(opts, 1_000_000).unwrap();
    let detail: Vec<String> = reports
        .iter()
        .map(|r| format!("{}: {}", r.claim, summary(r)))
        .collect();
    outcome(reports.iter().all(clean), detail.join("; "))
}

fn c10(opts: &VerifyOptions) -> Outcome {
    let reports = verify_lemmas(opts, 10_000, 100, 1_000_000).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for r in &reports {
        let base = r.log_base.unwrap();
        let default = default_lemma_base(r.claim) == Some(base);
        if default {
            pass &= clean(r);
        }
        detail.push(format!(
            "{}[{}{}]: {}",
            r.claim,
            base.as_str(),
            if default { ", default" } else { "" },
            summary(r)
        ));
    }
    outcome(pass, detail.join("; "))
}

fn c11() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_primespan"))
        .args(["compare", "--from", "240", "--to", "300"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let mut lines = stdout.lines();
    let header = lines.next().unwrap_or_default();
    let rows: Vec<&str> = lines.collect();
    let first = rows.first().copied().unwrap_or_default();
    let noted = stderr.contains("270") && stderr.contains("280");
    outcome(
        out.status.success()
            && header == "n,bertrand,nagura,papergap,next_prime"
            && rows.len() == 61
            && first == "240,480,288,270,241"
            && noted,
        format!(
            "{} rows, first `{first}`, run log: {}",
            rows.len(),
            stderr.trim()
        ),
    )
}

fn c12() -> Outcome {
    type Run = fn(&VerifyOptions) -> ClaimReport;
    let runs: [(&str, Run); 6] = [
        ("t1", c3),
        ("t2", c4),
        ("t3", c5),
        ("gap-interval", c6),
        ("firoozbakht", c7),
        ("gap-upper", c8),
    ];
    let mut differing = Vec::new();
    for (name, run) in runs {
        let bytes: Vec<Vec<u8>> = [1, 8]
            .into_iter()
            .map(|w| {
                let r = run(&VerifyOptions::default().with_workers(w)).without_timing();
                serde_json::to_vec(&r).unwrap()
            })
            .collect();
        if bytes[0] != bytes[1] {
            differing.push(name);
        }
    }
    outcome(
        differing.is_empty(),
        format!("workers 1 vs 8, differing: [{}]", differing.join(" ")),
    )
}

/// Id, name, runtime budget, check.
type Criterion<'a> = (
    u32,
    &'a str,
    Option<Duration>,
    Box<dyn Fn() -> Outcome + 'a>,
);

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let report = |r: ClaimReport| outcome(clean(&r), summary(&r));
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "sieve oracle equivalence",
            Some(Duration::from_secs(5)),
            Box::new(c1),
        ),
        (
            2,
            "pi checkpoints",
            Some(Duration::from_secs(10)),
            Box::new(c2),
        ),
        (
            3,
            "t1 k<=100 n<=10^4 open-open",
            Some(Duration::from_secs(60)),
            Box::new(|| report(c3(&opts))),
        ),
        (
            4,
            "t2 k<=50 n<=10^4 closed-closed",
            Some(Duration::from_secs(60)),
            Box::new(|| report(c4(&opts))),
        ),
        (
            5,
            "t3 k<=10^6",
            Some(Duration::from_secs(60)),
            Box::new(|| report(c5(&opts))),
        ),
        (
            6,
            "gap-interval n<=10^7 falsification",
            None,
            Box::new(|| c6_outcome(&c6(&opts))),
        ),
        (
            7,
            "firoozbakht below 10^9",
            Some(Duration::from_secs(300)),
            Box::new(|| report(c7(&opts))),
        ),
        (
            8,
            "gap upper bound below 10^8",
            Some(Duration::from_secs(60)),
            Box::new(|| report(c8(&opts))),
        ),
        (
            9,
            "prop4, prop6, nth-prime brackets n<=10^6",
            None,
            Box::new(|| c9(&opts)),
        ),
        (
            10,
            "lemma sweep, default bases",
            None,
            Box::new(|| c10(&opts)),
        ),
        (11, "rule comparison 240..300", None, Box::new(c11)),
        (12, "determinism across worker counts", None, Box::new(c12)),
    ];

    let mut unexpected = 0;
    for (id, name, budget, run) in &criteria {
        let start = Instant::now();
        let mut o = run();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > *b {
                o.pass = false;
                o.detail.push_str(&format!("; over budget {:?}", b));
            }
        }
        let known = KNOWN_FALSIFIED.contains(id);
        println!(
            "{} [{id:>2}] {name}: {} ({:.2}s){}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            if known { " [known falsification]" } else { "" }
        );
        if o.pass == known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criterion outcome(s) differ from expectations");
        ExitCode::FAILURE
    }
}
