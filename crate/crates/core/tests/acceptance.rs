//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use realbinom::harness::{self, PropertyCase};
use realbinom::{
    binom, binom_exact_integer, convergence_scan, gamma, gamma_euler_gauss, Backend, BinomArgs,
    GammaArg, TruncationOrder,
};

type Check = Result<String, String>;

/// Runs a registered property at its default sample count and asserts the
/// registry tolerance equals the pinned one.
fn property(name: &str, pinned_tolerance: f64) -> Check {
    let case = PropertyCase::default_for(name, 0).map_err(|e| e.to_string())?;
    if case.tolerance != pinned_tolerance {
        return Err(format!(
            "{name}: registry tolerance {} differs from {pinned_tolerance}",
            case.tolerance
        ));
    }
    let rep = harness::run_property(&case).map_err(|e| e.to_string())?;
    let msg = format!(
        "{name} worst={:e} over {}",
        rep.worst_deviation, rep.evaluated
    );
    if rep.passed {
        Ok(msg)
    } else {
        Err(format!("{msg} at {}", rep.worst_input))
    }
}

fn all(checks: Vec<Check>) -> Check {
    let mut ok = Vec::new();
    for c in checks {
        ok.push(c?);
    }
    Ok(ok.join("; "))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn b(r: f64, alpha: f64) -> Result<f64, String> {
    let args = BinomArgs::new(r, alpha).map_err(|e| e.to_string())?;
    binom(args, Backend::default())
        .map(|res| res.value)
        .map_err(|e| e.to_string())
}

fn exact_integer_agreement() -> Check {
    let mut pairs = 0;
    let mut worst = 0.0f64;
    for n in 0..=60i64 {
        for m in 0..=n {
            let exact = binom_exact_integer(n, m).map_err(|e| e.to_string())?;
            let exact = exact.to_f64().ok_or("exact value not representable")?;
            let d = rel(b(n as f64, m as f64)?, exact);
            if !(d <= 1e-12) {
                return Err(format!("n={n} m={m} deviation {d:e}"));
            }
            worst = worst.max(d);
            pairs += 1;
        }
    }
    if pairs != 1891 {
        return Err(format!("{pairs} pairs"));
    }
    all(vec![
        Ok(format!("{pairs} pairs worst={worst:e}")),
        property("exact.integer_crosscheck", 1e-12),
    ])
}

fn ratio_scan(integer_only: bool) -> Check {
    let mut worst = 0.0f64;
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let rep = convergence_scan(alpha, &[1e2, 1e3, 1e4, 1e5], integer_only)
            .map_err(|e| e.to_string())?;
        if !rep.is_strictly_decreasing() {
            return Err(format!(
                "alpha={alpha}: |ratio - 1| not strictly decreasing"
            ));
        }
        let last = rep.last().abs_dev;
        if !(last <= 1e-4) {
            return Err(format!("alpha={alpha}: |ratio - 1| = {last:e} at r = 1e5"));
        }
        worst = worst.max(last);
    }
    Ok(format!("worst |ratio - 1| at r=1e5: {worst:e}"))
}

fn euler_gauss() -> Check {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for x in [0.5, 1.5, PI] {
        let arg = GammaArg::new(x).map_err(|e| e.to_string())?;
        let exact = gamma(arg).map_err(|e| e.to_string())?;
        let e = |n: u64| -> Result<f64, String> {
            let order = TruncationOrder::new(n).map_err(|e| e.to_string())?;
            Ok((gamma_euler_gauss(arg, order).map_err(|e| e.to_string())? - exact).abs())
        };
        for n in [1_000u64, 10_000, 100_000] {
            let q = e(10 * n)? / e(n)?;
            if !(0.05..=0.2).contains(&q) {
                return Err(format!("x={x} n={n}: e(10n)/e(n) = {q}"));
            }
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    let one = GammaArg::new(1.0).map_err(|e| e.to_string())?;
    for n in [1u64, 2, 3, 10, 1_000, 65_537, 1_000_000, 10_000_000] {
        let v = gamma_euler_gauss(one, TruncationOrder::new(n).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if v != 1.0 {
            return Err(format!("Gamma_n(1) = {v:e} at n = {n}"));
        }
    }
    all(vec![
        Ok(format!("rate ratios in [{lo:.4}, {hi:.4}]")),
        property("gamma.euler_gauss_rate", 0.075),
        property("gamma.euler_gauss_unit", f64::MIN_POSITIVE),
    ])
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_realbinom"))
        .args(args)
        .env_remove("REALBINOM_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`realbinom {}` exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn determinism() -> Check {
    let commands: [&[&str]; 5] = [
        &["verify", "--seed", "7"],
        &["verify", "--seed", "7", "--format", "text"],
        &[
            "slice", "--mode", "fixed-r", "--fixed", "0", "--start", "-0.999", "--end", "0.999",
            "--steps", "201",
        ],
        &[
            "slice", "--mode", "diagonal", "--start", "1", "--end", "50", "--steps", "50",
        ],
        &["converge", "--alpha", "0.3", "--r", "100,1000,10000,100000"],
    ];
    for args in commands {
        let first = run_bin(args)?;
        let second = run_bin(args)?;
        if first.is_empty() || first != second {
            return Err(format!("`realbinom {}` output differs", args.join(" ")));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("report{i}.jsonl"));
        let path_text = path.to_str().ok_or("non-UTF-8 temp path")?.to_string();
        run_bin(&["verify", "--seed", "7", "--output", &path_text])?;
        files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    if files[0] != files[1] || files[0] != run_bin(&["verify", "--seed", "7"])? {
        return Err("verify --output reports differ".into());
    }
    Ok(format!(
        "{} commands byte-identical across runs",
        commands.len() + 1
    ))
}

struct Criterion {
    label: &'static str,
    budget: Duration,
    check: fn() -> Check,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            label: "exact-integer agreement, 0 <= m <= n <= 60",
            budget: secs(1),
            check: exact_integer_agreement,
        },
        Criterion {
            label: "positivity and unit ends",
            budget: secs(1),
            check: || property("thm1.i.unit_ends", 1e-13),
        },
        Criterion {
            label: "r = 0 slice equals sinc",
            budget: secs(1),
            check: || property("thm1.ii.sinc_slice", 1e-12),
        },
        Criterion {
            label: "symmetry B(r, a) = B(r, r - a)",
            budget: secs(1),
            check: || property("thm1.iii.symmetry", 1e-12),
        },
        Criterion {
            label: "Pascal recurrence",
            budget: secs(1),
            check: || property("thm1.iv.pascal", 1e-10),
        },
        Criterion {
            label: "unimodality about r/2",
            budget: secs(1),
            check: || property("thm1.v.unimodality", 1.0 - 1e-11),
        },
        Criterion {
            label: "monotonicity in r",
            budget: secs(1),
            check: || {
                all(vec![
                    property("thm1.vi.monotone_r", 1.0 - 1e-11),
                    property("thm1.vi.alpha_zero", 1e-13),
                ])
            },
        },
        Criterion {
            label: "closed form for integer n",
            budget: secs(2),
            check: || {
                all(vec![
                    property("prop2.equivalence", 1e-10),
                    property("prop2.factorial_branch", 1e-13),
                ])
            },
        },
        Criterion {
            label: "asymptotic ratio convergence",
            budget: secs(2),
            check: || all(vec![ratio_scan(false), property("prop1.convergence", 1e-4)]),
        },
        Criterion {
            label: "asymptotic ratio convergence, integer r",
            budget: secs(2),
            check: || {
                all(vec![
                    ratio_scan(true),
                    property("cor1.integer_convergence", 1e-4),
                ])
            },
        },
        Criterion {
            label: "Euler-Gauss product rate and unit value",
            budget: secs(5),
            check: euler_gauss,
        },
        Criterion {
            label: "gamma reduction, reflection, factorial anchor",
            budget: secs(1),
            check: || {
                all(vec![
                    property("gamma.reduction", 1e-12),
                    property("gamma.reflection", 1e-10),
                    property("gamma.factorial_anchor", 1e-13),
                ])
            },
        },
        Criterion {
            label: "deterministic reports and CSV",
            budget: secs(5),
            check: determinism,
        },
    ];

    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} criterion {:>2}: {} [{:.3} s / {} s] {}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            c.label,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
