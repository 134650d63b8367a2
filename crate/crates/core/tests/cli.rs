use std::process::{Command, Output};

use realbinom::sinc_pi;

fn realbinom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realbinom"))
        .args(args)
        .env_remove("REALBINOM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .to_string()
}

/// Parsed CSV rows, header checked.
fn csv(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn eval_examples() {
    let o = realbinom(&["eval", "--r", "5", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = field(&stdout(&o), "value").parse().unwrap();
    assert!((v - 10.0).abs() <= 1e-12 * 10.0);
    assert_eq!(field(&stdout(&o), "backend"), "stirling-loggamma");
    assert!(field(&stdout(&o), "err_estimate").parse::<f64>().unwrap() > 0.0);

    let o = realbinom(&["eval", "--r", "0", "--alpha", "0.5"]);
    let v: f64 = field(&stdout(&o), "value").parse().unwrap();
    assert!((v - std::f64::consts::FRAC_2_PI).abs() < 1e-7);

    let o = realbinom(&["eval", "--r", "-2", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("r > -1"), "{}", stderr(&o));
}

#[test]
fn eval_backends_agree() {
    let mut values = Vec::new();
    for backend in [
        "stirling-loggamma",
        "euler-gauss:1000000",
        "closed-form-prop2",
    ] {
        let o = realbinom(&["eval", "--r", "7", "--alpha", "2.5", "--backend", backend]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(field(&stdout(&o), "backend"), backend);
        values.push(field(&stdout(&o), "value").parse::<f64>().unwrap());
    }
    assert!(((values[0] - values[2]) / values[0]).abs() < 1e-12);
    assert!(((values[0] - values[1]) / values[0]).abs() < 1e-4);
}

#[test]
fn eval_error_codes() {
    for (args, code) in [
        (&["eval", "--r", "1", "--alpha", "2"][..], 2),
        (&["eval", "--r", "1", "--alpha", "-1"][..], 2),
        (
            &[
                "eval",
                "--r",
                "1.5",
                "--alpha",
                "0.2",
                "--backend",
                "closed-form-prop2",
            ][..],
            2,
        ),
        (&["eval", "--r", "1", "--alpha", "NaN"][..], 2),
        (&["eval", "--r", "x", "--alpha", "0"][..], 64),
        (&["eval", "--r", "1"][..], 64),
        (
            &[
                "eval",
                "--r",
                "1",
                "--alpha",
                "0",
                "--backend",
                "euler-gauss:0",
            ][..],
            64,
        ),
        (&["frobnicate"][..], 64),
        (&[][..], 64),
    ] {
        let o = realbinom(args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn eval_matches_exact_integers() {
    for (n, m) in [(60i64, 30i64), (60, 1), (37, 12), (0, 0)] {
        let o = realbinom(&["eval", "--r", &n.to_string(), "--alpha", &m.to_string()]);
        let v: f64 = field(&stdout(&o), "value").parse().unwrap();
        let exact: f64 = realbinom::binom_exact_integer(n, m)
            .unwrap()
            .to_string()
            .parse()
            .unwrap();
        assert!(((v - exact) / exact).abs() <= 1e-12, "({n}, {m})");
    }
}

#[test]
fn slice_fixed_r_is_sinc() {
    let o = realbinom(&[
        "slice", "--mode", "fixed-r", "--fixed", "0", "--start", "-0.999", "--end", "0.999",
        "--steps", "201",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&stdout(&o), "r,alpha,value,log_value,backend");
    assert_eq!(rows.len(), 201);
    for row in &rows {
        let alpha: f64 = row[1].parse().unwrap();
        let value: f64 = row[2].parse().unwrap();
        let s = sinc_pi(alpha);
        assert!(
            (value - s).abs() <= 1e-12 * s.abs().max(1.0),
            "alpha={alpha}"
        );
        assert_eq!(row[4], "stirling-loggamma");
    }
}

#[test]
fn slice_fixed_alpha_zero_is_one() {
    let o = realbinom(&[
        "slice",
        "--mode",
        "fixed-alpha",
        "--fixed",
        "0",
        "--start",
        "-0.9",
        "--end",
        "80",
        "--steps",
        "97",
    ]);
    let rows = csv(&stdout(&o), "r,alpha,value,log_value,backend");
    assert_eq!(rows.len(), 97);
    assert!(rows.iter().all(|row| row[2] == "1" && row[3] == "0"));
}

#[test]
fn slice_diagonal_increases() {
    let o = realbinom(&[
        "slice", "--mode", "diagonal", "--start", "1", "--end", "50", "--steps", "50",
    ]);
    let rows = csv(&stdout(&o), "r,alpha,value,log_value,backend");
    assert_eq!(rows.len(), 50);
    let values: Vec<f64> = rows.iter().map(|row| row[2].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    // Integer rows are central binomial coefficients.
    assert_eq!(rows[1][..3], ["2", "1", "2"]);
    assert_eq!(rows[49][..3], ["50", "25", "126410606437752"]);
}

#[test]
fn slice_keeps_invalid_points() {
    let o = realbinom(&[
        "slice", "--mode", "fixed-r", "--fixed", "2", "--start", "-3", "--end", "5", "--steps", "9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&stdout(&o), "r,alpha,value,log_value,backend");
    assert_eq!(rows.len(), 9);
    let empty: Vec<&str> = rows
        .iter()
        .filter(|row| row[2].is_empty())
        .map(|row| row[1].as_str())
        .collect();
    assert_eq!(empty, ["-3", "-2", "-1", "3", "4", "5"]);
}

#[test]
fn slice_overflow_keeps_log_value() {
    let o = realbinom(&[
        "slice",
        "--mode",
        "fixed-alpha",
        "--fixed",
        "2500",
        "--start",
        "4999",
        "--end",
        "5000",
        "--steps",
        "2",
    ]);
    let rows = csv(&stdout(&o), "r,alpha,value,log_value,backend");
    for row in rows {
        assert!(row[2].is_empty());
        assert!(row[3].parse::<f64>().unwrap() > 709.0);
    }
}

#[test]
fn slice_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("slice.csv");
    let args = [
        "slice", "--mode", "fixed-r", "--fixed", "3.5", "--start", "-0.5", "--end", "4", "--steps",
        "31",
    ];
    let direct = realbinom(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let o = realbinom(&with_file);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn bad_slice_arguments() {
    for args in [
        &[
            "slice", "--mode", "fixed-r", "--fixed", "1", "--start", "1", "--end", "0", "--steps",
            "5",
        ][..],
        &[
            "slice", "--mode", "fixed-r", "--fixed", "1", "--start", "0", "--end", "1", "--steps",
            "1",
        ][..],
        &[
            "slice", "--mode", "fixed-r", "--start", "0", "--end", "1", "--steps", "5",
        ][..],
        &[
            "slice", "--mode", "sideways", "--fixed", "1", "--start", "0", "--end", "1", "--steps",
            "5",
        ][..],
    ] {
        assert_eq!(realbinom(args).status.code(), Some(64), "{args:?}");
    }
    let o = realbinom(&[
        "slice",
        "--mode",
        "diagonal",
        "--start",
        "1",
        "--end",
        "2",
        "--steps",
        "3",
        "--output",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(o.status.code(), Some(74));
}

#[test]
fn converge_examples() {
    let o = realbinom(&["converge", "--alpha", "0.5", "--r", "100,1000,10000"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&stdout(&o), "r,ratio,abs_dev");
    let dev: Vec<f64> = rows.iter().map(|row| row[2].parse().unwrap()).collect();
    assert!(dev.windows(2).all(|w| w[1] < w[0]));
    assert!(stderr(&o).contains("strictly decreasing"));

    let o = realbinom(&["converge", "--alpha", "0.5", "--r", "20"]);
    let rows = csv(&stdout(&o), "r,ratio,abs_dev");
    assert_eq!(rows.len(), 1);
    let ratio: f64 = rows[0][1].parse().unwrap();
    assert!((ratio - 0.98758).abs() < 1e-5);

    assert_eq!(
        realbinom(&["converge", "--alpha", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        realbinom(&["converge", "--alpha", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn converge_default_grid_and_integer_mode() {
    let o = realbinom(&["converge", "--alpha", "0.3", "--integer-only"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv(&stdout(&o), "r,ratio,abs_dev");
    let r: Vec<&str> = rows.iter().map(|row| row[0].as_str()).collect();
    assert_eq!(r, ["100", "1000", "10000", "100000"]);
    let o = realbinom(&[
        "converge",
        "--alpha",
        "0.3",
        "--r",
        "10.5,20",
        "--integer-only",
    ]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn verify_filter_and_exit_codes() {
    let o = realbinom(&["verify", "--filter", "thm1"]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = stdout(&o)
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert_eq!(v["passed"], true);
            v["name"].as_str().unwrap().to_string()
        })
        .collect();
    assert!(names.iter().all(|n| n.starts_with("thm1.")));
    for part in [
        "thm1.i.",
        "thm1.ii.",
        "thm1.iii.",
        "thm1.iv.",
        "thm1.v.",
        "thm1.vi.",
    ] {
        assert!(names.iter().any(|n| n.starts_with(part)), "{part}");
    }

    let o = realbinom(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().count(),
        realbinom::harness::REGISTRY.len()
    );

    let o = realbinom(&["verify", "--filter", "nonesuch"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(
        realbinom(&["verify", "--seed", "-1"]).status.code(),
        Some(64)
    );
    assert_eq!(
        realbinom(&["verify", "--format", "xml"]).status.code(),
        Some(64)
    );
}

#[test]
fn verify_seed_from_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_realbinom"));
        cmd.args(args).env_remove("REALBINOM_SEED");
        if let Some(seed) = env {
            cmd.env("REALBINOM_SEED", seed);
        }
        cmd.output().unwrap().stdout
    };
    let filter = ["verify", "--filter", "gamma.reduction"];
    let by_env = run(Some("7"), &filter);
    let by_flag = run(
        None,
        &["verify", "--filter", "gamma.reduction", "--seed", "7"],
    );
    assert_eq!(by_env, by_flag);
    assert_ne!(by_env, run(None, &filter));
    // The flag wins over the environment.
    assert_eq!(
        run(
            Some("3"),
            &["verify", "--filter", "gamma.reduction", "--seed", "7"]
        ),
        by_flag
    );
}

#[test]
fn verify_text_and_timings() {
    let o = realbinom(&["verify", "--filter", "gamma.factorial", "--format", "text"]);
    assert!(stdout(&o).starts_with("PASS gamma.factorial_anchor"));
    let o = realbinom(&["verify", "--filter", "gamma.factorial", "--timings"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["elapsed_ms"].is_number());
    let o = realbinom(&["verify", "--filter", "gamma.factorial"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["elapsed_ms"].is_null());
}

#[test]
fn help_and_version_succeed() {
    for args in [
        &["--help"][..],
        &["--version"][..],
        &["slice", "--help"][..],
    ] {
        let o = realbinom(args);
        assert_eq!(o.status.code(), Some(0));
        assert!(!o.stdout.is_empty());
    }
}
