//! End-to-end checks of the dchb binary: output formats, stream separation,
//! exit codes, threshold files and idempotence.

use std::process::{Command, Output};

fn dchb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dchb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_exact_values() {
    let o = dchb(&["eval", "--n", "2", "--x", "1", "--capN", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-6");
    // negative x goes through the same exact series
    let o = dchb(&["eval", "--n", "3", "--x", "-1", "--capN", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "-504");
    // rational x
    let o = dchb(&["eval", "--n", "1", "--x", "1/2", "--capN", "10"]);
    assert_eq!(stdout(&o).trim(), "-9");
    // huge values switch to sign/log form
    let o = dchb(&["eval", "--n", "800", "--x", "5", "--capN", "2000"]);
    assert!(o.status.success());
    let line = stdout(&o);
    let mut toks = line.split_whitespace();
    let sign: i32 = toks.next().unwrap().parse().unwrap();
    let log: f64 = toks.next().unwrap().parse().unwrap();
    assert!(sign.abs() == 1 && log > 1000.0);
}

#[test]
fn classify_prints_tag_and_scaled_params() {
    let o = dchb(&["classify", "--n", "10", "--x", "2500", "--capN", "10000"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        "BesselSmallB rho=250000.0 a=0.25 b=0.001"
    );
}

#[test]
fn approx_stdout_is_parseable_key_value() {
    let o = dchb(&["approx", "--n", "10", "--x", "2500", "--capN", "10000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for key in ["sign=", "log_abs=", "regime=", "m=", "gamma=", "c0=", "d0="] {
        assert!(
            text.lines().any(|l| l.starts_with(key)),
            "missing {key} in {text}"
        );
    }
    // data stream carries no prose
    assert!(text.lines().all(|l| l.is_empty() || l.contains('=')));
}

#[test]
fn compare_csv_and_json_round_trip() {
    let o = dchb(&["compare", "--n", "10", "--x", "2500", "--capN", "10000"]);
    assert!(o.status.success());
    let records = discrete_chebyshev::harness::parse_csv(&stdout(&o)).unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0].sign_match);
    let o = dchb(&[
        "compare", "--n", "10", "--x", "2500", "--capN", "10000", "--format", "json",
    ]);
    let back = discrete_chebyshev::harness::parse_json(&stdout(&o)).unwrap();
    assert_eq!(back, records);
}

#[test]
fn sweep_writes_deterministic_csv() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("dchb_sweep_a.csv");
    let p2 = dir.join("dchb_sweep_b.csv");
    for p in [&p1, &p2] {
        let o = dchb(&[
            "sweep",
            "--path",
            "gamma-neg",
            "--N-list",
            "1000",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let a = std::fs::read(&p1).unwrap();
    let b = std::fs::read(&p2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "sweep output not byte-identical");
    let records = discrete_chebyshev::harness::parse_csv(&String::from_utf8(a).unwrap()).unwrap();
    assert_eq!(records.len(), 5);
}

#[test]
fn idempotent_stdout() {
    let a = stdout(&dchb(&[
        "approx", "--n", "63", "--x", "-3", "--capN", "1000",
    ]));
    let b = stdout(&dchb(&[
        "approx", "--n", "63", "--x", "-3", "--capN", "1000",
    ]));
    assert_eq!(a, b);
}

#[test]
fn thresholds_file_changes_classification() {
    let dir = std::env::temp_dir();
    let cfg = dir.join("dchb_thresholds.cfg");
    std::fs::write(&cfg, "x_hi = 2000\n# bessel now requires x >= 2000\n").unwrap();
    let o = dchb(&["classify", "--n", "10", "--x", "1500", "--capN", "10000"]);
    assert!(stdout(&o).starts_with("BesselSmallB"));
    let o = dchb(&[
        "classify",
        "--n",
        "10",
        "--x",
        "1500",
        "--capN",
        "10000",
        "--thresholds",
        cfg.to_str().unwrap(),
    ]);
    assert!(stdout(&o).starts_with("SeriesAsymptotic"));
}

#[test]
fn exit_codes() {
    // 2: argument errors, including unknown flags
    let o = dchb(&[
        "eval", "--n", "2", "--x", "1", "--capN", "3", "--bogus", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = dchb(&["eval", "--n", "2", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dchb(&["nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    // 3: domain/regime errors (forced regime off its domain)
    let o = dchb(&[
        "approx", "--n", "50", "--x", "-3", "--capN", "1000", "--regime", "bessel",
    ]);
    assert_eq!(o.status.code(), Some(3));
    // degenerate input: n > capN
    let o = dchb(&["eval", "--n", "5", "--x", "1", "--capN", "3"]);
    assert_eq!(o.status.code(), Some(3));
    // 4: I/O errors (unwritable output path)
    let o = dchb(&[
        "compare",
        "--n",
        "10",
        "--x",
        "2500",
        "--capN",
        "10000",
        "--out",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(o.status.code(), Some(4));
    // errors stay on stderr, stdout stays clean
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn near_boundary_bessel_airy_consistency() {
    // At the rho = rho_hi boundary with large x, the Bessel and Airy
    // assemblies must agree within 3x the larger oracle error.
    use discrete_chebyshev::exact::{eval_exact_series, to_signed_log, PolyTriple};
    let p = PolyTriple::from_ints(200, 80, 10_000).unwrap(); // rho = 20
    let exact = to_signed_log(&eval_exact_series(&p).unwrap());
    let rb = discrete_chebyshev::asymptotic::approx_in_regime(
        &p,
        discrete_chebyshev::regime::Regime::BesselSmallB,
        2,
    )
    .unwrap();
    let ra = discrete_chebyshev::asymptotic::approx_in_regime(
        &p,
        discrete_chebyshev::regime::Regime::AirySmallB,
        2,
    )
    .unwrap();
    let err = |v: &discrete_chebyshev::signed_log::SignedLogValue| {
        ((v.log_abs - exact.log_abs).exp() - 1.0).abs()
    };
    assert_eq!(rb.value.sign, exact.sign);
    assert_eq!(ra.value.sign, exact.sign);
    let gap = ((rb.value.log_abs - ra.value.log_abs).exp() - 1.0).abs();
    let bound = 3.0 * err(&rb.value).max(err(&ra.value));
    assert!(gap <= bound, "boundary gap {gap:.3e} vs bound {bound:.3e}");
}
