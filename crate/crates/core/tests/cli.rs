mod common;

use std::process::Command;

use common::{all_fixtures, fixture_path};
use valq::cli::{check_expect, run_args, Fixture};
use valq::extend::Budgets;

fn run(args: &[&str]) -> valq::cli::Outcome {
    run_args(args.iter().copied())
}

#[test]
fn newton_tsv_rows() {
    let out = run(&["newton", &fixture_path("quad"), "--poly", "F", "--steps", "7", "--format", "tsv"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "step\tnu_delta\tnu_sigma\tflags");
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[2], "1\t(2)\t(1)\tnagata,dbl,fval,cong,an2");
}

#[test]
fn extend_report_on_rank_two() {
    let out = run(&["extend", &fixture_path("fx2"), "--poly", "F", "--h", "h"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.lines().next(), Some("value=(1,0) depth=0 witness=u"));
    assert!(out.stdout.lines().skip(1).all(|l| l.starts_with("# ")));
}

#[test]
fn check_passes_on_quadratic() {
    let out = run(&["check", &fixture_path("quad"), "--poly", "F", "--steps", "6"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("ALL PASS"));
    assert!(!out.stdout.contains("FAIL"));
}

#[test]
fn exit_codes_per_subcommand() {
    let quad = fixture_path("quad");
    let ok: Vec<Vec<&str>> = vec![
        vec!["newton", &quad],
        vec!["classify", &quad, "--h", "h"],
        vec!["psi", &quad],
        vec!["fstar", &quad],
        vec!["goodvar", &quad],
        vec!["extend", &quad, "--h", "h"],
        vec!["approx", &quad, "--points", "c0,c1,c2"],
        vec!["ok", &quad, "--h", "hx"],
        vec!["check", &quad],
    ];
    for args in &ok {
        let out = run(args);
        assert_eq!(out.code, 0, "{args:?}: {}{}", out.stdout, out.stderr);
    }
    // too few certified d_i for the point of value 3
    let out = run(&["approx", &quad, "--points", "c2", "--steps", "5"]);
    assert_eq!(out.code, 2, "{}", out.stdout);
    let errors: Vec<Vec<&str>> = vec![
        vec!["frobnicate", &quad],
        vec!["newton", &quad, "--bogus"],
        vec!["newton", &quad, "--poly", "G"],
        vec!["classify", &quad],
        vec!["extend", &quad, "--h", "nope"],
        vec!["newton", "/nonexistent/file.vq"],
        vec!["extend", &quad, "--h", "F"],
    ];
    for args in &errors {
        let out = run(args);
        assert_eq!(out.code, 1, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn malformed_fixture_reports_position() {
    let dir = std::env::temp_dir().join(format!("valq-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.vq");
    std::fs::write(&p, "ring rank=1 vars=t weights=(1,\npoly F = X^2 + X - t\n").unwrap();
    let out = run(&["newton", p.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 1"), "{}", out.stderr);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["newton", "fx2", "--format", "tsv"],
        vec!["extend", "rank2_tu", "--h", "g"],
        vec!["classify", "cubic", "--h", "h"],
        vec!["approx", "quad", "--points", "c0,c1,c2"],
        vec!["fstar", "quartic"],
    ] {
        let mut a: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        a[1] = fixture_path(args[1]);
        let first = run_args(a.clone());
        let second = run_args(a);
        assert_eq!(first, second);
    }
}

#[test]
fn fixtures_round_trip() {
    for (name, fx) in all_fixtures() {
        let text = fx.to_text();
        let again = Fixture::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
        assert_eq!(again.to_text(), text, "{name}");
        assert_eq!(again.polys, fx.polys, "{name}");
    }
}

#[test]
fn fixture_expectations_hold() {
    let mut n = 0;
    for (name, fx) in all_fixtures() {
        let b = Budgets::for_ring(&fx.ring);
        for e in &fx.expects {
            let (ok, actual) = check_expect(&fx, e, "F", &b).unwrap_or_else(|err| panic!("{name}:{}: {err}", e.line));
            assert!(ok, "{name}:{}: expect {} {} = {}, got {actual}", e.line, e.tag, e.name, e.value);
            n += 1;
        }
    }
    assert!(n >= 25, "only {n} annotations");
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_valq");
    let out = Command::new(bin).args(["psi", &fixture_path("rank3")]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("psi=3 EXACT"));
    let out = Command::new(bin).args(["approx", &fixture_path("quad"), "--points", "c2", "--steps", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).args(["psi"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
