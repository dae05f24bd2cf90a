use std::fs;
use std::path::Path;

use symcalc_cli::{resolve_seed, run, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_OK};
use symcalc_core::calculus::symmetry_profile;
use symcalc_core::codes::file::{parse_code, CodeFile};
use symcalc_core::construct::{construct_partially_symmetric, ConstructionRequest};

fn symcalc(args: &[&str]) -> i32 {
    run(std::iter::once("symcalc").chain(args.iter().copied()))
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn construct_then_analyze_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let code = path(dir.path(), "c.code");
    let csv = path(dir.path(), "a.csv");
    assert_eq!(symcalc(&["construct", "--m", "4", "--t", "3", "--k", "8", "--out", &code]), EXIT_OK);
    let CodeFile::Monomial(c) = parse_code(&fs::read_to_string(&code).unwrap()).unwrap() else {
        panic!("expected a monomial code file");
    };
    let masks: Vec<u32> = c.gen_set().iter().copied().collect();
    assert_eq!(masks, vec![0, 1, 2, 4, 8, 9, 10, 12]);

    assert_eq!(symcalc(&["analyze", "--code", &code, "--out", &csv]), EXIT_OK);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text, "direction,dim\n0,2\n1,2\n2,2\n3,4\nt=3,k_tilde=2\n");

    let in_memory = construct_partially_symmetric(ConstructionRequest { m: 6, t: 4, k: 30, rm_order: None }).unwrap();
    assert_eq!(symcalc(&["construct", "--m", "6", "--t", "4", "--k", "30", "--out", &code]), EXIT_OK);
    assert_eq!(symcalc(&["analyze", "--code", &code, "--out", &csv]), EXIT_OK);
    let p = symmetry_profile(&in_memory.to_linear()).unwrap();
    let mut expected = String::from("direction,dim\n");
    for (i, d) in p.dims.iter().enumerate() {
        expected += &format!("{i},{d}\n");
    }
    expected += &format!("t={},k_tilde={}\n", p.t, p.k_tilde);
    assert_eq!(fs::read_to_string(&csv).unwrap(), expected);
}

#[test]
fn exit_codes() {
    assert_eq!(symcalc(&["construct", "--m", "4", "--t", "4", "--k", "6"]), EXIT_INFEASIBLE);
    assert_eq!(symcalc(&["construct", "--m", "4", "--t", "5", "--k", "6"]), EXIT_INVALID);
    assert_eq!(symcalc(&["construct", "--m", "4", "--t", "3"]), EXIT_INVALID);
    assert_eq!(symcalc(&["construct", "--m", "4", "--t", "3", "--k", "8", "--bogus"]), EXIT_INVALID);
    assert_eq!(symcalc(&["analyze", "--code", "/nonexistent/file"]), EXIT_INVALID);
    assert_eq!(symcalc(&["bounds", "--n", "100"]), EXIT_INVALID);
    assert_eq!(symcalc(&["bounds", "--n", "16", "--t", "x"]), EXIT_INVALID);
    assert_eq!(symcalc(&["nosuch"]), EXIT_INVALID);
    assert_eq!(symcalc(&["--help"]), EXIT_OK);
}

#[test]
fn bounds_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "b.csv");
    assert_eq!(symcalc(&["bounds", "--n", "512", "--t", "full", "--csv", "--out", &out]), EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,rate,deriv_rate,exact"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 512);
    // RM(1,9): k = 10, k_tilde = 1.
    assert_eq!(rows[9], vec!["10", "0.01953125", "0.00390625", "true"]);
    assert_eq!(rows[511], vec!["512", "1", "1", "true"]);
    assert_eq!(symcalc(&["bounds", "--m", "4", "--t", "2", "--k", "3,5", "--out", &out]), EXIT_OK);
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 3);
}

#[test]
fn frozen_perms_and_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let polar = path(dir.path(), "p.code");
    assert_eq!(symcalc(&["frozen", "--m", "3", "--k", "4", "--bec", "0.5", "--out", &polar]), EXIT_OK);
    let CodeFile::Monomial(c) = parse_code(&fs::read_to_string(&polar).unwrap()).unwrap() else {
        panic!("expected a monomial code file");
    };
    assert_eq!(c.gen_set().iter().copied().collect::<Vec<_>>(), vec![0, 1, 2, 4]);
    assert_eq!(symcalc(&["frozen", "--m", "3", "--k", "4"]), EXIT_INVALID);
    assert_eq!(symcalc(&["frozen", "--m", "3", "--k", "4", "--bec", "0.5", "--awgn", "1"]), EXIT_INVALID);

    let code = path(dir.path(), "c.code");
    assert_eq!(symcalc(&["construct", "--m", "5", "--t", "3", "--k", "16", "--out", &code]), EXIT_OK);
    let perms = path(dir.path(), "perms.csv");
    assert_eq!(symcalc(&["perms", "--code", &code, "--P", "4", "--min-dist", "3", "--out", &perms]), EXIT_OK);
    let text = fs::read_to_string(&perms).unwrap();
    assert_eq!(text.lines().next(), Some("rank,perm,score"));
    assert_eq!(text.lines().count(), 5);
    assert_eq!(
        symcalc(&["perms", "--code", &code, "--P", "2", "--mc-frames", "50", "--seed", "3", "--out", &perms]),
        EXIT_OK
    );
    assert_eq!(fs::read_to_string(&perms).unwrap().lines().count(), 3);

    let sim = |decoder: &str, out: &str, extra: &[&str]| {
        let mut args = vec![
            "simulate", "--code", &code, "--decoder", decoder, "--channel", "awgn:1,3", "--max-frames", "300",
            "--max-errors", "50", "--seed", "7", "--out", out,
        ];
        args.extend_from_slice(extra);
        symcalc(&args)
    };
    let a = path(dir.path(), "a.csv");
    let b = path(dir.path(), "b.csv");
    for (dec, extra) in [("sc", vec![]), ("scl", vec!["--L", "4"]), ("perm", vec!["--P", "3", "--min-dist", "2"]), ("ml", vec![])] {
        assert_eq!(sim(dec, &a, &extra), EXIT_OK, "{dec}");
        let text = fs::read_to_string(&a).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ebn0_or_eps,decoder,L_or_P,frames,errors,fer,ml_certified");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with(&format!("1,{dec},")), "{}", lines[1]);
    }
    // Same seed, same numbers, whatever the worker count.
    assert_eq!(sim("scl", &a, &["--workers", "1"]), EXIT_OK);
    assert_eq!(sim("scl", &b, &["--workers", "2"]), EXIT_OK);
    assert_eq!(fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap());
    assert_eq!(
        symcalc(&["simulate", "--code", &code, "--channel", "bsc:0.1", "--max-frames", "10"]),
        EXIT_INVALID
    );
}

#[test]
fn seed_precedence() {
    assert_eq!(resolve_seed(Some(5), Some("9")), Ok(5));
    assert_eq!(resolve_seed(None, Some(" 9 ")), Ok(9));
    assert_eq!(resolve_seed(None, None), Ok(symcalc_cli::DEFAULT_SEED));
    assert!(resolve_seed(None, Some("abc")).is_err());
}
