//! End-to-end tests against the built binary: output schemas, anchor
//! values, determinism, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbitzeta"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn orbits_table_matches_hand_computed_values() {
    let output = run(&["orbits", "--d", "2", "--b", "2", "--max", "3"]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout(&output),
        "n,a_n,orbits_n,pi,mertens_num,mertens_den,phi,psi\n\
         1,1,2,2,1,1,1.000000,1.000000\n\
         2,3,3,5,7,4,1.250000,2.000000\n\
         3,4,8,13,11,4,1.625000,2.333333\n"
    );
}

#[test]
fn orbits_json_carries_exact_fractions() {
    let output = run(&["orbits", "--max", "2", "--format", "json"]);
    assert_exit(&output, 0);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("valid json");
    let rows = rows.as_array().expect("array");
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["pi"], "5");
    assert_eq!(rows[1]["mertens_exact"], "7/4");
    assert_eq!(rows[1]["psi"], "2.000000");
}

#[test]
fn figure_series_has_one_row_per_horizon() {
    let output = run(&["figure1", "--max", "100"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 101);
    assert_eq!(lines[0], "N,phi,psi,phi_exact,psi_exact");
    assert_eq!(lines[1], "1,1.000000,1.000000,1/1,1/1");
    assert_eq!(lines[2], "2,1.250000,2.000000,5/4,2/1");
    // The two normalized series collapse onto each other at this depth.
    let last = lines[100];
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0], "100");
    assert_eq!(fields[1], fields[2]);
}

#[test]
fn moebius_example_agrees_with_its_oracle() {
    let output = run(&["mobius", "--upper", "1 0; 0 1", "--lower", "2 0; 0 2"]);
    assert_exit(&output, 0);
    assert_eq!(stdout(&output), "2, oracle-agrees=true\n");
}

#[test]
fn moebius_canonicalizes_generator_input_on_request() {
    // Rows (4 2; 0 1) canonicalize to diag(4, 1); the quotient Z/4 has a
    // square factor, so the value is 0.
    let args = ["mobius", "--upper", "1 0; 0 1", "--lower", "4 2; 0 1"];
    let strict = run(&args);
    assert_exit(&strict, 1);
    let relaxed = bin().args(args).arg("--canonicalize").output().unwrap();
    assert_exit(&relaxed, 0);
    assert_eq!(stdout(&relaxed), "0, oracle-agrees=true\n");
}

#[test]
fn repeated_runs_are_byte_identical_across_thread_counts() {
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let output = bin()
            .args(["orbits", "--max", "12"])
            .env("ORBITZETA_THREADS", threads)
            .output()
            .unwrap();
        assert_exit(&output, 0);
        outputs.push(output.stdout);
    }
    let plain = run(&["orbits", "--max", "12"]);
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], plain.stdout);
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbits.csv");
    let to_file = bin()
        .args(["orbits", "--max", "5", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert_exit(&to_file, 0);
    assert!(to_file.stdout.is_empty());
    let direct = run(&["orbits", "--max", "5"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn growth_table_covers_both_groups() {
    let output = run(&["growth", "--group", "heisenberg", "--max-n", "10"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,a_n,s_n");
    let a: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(a, ["1", "3", "4", "19", "6", "12", "8", "43", "49", "18"]);

    let planar = run(&["growth", "--group", "z:2", "--max-n", "6", "--format", "csv"]);
    assert_exit(&planar, 0);
    assert!(stdout(&planar).ends_with("6,12,33\n"));
}

#[test]
fn mertens_rows_carry_exact_and_decimal_columns() {
    let output = run(&["mertens", "--group", "z:2", "--max", "3"]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout(&output),
        "n,a_n,main_num,main_den,main\n\
         1,1,1,1,1.000000\n\
         2,3,5,2,2.500000\n\
         3,4,23,6,3.833333\n"
    );
}

#[test]
fn sublattice_listing_is_complete_and_ordered() {
    let output = run(&["sublattices", "--d", "2", "--n", "4"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    // sigma(4) = 7 lattices of index 4 in Z^2.
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[1], "\"1 0; 0 4\",4");
    assert_eq!(lines[7], "\"4 0; 0 1\",4");
}

#[test]
fn oracle_verification_reports_agreement_per_lattice() {
    let output = run(&["oracle-verify", "--d", "2", "--b", "2", "--max", "6"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lattice,index,inversion,oracle,agree");
    // sum of sigma(n) for n <= 6 is 33 lattices.
    assert_eq!(lines.len(), 34);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
}

#[test]
fn algebraic_examples_emit_stable_json() {
    let output = run(&["ledrappier", "--lattice", "3 0; 0 3"]);
    assert_exit(&output, 0);
    assert_eq!(
        stdout(&output),
        "{\"fix_count\":\"4\",\"index\":9,\"kernel_dim\":2,\"lattice\":\"3 0; 0 3\"}\n"
    );

    let horizontal = run(&["solenoid", "--family", "horizontal", "--n", "5"]);
    assert_exit(&horizontal, 0);
    assert_eq!(
        stdout(&horizontal),
        "{\"family\":\"horizontal\",\"fix_count\":\"31\",\"index\":5,\"lattice\":\"5 0; 0 1\",\"n\":5}\n"
    );

    let vertical = run(&["solenoid", "--family", "vertical", "--n", "7"]);
    assert_exit(&vertical, 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&vertical)).unwrap();
    assert_eq!(value["fix_count"], "1");
    assert_eq!(value["lattice"], "1 0; 0 7");
}

#[test]
fn exit_codes_separate_usage_cap_consistency_and_io() {
    // Usage errors: unknown subcommand, precision below the floor, an
    // unparsable group, a malformed thread count, non-contained interval.
    assert_exit(&run(&["bogus"]), 1);
    assert_exit(&run(&["orbits", "--max", "3", "--precision", "3"]), 1);
    assert_exit(&run(&["growth", "--group", "z:0", "--max-n", "4"]), 1);
    let env_err = bin()
        .args(["figure1", "--max", "2"])
        .env("ORBITZETA_THREADS", "many")
        .output()
        .unwrap();
    assert_exit(&env_err, 1);
    assert_exit(
        &run(&["mobius", "--upper", "2 0; 0 2", "--lower", "3 0; 0 3"]),
        1,
    );

    // Caps: orbit horizon and the exact Mertens table.
    assert_exit(&run(&["orbits", "--max", "200"]), 2);
    assert_exit(&run(&["mertens", "--group", "z:2", "--max", "20000"]), 2);

    // I/O: unwritable output path.
    let missing = Path::new("/nonexistent/dir/out.csv");
    let io = bin()
        .args(["figure1", "--max", "2", "--out"])
        .arg(missing)
        .output()
        .unwrap();
    assert_exit(&io, 4);

    // Help is not an error.
    assert_exit(&run(&["--help"]), 0);
}

#[test]
fn check_battery_prints_one_line_per_criterion() {
    let output = run(&["check-all"]);
    // One stated bound is violated by the exact data, so the battery
    // reports it and signals a consistency failure.
    assert_exit(&output, 3);
    let text = stdout(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    for line in &lines {
        assert!(
            line.starts_with("PASS criterion ") || line.starts_with("FAIL criterion "),
            "unexpected line: {line}"
        );
    }
    let failures: Vec<&&str> = lines.iter().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failures.len(), 1);
    assert!(failures[0].contains("criterion 8b"));
}
