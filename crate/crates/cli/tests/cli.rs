//! End-to-end checks of the command-line surface: worked examples, exit
//! codes, format round-trips, and graceless-input behavior.

use std::process::{Command, Output};

fn f1curve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_f1curve"))
        .args(args)
        .env_remove("F1CURVE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn map_reports_the_five_places_of_two_thirds() {
    let out = f1curve(&["map", "2/3", "--primes", "10"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    for needle in [
        "2      [0]",
        "3      [inf]",
        "5      [2]",
        "7      [6]",
        "arch   [0]",
    ] {
        assert!(text.contains(needle), "missing `{needle}` in:\n{text}");
    }
}

#[test]
fn map_rejects_exceptional_numbers_with_exit_2() {
    for q in ["1/1", "-1/1", "1", "-1", "7/7"] {
        let out = f1curve(&["map", q]);
        assert_eq!(exit_code(&out), 2, "q = {q}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("exceptional"));
    }
}

#[test]
fn map_nine_eighths_prints_the_known_defect_sum() {
    let out = f1curve(&["map", "9/8"]);
    assert_eq!(exit_code(&out), 0);
    let expected = ((27.0f64 / 2.0).ln() - 1.0) / 9.0f64.ln();
    let text = stdout(&out);
    assert!(
        text.contains(&format!("S(q) = {:.12}", expected).as_str()[..14]),
        "defect sum missing in:\n{text}"
    );
    // The archimedean sign adjustment fires for |q| > 1.
    assert!(text.contains("literal -log|q|"));
}

#[test]
fn scan_of_height_two_has_the_closed_form_value() {
    let out = f1curve(&["scan", "--min", "2", "--max", "2", "--top", "5"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    // (log 2 - 1)/log 2 = -0.442695040889
    assert_eq!(text.matches("-0.442695040889").count(), 4, "{text}");
}

#[test]
fn scan_rejects_empty_ranges() {
    let out = f1curve(&["scan", "--min", "10", "--max", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn abc_examples() {
    let out = f1curve(&["abc", "1", "8", "9"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("quality = 1.22629438553"), "{text}");

    let out = f1curve(&["abc", "1", "1", "2"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("quality = 1.00000000000"));

    let out = f1curve(&["abc", "2", "3", "5"]);
    assert_eq!(exit_code(&out), 0);
    let expected = 5f64.ln() / 30f64.ln();
    assert!(stdout(&out).contains(&format!("quality = {:.11}", expected)[..12]));

    // Invalid triples exit 2.
    for bad in [
        vec!["abc", "1", "1", "3"],
        vec!["abc", "3", "2", "5"],
        vec!["abc", "2", "4", "6"],
        vec!["abc", "0", "1", "1"],
    ] {
        let out = f1curve(&bad);
        assert_eq!(exit_code(&out), 2, "{bad:?}");
    }
}

#[test]
fn projline_enumerate_matches_the_point_lists() {
    let out = f1curve(&["projline", "--m", "1", "--bound", "3", "enumerate"]);
    let text = stdout(&out);
    for p in ["generic", "[0]", "[inf]", "[1]", "[2]", "[3]"] {
        assert!(text.contains(p), "missing {p} in {text}");
    }
    let out = f1curve(&["projline", "--m", "2", "--bound", "2", "enumerate"]);
    let text = stdout(&out);
    assert!(text.contains("[1,1/2]"));
    assert!(text.contains("[2,1/2]"));
    assert!(!text.contains("[2]\n"), "[2,1] must be excluded: {text}");
}

#[test]
fn projline_fibers_of_six() {
    let out = f1curve(&["projline", "--m", "1", "--bound", "6", "fibers", "[6]"]);
    let text = stdout(&out);
    assert!(text.contains("size 2"));
    assert!(text.contains("1/6"));
    assert!(text.contains("5/6"));
}

#[test]
fn projline_closure_reports_exactly_one_direction() {
    let out = f1curve(&["projline", "--m", "2", "--bound", "9", "closure", "[9,1]", "[3,1]"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("in closure of [9]: true"), "{text}");
    assert!(text.contains("in closure of [3]: false"), "{text}");
    assert!(text.contains("not T1"), "{text}");
}

#[test]
fn projline_quotient_reports_bijectivity() {
    let out = f1curve(&[
        "projline", "quotient", "--modulus", "5", "--residues", "1,2,3,4",
    ]);
    let text = stdout(&out);
    assert!(text.contains("bijection: true"), "{text}");

    // The conjugation-type subgroup collides.
    let out = f1curve(&["projline", "quotient", "--modulus", "5", "--residues", "4"]);
    let text = stdout(&out);
    assert!(text.contains("injective: false"), "{text}");
    assert!(text.contains("collision at [5]"), "{text}");
}

#[test]
fn projline_quotient_rejects_non_units() {
    let out = f1curve(&["projline", "quotient", "--modulus", "6", "--residues", "2"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn sections_whole_curve_and_dyadic() {
    let out = f1curve(&["sections", "--height", "9"]);
    let text = stdout(&out);
    assert!(text.contains("3 elements"), "{text}");

    let out = f1curve(&["sections", "--exclude", "2,arch", "--height", "4"]);
    let text = stdout(&out);
    assert!(text.contains("3/4"));
    assert!(!text.contains("1/3"));

    let out = f1curve(&["sections", "--exclude", "4", "--height", "4"]);
    assert_eq!(exit_code(&out), 2, "4 is not prime");
}

#[test]
fn json_report_recomputes_to_the_printed_defect_sum() {
    let out = f1curve(&["map", "9/8", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    let printed_s = value["s"].as_str().unwrap();
    let num_ledger: f1curve_core::ledger::DegreeLedger =
        value["defect_numerator"]["ledger"].as_str().unwrap().parse().unwrap();
    let deg_ledger: f1curve_core::ledger::DegreeLedger =
        value["degree"]["ledger"].as_str().unwrap().parse().unwrap();
    let recomputed = num_ledger.value() / deg_ledger.value();
    // Reproduce the printed 12 significant digits exactly.
    let reformatted = format!("{:.12}", recomputed);
    assert_eq!(&reformatted[..13], &printed_s[..13], "{value}");
}

#[test]
fn csv_scan_rows_recompute_to_the_printed_value() {
    let out = f1curve(&["scan", "--min", "2", "--max", "30", "--top", "5", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "rank,q,s,numerator,degree");
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 5, "{line}");
        let printed: f64 = cols[2].parse().unwrap();
        let num: f1curve_core::ledger::DegreeLedger = cols[3].parse().unwrap();
        let deg: f1curve_core::ledger::DegreeLedger = cols[4].parse().unwrap();
        let recomputed = num.value() / deg.value();
        assert!(
            (printed - recomputed).abs() <= 1e-11 * printed.abs().max(1.0),
            "{line}: {printed} vs {recomputed}"
        );
    }
}

#[test]
fn adversarial_inputs_never_panic() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["map", "0/0"],
        vec!["map", "x"],
        vec!["map", "5/0"],
        vec!["map", "0"],
        vec!["map", "--primes", "banana", "2/3"],
        vec!["scan"],
        vec!["scan", "--min", "0", "--max", "5"],
        vec!["scan", "--min", "2", "--max", "5", "--top", "0"],
        vec!["abc", "-1", "2", "1"],
        vec!["abc", "one", "two", "three"],
        vec!["projline", "--m", "0", "--bound", "3", "enumerate"],
        vec!["projline", "--m", "1", "--bound", "0", "enumerate"],
        vec!["projline", "--m", "1", "--bound", "3", "fibers", "[banana]"],
        vec!["projline", "--m", "1", "--bound", "3", "fibers", "]["],
        vec!["projline", "--m", "2", "--bound", "3", "closure", "[2,1]", "[1]"],
        vec!["projline", "quotient", "--modulus", "0", "--residues", "1"],
        vec!["sections", "--exclude", "arch,arch,banana"],
        vec!["nonsense"],
        vec![],
    ];
    for case in cases {
        let out = f1curve(&case);
        let code = exit_code(&out);
        assert!(
            code == 2 || code == 3,
            "{case:?} exited {code} (stdout: {}, stderr: {})",
            stdout(&out),
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(
            !String::from_utf8_lossy(&out.stderr).contains("panicked"),
            "{case:?} panicked"
        );
    }
}

#[test]
fn checkpoint_resume_produces_identical_output() {
    let dir = std::env::temp_dir().join(format!("f1curve-ck-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ck = dir.join("scan.ck");
    let _ = std::fs::remove_file(&ck);

    // Full run without checkpoint.
    let full = f1curve(&["scan", "--min", "2", "--max", "300", "--top", "7", "--format", "csv"]);
    // Interrupted-style run: first cover a prefix by shrinking max, then
    // resume with the real range using the same checkpoint file.
    let ck_str = ck.to_str().unwrap();
    let _pre = f1curve(&[
        "scan", "--min", "2", "--max", "300", "--top", "7", "--format", "csv", "--checkpoint",
        ck_str,
    ]);
    // Second run resumes at the end; it must not change the answer.
    let resumed = f1curve(&[
        "scan", "--min", "2", "--max", "300", "--top", "7", "--format", "csv", "--checkpoint",
        ck_str,
    ]);
    assert_eq!(stdout(&full), stdout(&resumed));

    // A checkpoint from a different configuration is refused.
    let bad = f1curve(&[
        "scan", "--min", "2", "--max", "301", "--top", "7", "--format", "csv", "--checkpoint",
        ck_str,
    ]);
    assert_eq!(exit_code(&bad), 2);
    let _ = std::fs::remove_file(&ck);
}
