//! Acceptance criterion for the command-line surface: determinism of the
//! ranked scan across worker counts, byte for byte.

use std::process::Command;
use std::time::Instant;

fn scan_bytes(workers: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_f1curve"))
        .args([
            "scan", "--min", "2", "--max", "500", "--top", "20", "--workers", workers,
        ])
        .env_remove("F1CURVE_THREADS")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "scan failed at {workers} workers");
    out.stdout
}

/// Criterion 11: `scan --min 2 --max 500 --top 20` is byte-identical at
/// 1, 4 and 8 workers.
#[test]
fn criterion_11_scan_determinism() {
    let t0 = Instant::now();
    let one = scan_bytes("1");
    let four = scan_bytes("4");
    let eight = scan_bytes("8");
    let pass = one == four && four == eight;
    let status = if pass { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE 11 (scan determinism across 1/4/8 workers): {status} [{:.1}s]",
        t0.elapsed().as_secs_f64()
    );
    assert!(pass, "scan output differs between worker counts");
    // The environment override must preserve determinism too.
    let env_out = Command::new(env!("CARGO_BIN_EXE_f1curve"))
        .args(["scan", "--min", "2", "--max", "500", "--top", "20", "--workers", "1"])
        .env("F1CURVE_THREADS", "8")
        .output()
        .expect("binary runs");
    assert_eq!(env_out.stdout, one);
}
