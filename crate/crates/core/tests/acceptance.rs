//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Criteria 1 to 13 run in process at full scale from master seed 7.
//! Criterion 14 runs the `qembed selftest` binary twice, with one and with
//! eight workers, and compares the summary CSVs byte for byte.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use qembed::selftest::{self, Scale};

const SEED: u64 = 7;

fn selftest_run(jobs: usize, dir: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qembed"))
        .args(["selftest", "--seed", &SEED.to_string(), "--jobs", &jobs.to_string(), "--out"])
        .arg(dir)
        .output()
        .map_err(|e| format!("cannot start qembed: {e}"))?;
    if !status.status.success() {
        return Err(format!(
            "selftest --jobs {jobs} exited with {:?}: {}",
            status.status.code(),
            String::from_utf8_lossy(&status.stdout)
        ));
    }
    let read = |name: &str| std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"));
    Ok((read("selftest.csv")?, read("summary.csv")?))
}

fn determinism() -> (bool, String) {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let one = selftest_run(1, &tmp.path().join("jobs1"));
    let eight = selftest_run(8, &tmp.path().join("jobs8"));
    match (one, eight) {
        (Ok(a), Ok(b)) => {
            let same = a == b;
            (same, format!("selftest.csv identical={} summary.csv identical={}", a.0 == b.0, a.1 == b.1))
        }
        (Err(e), _) | (_, Err(e)) => (false, e),
    }
}

fn main() {
    // `cargo test -- --list` and filters come through here too
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut failed = 0;
    for c in selftest::CRITERIA {
        let start = Instant::now();
        let o = c.run(SEED, Scale::Full);
        failed += usize::from(!o.passed());
        println!("{} [{:.1}s]", o.line(), start.elapsed().as_secs_f64());
    }
    let start = Instant::now();
    let (ok, detail) = determinism();
    failed += usize::from(!ok);
    println!(
        "[{:>4}] 14 determinism: {detail} [{:.1}s]",
        if ok { "pass" } else { "fail" },
        start.elapsed().as_secs_f64()
    );
    println!("acceptance: {} of 14 criteria passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
