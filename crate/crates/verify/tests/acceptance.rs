//! Runs every acceptance criterion at its stated tolerance and prints one
//! pass/fail line per criterion.  Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use osw_verify::{all_ids, run_criteria, Settings};

fn main() -> ExitCode {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let start = Instant::now();
    let verdicts = match run_criteria(&all_ids(), &Settings::default(), jobs) {
        Ok(v) => v,
        Err(e) => {
            println!("acceptance could not start: {e}");
            return ExitCode::FAILURE;
        }
    };
    for v in &verdicts {
        println!("{v}");
    }
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!("acceptance: {} passed, {failed} failed ({:.1} s)", verdicts.len() - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
