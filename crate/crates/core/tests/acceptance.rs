//! Runs every acceptance criterion and prints one verdict line each.

use std::process::ExitCode;

use bitprobe::harness::acceptance::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = 0;
    for &(id, _) in &CRITERIA {
        let r = run_criterion(id);
        println!("{}", r.line());
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {} passed, {} failed", CRITERIA.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
