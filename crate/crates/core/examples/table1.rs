//! Runs the reproduction suite and prints the verdict table it supports.

use entwb::harness::repro::run_repro_suite;
use entwb::harness::table::VerdictTable;
use entwb::harness::DEFAULT_SEED;

fn main() {
    let report = run_repro_suite(DEFAULT_SEED);
    println!("{} cases, {} checks, {} failed", report.cases.len(), report.num_checks(), report.num_failed());
    for case in report.cases.iter().filter(|c| !c.passed()) {
        for ch in case.checks.iter().filter(|c| !c.pass) {
            println!("FAIL {} :: {} expected {} got {}", case.id, ch.name, ch.expected, ch.actual);
        }
    }
    match VerdictTable::from_report(&report) {
        Ok(table) => print!("\n{}", table.to_markdown()),
        Err(e) => println!("table refused: {e}"),
    }
}
