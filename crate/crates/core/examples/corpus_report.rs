//! Runs the full corpus with default budgets and prints the table.

use subkern::corpus::{all_entries, run_corpus};
use subkern::SearchBudget;

fn main() {
    let report = run_corpus(&all_entries(), &SearchBudget::default());
    print!("{}", report.table());
    for r in report.failures() {
        println!("{}: {}", r.id, r.detail);
    }
}
