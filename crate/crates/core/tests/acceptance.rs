use std::process::ExitCode;

use p1dyn::acceptance::{run_all, KNOWN_UNATTAINABLE};

fn main() -> ExitCode {
    let results = run_all();
    for r in &results {
        println!("{}", r.line());
    }
    let hard: Vec<u32> = results
        .iter()
        .filter(|r| !r.passed && !r.known_unattainable)
        .map(|r| r.id)
        .collect();
    for r in results.iter().filter(|r| !r.passed && r.known_unattainable) {
        let why = KNOWN_UNATTAINABLE
            .iter()
            .find(|k| k.0 == r.id)
            .map_or("", |k| k.1);
        println!("note: criterion {} is known unattainable: {why}", r.id);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    if hard.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {hard:?}");
        ExitCode::FAILURE
    }
}
