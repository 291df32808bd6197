use std::process::ExitCode;

use torfill::selftest::{run, Level};

fn main() -> ExitCode {
    let results = run(Level::Quick, 2024, |r| {
        println!("{}", r.line());
        for d in &r.details {
            println!("    {d}");
        }
    });
    let passed = results.iter().filter(|r| r.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    ExitCode::SUCCESS
}
