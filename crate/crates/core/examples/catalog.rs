//! Runs every built-in problem through its command and prints the exit code.

use fixcert::catalog::CATALOG;
use fixcert::cli::{run, Cli};
use fixcert::problem::Task;
use clap::Parser;

fn main() {
    for entry in CATALOG {
        let cmd = match entry.task {
            Task::Certify => "certify",
            Task::Localize => "localize",
            Task::Index => "index",
            Task::Trace => "trace",
        };
        let r = run(Cli::parse_from(["fixcert", cmd, "--catalog", entry.id]));
        let last = r.stdout.lines().last().or(r.stderr.lines().next()).unwrap_or("");
        println!("{:<24} exit {}  {}", entry.id, r.code, last);
    }
}
