use std::io::Write;

use clap::Parser;
use fixcert::cli::{run, Cli};

fn main() {
    let report = run(Cli::parse());
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(report.code);
}
