use std::process::ExitCode;

use clap::Parser;
use projective_ei::cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
