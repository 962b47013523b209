//! Driving the command-line front end in process and reading its report.

use clap::Parser;
use solab::cli::{execute, RunConfig};

fn main() {
    let cfg = RunConfig::parse_from(["solab", "heisenberg", "eval", "--n", "2", "--phi", "0.5"]);
    let report = execute(&cfg).expect("valid command");
    for v in &report.verdicts {
        println!("{:<22} {:>12.4e}  pass = {}", v.check, v.value, v.pass);
    }
    println!("F = {}", report.data["F"]);
}
