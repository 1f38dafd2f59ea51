//! Parsing an instance file and running commands on it, as the `toric`
//! binary does.
//!
//! cargo run --example instance_file

use toric_heights::cli::{execute, parse_instance, render, Command, RunConfig};

const TEXT: &str = r#"{
  "version": 1,
  "n": 1,
  "A": [[0], [1], [2]],
  "alpha": ["1", "2", "1"],
  "b": [1, 0, 0]
}"#;

fn main() {
    let inst = match parse_instance(TEXT) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    };
    println!("{}", render(&inst));
    for c in [Command::Degree, Command::Height, Command::Bezout] {
        match execute(c, &inst, &RunConfig::default()) {
            Ok(r) => print!("== {c}\n{}", r.to_text(10)),
            Err(e) => println!("== {c}: {e}"),
        }
    }
    let r = execute(Command::Height, &inst, &RunConfig::default()).expect("height");
    println!("{}", serde_json::to_string_pretty(&r.to_json(10)).expect("json"));
}
