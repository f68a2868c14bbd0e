//! Writes the shipped scenario and game files into the given directory.
//!
//! Usage: cargo run -p sateq-core --example emit_scenarios -- scenarios

use std::fs;
use std::path::Path;

use sateq_core::{Channel, SatisfactionGame};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "scenarios".into());
    let dir = Path::new(&dir);
    fs::create_dir_all(dir).unwrap();
    let write = |name: &str, text: String| fs::write(dir.join(name), text + "\n").unwrap();

    write("golden.json", Channel::golden().to_json());
    write("feasible.json", Channel::feasible().to_json());
    let toy = Channel {
        gains: [[1.0, 0.5], [0.5, 1.0]],
        noise: [1.0, 1.0],
        pmax: [4.0, 4.0],
        levels: [2, 2],
        targets: [1.0, 1.0],
        delta: Some(0.1),
        grid: None,
    };
    write("toy2x2.json", toy.to_json());
    write("example.json", SatisfactionGame::two_by_two_example().to_json().unwrap());
    write("all_true.json", SatisfactionGame::constant(vec![3, 2, 2], true).unwrap().to_json().unwrap());
}
