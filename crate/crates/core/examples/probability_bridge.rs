//! Turns a two-coin space into a prob-ray evaluation and back.

use ulogic::formula::parse;
use ulogic::probability::{extend_to_evaluation, restrict_evaluation, validate_space, ProbabilitySpace};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_coins.json");
    let space = ProbabilitySpace::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    println!("valid: {}", validate_space(&space).is_valid());

    let ev = extend_to_evaluation(&space).unwrap();
    for text in ["First & Second", "First \\/ Second", "~First", "First -> Second"] {
        println!("e({text}) = {}", ev.value(&parse(text).unwrap()).unwrap());
    }

    let back = restrict_evaluation(&ev, &space.field).unwrap();
    println!("round trip exact: {}", back.space.p == space.p);
}
