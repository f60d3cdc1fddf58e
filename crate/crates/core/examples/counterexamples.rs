//! Searches for counterexamples to classical laws on the Gödel unit interval.

use ulogic::formula::parse;
use ulogic::tautology::{check, Strategy};
use ulogic::zoo::algebra_by_id;

fn main() {
    let godel = algebra_by_id("godel-unit").unwrap();
    let cases = [
        ("p \\/ ~p", Strategy::grid(0.25)),
        ("(p & ~p) -> 0", Strategy::grid(0.25)),
        ("p -> (p & p)", Strategy::grid(0.1).searching()),
        ("p & (p -> q) -> q", Strategy::grid(0.1).searching()),
        ("~~p <-> p", Strategy::random(10_000, 9)),
    ];
    for (text, strategy) in cases {
        let f = parse(text).unwrap();
        let v = check(&f, &godel, &strategy).unwrap();
        match v.witness() {
            Some((w, value)) => {
                let atoms: Vec<String> = w.atoms().iter().map(|(a, x)| format!("{a}={x}")).collect();
                println!("{:<20} {} at {} (value {value})", text, v.name(), atoms.join(", "));
            }
            None => println!("{:<20} {} over {} points", text, v.name(), v.points),
        }
    }
}
