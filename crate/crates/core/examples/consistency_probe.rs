//! Forward search: derives formulas from seeds and probes theory extensions for inconsistency.

use ulogic::formula::parse;
use ulogic::proof::{consistency_probe, derive_closure, Probe, Theory};

fn main() {
    let seeds = [parse("p").unwrap(), parse("p -> q").unwrap()];
    let closure = derive_closure(&Theory::upl(), &seeds, 1).unwrap();
    let q = parse("q").unwrap();
    println!("closure at depth 1: {} formulas, contains q: {}", closure.len(), closure.contains(&q));

    for extra in [vec!["p", "p -> 0"], vec!["p \\/ q"]] {
        let extra: Vec<_> = extra.iter().map(|t| parse(t).unwrap()).collect();
        let shown: Vec<String> = extra.iter().map(|f| f.to_string()).collect();
        match consistency_probe(&Theory::gfl(), &extra, 2).unwrap() {
            Probe::Inconsistent { proof } => {
                println!("GFL + {{{}}} derives 0:", shown.join(", "));
                print!("{}", proof.to_text());
            }
            Probe::NoDerivationFound { depth, explored } => {
                println!("GFL + {{{}}}: no derivation of 0 up to depth {depth} ({explored} formulas)", shown.join(", "))
            }
        }
    }
}
