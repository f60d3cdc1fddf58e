//! Checks every law on every built-in algebra and prints a summary line each.

use ulogic::algebra::check_laws;
use ulogic::zoo::{catalogue, make_algebra};

fn main() {
    for spec in catalogue() {
        let h = make_algebra(&spec).expect("catalogued algebras build");
        let report = check_laws(&h, 2_000, 1);
        let failed: Vec<&str> = report.failures().map(|o| o.law.name()).collect();
        let mode = if report.exhaustive { "exhaustive" } else { "sampled" };
        if failed.is_empty() {
            println!("{:<32} {mode:<10} all {} laws hold", h.id(), report.outcomes.len());
        } else {
            println!("{:<32} {mode:<10} failing: {}", h.id(), failed.join(", "));
        }
    }
    let ray = ulogic::zoo::algebra_by_id("prob-ray").unwrap();
    let ops = ray.ops();
    let zero = ulogic::algebra::Value::num(0.0);
    let fifth = ulogic::algebra::Value::num(0.2);
    println!("prob-ray: 0 -> 0.2 = {}", ops.display(&ops.residuum(&zero, &fifth)));
}
