//! Evaluates a formula under two conjunction policies and validates the result.

use ulogic::algebra::{fmt_num, Value};
use ulogic::eval::{validate, ConjunctionPolicy, Evaluation};
use ulogic::formula::parse;
use ulogic::zoo::algebra_by_id;

fn main() {
    let f = parse("(p & q) \\/ ~r").unwrap();
    println!("formula:   {f}");
    println!("desugared: {}", f.desugar());
    for policy in [ConjunctionPolicy::Min, ConjunctionPolicy::Star] {
        let name = policy.id().to_string();
        let ev = Evaluation::new(algebra_by_id("tnorm-lukasiewicz").unwrap(), policy)
            .with("p", Value::num(0.7))
            .and_then(|e| e.with("q", Value::num(0.6)))
            .and_then(|e| e.with("r", Value::num(0.9)))
            .unwrap();
        let v = ev.value(&f).unwrap();
        let ok = validate(&ev, &f).is_valid();
        println!("{name:<5} e(φ) = {}  lawful: {ok}", fmt_num(v.as_f64().unwrap()));
    }
}
