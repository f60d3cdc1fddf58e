//! Checks a shipped proof, then shows the checker rejecting a corrupted copy.

use ulogic::proof::{check_proof, Justification, ProofScript};

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/proofs/gfl_causality.upl");
    let script = ProofScript::parse(&std::fs::read_to_string(path).unwrap()).unwrap();
    let report = check_proof(&script);
    for line in &report.lines {
        println!("{:>2} {:<5} {}", line.number, if line.ok { "ok" } else { "FAIL" }, line.formula);
    }
    println!("accepted: {}", report.accepted());

    let mut broken = script.clone();
    broken.lines[2].justification = Justification::Mp(2, 1);
    let report = check_proof(&broken);
    let line = &report.lines[report.first_failure.unwrap() - 1];
    println!("with MP(2,1) on line 3: rejected at line {}: {}", line.number, line.reason.clone().unwrap_or_default());
}
