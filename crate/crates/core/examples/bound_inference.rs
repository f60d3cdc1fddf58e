//! Interval bounds for modus ponens on truth/belief pairs.

use ulogic::algebra::fmt_num;
use ulogic::probability::{mp_bounds, FuzzyRandomJudgment};

fn main() {
    let inputs = [(0.8, 0.6, 0.9, 0.7), (0.5, 1.0, 0.5, 1.0), (1.0, 0.3, 0.95, 0.2)];
    for (p_phi, t_phi, p_imp, t_imp) in inputs {
        let phi = FuzzyRandomJudgment::new(p_phi, t_phi).unwrap();
        let imp = FuzzyRandomJudgment::new(p_imp, t_imp).unwrap();
        let b = mp_bounds(phi, imp).unwrap();
        println!(
            "φ=(p {p_phi}, t {t_phi}) φ→ψ=(p {p_imp}, t {t_imp})  =>  p:[{},{}] t:[{},{}]",
            fmt_num(b.p[0]),
            fmt_num(b.p[1]),
            fmt_num(b.t[0]),
            fmt_num(b.t[1])
        );
    }
}
