//! Law-checking harness: samples element triples and tests every defining
//! law of a UL-algebra together with the derived order properties.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Algebra, AlgebraHandle, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Law {
    LeastZero,
    Reflexive,
    Antisymmetric,
    Transitive,
    StarCommutative,
    StarAssociative,
    StarUnit,
    StarUnitClosed,
    OplusCommutative,
    OplusAssociative,
    OplusUnit,
    OplusMonotone,
    MaxSolution,
    NegConstants,
    NegAntitone,
    Adjunction,
    StarMonotone,
    ResiduumMonotone,
    ResiduumAntitone,
    OplusExtensive,
    ResiduumUnitLeft,
    ResiduumOneImpliesLeq,
}

impl Law {
    pub const ALL: [Law; 22] = [
        Law::LeastZero,
        Law::Reflexive,
        Law::Antisymmetric,
        Law::Transitive,
        Law::StarCommutative,
        Law::StarAssociative,
        Law::StarUnit,
        Law::StarUnitClosed,
        Law::OplusCommutative,
        Law::OplusAssociative,
        Law::OplusUnit,
        Law::OplusMonotone,
        Law::MaxSolution,
        Law::NegConstants,
        Law::NegAntitone,
        Law::Adjunction,
        Law::StarMonotone,
        Law::ResiduumMonotone,
        Law::ResiduumAntitone,
        Law::OplusExtensive,
        Law::ResiduumUnitLeft,
        Law::ResiduumOneImpliesLeq,
    ];

    /// Which group of axioms the law belongs to (`U1`..`U5`, or `derived`).
    pub fn group(self) -> &'static str {
        use Law::*;
        match self {
            LeastZero | Reflexive | Antisymmetric | Transitive => "U1",
            StarCommutative | StarAssociative | StarUnit | StarUnitClosed => "U2",
            OplusCommutative | OplusAssociative | OplusUnit | OplusMonotone | MaxSolution => "U3",
            NegConstants | NegAntitone => "U4",
            Adjunction => "U5",
            _ => "derived",
        }
    }

    pub fn name(self) -> &'static str {
        use Law::*;
        match self {
            LeastZero => "zero-least",
            Reflexive => "leq-reflexive",
            Antisymmetric => "leq-antisymmetric",
            Transitive => "leq-transitive",
            StarCommutative => "star-commutative",
            StarAssociative => "star-associative",
            StarUnit => "star-unit",
            StarUnitClosed => "star-unit-interval-closed",
            OplusCommutative => "oplus-commutative",
            OplusAssociative => "oplus-associative",
            OplusUnit => "oplus-unit",
            OplusMonotone => "oplus-monotone",
            MaxSolution => "oplus-max-solution",
            NegConstants => "neg-constants",
            NegAntitone => "neg-antitone",
            Adjunction => "residuation-adjunction",
            StarMonotone => "star-monotone",
            ResiduumMonotone => "residuum-monotone",
            ResiduumAntitone => "residuum-antitone",
            OplusExtensive => "oplus-extensive",
            ResiduumUnitLeft => "residuum-unit-left",
            ResiduumOneImpliesLeq => "residuum-one-implies-leq",
        }
    }

    /// Tests the law on one triple. Laws of lower arity ignore the tail.
    pub fn holds(self, alg: &dyn Algebra, a: &Value, b: &Value, c: &Value) -> bool {
        use Law::*;
        let one = alg.one();
        let zero = alg.zero();
        match self {
            LeastZero => alg.leq(&zero, a),
            Reflexive => alg.leq(a, a),
            Antisymmetric => !(alg.leq(a, b) && alg.leq(b, a)) || alg.eq(a, b),
            Transitive => !(alg.leq(a, b) && alg.leq(b, c)) || alg.leq(a, c),
            StarCommutative => alg.eq(&alg.star(a, b), &alg.star(b, a)),
            StarAssociative => alg.eq(
                &alg.star(&alg.star(a, b), c),
                &alg.star(a, &alg.star(b, c)),
            ),
            StarUnit => alg.eq(&alg.star(a, &one), a),
            StarUnitClosed => {
                !(alg.leq(a, &one) && alg.leq(b, &one)) || alg.leq(&alg.star(a, b), &one)
            }
            OplusCommutative => alg.eq(&alg.oplus(a, b), &alg.oplus(b, a)),
            OplusAssociative => alg.eq(
                &alg.oplus(&alg.oplus(a, b), c),
                &alg.oplus(a, &alg.oplus(b, c)),
            ),
            OplusUnit => alg.eq(&alg.oplus(a, &zero), a),
            OplusMonotone => !alg.leq(a, b) || alg.leq(&alg.oplus(a, c), &alg.oplus(b, c)),
            MaxSolution => {
                if !alg.leq(a, b) {
                    return true;
                }
                match alg.max_solution(a, b) {
                    Err(_) => false,
                    Ok(m) => {
                        alg.eq(&alg.oplus(a, &m), b)
                            && (!alg.eq(&alg.oplus(a, c), b) || alg.leq(c, &m))
                    }
                }
            }
            NegConstants => alg.eq(&alg.neg(&zero), &one) && alg.eq(&alg.neg(&one), &zero),
            NegAntitone => !alg.leq(a, b) || alg.leq(&alg.neg(b), &alg.neg(a)),
            Adjunction => alg.leq(c, &alg.residuum(a, b)) == alg.leq(&alg.star(a, c), b),
            StarMonotone => !alg.leq(a, b) || alg.leq(&alg.star(a, c), &alg.star(b, c)),
            ResiduumMonotone => {
                !alg.leq(a, b) || alg.leq(&alg.residuum(c, a), &alg.residuum(c, b))
            }
            ResiduumAntitone => {
                !alg.leq(a, b) || alg.leq(&alg.residuum(b, c), &alg.residuum(a, c))
            }
            OplusExtensive => alg.leq(a, &alg.oplus(a, b)),
            ResiduumUnitLeft => alg.eq(&alg.residuum(&one, a), a),
            ResiduumOneImpliesLeq => !alg.leq(&one, &alg.residuum(a, b)) || alg.leq(a, b),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawOutcome {
    pub law: Law,
    pub group: &'static str,
    pub passed: u64,
    pub failed: u64,
    /// First failing triple in deterministic sample order.
    pub witness: Option<[Value; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub algebra: String,
    pub seed: u64,
    /// Number of triples checked (anchors and exhaustive runs included).
    pub samples: u64,
    pub exhaustive: bool,
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.failed == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawOutcome> {
        self.outcomes.iter().filter(|o| o.failed > 0)
    }

    pub fn outcome(&self, law: Law) -> &LawOutcome {
        self.outcomes
            .iter()
            .find(|o| o.law == law)
            .expect("every law is reported")
    }
}

/// Checks every [`Law`] on `samples` random triples plus all triples of
/// anchor elements. Finite carriers are checked exhaustively instead and
/// `samples` is ignored.
pub fn check_laws(algebra: &AlgebraHandle, samples: u64, seed: u64) -> LawReport {
    let alg = algebra.ops();
    let mut outcomes: Vec<LawOutcome> = Law::ALL
        .iter()
        .map(|&law| LawOutcome {
            law,
            group: law.group(),
            passed: 0,
            failed: 0,
            witness: None,
        })
        .collect();
    let mut count = 0u64;
    let mut visit = |a: &Value, b: &Value, c: &Value| {
        count += 1;
        for o in outcomes.iter_mut() {
            if o.law.holds(alg, a, b, c) {
                o.passed += 1;
            } else {
                o.failed += 1;
                if o.witness.is_none() {
                    o.witness = Some([a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    };

    let exhaustive = match alg.enumerate() {
        Some(all) => {
            for a in &all {
                for b in &all {
                    for c in &all {
                        visit(a, b, c);
                    }
                }
            }
            true
        }
        None => {
            let anchors = alg.anchors();
            for a in &anchors {
                for b in &anchors {
                    for c in &anchors {
                        visit(a, b, c);
                    }
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples.max(1) {
                let a = alg.sample(&mut rng);
                let b = alg.sample(&mut rng);
                let c = alg.sample(&mut rng);
                visit(&a, &b, &c);
            }
            false
        }
    };

    LawReport {
        algebra: algebra.id().to_string(),
        seed,
        samples: count,
        exhaustive,
        outcomes,
    }
}

/// Re-tests a recorded witness; a genuine witness fails again.
pub fn recheck(algebra: &AlgebraHandle, law: Law, witness: &[Value; 3]) -> bool {
    law.holds(algebra.ops(), &witness[0], &witness[1], &witness[2])
}
