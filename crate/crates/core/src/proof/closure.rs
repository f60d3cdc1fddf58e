//! Bounded forward closure under modus ponens.
//!
//! Level 0 holds the seeds and every axiom instance whose metavariables
//! are drawn from a term pool: subformulas of the seeds and goal, `0` and
//! `1`. Each later level adds one round of modus ponens, where the major
//! premise is either a formula already present or an axiom instance whose
//! antecedent matches one and binds all of its metavariables. Formulas
//! much larger than the seeds and goal are dropped.

use std::collections::{BTreeMap, BTreeSet};

use super::script::{Justification, ProofLine, ProofScript};
use super::{ProofError, Theory};
use crate::formula::{match_core, Formula, Schema, Subst};

/// Largest depth accepted by [`derive_closure`].
pub const MAX_DEPTH: usize = 8;
/// Formulas larger than this many times the largest seed or goal (and
/// larger than [`MIN_SIZE_CAP`]) are not kept.
pub const SIZE_FACTOR: usize = 5;
pub const MIN_SIZE_CAP: usize = 12;
/// Largest closure size before the search gives up.
pub const MAX_FORMULAS: usize = 400_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    /// The i-th seed.
    Seed(usize),
    Axiom { id: String, bindings: Subst },
    Mp { minor: Formula, major: Formula },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub depth: usize,
    pub origin: Origin,
}

#[derive(Clone, Debug)]
pub struct Closure {
    entries: BTreeMap<Formula, Derivation>,
    support: BTreeMap<Formula, Origin>,
    seeds: Vec<Formula>,
    depth: usize,
}

impl Closure {
    pub fn contains(&self, f: &Formula) -> bool {
        self.entries.contains_key(&f.desugar())
    }

    pub fn derivation(&self, f: &Formula) -> Option<&Derivation> {
        self.entries.get(&f.desugar())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Depth the closure was computed to.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Members in a canonical order.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.entries.keys()
    }

    /// A proof of `f` where seeds are justified by `seed_axiom(i)`.
    fn proof_lines(&self, f: &Formula, seed_axiom: &dyn Fn(usize) -> String) -> Option<Vec<ProofLine>> {
        let mut lines: Vec<ProofLine> = Vec::new();
        let mut index: BTreeMap<Formula, usize> = BTreeMap::new();
        self.emit(&f.desugar(), seed_axiom, &mut lines, &mut index)?;
        Some(lines)
    }

    fn emit(
        &self,
        f: &Formula,
        seed_axiom: &dyn Fn(usize) -> String,
        lines: &mut Vec<ProofLine>,
        index: &mut BTreeMap<Formula, usize>,
    ) -> Option<usize> {
        if let Some(&n) = index.get(f) {
            return Some(n);
        }
        let origin = match self.entries.get(f) {
            Some(d) => &d.origin,
            None => self.support.get(f)?,
        };
        let justification = match origin {
            Origin::Seed(i) => Justification::Axiom {
                id: seed_axiom(*i),
                bindings: Subst::new(),
            },
            Origin::Axiom { id, bindings } => Justification::Axiom {
                id: id.clone(),
                bindings: bindings.clone(),
            },
            Origin::Mp { minor, major } => {
                let i = self.emit(minor, seed_axiom, lines, index)?;
                let j = self.emit(major, seed_axiom, lines, index)?;
                Justification::Mp(i, j)
            }
        };
        let number = lines.len() + 1;
        lines.push(ProofLine {
            number,
            formula: f.clone(),
            justification,
        });
        index.insert(f.clone(), number);
        Some(number)
    }
}

struct Prepared {
    id: String,
    pattern: Formula,
    metavars: Vec<String>,
}

fn prepare(theory: &Theory) -> Vec<Prepared> {
    theory
        .axioms()
        .iter()
        .map(|(id, s)| Prepared {
            id: id.clone(),
            pattern: s.pattern().desugar(),
            metavars: s.metavars(),
        })
        .collect()
}

fn cap(what: &str, limit: usize) -> ProofError {
    ProofError::CapExceeded {
        what: what.into(),
        limit,
    }
}

/// Calls `visit` with every extension of `base` binding `free` over `pool`.
fn for_each_binding(
    free: &[String],
    pool: &[Formula],
    base: &Subst,
    visit: &mut dyn FnMut(&Subst) -> Result<(), ProofError>,
) -> Result<(), ProofError> {
    if free.is_empty() {
        return visit(base);
    }
    if pool.is_empty() {
        return Ok(());
    }
    let mut digits = vec![0usize; free.len()];
    let mut s = base.clone();
    loop {
        for (v, d) in free.iter().zip(&digits) {
            s.insert(v.clone(), pool[*d].clone());
        }
        visit(&s)?;
        let mut k = free.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < pool.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn instance(p: &Prepared, s: &Subst) -> Formula {
    Schema::from_formula(p.pattern.clone())
        .instantiate(s)
        .expect("all metavariables bound")
}

fn saturate(
    theory: &Theory,
    seeds: &[Formula],
    goal: Option<&Formula>,
    depth: usize,
) -> Result<Closure, ProofError> {
    if depth > MAX_DEPTH {
        return Err(cap("closure depth", MAX_DEPTH));
    }
    let seeds: Vec<Formula> = seeds.iter().map(Formula::desugar).collect();
    let goal = goal.map(Formula::desugar);
    let mut pool: BTreeSet<Formula> = BTreeSet::new();
    for f in seeds.iter().chain(goal.iter()) {
        pool.extend(f.subformulas());
    }
    pool.insert(Formula::False);
    pool.insert(Formula::one());
    let pool: Vec<Formula> = pool.into_iter().collect();
    let largest = seeds.iter().chain(goal.iter()).map(Formula::size).max().unwrap_or(1);
    let max_size = (SIZE_FACTOR * largest).max(MIN_SIZE_CAP);
    let fits = |f: &Formula| f.size() <= max_size;
    let axioms = prepare(theory);

    let mut entries: BTreeMap<Formula, Derivation> = BTreeMap::new();
    let too_big = |n: usize| n > MAX_FORMULAS;
    for (i, s) in seeds.iter().enumerate() {
        entries.entry(s.clone()).or_insert(Derivation {
            depth: 0,
            origin: Origin::Seed(i),
        });
    }
    for p in &axioms {
        let n = pool.len().checked_pow(p.metavars.len() as u32).unwrap_or(usize::MAX);
        if too_big(entries.len().saturating_add(n)) {
            return Err(cap("axiom instances", MAX_FORMULAS));
        }
        for_each_binding(&p.metavars, &pool, &Subst::new(), &mut |s| {
            let inst = instance(p, s);
            if !fits(&inst) {
                return Ok(());
            }
            entries.entry(inst).or_insert_with(|| Derivation {
                depth: 0,
                origin: Origin::Axiom {
                    id: p.id.clone(),
                    bindings: s.clone(),
                },
            });
            Ok(())
        })?;
    }

    let reached = |e: &BTreeMap<Formula, Derivation>| goal.as_ref().is_some_and(|g| e.contains_key(g));
    // Axiom instances used only as major premises; kept for proofs.
    let mut support: BTreeMap<Formula, Origin> = BTreeMap::new();
    let mut done = 0;
    for level in 1..=depth {
        if reached(&entries) {
            break;
        }
        let mut fresh: BTreeMap<Formula, Derivation> = BTreeMap::new();
        let add = |fresh: &mut BTreeMap<Formula, Derivation>, f: Formula, origin: Origin| -> Result<(), ProofError> {
            if fits(&f) && !entries.contains_key(&f) && !fresh.contains_key(&f) {
                fresh.insert(f, Derivation { depth: level, origin });
                if too_big(entries.len() + fresh.len()) {
                    return Err(cap("closure size", MAX_FORMULAS));
                }
            }
            Ok(())
        };
        for major in entries.keys() {
            if let Formula::Implies(a, b) = major {
                if entries.contains_key(&**a) {
                    add(
                        &mut fresh,
                        (**b).clone(),
                        Origin::Mp {
                            minor: (**a).clone(),
                            major: major.clone(),
                        },
                    )?;
                }
            }
        }
        for minor in entries.keys() {
            for p in &axioms {
                let Formula::Implies(ant, _) = &p.pattern else {
                    continue;
                };
                let mut s = Subst::new();
                if !match_core(ant, minor, &mut s) {
                    continue;
                }
                if p.metavars.iter().any(|v| !s.contains_key(v)) {
                    continue;
                }
                let inst = instance(p, &s);
                let Formula::Implies(_, concl) = &inst else {
                    continue;
                };
                if !fits(concl) || entries.contains_key(&**concl) || fresh.contains_key(&**concl) {
                    continue;
                }
                let concl = (**concl).clone();
                if !entries.contains_key(&inst) {
                    support.entry(inst.clone()).or_insert_with(|| Origin::Axiom {
                        id: p.id.clone(),
                        bindings: s.clone(),
                    });
                }
                add(
                    &mut fresh,
                    concl,
                    Origin::Mp {
                        minor: minor.clone(),
                        major: inst,
                    },
                )?;
            }
        }
        entries.extend(fresh);
        done = level;
    }
    Ok(Closure {
        entries,
        support,
        seeds,
        depth: done,
    })
}

/// Closes `seeds` and bounded axiom instances under modus ponens.
pub fn derive_closure(theory: &Theory, seeds: &[Formula], depth: usize) -> Result<Closure, ProofError> {
    saturate(theory, seeds, None, depth)
}

#[derive(Clone, Debug)]
pub enum Probe {
    /// `0` was derived; the proof is checkable by [`super::check_proof`].
    Inconsistent { proof: ProofScript },
    /// Nothing found within the bound. This is not a consistency proof.
    NoDerivationFound { depth: usize, explored: usize },
}

/// Searches for a derivation of `0` from the theory plus `extra` axioms.
///
/// Extra axioms become schemata `X1`, `X2`, ... of a custom theory, which
/// the returned proof refers to.
pub fn consistency_probe(theory: &Theory, extra: &[Formula], depth: usize) -> Result<Probe, ProofError> {
    let closure = saturate(theory, extra, Some(&Formula::False), depth)?;
    let name = |i: usize| format!("X{}", i + 1);
    let Some(lines) = closure.proof_lines(&Formula::False, &name) else {
        return Ok(Probe::NoDerivationFound {
            depth,
            explored: closure.len(),
        });
    };
    let mut th = if extra.is_empty() {
        theory.clone()
    } else {
        Theory::custom(&format!("{}+extra", theory.id()), theory)
    };
    for (i, f) in closure.seeds.iter().enumerate() {
        th.add_axiom(&name(i), Schema::from_formula(f.clone()))?;
    }
    Ok(Probe::Inconsistent {
        proof: ProofScript { theory: th, lines },
    })
}
