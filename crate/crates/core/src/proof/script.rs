//! Proof scripts and the line-by-line checker.
//!
//! ```text
//! theory: UPL
//! 1. 0 -> 0 ;; AXIOM(A2){$A = 0}
//! 2. 1      ;; DEF(1)
//! ```
//!
//! A `CUSTOM(name)` theory extends UPL with `axiom ID: schema` lines placed
//! before the first proof line. Blank lines and `#` comments are ignored.

use std::fmt;

use serde::Serialize;

use super::{ProofError, Theory, TheoryId};
use crate::formula::{match_schema, parse, Formula, Schema, Subst};

#[derive(Clone, Debug, PartialEq)]
pub enum Justification {
    /// An axiom instance. Empty bindings mean "infer them by matching".
    Axiom { id: String, bindings: Subst },
    /// Modus ponens from line `minor` (φ) and line `major` (φ → this).
    Mp(usize, usize),
    /// The same formula as the referenced line, up to abbreviations.
    Def(usize),
}

impl Justification {
    /// Lines this justification depends on.
    pub fn references(&self) -> Vec<usize> {
        match self {
            Justification::Axiom { .. } => Vec::new(),
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::Def(i) => vec![*i],
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom { id, bindings } => {
                write!(f, "AXIOM({id})")?;
                if !bindings.is_empty() {
                    let b: Vec<String> = bindings.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                    write!(f, "{{{}}}", b.join(", "))?;
                }
                Ok(())
            }
            Justification::Mp(i, j) => write!(f, "MP({i},{j})"),
            Justification::Def(i) => write!(f, "DEF({i})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug)]
pub struct ProofScript {
    pub theory: Theory,
    pub lines: Vec<ProofLine>,
}

fn syntax(line: usize, message: impl Into<String>) -> ProofError {
    ProofError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_index(text: &str, line: usize) -> Result<usize, ProofError> {
    text.trim()
        .parse()
        .map_err(|_| syntax(line, format!("`{}` is not a line number", text.trim())))
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ProofError> {
    let text = text.trim();
    let (head, rest) = text
        .split_once('(')
        .ok_or_else(|| syntax(line, format!("unreadable justification `{text}`")))?;
    let (args, tail) = rest
        .split_once(')')
        .ok_or_else(|| syntax(line, "missing `)` in justification"))?;
    let tail = tail.trim();
    match head.trim().to_ascii_uppercase().as_str() {
        "AXIOM" => {
            let mut bindings = Subst::new();
            if !tail.is_empty() {
                let inner = tail
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| syntax(line, "bindings must be written `{$A = formula, ...}`"))?;
                for item in inner.split(',').filter(|s| !s.trim().is_empty()) {
                    let (var, f) = item
                        .split_once('=')
                        .ok_or_else(|| syntax(line, format!("binding `{}` lacks `=`", item.trim())))?;
                    let var = var.trim();
                    if !var.starts_with('$') || var.len() < 2 {
                        return Err(syntax(line, format!("`{var}` is not a metavariable")));
                    }
                    let f = parse(f).map_err(|e| syntax(line, format!("binding for {var}: {e}")))?;
                    if bindings.insert(var.to_string(), f).is_some() {
                        return Err(syntax(line, format!("{var} is bound twice")));
                    }
                }
            }
            Ok(Justification::Axiom {
                id: args.trim().to_string(),
                bindings,
            })
        }
        "MP" if tail.is_empty() => {
            let (i, j) = args
                .split_once(',')
                .ok_or_else(|| syntax(line, "MP takes two line numbers"))?;
            Ok(Justification::Mp(parse_index(i, line)?, parse_index(j, line)?))
        }
        "DEF" | "DEF-EXPANSION" if tail.is_empty() => Ok(Justification::Def(parse_index(args, line)?)),
        _ => Err(syntax(line, format!("unknown justification `{text}`"))),
    }
}

impl ProofScript {
    pub fn parse(text: &str) -> Result<ProofScript, ProofError> {
        let mut theory: Option<Theory> = None;
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let at = k + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if let Some(rest) = l.strip_prefix("theory:") {
                if theory.is_some() || !lines.is_empty() {
                    return Err(syntax(at, "the theory header must come first, once"));
                }
                let id: TheoryId = rest.parse()?;
                theory = Some(match id {
                    TheoryId::Custom(ref name) => Theory::custom(name, &Theory::upl()),
                    id => Theory::named(id),
                });
                continue;
            }
            let th = theory
                .as_mut()
                .ok_or_else(|| syntax(at, "missing `theory:` header"))?;
            if let Some(rest) = l.strip_prefix("axiom ") {
                if !matches!(th.id(), TheoryId::Custom(_)) {
                    return Err(syntax(at, "extra axioms need a CUSTOM theory"));
                }
                if !lines.is_empty() {
                    return Err(syntax(at, "axiom declarations must precede proof lines"));
                }
                let (id, s) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(at, "expected `axiom ID: schema`"))?;
                let s = Schema::parse(s).map_err(|e| syntax(at, e.to_string()))?;
                th.add_axiom(id.trim(), s)?;
                continue;
            }
            let (body, just) = l
                .rsplit_once(";;")
                .ok_or_else(|| syntax(at, "expected `n. formula ;; justification`"))?;
            let (num, formula) = body
                .split_once('.')
                .ok_or_else(|| syntax(at, "expected a line number such as `1.`"))?;
            let number = parse_index(num, at)?;
            if number != lines.len() + 1 {
                return Err(syntax(at, format!("expected line {}, found {number}", lines.len() + 1)));
            }
            let formula = parse(formula).map_err(|e| syntax(at, e.to_string()))?;
            let justification = parse_justification(just, at)?;
            for r in justification.references() {
                if r == 0 || r >= number {
                    return Err(ProofError::BadReference {
                        line: number,
                        target: r,
                    });
                }
            }
            lines.push(ProofLine {
                number,
                formula,
                justification,
            });
        }
        let theory = theory.ok_or_else(|| syntax(1, "missing `theory:` header"))?;
        Ok(ProofScript { theory, lines })
    }

    /// Renders the script in the format [`ProofScript::parse`] reads.
    pub fn to_text(&self) -> String {
        let mut out = format!("theory: {}\n", self.theory.id());
        let base = match self.theory.id() {
            TheoryId::Custom(_) => Theory::upl(),
            id => Theory::named(id.clone()),
        };
        for (id, s) in self.theory.axioms() {
            if base.schema(id).is_none() {
                out.push_str(&format!("axiom {id}: {s}\n"));
            }
        }
        for l in &self.lines {
            out.push_str(&format!("{}. {} ;; {}\n", l.number, l.formula, l.justification));
        }
        out
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineCheck {
    pub number: usize,
    pub formula: String,
    pub justification: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofReport {
    pub theory: String,
    pub lines: Vec<LineCheck>,
    /// Number of the first rejected line.
    pub first_failure: Option<usize>,
    pub conclusion: Option<String>,
}

impl ProofReport {
    pub fn accepted(&self) -> bool {
        self.first_failure.is_none() && !self.lines.is_empty()
    }
}

fn check_line(script: &ProofScript, line: &ProofLine, core: &[Formula]) -> Result<(), String> {
    let here = &core[line.number - 1];
    let earlier = |r: usize| -> Result<&Formula, String> {
        if r == 0 || r >= line.number {
            Err(format!("line {r} does not precede this line"))
        } else {
            Ok(&core[r - 1])
        }
    };
    match &line.justification {
        Justification::Axiom { id, bindings } => {
            let schema = script
                .theory
                .schema(id)
                .ok_or_else(|| format!("`{id}` is not an axiom of {}", script.theory.id()))?;
            if bindings.is_empty() {
                match_schema(schema, here)
                    .map(|_| ())
                    .ok_or_else(|| format!("not an instance of {id}: {schema}"))
            } else {
                let inst = script.theory.instantiate(id, bindings).map_err(|e| e.to_string())?;
                if &inst == here {
                    Ok(())
                } else {
                    Err(format!("{id} with these bindings gives {inst}"))
                }
            }
        }
        Justification::Mp(i, j) => {
            let (minor, major) = (earlier(*i)?, earlier(*j)?);
            match major {
                Formula::Implies(a, b) if **a == *minor && **b == *here => Ok(()),
                Formula::Implies(a, _) if **a == *minor => {
                    Err(format!("line {j} does not conclude this formula"))
                }
                _ => Err(format!("line {j} is not `line {i} -> this line`")),
            }
        }
        Justification::Def(i) => {
            if earlier(*i)? == here {
                Ok(())
            } else {
                Err(format!("line {i} differs from this line after expanding abbreviations"))
            }
        }
    }
}

/// Checks every line. The report names the first rejected line, if any.
pub fn check_proof(script: &ProofScript) -> ProofReport {
    let core: Vec<Formula> = script.lines.iter().map(|l| l.formula.desugar()).collect();
    let mut first_failure = None;
    let lines = script
        .lines
        .iter()
        .map(|l| {
            let res = check_line(script, l, &core);
            if res.is_err() && first_failure.is_none() {
                first_failure = Some(l.number);
            }
            LineCheck {
                number: l.number,
                formula: l.formula.to_string(),
                justification: l.justification.to_string(),
                ok: res.is_ok(),
                reason: res.err(),
            }
        })
        .collect::<Vec<_>>();
    if lines.is_empty() {
        first_failure = None;
    }
    ProofReport {
        theory: script.theory.id().to_string(),
        lines,
        first_failure,
        conclusion: script.conclusion().map(|f| f.to_string()),
    }
}
