//! The syntactic class on which SM and FLP stable models coincide:
//!
//! ```text
//! A1; ...; Al <- E1, ..., Em, not E(m+1), ..., not En
//! ```
//!
//! Each `Ai` is atomic. Each `Ei` is atomic or a quantifier application
//! whose arguments are all atomic, and a quantifier under `not` must be
//! monotone in every argument position.

use serde::Serialize;

use crate::quantifier::{builtin, Registry};
use crate::render::render_formula;
use crate::syntax::{Formula, Program};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-based rule number.
    pub rule: usize,
    pub literal: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub in_class: bool,
    pub violations: Vec<Violation>,
}

fn flatten_all<'a>(f: &'a Formula, q: &str, out: &mut Vec<&'a Formula>) {
    match f.as_binary(q) {
        Some((l, r)) => {
            flatten_all(l, q, out);
            flatten_all(r, q, out);
        }
        None => out.push(f),
    }
}

fn args_atomic(f: &Formula) -> bool {
    match f {
        Formula::Apply { args, .. } => args.iter().all(Formula::is_atomic),
        Formula::Atomic(_) => true,
    }
}

pub fn is_prop4_class(prog: &Program, registry: &Registry) -> ClassReport {
    let mut violations = Vec::new();
    for (idx, rule) in prog.rules.iter().enumerate() {
        let mut note = |lit: &Formula, reason: String| {
            violations.push(Violation {
                rule: idx + 1,
                literal: render_formula(lit),
                reason,
            })
        };

        let mut heads = Vec::new();
        flatten_all(&rule.head, builtin::OR, &mut heads);
        for h in heads {
            if !h.is_atomic() {
                note(h, "head disjunct is not an atomic formula".into());
            }
        }

        let mut body = Vec::new();
        flatten_all(&rule.body, builtin::AND, &mut body);
        for lit in body {
            let (e, negated) = match lit.as_negation() {
                Some(e) => (e, true),
                None => (lit, false),
            };
            if !args_atomic(e) {
                note(
                    lit,
                    "literal is neither atomic nor a quantifier over atomic formulas".into(),
                );
                continue;
            }
            let Formula::Apply { quantifier, .. } = e else {
                continue;
            };
            if !negated {
                continue;
            }
            match registry.get(quantifier) {
                None => note(lit, format!("unknown quantifier `{quantifier}`")),
                Some(def) if !def.is_monotone_everywhere() => note(
                    lit,
                    format!(
                        "quantifier `{quantifier}` under `not` is not monotone in all positions ({:?})",
                        def.monotonicity()
                    ),
                ),
                Some(_) => {}
            }
        }
    }
    ClassReport {
        in_class: violations.is_empty(),
        violations,
    }
}
