//! Direct (Tarskian) evaluation of GQ-formulas, and the two operator
//! transformations used to refute stability: the star transform `F*(u)`
//! and the FLP transform `Π^△(u)`.
//!
//! Neither transform is built as syntax. The predicate variables `u` are
//! read from a second atom set `j` that covers the intensional predicates;
//! all other predicates keep their value in `i`.

use std::collections::BTreeSet;

use crate::ground::{resolve_checked, Env, EvalError, Interpretation};
use crate::quantifier::{Registry, Relation};
use crate::syntax::{AtomSet, AtomicFormula, Formula, GroundAtom, Program, Symbol, Universe};

/// Where atoms get their truth value during evaluation.
trait Valuation {
    fn holds(&self, atom: &GroundAtom) -> bool;
}

impl Valuation for AtomSet {
    fn holds(&self, atom: &GroundAtom) -> bool {
        self.contains(atom)
    }
}

/// `u` on intensional predicates, `i` elsewhere.
struct Substituted<'a> {
    plain: &'a AtomSet,
    u: &'a AtomSet,
    intensional: &'a BTreeSet<Symbol>,
}

impl Valuation for Substituted<'_> {
    fn holds(&self, atom: &GroundAtom) -> bool {
        if self.intensional.contains(&atom.pred) {
            self.u.contains(atom)
        } else {
            self.plain.contains(atom)
        }
    }
}

struct Evaluator<'a> {
    universe: &'a Universe,
    registry: &'a Registry,
}

impl Evaluator<'_> {
    fn eval(&self, f: &Formula, env: &mut Env, val: &dyn Valuation) -> Result<bool, EvalError> {
        match f {
            Formula::Atomic(a) => self.atomic(a, env, val),
            Formula::Apply {
                quantifier,
                bound,
                args,
            } => {
                let def = resolve_checked(self.registry, quantifier, bound)?;
                let rels = self.relations(bound, args, env, &mut |g, env| self.eval(g, env, val))?;
                Ok(def.truth(self.universe, &rels))
            }
        }
    }

    fn atomic(&self, a: &AtomicFormula, env: &Env, val: &dyn Valuation) -> Result<bool, EvalError> {
        Ok(match a {
            AtomicFormula::Atom { pred, args } => val.holds(&env.ground_atom(pred, args, self.universe)?),
            AtomicFormula::Eq(l, r) => env.term(l, self.universe)? == env.term(r, self.universe)?,
            AtomicFormula::Top => true,
            AtomicFormula::Bot => false,
        })
    }

    /// `(xi : Fi)` for every argument, each evaluated by `eval`.
    fn relations(
        &self,
        bound: &[Vec<Symbol>],
        args: &[Formula],
        env: &mut Env,
        eval: &mut dyn FnMut(&Formula, &mut Env) -> Result<bool, EvalError>,
    ) -> Result<Vec<Relation>, EvalError> {
        let mut rels = Vec::with_capacity(args.len());
        for (vars, arg) in bound.iter().zip(args) {
            let mut rel = Relation::new();
            for tuple in self.universe.tuples(vars.len()) {
                let mark = env.mark();
                env.bind_all(vars, &tuple);
                let v = eval(arg, env);
                env.reset(mark);
                if v? {
                    rel.insert(tuple);
                }
            }
            rels.push(rel);
        }
        Ok(rels)
    }

    /// `F*(u)`: atoms of intensional predicates read `u`; every quantifier
    /// node is `Q(F1*, ..., Fk*) ∧ Q(F1, ..., Fk)`.
    fn star(&self, f: &Formula, env: &mut Env, i: &AtomSet, u: &Substituted<'_>) -> Result<bool, EvalError> {
        match f {
            Formula::Atomic(a) => self.atomic(a, env, u),
            Formula::Apply {
                quantifier,
                bound,
                args,
            } => {
                let def = resolve_checked(self.registry, quantifier, bound)?;
                let plain = self.relations(bound, args, env, &mut |g, env| self.eval(g, env, i))?;
                if !def.truth(self.universe, &plain) {
                    return Ok(false);
                }
                let starred = self.relations(bound, args, env, &mut |g, env| self.star(g, env, i, u))?;
                Ok(def.truth(self.universe, &starred))
            }
        }
    }
}

/// `I ⊨ F`, evaluated without building the ground formula.
pub fn satisfies_direct(i: &Interpretation, f: &Formula, registry: &Registry) -> Result<bool, EvalError> {
    let ev = Evaluator {
        universe: &i.universe,
        registry,
    };
    ev.eval(f, &mut Env::new(), &i.atoms)
}

fn check_intensional(j: &AtomSet, intensional: &BTreeSet<Symbol>) -> Result<(), EvalError> {
    match j.iter().find(|a| !intensional.contains(&a.pred)) {
        Some(a) => Err(EvalError::NotIntensional(a.to_string())),
        None => Ok(()),
    }
}

/// Truth of `F*(u)` at `(i, j)`, with `u` read from `j` on the intensional
/// predicates.
pub fn eval_star(
    f: &Formula,
    i: &Interpretation,
    j: &AtomSet,
    intensional: &BTreeSet<Symbol>,
    registry: &Registry,
) -> Result<bool, EvalError> {
    check_intensional(j, intensional)?;
    let ev = Evaluator {
        universe: &i.universe,
        registry,
    };
    let u = Substituted {
        plain: &i.atoms,
        u: j,
        intensional,
    };
    ev.star(f, &mut Env::new(), &i.atoms, &u)
}

/// Truth of `Π^△(u)` at `(i, j)`: for every rule `H <- B` and every
/// assignment to its variables, `B ∧ B(u) → H(u)`.
pub fn eval_triangle(prog: &Program, i: &Interpretation, j: &AtomSet, registry: &Registry) -> Result<bool, EvalError> {
    check_intensional(j, &prog.intensional)?;
    let ev = Evaluator {
        universe: &i.universe,
        registry,
    };
    let u = Substituted {
        plain: &i.atoms,
        u: j,
        intensional: &prog.intensional,
    };
    for rule in &prog.rules {
        let vars = rule.variables();
        for tuple in i.universe.tuples(vars.len()) {
            let mut env = Env::new();
            env.bind_all(&vars, &tuple);
            if ev.eval(&rule.body, &mut env, &i.atoms)?
                && ev.eval(&rule.body, &mut env, &u)?
                && !ev.eval(&rule.head, &mut env, &u)?
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `i` satisfies every rule of `prog`.
pub fn is_model(prog: &Program, i: &Interpretation, registry: &Registry) -> Result<bool, EvalError> {
    satisfies_direct(i, &prog.to_sentence(), registry)
}
