//! Seeded generators for random programs, sentences and interpretations.
#![allow(dead_code)]

use gqsm::quantifier::{Aggregate, Cmp};
use gqsm::{AtomSet, Formula, GroundAtom, Program, Rule, Term, Universe, Value};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Gen = ChaCha8Rng;

pub fn rng(seed: u64) -> Gen {
    ChaCha8Rng::seed_from_u64(seed)
}

const PREDS: [&str; 2] = ["p", "q"];
const BOUND: [&str; 5] = ["Y", "Z", "W", "V", "U"];

/// One to three elements, either integers from -2..=2 or symbols.
pub fn universe(rng: &mut Gen) -> Universe {
    let n = rng.gen_range(1..=3);
    if rng.gen_bool(0.6) {
        let mut pool: Vec<i64> = (-2..=2).collect();
        pool.shuffle(rng);
        Universe::new(pool[..n].iter().map(|&i| Value::Int(i)))
    } else {
        Universe::new(["a", "b", "c"][..n].iter().map(|s| Value::sym(s)))
    }
}

fn all_ints(u: &Universe) -> bool {
    u.elements().iter().all(|v| v.as_int().is_some())
}

fn term(rng: &mut Gen, u: &Universe, vars: &[&str]) -> Term {
    if !vars.is_empty() && rng.gen_bool(0.7) {
        Term::var(vars.choose(rng).unwrap())
    } else {
        Term::Const(u.elements().choose(rng).unwrap().clone())
    }
}

pub fn atom(rng: &mut Gen, u: &Universe, vars: &[&str]) -> Formula {
    let pred = PREDS.choose(rng).unwrap();
    Formula::atom(pred, [term(rng, u, vars)])
}

fn cmp(rng: &mut Gen) -> Cmp {
    *Cmp::ALL.choose(rng).unwrap()
}

fn fresh<'a>(vars: &[&str]) -> Option<&'a str> {
    BOUND.iter().copied().find(|b| !vars.contains(b))
}

/// A single-position quantifier or an aggregate over `body`, binding `x`.
/// Sum is only drawn over integer universes. Aggregate bounds are universe
/// elements or variables in scope.
fn quantified(rng: &mut Gen, u: &Universe, x: &str, vars: &[&str], body: Formula) -> Formula {
    let mut taken = vars.to_vec();
    taken.push(x);
    let y = fresh(&taken);
    let mut choices = vec![0, 1, 2, 3, 4];
    if y.is_some() {
        choices.push(5);
        if all_ints(u) {
            choices.push(6);
        }
    }
    match *choices.choose(rng).unwrap() {
        0 => Formula::forall(x, body),
        1 => Formula::exists(x, body),
        2 => Formula::apply("majority", vec![vec![x]], vec![body]),
        3 => Formula::apply(&format!("atmost({})", rng.gen_range(0..=2)), vec![vec![x]], vec![body]),
        4 => Formula::apply(&format!("atleast({})", rng.gen_range(0..=2)), vec![vec![x]], vec![body]),
        agg => {
            let a = if agg == 5 { Aggregate::Count } else { Aggregate::Sum };
            let y = y.unwrap();
            let bound = term(rng, u, vars);
            Formula::apply(
                &a.quantifier_name(cmp(rng)),
                vec![vec![x], vec![y]],
                vec![body, Formula::eq(Term::var(y), bound)],
            )
        }
    }
}

/// Arbitrary formula whose free variables are among `vars`.
pub fn formula(rng: &mut Gen, u: &Universe, vars: &[&str], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::top(),
            1 => Formula::bot(),
            2 => Formula::eq(term(rng, u, vars), term(rng, u, vars)),
            _ => atom(rng, u, vars),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => Formula::and(formula(rng, u, vars, d), formula(rng, u, vars, d)),
        1 => Formula::or(formula(rng, u, vars, d), formula(rng, u, vars, d)),
        2 => Formula::implies(formula(rng, u, vars, d), formula(rng, u, vars, d)),
        3 => Formula::not(formula(rng, u, vars, d)),
        _ => match fresh(vars) {
            Some(x) => {
                let mut inner = vars.to_vec();
                inner.push(x);
                let body = formula(rng, u, &inner, d);
                quantified(rng, u, x, vars, body)
            }
            None => atom(rng, u, vars),
        },
    }
}

/// A sentence: formula over one variable, universally closed.
pub fn sentence(rng: &mut Gen, u: &Universe) -> Formula {
    formula(rng, u, &["X"], 3).universal_closure()
}

/// Up to four rules with arbitrary heads and bodies over `p/1`, `q/1`.
pub fn general_program(rng: &mut Gen) -> Program {
    let u = universe(rng);
    let n = rng.gen_range(1..=4);
    let rules = (0..n)
        .map(|_| Rule::new(formula(rng, &u, &["X"], 2), formula(rng, &u, &["X"], 2)))
        .collect();
    Program::new(rules, u).expect("unary predicates only")
}

/// A literal `E` in rule form: an atom, or a quantifier over atomic
/// formulas.
fn rule_literal(rng: &mut Gen, u: &Universe, vars: &[&str]) -> Formula {
    if rng.gen_bool(0.5) {
        return atom(rng, u, vars);
    }
    let x = fresh(vars).unwrap();
    let mut inner = vars.to_vec();
    inner.push(x);
    let body = atom(rng, u, &inner);
    quantified(rng, u, x, vars, body)
}

/// `A1; ...; Al <- E1, ..., not En` with up to four rules. Negated literals
/// are unrestricted, so only some of these are in the coinciding class.
pub fn rule_form_program(rng: &mut Gen) -> Program {
    let u = universe(rng);
    let n = rng.gen_range(1..=4);
    let vars = ["X"];
    let mut rules = Vec::new();
    for _ in 0..n {
        let head = match rng.gen_range(0..6) {
            0 => Formula::bot(),
            1 => Formula::or(atom(rng, &u, &vars), atom(rng, &u, &vars)),
            _ => atom(rng, &u, &vars),
        };
        let lits = (0..rng.gen_range(0..=3))
            .map(|_| {
                let e = rule_literal(rng, &u, &vars);
                if rng.gen_bool(0.4) {
                    Formula::not(e)
                } else {
                    e
                }
            })
            .collect::<Vec<_>>();
        rules.push(Rule::new(head, Formula::conjunction(lits)));
    }
    Program::new(rules, u).expect("unary predicates only")
}

pub fn base(u: &Universe) -> Vec<GroundAtom> {
    let mut out = Vec::new();
    for p in PREDS {
        for v in u.elements() {
            out.push(GroundAtom::new(p, vec![v.clone()]));
        }
    }
    out.sort();
    out
}

pub fn atom_set(rng: &mut Gen, u: &Universe) -> AtomSet {
    base(u).into_iter().filter(|_| rng.gen_bool(0.5)).collect()
}

/// All subsets of `atoms`.
pub fn subsets(atoms: &[GroundAtom]) -> Vec<AtomSet> {
    (0..1u32 << atoms.len())
        .map(|m| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}
