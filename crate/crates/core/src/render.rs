//! Text rendering of formulas, programs and ground formulas.
//!
//! Formulas and programs render in the surface syntax accepted by
//! [`crate::parser`], and parse back to the same structure. Ground formulas
//! have no parser; their rendering writes pair-sets as `{ ξ : F; ... }` and
//! folds the bound argument of an aggregate back into `sum{ ... } < b`.

use std::fmt::{self, Write};

use crate::ground::{GroundFormula, PairSet};
use crate::parser::aggregate_var;
use crate::quantifier::{builtin, Aggregate};
use crate::syntax::{AtomicFormula, Formula, Program, Rule, Term, Tuple, Value};

// Binding strength, loosest first.
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const PRIMARY: u8 = 5;

pub fn render_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, IMP).expect("writing to a String");
    s
}

pub fn render_rule(r: &Rule) -> String {
    let mut s = String::new();
    write_rule(&mut s, r).expect("writing to a String");
    s
}

pub fn render_program(p: &Program) -> String {
    let mut s = String::new();
    write_program(&mut s, p).expect("writing to a String");
    s
}

pub fn render_ground(g: &GroundFormula) -> String {
    let mut s = String::new();
    write_ground(&mut s, g, IMP).expect("writing to a String");
    s
}

fn formula_prec(f: &Formula) -> u8 {
    if f.as_negation().is_some() {
        NOT
    } else if f.as_binary(builtin::IMPLIES).is_some() {
        IMP
    } else if f.as_binary(builtin::OR).is_some() {
        OR
    } else if f.as_binary(builtin::AND).is_some() {
        AND
    } else {
        PRIMARY
    }
}

fn write_term(out: &mut impl Write, t: &Term) -> fmt::Result {
    match t {
        Term::Var(v) => out.write_str(v),
        Term::Const(c) => write!(out, "{c}"),
    }
}

fn write_atomic(out: &mut impl Write, a: &AtomicFormula) -> fmt::Result {
    match a {
        AtomicFormula::Atom { pred, args } => {
            out.write_str(pred)?;
            if !args.is_empty() {
                out.write_char('(')?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(", ")?;
                    }
                    write_term(out, t)?;
                }
                out.write_char(')')?;
            }
            Ok(())
        }
        AtomicFormula::Eq(l, r) => {
            write_term(out, l)?;
            out.write_str(" = ")?;
            write_term(out, r)
        }
        AtomicFormula::Bot => out.write_str("bot"),
        AtomicFormula::Top => out.write_str("top"),
    }
}

fn write_vars(out: &mut impl Write, vars: &[crate::syntax::Symbol]) -> fmt::Result {
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        out.write_str(v)?;
    }
    Ok(())
}

fn write_formula(out: &mut impl Write, f: &Formula, min: u8) -> fmt::Result {
    let prec = formula_prec(f);
    if prec < min {
        out.write_char('(')?;
        write_formula(out, f, IMP)?;
        return out.write_char(')');
    }
    if let Some(inner) = f.as_negation() {
        out.write_str("not ")?;
        return write_formula(out, inner, NOT);
    }
    for (q, p, sym) in [
        (builtin::IMPLIES, IMP, " -> "),
        (builtin::OR, OR, " | "),
        (builtin::AND, AND, " & "),
    ] {
        if let Some((l, r)) = f.as_binary(q) {
            // `->` nests to the right, `&` and `|` to the left
            let (lmin, rmin) = if q == builtin::IMPLIES { (p + 1, p) } else { (p, p + 1) };
            write_formula(out, l, lmin)?;
            out.write_str(sym)?;
            return write_formula(out, r, rmin);
        }
    }
    match f {
        Formula::Atomic(a) => write_atomic(out, a),
        Formula::Apply {
            quantifier,
            bound,
            args,
        } => {
            if (&**quantifier == builtin::FORALL || &**quantifier == builtin::EXISTS)
                && bound.len() == 1
                && bound[0].len() == 1
            {
                write!(out, "{quantifier} {} (", bound[0][0])?;
                write_formula(out, &args[0], IMP)?;
                return out.write_char(')');
            }
            if let Some((agg, cmp, t)) = aggregate_sugar(quantifier, bound, args) {
                write!(out, "{}{{", agg.keyword())?;
                write_vars(out, &bound[0])?;
                out.write_str(" : ")?;
                write_formula(out, &args[0], IMP)?;
                write!(out, "}} {} ", cmp.symbol())?;
                return write_term(out, t);
            }
            if bound.len() == 1 && !bound[0].is_empty() {
                write!(out, "{quantifier}{{")?;
                write_vars(out, &bound[0])?;
                out.write_str(" : ")?;
                write_formula(out, &args[0], IMP)?;
                return out.write_char('}');
            }
            out.write_str(quantifier)?;
            for xs in bound {
                out.write_char('[')?;
                write_vars(out, xs)?;
                out.write_char(']')?;
            }
            out.write_char('(')?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str("; ")?;
                }
                write_formula(out, a, IMP)?;
            }
            out.write_char(')')
        }
    }
}

/// `agg_cmp[X][Y](F, Y = t)` where `Y` is the variable the parser would
/// introduce for `agg{X : F} cmp t`.
fn aggregate_sugar<'a>(
    quantifier: &str,
    bound: &[Vec<crate::syntax::Symbol>],
    args: &'a [Formula],
) -> Option<(Aggregate, crate::quantifier::Cmp, &'a Term)> {
    let (agg, cmp) = Aggregate::parse_name(quantifier)?;
    if bound.len() != 2 || bound[0].is_empty() || bound[1].len() != 1 || args.len() != 2 {
        return None;
    }
    let Formula::Atomic(AtomicFormula::Eq(Term::Var(y), t)) = &args[1] else {
        return None;
    };
    if *y != bound[1][0] || aggregate_var(&args[0], t, &bound[0]) != *y {
        return None;
    }
    Some((agg, cmp, t))
}

fn flatten<'a>(f: &'a Formula, q: &str, out: &mut Vec<&'a Formula>) {
    match f.as_binary(q) {
        Some((l, r)) => {
            flatten(l, q, out);
            out.push(r);
        }
        None => out.push(f),
    }
}

fn write_rule(out: &mut impl Write, r: &Rule) -> fmt::Result {
    let write_list = |out: &mut dyn Write, f: &Formula, q: &str, sep: &str| -> fmt::Result {
        let mut parts = Vec::new();
        flatten(f, q, &mut parts);
        for (i, part) in parts.iter().enumerate() {
            if i > 0 {
                out.write_str(sep)?;
            }
            let mut s = String::new();
            write_formula(&mut s, part, IMP)?;
            out.write_str(&s)?;
        }
        Ok(())
    };
    if r.head != Formula::bot() || r.body == Formula::top() {
        write_list(out, &r.head, builtin::OR, "; ")?;
        if r.body == Formula::top() {
            return out.write_char('.');
        }
        out.write_char(' ')?;
    }
    out.write_str(":- ")?;
    write_list(out, &r.body, builtin::AND, ", ")?;
    out.write_char('.')
}

fn write_program(out: &mut impl Write, p: &Program) -> fmt::Result {
    out.write_str("#universe {")?;
    for (i, v) in p.universe.elements().iter().enumerate() {
        if i > 0 {
            out.write_str(", ")?;
        }
        write!(out, "{v}")?;
    }
    out.write_str("}.\n")?;
    if !p.all_intensional() {
        out.write_str("#intensional")?;
        for (i, pred) in p.intensional.iter().enumerate() {
            out.write_str(if i == 0 { " " } else { ", " })?;
            out.write_str(pred)?;
        }
        out.write_str(".\n")?;
    }
    for r in &p.rules {
        write_rule(out, r)?;
        out.write_char('\n')?;
    }
    Ok(())
}

fn ground_prec(g: &GroundFormula) -> u8 {
    match g.quantifier_name() {
        Some(builtin::IMPLIES) if g.epsilon_child(0).is_some() => IMP,
        Some(builtin::OR) if g.epsilon_child(0).is_some() => OR,
        Some(builtin::AND) if g.epsilon_child(0).is_some() => AND,
        _ => PRIMARY,
    }
}

fn write_tuple(out: &mut impl Write, t: &Tuple) -> fmt::Result {
    match t.as_slice() {
        [v] => write!(out, "{v}"),
        vs => {
            out.write_char('(')?;
            for (i, v) in vs.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write!(out, "{v}")?;
            }
            out.write_char(')')
        }
    }
}

fn write_pair_set(out: &mut impl Write, s: &PairSet) -> fmt::Result {
    if s.entries.is_empty() {
        return out.write_str("{}");
    }
    out.write_str("{ ")?;
    for (i, (t, g)) in s.entries.iter().enumerate() {
        if i > 0 {
            out.write_str("; ")?;
        }
        write_tuple(out, t)?;
        out.write_str(" : ")?;
        write_ground(out, g, NOT)?;
    }
    out.write_str(" }")
}

/// The single tuple marked `top` in an otherwise all-`bot` pair-set.
fn singled_out(s: &PairSet) -> Option<&Value> {
    let mut found = None;
    for (t, g) in &s.entries {
        match g {
            GroundFormula::Top if found.is_none() && t.len() == 1 => found = Some(&t[0]),
            GroundFormula::Bot => {}
            _ => return None,
        }
    }
    found
}

fn write_ground(out: &mut impl Write, g: &GroundFormula, min: u8) -> fmt::Result {
    let prec = ground_prec(g);
    if prec < min {
        out.write_char('(')?;
        write_ground(out, g, IMP)?;
        return out.write_char(')');
    }
    match g {
        GroundFormula::Atom(a) => write!(out, "{a}"),
        GroundFormula::Top => out.write_str("top"),
        GroundFormula::Bot => out.write_str("bot"),
        GroundFormula::Apply { quantifier, sets } => {
            let name = quantifier.name();
            if prec != PRIMARY {
                let sym = match name {
                    builtin::IMPLIES => " -> ",
                    builtin::OR => " | ",
                    _ => " & ",
                };
                let (lmin, rmin) = if name == builtin::IMPLIES {
                    (prec + 1, prec)
                } else {
                    (prec, prec + 1)
                };
                if let (Some(l), Some(r)) = (g.epsilon_child(0), g.epsilon_child(1)) {
                    write_ground(out, l, lmin)?;
                    out.write_str(sym)?;
                    return write_ground(out, r, rmin);
                }
            }
            if let (Some((_, cmp)), [first, second]) = (Aggregate::parse_name(name), sets.as_slice()) {
                if let Some(b) = singled_out(second) {
                    let (agg, _) = Aggregate::parse_name(name).expect("checked above");
                    out.write_str(agg.keyword())?;
                    write_pair_set(out, first)?;
                    return write!(out, " {} {b}", cmp.symbol());
                }
            }
            out.write_str(name)?;
            match sets.as_slice() {
                [] => out.write_str("()"),
                [only] => write_pair_set(out, only),
                many => {
                    out.write_char('(')?;
                    for (i, s) in many.iter().enumerate() {
                        if i > 0 {
                            out.write_str("; ")?;
                        }
                        write_pair_set(out, s)?;
                    }
                    out.write_char(')')
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, IMP)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rule(f, self)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_program(f, self)
    }
}

impl fmt::Display for GroundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ground(f, self, IMP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::parser::{parse_formula, parse_program, Source};
    use crate::quantifier::Registry;
    use crate::syntax::Universe;

    fn roundtrip(s: &str) -> String {
        let reg = Registry::new();
        let f = parse_formula(s, &reg).unwrap();
        let r = render_formula(&f);
        assert_eq!(parse_formula(&r, &reg).unwrap(), f, "{s} rendered as {r}");
        r
    }

    #[test]
    fn conjunction_renders_back() {
        assert_eq!(roundtrip("p(a) & q(b)"), "p(a) & q(b)");
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(roundtrip("(a -> b) -> c"), "(a -> b) -> c");
        assert_eq!(roundtrip("a -> (b -> c)"), "a -> b -> c");
        assert_eq!(roundtrip("a & (b & c)"), "a & (b & c)");
        assert_eq!(roundtrip("not (a | b)"), "not (a | b)");
        assert_eq!(roundtrip("(not a) & b"), "not a & b");
        assert_eq!(roundtrip("a -> bot"), "not a");
        assert_eq!(roundtrip("X != Y"), "not X = Y");
    }

    #[test]
    fn quantifier_forms() {
        assert_eq!(roundtrip("forall X (not p(X) -> q(X))"), "forall X (not p(X) -> q(X))");
        assert_eq!(roundtrip("sum{X : p(X)} < 2"), "sum{X : p(X)} < 2");
        assert_eq!(roundtrip("count{X : p(X)} != Y"), "count{X : p(X)} != Y");
        assert_eq!(roundtrip("atmost(0){X : p(X)}"), "atmost(0){X : p(X)}");
        assert_eq!(roundtrip("majority{X : p(X)}"), "majority{X : p(X)}");
        assert_eq!(roundtrip("top()"), "top()");
        // second argument not of the lowered shape
        assert_eq!(roundtrip("sum_lt[X][Y](p(X); q(Y))"), "sum_lt[X][Y](p(X); q(Y))");
        assert_eq!(roundtrip("sum_lt[X][Z](p(X); Z = 2)"), "sum_lt[X][Z](p(X); Z = 2)");
    }

    #[test]
    fn program_renders_rule_forms() {
        let reg = Registry::new();
        let src = "#universe {a, b}.\n#intensional q.\nq(a).\n:- p(a), q(b).\nq(a); q(b) :- p(a).\np(b) :- top.\n";
        let p = parse_program(&Source::new("t", src), &reg).unwrap();
        let r = render_program(&p);
        assert_eq!(
            r,
            "#universe {a, b}.\n#intensional q.\nq(a).\n:- p(a), q(b).\nq(a); q(b) :- p(a).\np(b).\n"
        );
        assert_eq!(parse_program(&Source::new("t", &r), &reg).unwrap(), p);
    }

    #[test]
    fn ground_sum_rule() {
        let reg = Registry::new();
        let f = parse_formula("sum{X : p(X)} > -1 -> p(-1)", &reg).unwrap();
        let u = Universe::new([(-1).into(), 1.into(), 2.into()]);
        let g = ground(&f, &u, &reg).unwrap();
        assert_eq!(render_ground(&g), "sum{ -1 : p(-1); 1 : p(1); 2 : p(2) } > -1 -> p(-1)");
    }

    #[test]
    fn ground_generic_forms() {
        let reg = Registry::new();
        let u = Universe::new(["a".into(), "b".into()]);
        let f = parse_formula("forall X (p(X) -> q(X))", &reg).unwrap();
        assert_eq!(
            render_ground(&ground(&f, &u, &reg).unwrap()),
            "forall{ a : (p(a) -> q(a)); b : (p(b) -> q(b)) }"
        );
        let f = parse_formula("sum_lt[X][Y](p(X); q(Y))", &reg).unwrap();
        assert_eq!(
            render_ground(&ground(&f, &Universe::new([1.into()]), &reg).unwrap()),
            "sum_lt({ 1 : p(1) }; { 1 : q(1) })"
        );
        let f = parse_formula("(a -> b) -> c", &reg).unwrap();
        assert_eq!(render_ground(&ground(&f, &u, &reg).unwrap()), "(a -> b) -> c");
    }
}
