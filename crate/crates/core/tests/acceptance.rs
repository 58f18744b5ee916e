//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use gqsm::ground::PairSet;
use gqsm::quantifier::{builtin, Aggregate, Cmp};
use gqsm::{
    eval_star, eval_triangle, ground, is_prop4_class, parse_program, reduct, render_ground, satisfies,
    satisfies_direct, validate_monotonicity, AtomSet, GroundAtom, GroundFormula, Interpretation, Program, Registry,
    Solver, Source, Universe, Value,
};

const SUM_PROGRAM: &str = "#universe {-1, 1, 2}.
p(2) :- not sum{X : p(X)} < 2.
p(-1) :- sum{X : p(X)} > -1.
p(1) :- p(-1).";

const ATMOST_PROGRAM: &str = "#universe {a}.
p(a) :- not atmost(0){X : p(X)}.";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn parse(src: &str, reg: &Registry) -> Program {
    parse_program(&Source::new("acceptance", src), reg).expect("fixture parses")
}

fn p(v: i64) -> GroundAtom {
    GroundAtom::new("p", vec![Value::Int(v)])
}

fn set(atoms: &[GroundAtom]) -> AtomSet {
    atoms.iter().cloned().collect()
}

fn proper_subsets(i: &AtomSet) -> Vec<AtomSet> {
    let v: Vec<GroundAtom> = i.iter().cloned().collect();
    common::subsets(&v).into_iter().filter(|j| j != i).collect()
}

fn criterion_1() -> Outcome {
    let reg = Registry::new();
    let prog = parse(SUM_PROGRAM, &reg);
    let solver = Solver::new(&reg);
    let sm_expected = vec![set(&[p(-1), p(1)]), set(&[p(-1), p(1), p(2)])];
    let flp_expected = vec![set(&[p(-1), p(1)])];
    let start = Instant::now();
    let runs = [
        (solver.sm_reduct(&prog), &sm_expected),
        (solver.sm_operator(&prog), &sm_expected),
        (solver.flp_reduct(&prog), &flp_expected),
        (solver.flp_operator(&prog), &flp_expected),
    ];
    for (r, want) in runs {
        let r = r.map_err(|e| e.to_string())?;
        check(
            &r.models == want,
            format!("{:?}/{:?} gave {:?}", r.semantics, r.route, r.models),
        )?;
    }
    let t = start.elapsed();
    check(t.as_secs_f64() < 1.0, format!("took {t:?}"))?;
    Ok(format!(
        "SM 2 models, FLP 1 model on both routes in {:.1} ms",
        t.as_secs_f64() * 1e3
    ))
}

fn sum_gt_minus_one(second: [GroundFormula; 3], first: [GroundFormula; 3]) -> GroundFormula {
    let reg = Registry::new();
    let elems = [-1, 1, 2];
    let pairs = |fs: [GroundFormula; 3]| PairSet {
        entries: elems.iter().zip(fs).map(|(&e, f)| (vec![Value::Int(e)], f)).collect(),
    };
    GroundFormula::Apply {
        quantifier: reg.resolve(&Aggregate::Sum.quantifier_name(Cmp::Gt)).unwrap(),
        sets: vec![pairs(first), pairs(second)],
    }
}

fn eps(f: GroundFormula) -> PairSet {
    PairSet {
        entries: vec![(Vec::new(), f)],
    }
}

fn binary(name: &str, l: GroundFormula, r: GroundFormula) -> GroundFormula {
    GroundFormula::Apply {
        quantifier: Registry::new().resolve(name).unwrap(),
        sets: vec![eps(l), eps(r)],
    }
}

fn criterion_2() -> Outcome {
    use GroundFormula::{Atom, Bot, Top};
    let reg = Registry::new();
    let prog = parse(SUM_PROGRAM, &reg);
    let rules: Vec<GroundFormula> = prog
        .rules
        .iter()
        .map(|r| ground(&r.to_sentence(), &prog.universe, &reg).unwrap())
        .collect();
    let reduct_of =
        |i: &AtomSet| -> Vec<GroundFormula> { rules.iter().map(|g| reduct(g, i, &prog.universe).formula).collect() };
    // second argument of the aggregate is `Y = -1` over {-1, 1, 2}
    let y_set = || [Top, Bot, Bot];
    let imp = |l, r| binary(builtin::IMPLIES, l, r);

    let i1 = set(&[p(-1), p(1)]);
    let expected1 = vec![
        imp(Bot, Bot),
        imp(sum_gt_minus_one(y_set(), [Atom(p(-1)), Atom(p(1)), Bot]), Atom(p(-1))),
        imp(Atom(p(-1)), Atom(p(1))),
    ];
    let got1 = reduct_of(&i1);
    check(got1 == expected1, format!("reduct w.r.t. {{p(-1),p(1)}}: {got1:?}"))?;
    let text1: Vec<String> = got1.iter().map(render_ground).collect();
    check(
        text1[1] == "sum{ -1 : p(-1); 1 : p(1); 2 : bot } > -1 -> p(-1)",
        format!("render: {}", text1[1]),
    )?;

    let i2 = set(&[p(-1), p(1), p(2)]);
    let got2 = reduct_of(&i2);
    let expected2_tail = [
        imp(
            sum_gt_minus_one(y_set(), [Atom(p(-1)), Atom(p(1)), Atom(p(2))]),
            Atom(p(-1)),
        ),
        imp(Atom(p(-1)), Atom(p(1))),
    ];
    check(got2[1..] == expected2_tail[..], format!("reduct w.r.t. I2: {got2:?}"))?;
    // p(2) <- not bot, whose body is valid: it holds in the empty set
    let GroundFormula::Apply { sets, .. } = &got2[0] else {
        return Err(format!("rule 1 reduct is {:?}", got2[0]));
    };
    let body = &sets[0].entries[0].1;
    check(
        got2[0].quantifier_name() == Some(builtin::IMPLIES),
        "rule 1 is not an implication",
    )?;
    check(sets[1].entries[0].1 == Atom(p(2)), "rule 1 head is not p(2)")?;
    check(*body == imp(Bot, Bot), format!("rule 1 body is {body:?}"))?;
    check(
        satisfies(&AtomSet::new(), body, &prog.universe),
        "rule 1 body is not valid",
    )?;
    Ok(format!("{} | {} | {}", text1[0], text1[1], text1[2]))
}

fn criterion_3() -> Outcome {
    let reg = Registry::new();
    let prog = parse(ATMOST_PROGRAM, &reg);
    let c = Solver::new(&reg).compare(&prog).map_err(|e| e.to_string())?;
    let pa = GroundAtom::new("p", vec![Value::sym("a")]);
    check(
        c.sm.models == vec![AtomSet::new(), set(std::slice::from_ref(&pa))],
        format!("SM {:?}", c.sm.models),
    )?;
    check(c.flp.models == vec![AtomSet::new()], format!("FLP {:?}", c.flp.models))?;
    let sm_reduct = Solver::new(&reg).sm_reduct(&prog).map_err(|e| e.to_string())?;
    check(sm_reduct.models == c.sm.models, "reduct route disagrees")?;
    check(!c.class.in_class, "reported in class")?;
    let v = &c.class.violations;
    check(
        v.len() == 1 && v[0].literal.contains("atmost(0)") && v[0].reason.contains("Antimonotone"),
        format!("violations {v:?}"),
    )?;
    check(!c.violates_prop4, "violates_prop4 set")?;
    Ok(format!("SM 2 models, FLP 1; rule {}: {}", v[0].rule, v[0].reason))
}

/// Stable models of `forall x (not p(x) -> q(x))`, by brute force over the
/// hand-derived star formula
/// `forall x [(not(not u_p(x) and not p(x)) or u_q(x)) and (p(x) or q(x))]`.
fn default_oracle(u: &Universe) -> Vec<AtomSet> {
    let elems = u.elements();
    let at = |pred: &str, v: &Value| GroundAtom::new(pred, vec![v.clone()]);
    let base = common::base(u);
    let model = |i: &AtomSet| elems.iter().all(|x| i.contains(&at("p", x)) || i.contains(&at("q", x)));
    let star = |i: &AtomSet, j: &AtomSet| {
        elems.iter().all(|x| {
            let neg_p_star = !j.contains(&at("p", x)) && !i.contains(&at("p", x));
            (!neg_p_star || j.contains(&at("q", x))) && model(i)
        })
    };
    let mut out: Vec<AtomSet> = common::subsets(&base)
        .into_iter()
        .filter(|i| model(i) && !proper_subsets(i).iter().any(|j| star(i, j)))
        .collect();
    out.sort();
    out
}

fn criterion_4() -> Outcome {
    let reg = Registry::new();
    let solver = Solver::new(&reg);
    for n in 1..=3 {
        let names = ["a", "b", "c"][..n].join(", ");
        let prog = parse(&format!("#universe {{{names}}}.\nforall X (not p(X) -> q(X))."), &reg);
        let expected: AtomSet = prog
            .universe
            .elements()
            .iter()
            .map(|v| GroundAtom::new("q", vec![v.clone()]))
            .collect();
        let oracle = default_oracle(&prog.universe);
        check(
            oracle == vec![expected.clone()],
            format!("oracle gives {oracle:?} for |U| = {n}"),
        )?;
        for r in [solver.sm_reduct(&prog), solver.sm_operator(&prog)] {
            let r = r.map_err(|e| e.to_string())?;
            check(
                r.models == oracle,
                format!("{:?} gives {:?} for |U| = {n}", r.route, r.models),
            )?;
        }
        let rule = parse(&format!("#universe {{{names}}}.\nq(X) :- not p(X)."), &reg);
        for r in [solver.flp_reduct(&rule), solver.flp_operator(&rule)] {
            let r = r.map_err(|e| e.to_string())?;
            check(
                r.models == oracle,
                format!("FLP {:?} gives {:?} for |U| = {n}", r.route, r.models),
            )?;
        }
    }
    Ok("unique model {q(x) | x in U} for |U| = 1, 2, 3, matching the oracle".into())
}

fn criterion_5() -> Outcome {
    let reg = Registry::new();
    let solver = Solver::new(&reg);
    let mut rng = common::rng(0x7e02);
    let mut nonempty = 0;
    for k in 0..500 {
        let prog = common::general_program(&mut rng);
        let a = solver.sm_reduct(&prog).map_err(|e| format!("program {k}: {e}"))?;
        let b = solver.sm_operator(&prog).map_err(|e| format!("program {k}: {e}"))?;
        check(
            a.models == b.models,
            format!("program {k}:\n{prog}\nreduct {:?}\noperator {:?}", a.models, b.models),
        )?;
        if !a.models.is_empty() {
            nonempty += 1;
        }
    }
    Ok(format!("500 programs agree ({nonempty} with at least one model)"))
}

fn criterion_6() -> Outcome {
    let reg = Registry::new();
    let solver = Solver::new(&reg);
    let mut rng = common::rng(0x9a04);
    let (mut in_class, mut outside, mut differ_outside) = (0, 0, 0);
    while in_class < 500 {
        let prog = common::rule_form_program(&mut rng);
        let c = solver.compare(&prog).map_err(|e| e.to_string())?;
        check(!c.violates_prop4, format!("violates_prop4 on\n{prog}"))?;
        check(c.class == is_prop4_class(&prog, &reg), "class report mismatch")?;
        if c.class.in_class {
            in_class += 1;
            check(
                c.sm.models == c.flp.models,
                format!(
                    "in-class program differs:\n{prog}\nSM {:?}\nFLP {:?}",
                    c.sm.models, c.flp.models
                ),
            )?;
        } else {
            outside += 1;
            if !c.agree() {
                differ_outside += 1;
            }
        }
    }
    Ok(format!(
        "500 in-class programs agree; {outside} outside the class, {differ_outside} of them differ"
    ))
}

fn criterion_7() -> Outcome {
    let reg = Registry::new();
    let mut rng = common::rng(0x12b7);
    for k in 0..1000 {
        let u = common::universe(&mut rng);
        let f = common::sentence(&mut rng, &u);
        let atoms = common::atom_set(&mut rng, &u);
        let i = Interpretation::new(u.clone(), atoms.clone()).map_err(|e| e.to_string())?;
        let direct = satisfies_direct(&i, &f, &reg).map_err(|e| format!("pair {k}: {e}"))?;
        let g = ground(&f, &u, &reg).map_err(|e| format!("pair {k}: {e}"))?;
        check(
            direct == satisfies(&atoms, &g, &u),
            format!("pair {k}: {f} under {atoms:?}"),
        )?;
    }
    Ok("1000 pairs agree".into())
}

fn criterion_8() -> Outcome {
    let reg = Registry::new();
    let mut names: Vec<String> = reg.names().into_iter().map(String::from).collect();
    for k in 0..=3 {
        names.push(format!("atmost({k})"));
        names.push(format!("atleast({k})"));
    }
    for a in [Aggregate::Sum, Aggregate::Count] {
        for c in Cmp::ALL {
            names.push(a.quantifier_name(c));
        }
    }
    names.sort();
    names.dedup();
    for n in &names {
        let def = reg.resolve(n).map_err(|e| e.to_string())?;
        validate_monotonicity(&def).map_err(|e| format!("{n}: {e}"))?;
    }
    Ok(format!("{} quantifiers verified", names.len()))
}

fn criterion_9() -> Outcome {
    let reg = Registry::new();
    let prog = parse(SUM_PROGRAM, &reg);
    let f = prog.to_sentence();
    let interp = |s: AtomSet| Interpretation::new(prog.universe.clone(), s).unwrap();
    let i1 = set(&[p(-1), p(1)]);
    let i2 = set(&[p(-1), p(1), p(2)]);
    for i in [&i1, &i2] {
        let ii = interp(i.clone());
        check(
            satisfies_direct(&ii, &f, &reg).unwrap(),
            format!("{i:?} is not a model"),
        )?;
        for j in proper_subsets(i) {
            let w = eval_star(&f, &ii, &j, &prog.intensional, &reg).map_err(|e| e.to_string())?;
            check(!w, format!("F1*(u) holds at I = {i:?}, u = {j:?}"))?;
        }
    }
    let tri = eval_triangle(&prog, &interp(i2.clone()), &i1, &reg).map_err(|e| e.to_string())?;
    check(tri, "triangle does not hold at I2 with u = {p(-1), p(1)}")?;
    for j in proper_subsets(&i1) {
        let w = eval_triangle(&prog, &interp(i1.clone()), &j, &reg).map_err(|e| e.to_string())?;
        check(!w, format!("triangle holds at I1 with u = {j:?}"))?;
    }
    Ok("no star witness below I1 or I2; triangle rejects I2 and accepts I1".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("sum program: SM and FLP stable models", criterion_1),
        ("sum program: reduct structure", criterion_2),
        ("atmost(0) program: SM, FLP and class report", criterion_3),
        ("forall x (not p(x) -> q(x)) against brute-force oracle", criterion_4),
        ("reduct route = operator route on 500 programs", criterion_5),
        ("SM = FLP on 500 in-class programs", criterion_6),
        ("direct satisfaction = ground satisfaction on 1000 pairs", criterion_7),
        ("built-in monotonicity flags", criterion_8),
        ("star and triangle witnesses for the sum program", criterion_9),
    ];
    let start = Instant::now();
    let mut failed = BTreeSet::new();
    for (n, (name, run)) in criteria.iter().enumerate() {
        let n = n + 1;
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {n}: {name}: {detail} [{:.2} s]", t.elapsed().as_secs_f64()),
            Err(why) => {
                println!("FAIL {n}: {name}: {why}");
                failed.insert(n);
            }
        }
    }
    println!(
        "{} of 9 criteria passed in {:.2} s",
        9 - failed.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
