//! Ground GQ-formulas with respect to an interpretation, and the grounding
//! process that produces them.
//!
//! Grounding replaces every quantifier application
//! `Q[x1]...[xk](F1, ..., Fk)` by `Q(S1, ..., Sk)`, where `Si` pairs every
//! tuple `ξ` of length `|xi|` over the universe with the ground formula
//! `Fi(ξ)`. Pair-sets are total: every tuple is present, in lexicographic
//! order. Interpretations are Herbrand (constants denote themselves), so the
//! result depends on the interpretation only through its universe.

use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeSeq, SerializeTuple};
use serde::{Serialize, Serializer};

use crate::quantifier::{QuantifierDef, QuantifierError, Registry, Relation};
use crate::syntax::{AtomSet, AtomicFormula, Formula, GroundAtom, Symbol, Term, Tuple, Universe, Value};

/// A Herbrand interpretation: a universe and the set of true ground atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpretation {
    pub universe: Universe,
    pub atoms: AtomSet,
}

impl Interpretation {
    /// Fails if some atom mentions an element outside the universe.
    pub fn new(universe: Universe, atoms: AtomSet) -> Result<Self, EvalError> {
        if let Some(a) = atoms.iter().find(|a| a.args.iter().any(|v| !universe.contains(v))) {
            return Err(EvalError::OutsideUniverse(a.to_string()));
        }
        Ok(Interpretation { universe, atoms })
    }

    pub fn holds(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("`{0}` mentions an element outside the universe")]
    OutsideUniverse(String),
    #[error("quantifier `{name}` of type {expected} applied with bound lists of lengths {found:?}")]
    TypeMismatch {
        name: String,
        expected: String,
        found: Vec<usize>,
    },
    #[error("atom `{0}` is not over an intensional predicate")]
    NotIntensional(String),
    #[error(transparent)]
    Quantifier(#[from] QuantifierError),
}

/// `{ ξ1 : F1, ξ2 : F2, ... }`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    pub entries: Vec<(Tuple, GroundFormula)>,
}

impl PairSet {
    /// The tuples whose formula is satisfied by `atoms`.
    pub fn satisfied(&self, atoms: &AtomSet, universe: &Universe) -> Relation {
        self.entries
            .iter()
            .filter(|(_, g)| satisfies(atoms, g, universe))
            .map(|(t, _)| t.clone())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundFormula {
    Atom(GroundAtom),
    Top,
    Bot,
    Apply {
        quantifier: Arc<QuantifierDef>,
        sets: Vec<PairSet>,
    },
}

impl GroundFormula {
    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            GroundFormula::Apply { sets, .. } => {
                1 + sets
                    .iter()
                    .flat_map(|s| &s.entries)
                    .map(|(_, g)| g.size())
                    .sum::<usize>()
            }
            _ => 1,
        }
    }

    pub fn quantifier_name(&self) -> Option<&str> {
        match self {
            GroundFormula::Apply { quantifier, .. } => Some(quantifier.name()),
            _ => None,
        }
    }

    /// Ground atoms occurring in the formula.
    pub fn atoms(&self) -> AtomSet {
        let mut out = AtomSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut AtomSet) {
        match self {
            GroundFormula::Atom(a) => {
                out.insert(a.clone());
            }
            GroundFormula::Apply { sets, .. } => {
                for (_, g) in sets.iter().flat_map(|s| &s.entries) {
                    g.collect_atoms(out);
                }
            }
            GroundFormula::Top | GroundFormula::Bot => {}
        }
    }

    /// The single `ε` child of argument `i` of a `<0,...>` application.
    pub fn epsilon_child(&self, i: usize) -> Option<&GroundFormula> {
        match self {
            GroundFormula::Apply { sets, .. } => match sets.get(i)?.entries.as_slice() {
                [(t, g)] if t.is_empty() => Some(g),
                _ => None,
            },
            _ => None,
        }
    }
}

impl Serialize for GroundFormula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GroundFormula::Top => s.serialize_str("top"),
            GroundFormula::Bot => s.serialize_str("bot"),
            GroundFormula::Atom(a) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("atom", &AtomJson(a))?;
                m.end()
            }
            GroundFormula::Apply { quantifier, sets } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("quantifier", quantifier.name())?;
                m.serialize_entry("sets", &SetsJson(sets))?;
                m.end()
            }
        }
    }
}

struct AtomJson<'a>(&'a GroundAtom);

impl Serialize for AtomJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("pred", &*self.0.pred)?;
        m.serialize_entry("args", &self.0.args)?;
        m.end()
    }
}

struct SetsJson<'a>(&'a [PairSet]);

impl Serialize for SetsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for set in self.0 {
            seq.serialize_element(&PairsJson(set))?;
        }
        seq.end()
    }
}

struct PairsJson<'a>(&'a PairSet);

impl Serialize for PairsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.entries.len()))?;
        for (tuple, child) in &self.0.entries {
            seq.serialize_element(&PairJson(tuple, child))?;
        }
        seq.end()
    }
}

struct PairJson<'a>(&'a Tuple, &'a GroundFormula);

impl Serialize for PairJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(self.0)?;
        t.serialize_element(self.1)?;
        t.end()
    }
}

/// Variable bindings, innermost last.
#[derive(Clone, Debug, Default)]
pub(crate) struct Env(Vec<(Symbol, Value)>);

impl Env {
    pub(crate) fn new() -> Self {
        Env(Vec::new())
    }

    pub(crate) fn lookup(&self, v: &str) -> Option<&Value> {
        self.0.iter().rev().find(|(n, _)| &**n == v).map(|(_, x)| x)
    }

    pub(crate) fn mark(&self) -> usize {
        self.0.len()
    }

    pub(crate) fn reset(&mut self, mark: usize) {
        self.0.truncate(mark);
    }

    pub(crate) fn bind_all(&mut self, vars: &[Symbol], tuple: &[Value]) {
        self.0.extend(vars.iter().cloned().zip(tuple.iter().cloned()));
    }

    pub(crate) fn term(&self, t: &Term, universe: &Universe) -> Result<Value, EvalError> {
        match t {
            Term::Var(v) => self
                .lookup(v)
                .cloned()
                .ok_or_else(|| EvalError::UnboundVariable(v.to_string())),
            Term::Const(c) if universe.contains(c) => Ok(c.clone()),
            Term::Const(c) => Err(EvalError::OutsideUniverse(c.to_string())),
        }
    }

    pub(crate) fn ground_atom(
        &self,
        pred: &Symbol,
        args: &[Term],
        universe: &Universe,
    ) -> Result<GroundAtom, EvalError> {
        let args = args.iter().map(|t| self.term(t, universe)).collect::<Result<_, _>>()?;
        Ok(GroundAtom::new(pred.clone(), args))
    }
}

/// Looks up `name` and checks the bound lists against its type.
pub(crate) fn resolve_checked(
    registry: &Registry,
    name: &str,
    bound: &[Vec<Symbol>],
) -> Result<Arc<QuantifierDef>, EvalError> {
    let def = registry.resolve(name)?;
    if bound.len() != def.qtype().arity() || bound.iter().zip(&def.qtype().0).any(|(xs, &n)| xs.len() != n) {
        return Err(EvalError::TypeMismatch {
            name: name.to_string(),
            expected: def.qtype().to_string(),
            found: bound.iter().map(Vec::len).collect(),
        });
    }
    Ok(def)
}

/// `gr_I[F]` for a sentence `F`.
pub fn ground(f: &Formula, universe: &Universe, registry: &Registry) -> Result<GroundFormula, EvalError> {
    ground_in(f, &mut Env::new(), universe, registry)
}

pub(crate) fn ground_in(
    f: &Formula,
    env: &mut Env,
    universe: &Universe,
    registry: &Registry,
) -> Result<GroundFormula, EvalError> {
    match f {
        Formula::Atomic(AtomicFormula::Atom { pred, args }) => {
            Ok(GroundFormula::Atom(env.ground_atom(pred, args, universe)?))
        }
        Formula::Atomic(AtomicFormula::Eq(l, r)) => {
            if env.term(l, universe)? == env.term(r, universe)? {
                Ok(GroundFormula::Top)
            } else {
                Ok(GroundFormula::Bot)
            }
        }
        Formula::Atomic(AtomicFormula::Top) => Ok(GroundFormula::Top),
        Formula::Atomic(AtomicFormula::Bot) => Ok(GroundFormula::Bot),
        Formula::Apply {
            quantifier,
            bound,
            args,
        } => {
            let def = resolve_checked(registry, quantifier, bound)?;
            let mut sets = Vec::with_capacity(args.len());
            for (vars, arg) in bound.iter().zip(args) {
                let mut entries = Vec::with_capacity(universe.tuple_count(vars.len()));
                for tuple in universe.tuples(vars.len()) {
                    let mark = env.mark();
                    env.bind_all(vars, &tuple);
                    let child = ground_in(arg, env, universe, registry);
                    env.reset(mark);
                    entries.push((tuple, child?));
                }
                sets.push(PairSet { entries });
            }
            Ok(GroundFormula::Apply { quantifier: def, sets })
        }
    }
}

/// `atoms ⊨ g`: `Q(S1, ..., Sk)` is true iff `Q^U(S1^I, ..., Sk^I)` is,
/// where `Si^I` collects the tuples whose formula is true.
pub fn satisfies(atoms: &AtomSet, g: &GroundFormula, universe: &Universe) -> bool {
    match g {
        GroundFormula::Atom(a) => atoms.contains(a),
        GroundFormula::Top => true,
        GroundFormula::Bot => false,
        GroundFormula::Apply { quantifier, sets } => {
            let rels: Vec<Relation> = sets.iter().map(|s| s.satisfied(atoms, universe)).collect();
            quantifier.truth(universe, &rels)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;

    fn ints(xs: &[i64]) -> Universe {
        Universe::new(xs.iter().map(|&n| Value::Int(n)))
    }

    fn p(n: i64) -> GroundAtom {
        GroundAtom::new("p", vec![Value::Int(n)])
    }

    #[test]
    fn equality_grounds_to_constants() {
        let reg = Registry::new();
        let u = Universe::new([Value::sym("a"), Value::sym("b")]);
        let eq = |l: &str, r: &str| Formula::eq(Term::constant(l), Term::constant(r));
        assert_eq!(ground(&eq("a", "a"), &u, &reg).unwrap(), GroundFormula::Top);
        assert_eq!(ground(&eq("a", "b"), &u, &reg).unwrap(), GroundFormula::Bot);
    }

    #[test]
    fn forall_grounds_to_total_pair_set() {
        let reg = Registry::new();
        let u = Universe::new([Value::sym("a"), Value::sym("b")]);
        let f = Formula::forall("X", Formula::atom("p", [Term::var("X")]));
        let g = ground(&f, &u, &reg).unwrap();
        let GroundFormula::Apply { quantifier, sets } = &g else {
            panic!("expected an application")
        };
        assert_eq!(quantifier.name(), "forall");
        assert_eq!(sets.len(), 1);
        let keys: Vec<_> = sets[0].entries.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(keys, vec![vec![Value::sym("a")], vec![Value::sym("b")]]);
        assert_eq!(
            sets[0].entries[1].1,
            GroundFormula::Atom(GroundAtom::new("p", vec![Value::sym("b")]))
        );
    }

    #[test]
    fn free_variable_is_an_error() {
        let reg = Registry::new();
        let f = Formula::atom("p", [Term::var("X")]);
        assert_eq!(
            ground(&f, &ints(&[1]), &reg),
            Err(EvalError::UnboundVariable("X".into()))
        );
    }

    #[test]
    fn unknown_quantifier_is_an_error() {
        let reg = Registry::new();
        let f = Formula::apply("mystery", vec![vec!["X"]], vec![Formula::top()]);
        assert!(matches!(
            ground(&f, &ints(&[1]), &reg),
            Err(EvalError::Quantifier(QuantifierError::Unknown(_)))
        ));
    }

    #[test]
    fn sum_body_of_rule_two() {
        // sum{X : p(X)} > -1, as sum_gt[X][Y](p(X), Y = -1)
        let reg = Registry::new();
        let u = ints(&[-1, 1, 2]);
        let f = Formula::apply(
            "sum_gt",
            vec![vec!["X"], vec!["Y"]],
            vec![
                Formula::atom("p", [Term::var("X")]),
                Formula::eq(Term::var("Y"), Term::constant(-1)),
            ],
        );
        let g = ground(&f, &u, &reg).unwrap();
        let GroundFormula::Apply { sets, .. } = &g else {
            panic!()
        };
        let second: Vec<_> = sets[1].entries.iter().map(|(_, g)| g.clone()).collect();
        assert_eq!(second, vec![GroundFormula::Top, GroundFormula::Bot, GroundFormula::Bot]);
        let i1: AtomSet = [p(-1), p(1)].into_iter().collect();
        assert!(satisfies(&i1, &g, &u));
    }

    #[test]
    fn exists_over_all_bot_is_false() {
        let reg = Registry::new();
        let u = ints(&[1, 2]);
        let g = GroundFormula::Apply {
            quantifier: reg.resolve("exists").unwrap(),
            sets: vec![PairSet {
                entries: u.tuples(1).map(|t| (t, GroundFormula::Bot)).collect(),
            }],
        };
        assert!(!satisfies(&AtomSet::new(), &g, &u));
    }

    #[test]
    fn json_mirrors_structure() {
        let reg = Registry::new();
        let u = ints(&[1]);
        let f = Formula::exists("X", Formula::atom("p", [Term::var("X")]));
        let g = ground(&f, &u, &reg).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"quantifier":"exists","sets":[[[[1],{"atom":{"pred":"p","args":[1]}}]]]}"#
        );
    }

    #[test]
    fn interpretation_rejects_foreign_elements() {
        let atoms: AtomSet = [p(9)].into_iter().collect();
        assert!(Interpretation::new(ints(&[1]), atoms).is_err());
    }
}
