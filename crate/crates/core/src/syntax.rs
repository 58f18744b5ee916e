//! Terms, formulas, rules and programs.
//!
//! Formulas follow the generalized-quantifier shape: a formula is either
//! atomic or an application `Q[x1]...[xk](F1, ..., Fk)` of a named
//! quantifier. The standard connectives are ordinary quantifiers in the
//! registry (see [`crate::quantifier::builtin`]); the constructors on
//! [`Formula`] build them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::quantifier::builtin;

pub type Symbol = Arc<str>;

/// An element of a (finite) universe.
///
/// Integers order before symbols; integers compare numerically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(i64),
    Sym(Symbol),
}

impl Value {
    pub fn sym(name: &str) -> Self {
        Value::Sym(Arc::from(name))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            Value::Sym(_) => None,
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::sym(s)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Int(n) => s.serialize_i64(*n),
            Value::Sym(name) => s.serialize_str(name),
        }
    }
}

/// A tuple of universe elements; the empty tuple is `ε`.
pub type Tuple = Vec<Value>;

/// A finite universe, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Universe(Vec<Value>);

impl Universe {
    pub fn new(elements: impl IntoIterator<Item = Value>) -> Self {
        let set: BTreeSet<Value> = elements.into_iter().collect();
        Universe(set.into_iter().collect())
    }

    pub fn elements(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.0.binary_search(v).is_ok()
    }

    /// All tuples of length `n` over the universe, in lexicographic order.
    /// `tuples(0)` yields exactly the empty tuple.
    pub fn tuples(&self, n: usize) -> Tuples<'_> {
        Tuples {
            elements: &self.0,
            odometer: vec![0; n],
            done: n > 0 && self.0.is_empty(),
        }
    }

    /// `|U|^n`, saturating.
    pub fn tuple_count(&self, n: usize) -> usize {
        (0..n).fold(1usize, |acc, _| acc.saturating_mul(self.0.len()))
    }
}

impl FromIterator<Value> for Universe {
    fn from_iter<T: IntoIterator<Item = Value>>(iter: T) -> Self {
        Universe::new(iter)
    }
}

pub struct Tuples<'a> {
    elements: &'a [Value],
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for Tuples<'_> {
    type Item = Tuple;

    fn next(&mut self) -> Option<Tuple> {
        if self.done {
            return None;
        }
        let out = self.odometer.iter().map(|&i| self.elements[i].clone()).collect();
        // advance, rightmost position fastest
        let mut pos = self.odometer.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.odometer[pos] += 1;
            if self.odometer[pos] < self.elements.len() {
                break;
            }
            self.odometer[pos] = 0;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Symbol),
    Const(Value),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Arc::from(name))
    }

    pub fn constant(v: impl Into<Value>) -> Self {
        Term::Const(v.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomicFormula {
    Atom { pred: Symbol, args: Vec<Term> },
    Eq(Term, Term),
    Bot,
    Top,
}

/// A GQ-formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atomic(AtomicFormula),
    /// `quantifier[bound[0]]...[bound[k-1]](args[0], ..., args[k-1])`
    Apply {
        quantifier: Symbol,
        bound: Vec<Vec<Symbol>>,
        args: Vec<Formula>,
    },
}

impl Formula {
    pub fn atom(pred: &str, args: impl IntoIterator<Item = Term>) -> Self {
        Formula::Atomic(AtomicFormula::Atom {
            pred: Arc::from(pred),
            args: args.into_iter().collect(),
        })
    }

    pub fn eq(left: Term, right: Term) -> Self {
        Formula::Atomic(AtomicFormula::Eq(left, right))
    }

    pub fn top() -> Self {
        Formula::Atomic(AtomicFormula::Top)
    }

    pub fn bot() -> Self {
        Formula::Atomic(AtomicFormula::Bot)
    }

    pub fn apply(quantifier: &str, bound: Vec<Vec<&str>>, args: Vec<Formula>) -> Self {
        Formula::Apply {
            quantifier: Arc::from(quantifier),
            bound: bound
                .into_iter()
                .map(|xs| xs.into_iter().map(Arc::from).collect())
                .collect(),
            args,
        }
    }

    fn binary(q: &str, left: Formula, right: Formula) -> Self {
        Formula::Apply {
            quantifier: Arc::from(q),
            bound: vec![Vec::new(), Vec::new()],
            args: vec![left, right],
        }
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Self::binary(builtin::AND, left, right)
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Self::binary(builtin::OR, left, right)
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Self::binary(builtin::IMPLIES, left, right)
    }

    /// `not F`, i.e. `F -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Self::implies(f, Formula::bot())
    }

    pub fn forall(var: &str, body: Formula) -> Self {
        Formula::apply(builtin::FORALL, vec![vec![var]], vec![body])
    }

    pub fn exists(var: &str, body: Formula) -> Self {
        Formula::apply(builtin::EXISTS, vec![vec![var]], vec![body])
    }

    /// Left-nested conjunction; the empty conjunction is `top`.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or_else(Formula::top)
    }

    /// The `F` of `F -> bot`, if this formula has that shape.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Apply { quantifier, args, .. }
                if &**quantifier == builtin::IMPLIES && args.len() == 2 && args[1] == Formula::bot() =>
            {
                Some(&args[0])
            }
            _ => None,
        }
    }

    /// The operands of a binary connective application named `q`.
    pub fn as_binary(&self, q: &str) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Apply {
                quantifier,
                args,
                bound,
            } if &**quantifier == q && args.len() == 2 && bound.iter().all(Vec::is_empty) => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atomic(_))
    }

    /// Variables with at least one free occurrence.
    pub fn free_variables(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    fn collect_free(&self, bound_stack: &mut Vec<Symbol>, out: &mut BTreeSet<Symbol>) {
        match self {
            Formula::Atomic(a) => {
                let mut note = |t: &Term| {
                    if let Term::Var(v) = t {
                        if !bound_stack.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                };
                match a {
                    AtomicFormula::Atom { args, .. } => args.iter().for_each(&mut note),
                    AtomicFormula::Eq(l, r) => {
                        note(l);
                        note(r);
                    }
                    AtomicFormula::Bot | AtomicFormula::Top => {}
                }
            }
            Formula::Apply { bound, args, .. } => {
                // x_i binds in F_i only
                for (xs, arg) in bound.iter().zip(args) {
                    let depth = bound_stack.len();
                    bound_stack.extend(xs.iter().cloned());
                    arg.collect_free(bound_stack, out);
                    bound_stack.truncate(depth);
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atomic(AtomicFormula::Atom { args, .. }) => {
                out.extend(args.iter().filter_map(term_var));
            }
            Formula::Atomic(AtomicFormula::Eq(l, r)) => {
                out.extend(term_var(l));
                out.extend(term_var(r));
            }
            Formula::Apply { bound, .. } => out.extend(bound.iter().flatten().cloned()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        if let Formula::Apply { args, .. } = self {
            for a in args {
                a.visit(f);
            }
        }
    }

    /// Universal closure over the free variables, in sorted order.
    pub fn universal_closure(self) -> Formula {
        let free = self.free_variables();
        free.into_iter().rev().fold(self, |body, v| Formula::Apply {
            quantifier: Arc::from(builtin::FORALL),
            bound: vec![vec![v]],
            args: vec![body],
        })
    }
}

fn term_var(t: &Term) -> Option<Symbol> {
    match t {
        Term::Var(v) => Some(v.clone()),
        Term::Const(_) => None,
    }
}

/// `head <- body`. Both sides are arbitrary formulas.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Formula,
    pub body: Formula,
}

impl Rule {
    pub fn new(head: Formula, body: Formula) -> Self {
        Rule { head, body }
    }

    pub fn fact(head: Formula) -> Self {
        Rule::new(head, Formula::top())
    }

    /// `forall-closure(body -> head)`
    pub fn to_sentence(&self) -> Formula {
        Formula::implies(self.body.clone(), self.head.clone()).universal_closure()
    }

    /// Free variables of the rule, sorted; the rule is read as universally
    /// closed over them.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut vars = self.body.free_variables();
        vars.extend(self.head.free_variables());
        vars.into_iter().collect()
    }
}

/// A finite program together with its universe and intensional predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub universe: Universe,
    /// Predicate name to arity.
    pub predicates: BTreeMap<Symbol, usize>,
    pub intensional: BTreeSet<Symbol>,
}

impl Program {
    /// Builds a program, inferring the signature from the rules and taking
    /// every predicate as intensional.
    pub fn new(rules: Vec<Rule>, universe: Universe) -> Result<Self, SignatureError> {
        let mut predicates = BTreeMap::new();
        for rule in &rules {
            for f in [&rule.head, &rule.body] {
                collect_signature(f, &mut predicates)?;
            }
        }
        let intensional = predicates.keys().cloned().collect();
        Ok(Program {
            rules,
            universe,
            predicates,
            intensional,
        })
    }

    pub fn with_intensional(mut self, preds: impl IntoIterator<Item = Symbol>) -> Result<Self, SignatureError> {
        let preds: BTreeSet<Symbol> = preds.into_iter().collect();
        if let Some(p) = preds.iter().find(|p| !self.predicates.contains_key(*p)) {
            return Err(SignatureError::UnknownPredicate(p.to_string()));
        }
        self.intensional = preds;
        Ok(self)
    }

    pub fn all_intensional(&self) -> bool {
        self.intensional.len() == self.predicates.len()
    }

    /// The Herbrand base: every ground atom over the signature and universe,
    /// sorted.
    pub fn herbrand_base(&self) -> Vec<GroundAtom> {
        let mut base = Vec::new();
        for (pred, &arity) in &self.predicates {
            for args in self.universe.tuples(arity) {
                base.push(GroundAtom::new(pred.clone(), args));
            }
        }
        base.sort();
        base
    }

    pub fn herbrand_base_size(&self) -> usize {
        self.predicates
            .values()
            .map(|&n| self.universe.tuple_count(n))
            .fold(0usize, usize::saturating_add)
    }

    /// The GQ-representation: conjunction of the universal closures of
    /// `B -> H` over all rules.
    pub fn to_sentence(&self) -> Formula {
        Formula::conjunction(self.rules.iter().map(Rule::to_sentence))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("predicate `{pred}` used with arity {found}, expected {expected}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
}

fn collect_signature(f: &Formula, sig: &mut BTreeMap<Symbol, usize>) -> Result<(), SignatureError> {
    let mut result = Ok(());
    f.visit(&mut |g| {
        if let Formula::Atomic(AtomicFormula::Atom { pred, args }) = g {
            let expected = *sig.entry(pred.clone()).or_insert(args.len());
            if expected != args.len() && result.is_ok() {
                result = Err(SignatureError::ArityMismatch {
                    pred: pred.to_string(),
                    expected,
                    found: args.len(),
                });
            }
        }
    });
    result
}

/// `p(ξ1, ..., ξn)` over object names.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: Symbol,
    pub args: Tuple,
}

impl GroundAtom {
    pub fn new(pred: impl Into<Symbol>, args: Tuple) -> Self {
        GroundAtom {
            pred: pred.into(),
            args,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A set of ground atoms (the `I^pred` part of a Herbrand interpretation).
pub type AtomSet = BTreeSet<GroundAtom>;
