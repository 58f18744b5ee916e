//! Recursive-descent parser for `.gq` programs and formulas.
//!
//! ```text
//! program    ::= { directive | rule }
//! directive  ::= "#universe" "{" [ value { "," value } ] "}" "."
//!              | "#intensional" [ pred { "," pred } ] "."
//! rule       ::= head [ ":-" body ] "." | ":-" body "."
//! head       ::= formula { ";" formula }          (disjunction)
//! body       ::= formula { "," formula }          (conjunction)
//! formula    ::= disj [ "->" formula ]            (right associative)
//! disj       ::= conj { "|" conj }
//! conj       ::= unary { "&" unary }
//! unary      ::= "not" unary | primary
//! primary    ::= "(" formula ")" | "bot" | "top"
//!              | ("forall" | "exists") VAR { "," VAR } "(" formula ")"
//!              | ("sum" | "count") "{" VAR ":" formula "}" cmp term
//!              | qname "{" VAR { "," VAR } ":" formula "}"
//!              | qname { "[" [ VAR { "," VAR } ] "]" } "(" [ formula { ";" formula } ] ")"
//!              | pred [ "(" term { "," term } ")" ]
//!              | term ( "=" | "!=" ) term
//! qname      ::= ident [ "(" int { "," int } ")" ]
//! ```

mod lexer;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use lexer::{tokenize, Tok, Token};

use crate::ground::Interpretation;
use crate::quantifier::{builtin, Aggregate, Cmp, Registry};
use crate::syntax::{AtomSet, AtomicFormula, Formula, GroundAtom, Program, Rule, Symbol, Term, Universe, Value};

/// Program text with a name for diagnostics.
#[derive(Clone, Debug)]
pub struct Source {
    pub origin: String,
    pub text: String,
}

impl Source {
    pub fn new(origin: impl Into<String>, text: impl Into<String>) -> Self {
        Source {
            origin: origin.into(),
            text: text.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    UnknownQuantifier,
    /// Bound lists or argument count do not match the quantifier type.
    QuantifierType,
    OutsideUniverse,
    ArityMismatch,
    UnknownPredicate,
    DuplicateDirective,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ErrorKind,
    pub message: String,
    pub origin: String,
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.origin, self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub fn parse_program(src: &Source, registry: &Registry) -> Result<Program, ParseError> {
    let mut p = Parser::new(src, registry)?;
    p.program()
}

pub fn parse_formula(text: &str, registry: &Registry) -> Result<Formula, ParseError> {
    let src = Source::new("<formula>", text);
    let mut p = Parser::new(&src, registry)?;
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

/// Parses a comma-separated list of ground atoms (`p(-1), p(1)`) and checks
/// each against the program's signature and universe.
pub fn parse_atom_set(text: &str, program: &Program) -> Result<AtomSet, ParseError> {
    let src = Source::new("--model", text);
    let registry = Registry::new();
    let mut p = Parser::new(&src, &registry)?;
    let mut atoms = AtomSet::new();
    if p.peek() != &Tok::Eof {
        loop {
            let tok = p.cur().clone();
            let name = p.ident()?;
            let mut args = Vec::new();
            if p.eat(&Tok::LParen) {
                loop {
                    let t = p.cur().clone();
                    match p.term()? {
                        Term::Const(v) => args.push(v),
                        Term::Var(v) => {
                            return Err(p.error_at(&t, ErrorKind::Syntax, format!("variable `{v}` in a ground atom")))
                        }
                    }
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(Tok::RParen)?;
            }
            let atom = GroundAtom::new(Symbol::from(name.as_str()), args);
            match program.predicates.get(name.as_str()) {
                None => {
                    return Err(p.error_at(&tok, ErrorKind::UnknownPredicate, format!("unknown predicate `{name}`")))
                }
                Some(&n) if n != atom.args.len() => {
                    return Err(p.error_at(
                        &tok,
                        ErrorKind::ArityMismatch,
                        format!("predicate `{name}` has arity {n}, got {}", atom.args.len()),
                    ))
                }
                _ => {}
            }
            if let Some(v) = atom.args.iter().find(|v| !program.universe.contains(v)) {
                return Err(p.error_at(
                    &tok,
                    ErrorKind::OutsideUniverse,
                    format!("`{v}` is not in the universe"),
                ));
            }
            atoms.insert(atom);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
    }
    p.expect(Tok::Eof)?;
    Ok(atoms)
}

/// Same as [`parse_atom_set`], wrapped as an interpretation of `program`.
pub fn parse_interpretation(text: &str, program: &Program) -> Result<Interpretation, ParseError> {
    let atoms = parse_atom_set(text, program)?;
    Ok(Interpretation {
        universe: program.universe.clone(),
        atoms,
    })
}

/// The variable introduced when `agg{xs : body} cmp bound` is lowered to
/// `agg_cmp[xs][Y](body, Y = bound)`: the first of `Y`, `Y1`, `Y2`, ...
/// that does not occur in `body`, `bound` or `xs`.
pub(crate) fn aggregate_var(body: &Formula, bound: &Term, xs: &[Symbol]) -> Symbol {
    let mut taken = body.all_variables();
    taken.extend(xs.iter().cloned());
    if let Term::Var(v) = bound {
        taken.insert(v.clone());
    }
    std::iter::once("Y".to_string())
        .chain((1..).map(|i| format!("Y{i}")))
        .map(|s| Symbol::from(s.as_str()))
        .find(|s| !taken.contains(s))
        .expect("an unused name exists")
}

const KEYWORDS: &[&str] = &["not", "bot", "top", "forall", "exists"];

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    origin: &'a str,
    registry: &'a Registry,
    /// Predicate arities seen so far.
    preds: BTreeMap<Symbol, usize>,
    /// Constants with their first position, for the universe check.
    constants: Vec<(Value, usize, usize)>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a Source, registry: &'a Registry) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(&src.text, &src.origin)?,
            pos: 0,
            origin: &src.origin,
            registry,
            preds: BTreeMap::new(),
            constants: Vec::new(),
        })
    }

    fn cur(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_at(&self, at: &Token, kind: ErrorKind, message: String) -> ParseError {
        ParseError {
            kind,
            message,
            origin: self.origin.to_string(),
            line: at.line,
            column: at.column,
            expected: Vec::new(),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.cur();
        ParseError {
            kind: ErrorKind::Syntax,
            message: format!("unexpected {}", t.tok),
            origin: self.origin.to_string(),
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek() == &tok {
            Ok(self.bump())
        } else {
            let name = match &tok {
                Tok::Eof => "end of input".to_string(),
                t => format!("`{}`", t.text()),
            };
            Err(self.unexpected(&[&name]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn var(&mut self) -> Result<Symbol, ParseError> {
        match self.peek().clone() {
            Tok::Var(s) => {
                self.bump();
                Ok(Symbol::from(s.as_str()))
            }
            _ => Err(self.unexpected(&["variable"])),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        let mut universe: Option<(Universe, Token)> = None;
        let mut intensional: Option<(Vec<(Symbol, Token)>, Token)> = None;
        while self.peek() != &Tok::Eof {
            if let Tok::Directive(d) = self.peek().clone() {
                let at = self.bump();
                match d.as_str() {
                    "universe" => {
                        if universe.is_some() {
                            return Err(self.error_at(
                                &at,
                                ErrorKind::DuplicateDirective,
                                "repeated `#universe`".into(),
                            ));
                        }
                        universe = Some((self.universe_body()?, at));
                    }
                    "intensional" => {
                        if intensional.is_some() {
                            return Err(self.error_at(
                                &at,
                                ErrorKind::DuplicateDirective,
                                "repeated `#intensional`".into(),
                            ));
                        }
                        let mut preds = Vec::new();
                        if self.peek() != &Tok::Dot {
                            loop {
                                let t = self.cur().clone();
                                preds.push((Symbol::from(self.ident()?.as_str()), t));
                                if !self.eat(&Tok::Comma) {
                                    break;
                                }
                            }
                        }
                        self.expect(Tok::Dot)?;
                        intensional = Some((preds, at));
                    }
                    other => {
                        return Err(self.error_at(&at, ErrorKind::Syntax, format!("unknown directive `#{other}`")))
                    }
                }
                continue;
            }
            rules.push(self.rule()?);
        }

        let universe = match universe {
            Some((u, _)) => {
                if let Some((v, line, column)) = self.constants.iter().find(|(v, _, _)| !u.contains(v)) {
                    return Err(ParseError {
                        kind: ErrorKind::OutsideUniverse,
                        message: format!("constant `{v}` is not in the declared universe"),
                        origin: self.origin.to_string(),
                        line: *line,
                        column: *column,
                        expected: Vec::new(),
                    });
                }
                u
            }
            None => self.constants.iter().map(|(v, _, _)| v.clone()).collect(),
        };
        let predicates = std::mem::take(&mut self.preds);
        let intensional_set: BTreeSet<Symbol> = match intensional {
            None => predicates.keys().cloned().collect(),
            Some((preds, _)) => {
                for (p, at) in &preds {
                    if !predicates.contains_key(p) {
                        return Err(self.error_at(at, ErrorKind::UnknownPredicate, format!("unknown predicate `{p}`")));
                    }
                }
                preds.into_iter().map(|(p, _)| p).collect()
            }
        };
        Ok(Program {
            rules,
            universe,
            predicates,
            intensional: intensional_set,
        })
    }

    fn universe_body(&mut self) -> Result<Universe, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut elems = Vec::new();
        if self.peek() != &Tok::RBrace {
            loop {
                match self.peek().clone() {
                    Tok::Int(n) => elems.push(Value::Int(n)),
                    Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => elems.push(Value::sym(&s)),
                    _ => return Err(self.unexpected(&["integer", "constant"])),
                }
                self.bump();
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::Dot)?;
        Ok(Universe::new(elems))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        if self.eat(&Tok::If) {
            let body = self.body()?;
            self.expect(Tok::Dot)?;
            return Ok(Rule::new(Formula::bot(), body));
        }
        let mut head = self.formula()?;
        while self.eat(&Tok::Semi) {
            head = Formula::or(head, self.formula()?);
        }
        let body = if self.eat(&Tok::If) {
            self.body()?
        } else {
            Formula::top()
        };
        if self.peek() != &Tok::Dot {
            return Err(self.unexpected(&["`.`", "`:-`", "`;`"]));
        }
        self.bump();
        Ok(Rule::new(head, body))
    }

    fn body(&mut self) -> Result<Formula, ParseError> {
        let mut body = self.formula()?;
        while self.eat(&Tok::Comma) {
            body = Formula::and(body, self.formula()?);
        }
        Ok(body)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.formula()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == &Tok::Ident("not".into()) {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let start = self.cur().clone();
        match start.tok.clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Var(_) | Tok::Int(_) => self.equality(),
            Tok::Ident(name) => {
                let next = self.peek_at(1).clone();
                match (name.as_str(), &next) {
                    ("bot", t) if t != &Tok::LParen => {
                        self.bump();
                        Ok(Formula::bot())
                    }
                    ("top", t) if t != &Tok::LParen => {
                        self.bump();
                        Ok(Formula::top())
                    }
                    ("forall" | "exists", Tok::Var(_)) => {
                        self.bump();
                        self.quantified(&name)
                    }
                    ("not", _) => Err(self.unexpected(&["formula"])),
                    ("sum" | "count", Tok::LBrace) => {
                        self.bump();
                        self.aggregate(&name, &start)
                    }
                    (_, Tok::LBrace | Tok::LBrack) => {
                        self.bump();
                        self.application(name, &start)
                    }
                    (_, Tok::LParen) => self.atom_or_application(),
                    (_, Tok::Eq | Tok::Ne) => self.equality(),
                    _ => {
                        self.bump();
                        self.atom(name, Vec::new(), &start)
                    }
                }
            }
            _ => Err(self.unexpected(&["formula"])),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let t = self.cur().clone();
        match &t.tok {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(Symbol::from(v.as_str())))
            }
            Tok::Int(n) => {
                self.bump();
                self.constants.push((Value::Int(*n), t.line, t.column));
                Ok(Term::Const(Value::Int(*n)))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                if self.peek() == &Tok::LParen {
                    return Err(self.error_at(
                        &t,
                        ErrorKind::Syntax,
                        format!("function term `{s}(...)` is not supported"),
                    ));
                }
                self.constants.push((Value::sym(s), t.line, t.column));
                Ok(Term::Const(Value::sym(s)))
            }
            _ => Err(self.unexpected(&["term"])),
        }
    }

    fn equality(&mut self) -> Result<Formula, ParseError> {
        let l = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::eq(l, self.term()?))
            }
            Tok::Ne => {
                self.bump();
                Ok(Formula::not(Formula::eq(l, self.term()?)))
            }
            _ => Err(self.unexpected(&["`=`", "`!=`"])),
        }
    }

    fn atom(&mut self, pred: String, args: Vec<Term>, at: &Token) -> Result<Formula, ParseError> {
        if KEYWORDS.contains(&pred.as_str()) {
            return Err(self.error_at(at, ErrorKind::Syntax, format!("`{pred}` is a keyword")));
        }
        let sym = Symbol::from(pred.as_str());
        match self.preds.get(&sym) {
            Some(&n) if n != args.len() => {
                return Err(self.error_at(
                    at,
                    ErrorKind::ArityMismatch,
                    format!("predicate `{pred}` used with arity {}, earlier with {n}", args.len()),
                ))
            }
            Some(_) => {}
            None => {
                self.preds.insert(sym.clone(), args.len());
            }
        }
        Ok(Formula::Atomic(AtomicFormula::Atom { pred: sym, args }))
    }

    /// `name(...)` is an atom unless followed by `{` or `[`, in which case
    /// the parenthesized part is a parameter list of the quantifier name.
    /// `name()` is an application of a type `<>` quantifier.
    fn atom_or_application(&mut self) -> Result<Formula, ParseError> {
        let start = self.cur().clone();
        let name = self.ident()?;
        self.expect(Tok::LParen)?;
        if self.eat(&Tok::RParen) {
            return self.finish_application(name, Vec::new(), Vec::new(), &start);
        }
        let mark = self.constants.len();
        let mut args = vec![self.term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        if matches!(self.peek(), Tok::LBrace | Tok::LBrack) {
            // parameters are not object constants
            self.constants.truncate(mark);
            let params: Vec<String> = args
                .iter()
                .map(|t| match t {
                    Term::Const(v) => Ok(v.to_string()),
                    Term::Var(_) => Err(self.error_at(
                        &start,
                        ErrorKind::Syntax,
                        "quantifier parameters must be constants".into(),
                    )),
                })
                .collect::<Result<_, _>>()?;
            let qname = format!("{name}({})", params.join(","));
            return self.application(qname, &start);
        }
        if matches!(self.peek(), Tok::Eq | Tok::Ne) {
            return Err(self.error_at(
                &start,
                ErrorKind::Syntax,
                format!("function term `{name}(...)` is not supported"),
            ));
        }
        self.atom(name, args, &start)
    }

    fn var_list(&mut self) -> Result<Vec<Symbol>, ParseError> {
        let mut vars = vec![self.var()?];
        while self.eat(&Tok::Comma) {
            vars.push(self.var()?);
        }
        Ok(vars)
    }

    /// `forall X, Y (F)` after the keyword.
    fn quantified(&mut self, q: &str) -> Result<Formula, ParseError> {
        let vars = self.var_list()?;
        self.expect(Tok::LParen)?;
        let body = self.formula()?;
        self.expect(Tok::RParen)?;
        Ok(vars.into_iter().rev().fold(body, |f, v| Formula::Apply {
            quantifier: Symbol::from(q),
            bound: vec![vec![v]],
            args: vec![f],
        }))
    }

    /// `sum{X : F} cmp t` after the keyword.
    fn aggregate(&mut self, agg: &str, start: &Token) -> Result<Formula, ParseError> {
        self.expect(Tok::LBrace)?;
        let xs = self.var_list()?;
        self.expect(Tok::Colon)?;
        let body = self.formula()?;
        self.expect(Tok::RBrace)?;
        let cmp = match self.peek() {
            Tok::Lt => Cmp::Lt,
            Tok::Le => Cmp::Le,
            Tok::Eq => Cmp::Eq,
            Tok::Ne => Cmp::Ne,
            Tok::Ge => Cmp::Ge,
            Tok::Gt => Cmp::Gt,
            _ => return Err(self.unexpected(&["comparison"])),
        };
        self.bump();
        let bound = self.term()?;
        let agg = if agg == builtin::SUM {
            Aggregate::Sum
        } else {
            Aggregate::Count
        };
        let y = aggregate_var(&body, &bound, &xs);
        let eq = Formula::eq(Term::Var(y.clone()), bound);
        self.finish_application(agg.quantifier_name(cmp), vec![xs, vec![y]], vec![body, eq], start)
    }

    /// `name{X : F}` or `name[X][Y](F; G)` after the name.
    fn application(&mut self, name: String, start: &Token) -> Result<Formula, ParseError> {
        if self.eat(&Tok::LBrace) {
            let xs = self.var_list()?;
            self.expect(Tok::Colon)?;
            let body = self.formula()?;
            self.expect(Tok::RBrace)?;
            return self.finish_application(name, vec![xs], vec![body], start);
        }
        let mut bound = Vec::new();
        while self.eat(&Tok::LBrack) {
            let xs = if self.peek() == &Tok::RBrack {
                Vec::new()
            } else {
                self.var_list()?
            };
            self.expect(Tok::RBrack)?;
            bound.push(xs);
        }
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if self.peek() != &Tok::RParen {
            args.push(self.formula()?);
            while self.eat(&Tok::Semi) {
                args.push(self.formula()?);
            }
        }
        self.expect(Tok::RParen)?;
        self.finish_application(name, bound, args, start)
    }

    fn finish_application(
        &mut self,
        name: String,
        bound: Vec<Vec<Symbol>>,
        args: Vec<Formula>,
        at: &Token,
    ) -> Result<Formula, ParseError> {
        let Some(def) = self.registry.get(&name) else {
            return Err(self.error_at(at, ErrorKind::UnknownQuantifier, format!("unknown quantifier `{name}`")));
        };
        let lens: Vec<usize> = bound.iter().map(Vec::len).collect();
        if lens != def.qtype().0 || args.len() != bound.len() {
            return Err(self.error_at(
                at,
                ErrorKind::QuantifierType,
                format!(
                    "quantifier `{name}` has type {}, applied with {} argument(s) and bound lists of lengths {lens:?}",
                    def.qtype(),
                    args.len()
                ),
            ));
        }
        for xs in &bound {
            let distinct: BTreeSet<_> = xs.iter().collect();
            if distinct.len() != xs.len() {
                return Err(self.error_at(
                    at,
                    ErrorKind::QuantifierType,
                    "repeated variable in a bound list".into(),
                ));
            }
        }
        Ok(Formula::Apply {
            quantifier: Arc::from(name.as_str()),
            bound,
            args,
        })
    }
}
