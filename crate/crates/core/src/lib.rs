//! Logic programs with generalized quantifiers.
//!
//! A program is parsed into GQ-formulas, grounded over a finite universe,
//! and its stable models are enumerated under either the SM or the FLP
//! semantics. The SM semantics can be computed two ways: by a reduct and
//! minimal-model check on the ground formula, or by evaluating the SM
//! operator directly.
//!
//! ```
//! use gqsm::{parse_program, Registry, Solver, Source};
//!
//! let reg = Registry::new();
//! let prog = parse_program(&Source::new("ex", "p(a) :- not atmost(0){X : p(X)}."), &reg).unwrap();
//! let sm = Solver::new(&reg).sm_operator(&prog).unwrap();
//! let flp = Solver::new(&reg).flp_operator(&prog).unwrap();
//! assert_eq!(sm.models.len(), 2);
//! assert_eq!(flp.models.len(), 1);
//! ```

pub mod cli;
pub mod eval;
pub mod ground;
pub mod parser;
pub mod quantifier;
pub mod reduct;
pub mod render;
pub mod solver;
pub mod syntax;

pub use eval::{eval_star, eval_triangle, is_model, satisfies_direct};
pub use ground::{ground, satisfies, EvalError, GroundFormula, Interpretation, PairSet};
pub use parser::{parse_atom_set, parse_formula, parse_interpretation, parse_program, ParseError, Source};
pub use quantifier::{
    check_monotonicity, validate_monotonicity, Monotonicity, QuantifierDef, QuantifierError, QuantifierType, Registry,
    Relation,
};
pub use reduct::{is_minimal_model, minimal_models, reduct, ReductResult, SearchError};
pub use render::{render_formula, render_ground, render_program, render_rule};
pub use solver::{
    ground_instances, ground_program, is_prop4_class, program_to_sentence, ClassReport, Comparison, Route, Semantics,
    SolveError, SolveResult, Solver, Stats, Violation, DEFAULT_ATOM_CAP,
};
pub use syntax::{
    AtomSet, AtomicFormula, Formula, GroundAtom, Program, Rule, SignatureError, Symbol, Term, Tuple, Universe, Value,
};

// The guide's code listings run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/language.md")]
    mod language {}
    #[doc = include_str!("../../../book/src/quantifiers.md")]
    mod quantifiers {}
    #[doc = include_str!("../../../book/src/grounding.md")]
    mod grounding {}
    #[doc = include_str!("../../../book/src/reduct.md")]
    mod reduct {}
    #[doc = include_str!("../../../book/src/semantics.md")]
    mod semantics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
