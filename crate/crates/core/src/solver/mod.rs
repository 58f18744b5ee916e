//! Stable-model enumeration.
//!
//! Every route enumerates all subsets `I` of the Herbrand base as
//! candidates and refutes stability by a second, finite search:
//!
//! | semantics | route      | `I` is accepted iff                                          |
//! |-----------|------------|--------------------------------------------------------------|
//! | SM        | reduct     | `I` is a minimal set of atoms satisfying `gr_I[F]^I`         |
//! | SM        | operator   | `I ⊨ F` and no `J <_p I` satisfies `F*(u)` with `u = J`       |
//! | FLP       | operator   | `I ⊨ Π` and no `J <_p I` satisfies `Π^△(u)` with `u = J`      |
//! | FLP       | reduct     | `I ⊨ Π` and no `J <_p I` is a model of the rules whose body `I` satisfies |
//!
//! `J <_p I` ranges over atom sets that agree with `I` outside the
//! intensional predicates `p` and are a proper subset of `I` on them. The
//! SM reduct route needs every predicate to be intensional.

mod class;

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use class::{is_prop4_class, ClassReport, Violation};

use crate::eval::{eval_star, eval_triangle, satisfies_direct};
use crate::ground::{ground, ground_in, satisfies, Env, EvalError, GroundFormula, Interpretation};
use crate::quantifier::Registry;
use crate::reduct::{is_minimal_model, reduct};
use crate::syntax::{AtomSet, Formula, GroundAtom, Program};

/// Default bound on the Herbrand base size for exhaustive enumeration.
pub const DEFAULT_ATOM_CAP: usize = 20;

// Candidate sets are bitmasks over the base.
const HARD_ATOM_LIMIT: usize = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Sm,
    Flp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Reduct,
    Operator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub candidates_checked: usize,
    /// Wall-clock time; left out of serialized output so that runs are
    /// reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub semantics: Semantics,
    pub route: Route,
    /// Sorted; each model's atoms are sorted.
    #[serde(serialize_with = "serialize_models")]
    pub models: Vec<AtomSet>,
    pub stats: Stats,
}

pub(crate) fn serialize_models<S: Serializer>(models: &[AtomSet], s: S) -> Result<S::Ok, S::Error> {
    let as_text: Vec<Vec<String>> = models
        .iter()
        .map(|m| m.iter().map(GroundAtom::to_string).collect())
        .collect();
    as_text.serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("Herbrand base has {atoms} atoms, above the enumeration cap of {cap}")]
    CapExceeded { atoms: usize, cap: usize },
    #[error("the reduct route requires every predicate to be intensional; use the operator route")]
    ReductRouteNeedsAllIntensional,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Symmetric difference of the SM and FLP model sets, with the class
/// report for the program.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub sm: SolveResult,
    pub flp: SolveResult,
    #[serde(serialize_with = "serialize_models")]
    pub only_sm: Vec<AtomSet>,
    #[serde(serialize_with = "serialize_models")]
    pub only_flp: Vec<AtomSet>,
    /// `only_sm ∪ only_flp`, sorted.
    #[serde(serialize_with = "serialize_models")]
    pub difference: Vec<AtomSet>,
    pub class: ClassReport,
    /// In the class, yet the semantics differ. Never expected to be set.
    pub violates_prop4: bool,
}

impl Comparison {
    pub fn agree(&self) -> bool {
        self.only_sm.is_empty() && self.only_flp.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Solver<'r> {
    registry: &'r Registry,
    atom_cap: usize,
    parallel: bool,
}

struct Candidates {
    base: Vec<GroundAtom>,
    intensional: Vec<bool>,
}

impl Candidates {
    fn set(&self, mask: u64) -> AtomSet {
        self.base
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    fn intensional_mask(&self, mask: u64) -> u64 {
        self.intensional
            .iter()
            .enumerate()
            .filter(|(i, int)| **int && mask >> i & 1 == 1)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Intensional parts of every `J <_p I`: proper submasks of `I`'s
    /// intensional mask.
    fn smaller(&self, mask: u64) -> impl Iterator<Item = u64> {
        let top = self.intensional_mask(mask);
        let mut next = Some(top);
        std::iter::from_fn(move || {
            let cur = next?;
            if cur == 0 {
                next = None;
            } else {
                next = Some((cur - 1) & top);
            }
            Some(cur)
        })
        .skip(1)
    }
}

impl<'r> Solver<'r> {
    pub fn new(registry: &'r Registry) -> Self {
        Solver {
            registry,
            atom_cap: DEFAULT_ATOM_CAP,
            parallel: true,
        }
    }

    pub fn with_atom_cap(mut self, cap: usize) -> Self {
        self.atom_cap = cap;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn atom_cap(&self) -> usize {
        self.atom_cap
    }

    fn candidates(&self, prog: &Program) -> Result<Candidates, SolveError> {
        let atoms = prog.herbrand_base_size();
        let cap = self.atom_cap.min(HARD_ATOM_LIMIT);
        if atoms > cap {
            return Err(SolveError::CapExceeded { atoms, cap });
        }
        let base = prog.herbrand_base();
        let intensional = base.iter().map(|a| prog.intensional.contains(&a.pred)).collect();
        Ok(Candidates { base, intensional })
    }

    /// Runs `accept` on every candidate and collects the accepted sets.
    fn enumerate<F>(
        &self,
        semantics: Semantics,
        route: Route,
        cands: &Candidates,
        accept: F,
    ) -> Result<SolveResult, SolveError>
    where
        F: Fn(u64) -> Result<bool, SolveError> + Sync,
    {
        let start = Instant::now();
        let total = 1u64 << cands.base.len();
        let check = |mask: u64| -> Result<Option<AtomSet>, SolveError> { Ok(accept(mask)?.then(|| cands.set(mask))) };
        let results: Vec<Option<AtomSet>> = if self.parallel {
            (0..total).into_par_iter().map(check).collect::<Result<_, _>>()?
        } else {
            (0..total).map(check).collect::<Result<_, _>>()?
        };
        let mut models: Vec<AtomSet> = results.into_iter().flatten().collect();
        models.sort();
        Ok(SolveResult {
            semantics,
            route,
            models,
            stats: Stats {
                candidates_checked: total as usize,
                elapsed: start.elapsed(),
            },
        })
    }

    fn interpretation(prog: &Program, atoms: AtomSet) -> Interpretation {
        Interpretation {
            universe: prog.universe.clone(),
            atoms,
        }
    }

    /// Stable models through grounding and reduct: `I` is stable iff it is
    /// a minimal set of atoms satisfying `gr_I[F]^I`.
    pub fn sm_reduct(&self, prog: &Program) -> Result<SolveResult, SolveError> {
        if !prog.all_intensional() {
            return Err(SolveError::ReductRouteNeedsAllIntensional);
        }
        let cands = self.candidates(prog)?;
        let g = ground(&prog.to_sentence(), &prog.universe, self.registry)?;
        self.enumerate(Semantics::Sm, Route::Reduct, &cands, |mask| {
            let i = cands.set(mask);
            if !satisfies(&i, &g, &prog.universe) {
                return Ok(false);
            }
            let r = reduct(&g, &i, &prog.universe);
            Ok(is_minimal_model(&r.formula, &i, &prog.universe))
        })
    }

    /// Stable models through the SM operator: `I ⊨ F` and no `J <_p I`
    /// satisfies `F*(u)`.
    pub fn sm_operator(&self, prog: &Program) -> Result<SolveResult, SolveError> {
        let cands = self.candidates(prog)?;
        let f = prog.to_sentence();
        self.enumerate(Semantics::Sm, Route::Operator, &cands, |mask| {
            let i = Self::interpretation(prog, cands.set(mask));
            if !satisfies_direct(&i, &f, self.registry)? {
                return Ok(false);
            }
            for j in cands.smaller(mask) {
                if eval_star(&f, &i, &cands.set(j), &prog.intensional, self.registry)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
    }

    /// FLP-stable models through the FLP operator: `I ⊨ Π` and no `J <_p I`
    /// satisfies `Π^△(u)`.
    pub fn flp_operator(&self, prog: &Program) -> Result<SolveResult, SolveError> {
        let cands = self.candidates(prog)?;
        let f = prog.to_sentence();
        self.enumerate(Semantics::Flp, Route::Operator, &cands, |mask| {
            let i = Self::interpretation(prog, cands.set(mask));
            if !satisfies_direct(&i, &f, self.registry)? {
                return Ok(false);
            }
            for j in cands.smaller(mask) {
                if eval_triangle(prog, &i, &cands.set(j), self.registry)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
    }

    /// FLP-stable models through the FLP reduct: the ground rule instances
    /// whose body `I` satisfies.
    pub fn flp_reduct(&self, prog: &Program) -> Result<SolveResult, SolveError> {
        let cands = self.candidates(prog)?;
        let instances = ground_instances(prog, self.registry)?;
        let u = &prog.universe;
        self.enumerate(Semantics::Flp, Route::Reduct, &cands, |mask| {
            let i = cands.set(mask);
            if !instances
                .iter()
                .all(|(b, h)| !satisfies(&i, b, u) || satisfies(&i, h, u))
            {
                return Ok(false);
            }
            let kept: Vec<_> = instances.iter().filter(|(b, _)| satisfies(&i, b, u)).collect();
            let frozen = mask & !cands.intensional_mask(mask);
            for j in cands.smaller(mask) {
                let jset = cands.set(j | frozen);
                if kept
                    .iter()
                    .all(|(b, h)| !satisfies(&jset, b, u) || satisfies(&jset, h, u))
                {
                    return Ok(false);
                }
            }
            Ok(true)
        })
    }

    pub fn solve(&self, prog: &Program, semantics: Semantics, route: Route) -> Result<SolveResult, SolveError> {
        match (semantics, route) {
            (Semantics::Sm, Route::Reduct) => self.sm_reduct(prog),
            (Semantics::Sm, Route::Operator) => self.sm_operator(prog),
            (Semantics::Flp, Route::Reduct) => self.flp_reduct(prog),
            (Semantics::Flp, Route::Operator) => self.flp_operator(prog),
        }
    }

    /// SM (operator route) against FLP (operator route), with the class
    /// report.
    pub fn compare(&self, prog: &Program) -> Result<Comparison, SolveError> {
        let sm = self.sm_operator(prog)?;
        let flp = self.flp_operator(prog)?;
        let only_sm: Vec<AtomSet> = sm.models.iter().filter(|m| !flp.models.contains(m)).cloned().collect();
        let only_flp: Vec<AtomSet> = flp.models.iter().filter(|m| !sm.models.contains(m)).cloned().collect();
        let mut difference: Vec<AtomSet> = only_sm.iter().chain(&only_flp).cloned().collect();
        difference.sort();
        let class = is_prop4_class(prog, self.registry);
        let violates_prop4 = class.in_class && !(only_sm.is_empty() && only_flp.is_empty());
        Ok(Comparison {
            sm,
            flp,
            only_sm,
            only_flp,
            difference,
            class,
            violates_prop4,
        })
    }
}

/// `(body, head)` ground pairs for every rule and every assignment to its
/// variables.
pub fn ground_instances(prog: &Program, registry: &Registry) -> Result<Vec<(GroundFormula, GroundFormula)>, EvalError> {
    let mut out = Vec::new();
    for rule in &prog.rules {
        let vars = rule.variables();
        for tuple in prog.universe.tuples(vars.len()) {
            let mut env = Env::new();
            env.bind_all(&vars, &tuple);
            let b = ground_in(&rule.body, &mut env, &prog.universe, registry)?;
            let h = ground_in(&rule.head, &mut env, &prog.universe, registry)?;
            out.push((b, h));
        }
    }
    Ok(out)
}

/// The ground program: `gr[∀(B -> H)]` for each rule, in order.
pub fn ground_program(prog: &Program, registry: &Registry) -> Result<Vec<GroundFormula>, EvalError> {
    prog.rules
        .iter()
        .map(|r| ground(&r.to_sentence(), &prog.universe, registry))
        .collect()
}

/// The GQ-representation of a program.
pub fn program_to_sentence(prog: &Program) -> Formula {
    prog.to_sentence()
}
