//! Reducts of ground GQ-formulas and minimal-model search.
//!
//! The reduct `F^I` replaces each maximal subformula of `F` that `I` does
//! not satisfy with `bot`. Recursively: atoms stay if true and become `bot`
//! otherwise; `top` and `bot` are fixed; `Q(S1, ..., Sk)` keeps its shape
//! with every child reduced if `I` satisfies it and becomes `bot` otherwise.

use itertools::Itertools;

use crate::ground::{GroundFormula, PairSet};
use crate::quantifier::Relation;
use crate::syntax::{AtomSet, GroundAtom, Universe};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductResult {
    pub formula: GroundFormula,
    /// Maximal unsatisfied subformulas replaced by `bot`.
    pub replaced: usize,
}

/// `g^atoms`.
pub fn reduct(g: &GroundFormula, atoms: &AtomSet, universe: &Universe) -> ReductResult {
    let mut replaced = 0;
    let (_, formula) = reduce(g, atoms, universe, &mut replaced);
    ReductResult { formula, replaced }
}

// Returns (atoms ⊨ g, g^atoms); every node is evaluated once.
fn reduce(g: &GroundFormula, atoms: &AtomSet, universe: &Universe, replaced: &mut usize) -> (bool, GroundFormula) {
    match g {
        GroundFormula::Top => (true, GroundFormula::Top),
        GroundFormula::Bot => {
            *replaced += 1;
            (false, GroundFormula::Bot)
        }
        GroundFormula::Atom(a) => {
            if atoms.contains(a) {
                (true, g.clone())
            } else {
                *replaced += 1;
                (false, GroundFormula::Bot)
            }
        }
        GroundFormula::Apply { quantifier, sets } => {
            let mut below = 0;
            let mut rels = Vec::with_capacity(sets.len());
            let mut reduced = Vec::with_capacity(sets.len());
            for set in sets {
                let mut rel = Relation::new();
                let mut entries = Vec::with_capacity(set.entries.len());
                for (tuple, child) in &set.entries {
                    let (sat, r) = reduce(child, atoms, universe, &mut below);
                    if sat {
                        rel.insert(tuple.clone());
                    }
                    entries.push((tuple.clone(), r));
                }
                rels.push(rel);
                reduced.push(PairSet { entries });
            }
            if quantifier.truth(universe, &rels) {
                *replaced += below;
                (
                    true,
                    GroundFormula::Apply {
                        quantifier: quantifier.clone(),
                        sets: reduced,
                    },
                )
            } else {
                *replaced += 1;
                (false, GroundFormula::Bot)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("{atoms} atoms exceed the enumeration cap of {cap}")]
    CapExceeded { atoms: usize, cap: usize },
}

/// Every ⊆-minimal subset of `base` that satisfies `g`, sorted.
///
/// Subsets are enumerated by increasing cardinality; supersets of models
/// already found are skipped.
pub fn minimal_models(
    g: &GroundFormula,
    base: &[GroundAtom],
    universe: &Universe,
    cap: usize,
) -> Result<Vec<AtomSet>, SearchError> {
    if base.len() > cap {
        return Err(SearchError::CapExceeded { atoms: base.len(), cap });
    }
    let mut found: Vec<AtomSet> = Vec::new();
    for size in 0..=base.len() {
        for combo in base.iter().combinations(size) {
            let candidate: AtomSet = combo.into_iter().cloned().collect();
            if found.iter().any(|m| m.is_subset(&candidate)) {
                continue;
            }
            if crate::ground::satisfies(&candidate, g, universe) {
                found.push(candidate);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// `atoms` satisfies `g` and no proper subset of it does.
pub fn is_minimal_model(g: &GroundFormula, atoms: &AtomSet, universe: &Universe) -> bool {
    if !crate::ground::satisfies(atoms, g, universe) {
        return false;
    }
    let elems: Vec<&GroundAtom> = atoms.iter().collect();
    (0..elems.len()).all(|size| {
        elems.iter().combinations(size).all(|combo| {
            let sub: AtomSet = combo.into_iter().map(|a| (*a).clone()).collect();
            !crate::ground::satisfies(&sub, g, universe)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::satisfies;
    use crate::quantifier::Registry;
    use crate::syntax::Value;

    fn atom(p: &str, n: i64) -> GroundAtom {
        GroundAtom::new(p, vec![Value::Int(n)])
    }

    fn ga(p: &str, n: i64) -> GroundFormula {
        GroundFormula::Atom(atom(p, n))
    }

    fn bin(reg: &Registry, q: &str, l: GroundFormula, r: GroundFormula) -> GroundFormula {
        GroundFormula::Apply {
            quantifier: reg.resolve(q).unwrap(),
            sets: vec![
                PairSet {
                    entries: vec![(vec![], l)],
                },
                PairSet {
                    entries: vec![(vec![], r)],
                },
            ],
        }
    }

    #[test]
    fn top_is_fixed() {
        let r = reduct(&GroundFormula::Top, &AtomSet::new(), &Universe::default());
        assert_eq!(
            r,
            ReductResult {
                formula: GroundFormula::Top,
                replaced: 0
            }
        );
    }

    #[test]
    fn unsatisfied_root_becomes_bot() {
        let reg = Registry::new();
        let u = Universe::new([Value::Int(1)]);
        let g = bin(&reg, "and", ga("p", 1), ga("q", 1));
        let atoms: AtomSet = [atom("p", 1)].into_iter().collect();
        let r = reduct(&g, &atoms, &u);
        assert_eq!(r.formula, GroundFormula::Bot);
        assert_eq!(r.replaced, 1);
    }

    #[test]
    fn satisfied_implication_keeps_shape() {
        // p(1) -> q(1) w.r.t. {} : both sides unsatisfied, replaced below
        let reg = Registry::new();
        let u = Universe::new([Value::Int(1)]);
        let g = bin(&reg, "implies", ga("p", 1), ga("q", 1));
        let r = reduct(&g, &AtomSet::new(), &u);
        assert_eq!(r.formula, bin(&reg, "implies", GroundFormula::Bot, GroundFormula::Bot));
        assert_eq!(r.replaced, 2);
    }

    #[test]
    fn minimal_models_of_disjunction() {
        let reg = Registry::new();
        let u = Universe::new([Value::Int(1)]);
        let g = bin(&reg, "or", ga("p", 1), ga("q", 1));
        let base = vec![atom("p", 1), atom("q", 1)];
        let ms = minimal_models(&g, &base, &u, 20).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.iter().all(|m| m.len() == 1 && satisfies(m, &g, &u)));
    }

    #[test]
    fn minimal_models_of_bot_is_empty() {
        let ms = minimal_models(&GroundFormula::Bot, &[atom("p", 1)], &Universe::default(), 20).unwrap();
        assert!(ms.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let base: Vec<_> = (0..5).map(|n| atom("p", n)).collect();
        assert_eq!(
            minimal_models(&GroundFormula::Top, &base, &Universe::default(), 4),
            Err(SearchError::CapExceeded { atoms: 5, cap: 4 })
        );
    }

    #[test]
    fn minimality_check() {
        let reg = Registry::new();
        let u = Universe::new([Value::Int(1)]);
        let g = bin(&reg, "or", ga("p", 1), ga("q", 1));
        let both: AtomSet = [atom("p", 1), atom("q", 1)].into_iter().collect();
        let one: AtomSet = [atom("p", 1)].into_iter().collect();
        assert!(!is_minimal_model(&g, &both, &u));
        assert!(is_minimal_model(&g, &one, &u));
        assert!(!is_minimal_model(&g, &AtomSet::new(), &u));
    }
}
