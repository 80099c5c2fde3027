//! Layered types: the closure formulas of bounded depth true at a
//! state. Types are identified by their formula set; the layer is kept
//! for bookkeeping and the truth-lemma checks.

use crate::models::{DynamicalModel, GeneralRelationalModel};
use crate::semantics::{DynamicalEvaluator, EvalError, GeneralEvaluator};
use crate::syntax::{Closure, Formula};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypeAtom {
    /// Formulas of depth below the layer true at the source state.
    pub formulas: BTreeSet<Formula>,
    /// The layer the type was extracted at.
    pub layer: usize,
}

impl TypeAtom {
    /// Depth of a type: the deepest member, zero for the empty type.
    pub fn temporal_depth(&self) -> usize {
        self.formulas
            .iter()
            .map(Formula::temporal_depth)
            .max()
            .unwrap_or(0)
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }
}

#[derive(Debug, Clone)]
pub struct TypeExtraction {
    /// Distinct types in canonical order (depth, then set order).
    pub types: Vec<TypeAtom>,
    /// (state, layer) -> index into `types`, for every layer up to
    /// `td + 1`.
    pub assignment: BTreeMap<(usize, usize), usize>,
}

fn assemble(
    closure: &Closure,
    num_states: usize,
    truth: impl Fn(usize, &Formula) -> bool,
) -> TypeExtraction {
    let mut seen: BTreeMap<BTreeSet<Formula>, usize> = BTreeMap::new();
    let mut raw: Vec<TypeAtom> = Vec::new();
    let mut assignment_raw: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for state in 0..num_states {
        let holds: Vec<bool> = closure.formulas().iter().map(|f| truth(state, f)).collect();
        for layer in 0..=closure.depth() + 1 {
            let set: BTreeSet<Formula> = closure
                .formulas()
                .iter()
                .zip(&holds)
                .filter(|(f, &h)| h && f.temporal_depth() < layer)
                .map(|(f, _)| f.clone())
                .collect();
            let index = match seen.get(&set) {
                Some(&i) => i,
                None => {
                    let i = raw.len();
                    raw.push(TypeAtom {
                        formulas: set.clone(),
                        layer,
                    });
                    seen.insert(set, i);
                    i
                }
            };
            assignment_raw.insert((state, layer), index);
        }
    }
    // canonical order
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| {
        raw[a]
            .temporal_depth()
            .cmp(&raw[b].temporal_depth())
            .then_with(|| raw[a].formulas.cmp(&raw[b].formulas))
    });
    let mut position = vec![0usize; raw.len()];
    for (new_index, &old_index) in order.iter().enumerate() {
        position[old_index] = new_index;
    }
    let mut types: Vec<Option<TypeAtom>> = vec![None; raw.len()];
    for (old_index, atom) in raw.into_iter().enumerate() {
        types[position[old_index]] = Some(atom);
    }
    TypeExtraction {
        types: types.into_iter().map(Option::unwrap).collect(),
        assignment: assignment_raw
            .into_iter()
            .map(|(key, old)| (key, position[old]))
            .collect(),
    }
}

/// Types of every state of a general relational model, for every layer
/// up to the closure depth plus one.
pub fn extract_types_general(
    m: &GeneralRelationalModel,
    closure: &Closure,
) -> Result<TypeExtraction, EvalError> {
    let mut evaluator = GeneralEvaluator::new(m);
    let mut truth: BTreeMap<(usize, Formula), bool> = BTreeMap::new();
    for state in m.worlds() {
        for f in closure.formulas() {
            let value = evaluator.eval(state, f)?;
            truth.insert((state, f.clone()), value);
        }
    }
    Ok(assemble(closure, m.num_worlds(), |s, f| {
        truth[&(s, f.clone())]
    }))
}

/// Same extraction over a plain value model.
pub fn extract_types_dynamical(
    m: &DynamicalModel,
    closure: &Closure,
) -> Result<TypeExtraction, EvalError> {
    let mut evaluator = DynamicalEvaluator::new(m);
    let mut truth: BTreeMap<(usize, Formula), bool> = BTreeMap::new();
    for state in m.states() {
        for f in closure.formulas() {
            let value = evaluator.eval(state, f)?;
            truth.insert((state, f.clone()), value);
        }
    }
    Ok(assemble(closure, m.num_states(), |s, f| {
        truth[&(s, f.clone())]
    }))
}
